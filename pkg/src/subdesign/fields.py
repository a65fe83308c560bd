"""Exact scalar fields: prime fields, small extension fields and the rationals.

Every field exposes the same small interface (zero, one, add, sub, mul, neg,
inv, div, elements, from_int) so that the linear algebra on top of it can stay
generic.  Elements are plain Python objects:

* F_p: ints in range(p)
* F_{p^e}: ints in range(p**e); the base-p digits are the coefficients of the
  residue polynomial, lowest degree first
* Q: fractions.Fraction
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

MAX_EXTENSION_DEGREE = 8
_TABLE_LIMIT = 1 << 16

# Fixed modular ladder of primes just below 2^61.  The Mersenne prime 2^61 - 1 is
# left out on purpose: 2 has order 61 modulo it, so the points α 2^x of the RS
# constructions (γ = 2) collapse mod p.  The first three have 2 as a primitive
# root; the rest have ord(2) >= 2^57.
PRIME_LADDER = (
    2305843009213693907,
    2305843009213693723,
    2305843009213693693,
    2305843009213693669,
    2305843009213693921,
    2305843009213693613,
)
MERSENNE_61 = 2 ** 61 - 1


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24, probable prime beyond."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict:
    """Trial division; only used on group orders q - 1 of small fields."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- polynomials over F_p, coefficient lists lowest degree first -------------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = _ptrim([x % p for x in a])
    inv = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _ptrim(a)
    return a


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m, p)


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(a, k, m, p):
    result, base = [1], _pmod(a, m, p)
    while k:
        if k & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        k >>= 1
    return result


def is_irreducible(poly, p: int) -> bool:
    """Rabin-style test: no factor of degree <= deg/2 (gcd with x^(p^i) - x)."""
    poly = _ptrim([c % p for c in poly])
    e = len(poly) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    xp = [0, 1]
    for _ in range(e // 2):
        xp = _ppowmod(xp, p, poly, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(poly, _ptrim(diff), p)
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, e: int) -> tuple:
    """Smallest monic irreducible of degree e, ordering candidates by the
    integer whose base-p digits are the low coefficients."""
    for code in range(p ** e):
        low = [(code // p ** i) % p for i in range(e)]
        if low[0] == 0:
            continue
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


# -- field classes ------------------------------------------------------------

class PrimeField:
    """F_p with elements as ints mod p."""

    zero = 0
    one = 1
    e = 1
    modulus = None

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.q = p

    @property
    def spec(self) -> str:
        return str(self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __reduce__(self):
        return (PrimeField, (self.p,))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, k):
        if k < 0:
            return pow(self.inv(a), -k, self.p)
        return pow(a, k, self.p)

    def from_int(self, n):
        return n % self.p

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x.numerator * self.inv(x.denominator % self.p) % self.p
        return int(x) % self.p

    def elements(self):
        return range(self.p)

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def to_json(self, a):
        return a

    def from_json(self, v):
        return int(v) % self.p


class ExtensionField:
    """F_{p^e} = F_p[x]/(modulus) with elements encoded as base-p integers."""

    zero = 0
    one = 1

    def __init__(self, p: int, e: int, modulus=None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if not 2 <= e <= MAX_EXTENSION_DEGREE:
            raise FieldError(f"extension degree {e} outside 2..{MAX_EXTENSION_DEGREE}")
        mod = tuple(modulus) if modulus is not None else default_modulus(p, e)
        if len(mod) != e + 1 or mod[-1] != 1 or not is_irreducible(list(mod), p):
            raise FieldError(f"modulus {mod} is not a monic irreducible of degree {e}")
        self.p, self.e, self.q, self.modulus = p, e, p ** e, mod
        self._exp = self._log = self._add = None
        if self.q <= _TABLE_LIMIT:
            self._build_tables()
        if self.q <= 256:
            self._add = [[self._slow_add(a, b) for b in range(self.q)] for a in range(self.q)]

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.e}"

    def __repr__(self):
        return f"GF({self.p}^{self.e})"

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (other.p, other.e, other.modulus) == (
            self.p, self.e, self.modulus)

    def __hash__(self):
        return hash(("GF", self.p, self.e, self.modulus))

    def __reduce__(self):
        return (ExtensionField, (self.p, self.e, self.modulus))

    # encoding helpers
    def _digits(self, a):
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, coeffs):
        v = 0
        for c in reversed(list(coeffs)[: self.e]):
            v = v * self.p + (c % self.p)
        return v

    def _slow_mul(self, a, b):
        prod = _pmulmod(_ptrim(self._digits(a)), _ptrim(self._digits(b)), list(self.modulus), self.p)
        return self._encode(prod + [0] * (self.e - len(prod)))

    def _build_tables(self):
        order = self.q - 1
        primes = list(factorize(order))
        for g in range(2, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in primes):
                break
        exp = [0] * (2 * order)
        log = [0] * self.q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp, self._log, self.generator = exp, log, g

    def _slow_pow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return r

    def add(self, a, b):
        if self._add is not None:
            return self._add[a][b]
        return self._slow_add(a, b)

    def _slow_add(self, a, b):
        p, out, scale = self.p, 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a):
        p, out, scale = self.p, 0, 1
        while a:
            out += (-(a % p) % p) * scale
            a //= p
            scale *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        if self._exp is not None:
            return self._exp[(self._log[a] * k) % (self.q - 1)]
        return self._slow_pow(a, k)

    def from_int(self, n):
        return n % self.p

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.div(self.from_int(x.numerator), self.from_int(x.denominator))
        return self.from_int(int(x))

    def elements(self):
        return range(self.q)

    def random(self, rng: random.Random):
        return rng.randrange(self.q)

    def to_json(self, a):
        return self._digits(a)

    def from_json(self, v):
        if isinstance(v, int):
            return self.from_int(v)
        if len(v) > self.e:
            raise FieldError(f"coefficient array {v} longer than degree {self.e}")
        return self._encode(v)


class RationalField:
    """Q with Fraction elements."""

    zero = Fraction(0)
    one = Fraction(1)
    p = 0
    e = 1
    q = None
    modulus = None
    spec = "Q"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def pow(self, a, k):
        return Fraction(a) ** k

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        return Fraction(x)

    def elements(self):
        raise FieldError("Q is infinite")

    def random(self, rng: random.Random):
        return Fraction(rng.randint(-100, 100))

    def to_json(self, a):
        a = Fraction(a)
        return f"{a.numerator}/{a.denominator}"

    def from_json(self, v):
        return Fraction(v)


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int, e: int = 1):
    """Cached field constructor; equal (p, e) give the identical object."""
    if e == 1:
        return PrimeField(p)
    return ExtensionField(p, e)


def field_from_spec(spec) -> object:
    """Parse "p", "p^e" or "Q" (ints are accepted as prime orders)."""
    if isinstance(spec, int):
        return GF(spec)
    s = str(spec).strip()
    if s in ("Q", "QQ"):
        return QQ
    try:
        if "^" in s:
            p, e = s.split("^")
            return GF(int(p), int(e))
        n = int(s)
    except ValueError as exc:
        raise FieldError(f"malformed field spec {spec!r}") from exc
    # allow prime powers such as "9"
    if not is_prime(n):
        f = factorize(n)
        if len(f) == 1:
            (p, e), = f.items()
            return GF(p, e)
        raise FieldError(f"{n} is not a prime power")
    return GF(n)


def field_order_from_q(q: int):
    return field_from_spec(str(q))


def multiplicative_order(F, a) -> int:
    """Order of a nonzero element of a finite field, via factoring q - 1."""
    if F.q is None:
        raise FieldError("multiplicative order is only defined here for finite fields")
    if a == 0:
        raise FieldError("zero has no multiplicative order")
    order = F.q - 1
    for r, k in factorize(F.q - 1).items():
        for _ in range(k):
            if F.pow(a, order // r) == 1:
                order //= r
            else:
                break
    return order


def primitive_element(F):
    """Smallest (by encoding) generator of the multiplicative group."""
    for g in range(1, F.q):
        if multiplicative_order(F, g) == F.q - 1:
            return g
    raise FieldError("no primitive element")
