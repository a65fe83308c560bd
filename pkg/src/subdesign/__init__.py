"""Exact verifiers for subspace designs, local profiles and tensor-code matroids."""

__version__ = "0.1.0"
