"""Exact computations with p-adic piecewise-affine groups, block permutation
groups and finite Chabauty spaces."""

__version__ = "0.1.0"
