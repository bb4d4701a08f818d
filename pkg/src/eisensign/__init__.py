"""Exact computations with Eisenstein newforms E(chi1, chi2, k)."""
