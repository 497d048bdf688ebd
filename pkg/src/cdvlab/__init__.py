"""Exact computational laboratory for corank certificates of discrete
Schrodinger matrices, sign-cell fans of their kernels, projective-plane
incidence spectra, the sigma<=5 embedding obstruction and existential
real-arithmetic encodings."""

__version__ = "0.1.0"
