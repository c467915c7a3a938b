"""Arithmetic of a genus-2 Legendre-type family with S3 reduced automorphisms.

Subpackages cover exact finite-field arithmetic, Legendre-form elliptic
curves, explicit 3-isogenies, class numbers and small Hilbert class
polynomials, superspecial counting over F_p, structural checks on class
polynomials mod p, and desk-scale averages of superspecial prime counts.
"""

__version__ = "0.1.0"
