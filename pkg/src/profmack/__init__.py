"""Finite-level combinatorics of algebraic models for rational G-spectra.

Subpackages cover the finite group substrate, profinite towers, the
Cantor-Bendixson process on tree-presented spaces, the Burnside category of
spans, rational Mackey functors, equivariant sheaves over converging bases
and homological-dimension certificates.
"""

__version__ = "0.1.0"
