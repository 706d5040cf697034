"""Exact-arithmetic workbench for symplectic instanton monads on P3.

Tensors in S^2 H* (x) wedge^2 V* are flattened to skew forms on H (x) V;
from them the package builds Horrocks-style monads, computes cohomology
tables by exact linear algebra over the rationals or a finite field, and
certifies non-degeneracy, smoothness data, and restriction-induction steps.
"""

__version__ = "0.1.0"
