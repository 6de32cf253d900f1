"""Exact arithmetic toolkit for rational elliptic surfaces.

Fiber types from Weierstrass data, Mordell-Weil lattice bookkeeping,
gap-number decisions for intersection numbers of sections, and
conic-bundle fiber classification.
"""

__version__ = "0.1.0"
