"""Exact computations with the dihedral Lie coalgebra of roots of unity,
modular complexes and Voronoi cells, plus a multiple polylogarithm
evaluator for numerical cross-checks."""

__version__ = "0.1.0"
