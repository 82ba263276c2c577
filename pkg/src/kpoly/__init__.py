"""Constructive geometry of kappa-polyhedra and Alexandrov surfaces."""
