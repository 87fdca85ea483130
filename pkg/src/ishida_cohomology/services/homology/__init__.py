"""Cohomology of integer cochain complexes."""
