"""Ishida cochain complexes."""
