"""Ishida cohomology of rational polyhedral fans."""

__version__ = "0.1.0"
