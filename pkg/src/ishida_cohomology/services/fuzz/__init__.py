"""Randomized property runs over generated fans."""
