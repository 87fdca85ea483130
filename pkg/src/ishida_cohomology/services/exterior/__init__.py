"""Exterior powers of annihilator lattices and contraction maps."""
