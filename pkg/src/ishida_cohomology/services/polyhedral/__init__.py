"""Cones, fans and fan constructions."""
