"""Vanishing-theorem verification drivers."""
