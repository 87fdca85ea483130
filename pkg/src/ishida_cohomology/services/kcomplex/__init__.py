"""Orientation-twisted double complex for complete simplicial fans."""
