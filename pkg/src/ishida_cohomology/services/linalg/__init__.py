"""Exact integer and rational linear algebra."""
