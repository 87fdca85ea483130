"""Test suite for ishida-cohomology."""
