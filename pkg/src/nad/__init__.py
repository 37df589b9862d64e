"""Exact and numeric checks for Newton-admissible families of polynomial factors."""

__version__ = "0.1.0"
