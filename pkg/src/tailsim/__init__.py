"""Tail-sitter VTOL flight dynamics simulation library."""

__version__ = "0.1.0"
