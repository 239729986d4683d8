"""Secrecy gain of lattices built from binary codes."""

__version__ = "0.1.0"
