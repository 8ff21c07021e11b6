"""Desk-scale workbench for point counts on quotient varieties and Galois field counts."""

__version__ = "0.1.0"
