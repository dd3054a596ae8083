"""Sierpinski domination toolkit - domination, Roman and double Roman numbers of S(K_n, t)."""

__version__ = "1.0.0"
