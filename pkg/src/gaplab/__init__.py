"""Divisibility gaps between products of shifted integers.

Exact reductions to root approximation, effective constants, censuses and a
machine check of b(b+1)(b+2) = 2 a(a+1)(a+2).
"""

__version__ = "0.1.0"
