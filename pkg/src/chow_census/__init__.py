"""Counting reducible, relatively irreducible and absolutely irreducible
curves over finite fields, with exact censuses and explicit bounds."""

__version__ = "0.1.0"
