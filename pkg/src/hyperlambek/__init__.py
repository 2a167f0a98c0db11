"""Hypergraph Lambek calculus, NL♦, and the embedding of one into the other."""
__version__ = "0.1.0"
