"""Random combinatorial surfaces, pants decompositions and counting bounds."""

__version__ = "0.1.0"
