"""Computational checks for girth, expansion and surjectivity of SL(2,p) Cayley graphs
arising from free subgroups of SL(2) over a number field."""

__version__ = "0.1.0"
