"""Desk-scale machinery for labelled well-quasi-ordering of tree-interpreted graph classes."""

__version__ = "0.1.0"
