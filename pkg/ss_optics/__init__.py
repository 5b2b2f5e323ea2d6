"""Spectral singularities and laser output of a PT-symmetric bilayer slab."""

__version__ = "0.1.0"
