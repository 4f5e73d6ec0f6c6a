"""Arithmetic of the plane curve XY^q - YX^q = Z^(q+1) and its affine part uv^q - vu^q = 1."""

__version__ = "0.1.0"
