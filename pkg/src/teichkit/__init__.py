"""Univalent disk maps, Schwarzian-type embeddings, welding and punctured-sphere atlases."""

__version__ = "0.1.0"
