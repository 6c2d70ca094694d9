"""Rectilinear planarity testing and drawing for outerplanar graphs of
maximum degree four."""

__version__ = "0.1.0"
