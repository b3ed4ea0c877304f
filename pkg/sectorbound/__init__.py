"""Numerical-range sector angles for non-symmetric elliptic forms."""

__version__ = "0.1.0"
