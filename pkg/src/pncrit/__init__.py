"""Exact computations with endomorphisms of projective space over Q."""

__version__ = "0.1.0"
