"""Numerical toolkit for incoherent-resource no-go results: channels, coherence
primitives, adaptive circuits and gadgets, and randomized verification campaigns."""
from .config import DEFAULT, Tolerances

__version__ = "0.1.0"
