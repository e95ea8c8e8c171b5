"""Style-weighted comment generation and corpus diversity measures."""

__version__ = "0.1.0"
