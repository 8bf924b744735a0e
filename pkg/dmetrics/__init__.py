"""Supervised disentanglement metrics and controlled synthetic experiments."""

__version__ = "1.0.0"
