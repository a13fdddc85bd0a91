"""Coreset-based training-data selection toolkit."""

__version__ = "0.1.0"
