"""Embedding and token-probability extractor (coreselect file producer)."""

__version__ = "0.1.0"
