"""Toolkit for benchmarking fact-checking justification production as summarization."""

__version__ = "0.1.0"
