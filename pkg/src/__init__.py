"""Nystromite - Nystrom approximation with deterministic sample selection."""

__version__ = "0.1.0"
