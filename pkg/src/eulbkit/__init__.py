"""Entropic uncertainty lower bound under noise, weak measurement and reversal."""

__version__ = "0.1.0"
