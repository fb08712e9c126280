"""Exact linear-extension statistics and correlation inequalities for finite posets."""

__version__ = "0.1.0"
