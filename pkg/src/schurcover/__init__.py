"""Schur multipliers, Schur covers and central extensions of finite groups."""

__version__ = "0.1.0"
