"""Finite left braces, their matched products, and set-theoretic Yang-Baxter solutions."""

__version__ = "0.1.0"
