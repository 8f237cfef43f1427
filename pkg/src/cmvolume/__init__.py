"""Exact CM/GIT volumes of K-moduli spaces of quartic del Pezzos and hyperplane arrangements."""

__version__ = "0.1.0"
