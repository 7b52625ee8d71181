"""Exact computations around Lubin-Tate formal groups and Coleman power series."""

__version__ = "0.1.0"
