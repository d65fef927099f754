"""Block designs, their incidence graphs, and exact domination numbers."""

__version__ = "0.1.0"
