"""Combinatorial Kirby calculus for 4-manifold handlebody diagrams."""

__version__ = "0.1.0"
