"""Exact solvers for average-energy, mean-payoff and energy games on weighted graphs."""

__version__ = "0.1.0"
