"""Automata constructions and exact probabilistic checks for good-for-MDPs succinctness."""

__version__ = "0.1.0"
