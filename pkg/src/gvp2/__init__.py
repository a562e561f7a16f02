"""Exact topological-vertex computation of Gopakumar–Vafa invariants of local P^2."""

__version__ = "0.1.0"
