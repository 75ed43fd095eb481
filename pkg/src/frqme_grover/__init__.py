"""Grover's conditional sign flip on a two-qubit open system under a
fluctuation-regulated master equation with drive-induced dissipation."""

__version__ = "0.1.0"
