"""Coupled quasiperiodic chains: construction, diagonalization and critical-phase diagnostics."""

__version__ = "0.1.0"
