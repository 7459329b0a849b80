"""Quantum Rabi model ground state: exact, variational and GRWA solvers."""
