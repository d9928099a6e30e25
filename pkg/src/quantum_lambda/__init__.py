"""Interpreter and simulator for the quantum lambda calculi λ_i and λ_q."""
