"""Base exception shared by every quantum_lambda error."""


class QuantumLambdaError(RuntimeError):
    """Base class for all errors raised while parsing, checking or running programs."""
