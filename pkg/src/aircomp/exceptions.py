"""Exception hierarchy shared by the aircomp modules."""

import numpy as np


class AirCompError(Exception):
    """Base class for all aircomp errors."""


class ContractError(AirCompError, ValueError):
    """An input violates a documented precondition (shape, symmetry, range)."""


class SingularMatrixError(AirCompError, np.linalg.LinAlgError):
    """A matrix that must be positive definite failed to factorize."""

    def __init__(self, name, detail=""):
        self.name = name
        msg = f"matrix '{name}' is not positive definite"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NoUsableModeError(AirCompError, ArithmeticError):
    """Every eigenmode has a zero gain product, so no power can be allocated."""


class DegeneratePrecoderError(AirCompError, ArithmeticError):
    """Block diagonalization removed all transmit energy."""
