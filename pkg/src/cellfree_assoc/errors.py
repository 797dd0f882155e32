"""Exception hierarchy shared by all modules."""


class CellFreeError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(CellFreeError, ValueError):
    """Invalid simulation parameters or an infeasible experiment setup."""


class DimensionError(ConfigurationError):
    """Matrix shape incompatible with a one-to-one user/cluster matching."""


class ContractError(CellFreeError, ValueError):
    """An operation was called with arguments violating its precondition."""


class InputError(CellFreeError, ValueError):
    """Malformed numeric input such as NaN or infinite matrix entries."""


class NumericalError(CellFreeError, ArithmeticError):
    """A linear-algebra step failed even after regularization."""
