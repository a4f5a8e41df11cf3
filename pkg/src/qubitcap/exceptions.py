"""Exception hierarchy for qubitcap."""


class QubitCapError(Exception):
    """Base class for all errors raised by qubitcap."""


class DomainError(QubitCapError, ValueError):
    """An argument lies outside the domain of a function."""


class DivergenceError(QubitCapError, ArithmeticError):
    """A quantity diverges, e.g. relative entropy to a pure reference state."""


class NotCPTPError(QubitCapError, ValueError):
    """Channel parameters do not describe a completely positive map."""


class SolverError(QubitCapError, RuntimeError):
    """A capacity solver failed an internal consistency check."""


class SamplingError(QubitCapError, RuntimeError):
    """Rejection sampling exhausted its draw budget."""
