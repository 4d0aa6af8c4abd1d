"""Exception types shared across satcube."""


class SatcubeError(Exception):
    """Base class for all satcube errors."""


class DuplicateVariable(SatcubeError, ValueError):
    """A clause mentions the same variable more than once."""


class InvalidN(SatcubeError, ValueError):
    """Variable count below the strict 3-SAT minimum of 3."""


class CapacityExceeded(SatcubeError, ValueError):
    """Unique-mode generation asked for more clauses than exist."""


class CapExceeded(SatcubeError):
    """Requested enumeration beyond the configured hypercube cap."""


class EmptySolutionSpace(SatcubeError):
    """Freezing queried on an empty solution set."""


class InvalidTriple(SatcubeError, ValueError):
    """Variable triple not strictly ascending or out of range."""


class DimacsParseError(SatcubeError):
    """Malformed DIMACS input; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")
