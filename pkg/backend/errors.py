class SedecimError(Exception):
    """Base class for failures raised by the sedecim library"""


class ConfigurationError(SedecimError):
    """A startup self-check on the fixed data for q failed"""


class RamifiedPrimeError(SedecimError, ValueError):
    """A prime above 2 or q was passed where an unramified odd prime is required"""


class GeneratorNotFound(SedecimError, RuntimeError):
    """The bounded short-vector enumeration found no element of norm p"""


class DegenerateSymbol(SedecimError):
    """A symbol in a product identity vanished, so the ratio is undefined"""


class CriterionAssertion(SedecimError, AssertionError):
    def __init__(self, q: int, p: int, message: str):
        super().__init__(f"q={q}, p={p}: {message}")
        self.q = q
        self.p = p
        self.message = message

    def __reduce__(self):
        return type(self), (self.q, self.p, self.message)


class RecordError(SedecimError):
    def __init__(self, q: int, p: int, cause: Exception):
        super().__init__(f"record (q={q}, p={p}) failed: {cause}")
        self.q = q
        self.p = p
        self.cause = cause

    def __reduce__(self):
        return type(self), (self.q, self.p, self.cause)
