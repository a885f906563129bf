class UsageError(ValueError):
    """Bad arguments: mismatched primes, out-of-range indices, degree clashes."""


class ConstantTupleError(UsageError):
    """Raised when a constant defining tuple is supplied."""

    def __init__(self, msg="constant defining tuples are excluded"):
        super().__init__(msg)


class TheoremViolation(RuntimeError):
    """A proven identity failed to hold.

    This never describes a legitimate state of the mathematics; it means the
    implementation is wrong somewhere.
    """


class NotAPowerError(ArithmeticError):
    """A group index that should be a power of p was not."""
