"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument: dimension mismatch, out-of-range parameter, bad spec."""


class CertificationError(InputError):
    """A body was passed to a check that requires a certified catalog member."""


class UnboundedBodyError(RuntimeError):
    """Rejection sampling saw zero acceptances; the body looks unbounded."""
