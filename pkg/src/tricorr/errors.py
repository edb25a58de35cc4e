"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A family or sampler parameter is outside its documented range."""


class MalformedStateError(ValueError):
    """An input fails a state precondition (norm, trace, Hermiticity, PSD)."""


class UnsupportedDimensionError(ValueError):
    """A matrix dimension outside the 2/3/4/8 working set was requested."""


class UnsupportedClosedFormError(ValueError):
    """No closed form is implemented for the requested family/pair combination."""
