class InternalContract(RuntimeError):
    """A postcondition that should hold by construction failed."""


class DegenerateSample(RuntimeError):
    """Every sampled fiber was positive-dimensional."""
