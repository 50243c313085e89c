from __future__ import annotations


class LeafcommError(RuntimeError):
    """Root of the leafcomm exception hierarchy."""

    def __init__(self, message: str, *, details: dict | None = None):
        if details:
            extra = ", ".join(f"{key}={value}" for key, value in details.items())
            message = f"{message} [{extra}]"
        super().__init__(message)
        self.details = details or {}


class CriticalError(LeafcommError):
    pass


class NoncriticalError(LeafcommError):
    pass


class FormulaSyntaxError(NoncriticalError):
    offset: int

    def __init__(self, message: str | None = None, offset: int = 0, **kwargs):
        if not message:
            message = "Malformed formula"
        super().__init__(f"{message} at offset {offset}", **kwargs)
        self.offset = offset


class ValidationError(NoncriticalError):
    def __init__(self, message: str | None = None, *args, **kwargs):
        if not message:
            message = "Invalid parameters!"
        super().__init__(message, *args, **kwargs)


class CapacityError(NoncriticalError):
    def __init__(self, message: str | None = None, *args, size: int | None = None, **kwargs):
        if not message:
            message = "The problem is too large for exhaustive processing!"
        if size is not None:
            kwargs.setdefault("details", {})["size"] = size
        super().__init__(message, *args, **kwargs)
        self.size = size


class SampleBudgetError(NoncriticalError):
    def __init__(self, message: str | None = None, *args, **kwargs):
        if not message:
            message = "The example oracle budget is exhausted!"
        super().__init__(message, *args, **kwargs)


class ExtractorError(NoncriticalError):
    def __init__(self, message: str | None = None, *args, margin: float | None = None, **kwargs):
        if not message:
            message = "The extractor cannot meet the min-entropy requirement!"
        if margin is not None:
            kwargs.setdefault("details", {})["required_margin"] = margin
        super().__init__(message, *args, **kwargs)
        self.margin = margin


class CalculationError(CriticalError):
    def __init__(self, message: str | None = None, *args, **kwargs):
        if not message:
            message = "An exception occurred during calculation!"
        super().__init__(message, *args, **kwargs)


class RoundingGapError(CalculationError):
    def __init__(self, message: str | None = None, *args, **kwargs):
        if not message:
            message = "Approximate count is farther than 1/3 from an integer!"
        super().__init__(message, *args, **kwargs)


class MonochromaticityError(CalculationError):
    def __init__(self, message: str | None = None, *args, **kwargs):
        if not message:
            message = "A protocol leaf disagrees with its gate!"
        super().__init__(message, *args, **kwargs)


class WeakLearnerError(CalculationError):
    def __init__(self, message: str | None = None, *args, **kwargs):
        if not message:
            message = "The weak learner advantage fell below the floor!"
        super().__init__(message, *args, **kwargs)
