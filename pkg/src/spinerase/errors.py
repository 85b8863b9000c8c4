"""Semantic exception hierarchy; public functions never raise bare ValueError."""


class SpinEraseError(Exception):
    """Base class for all package errors."""


class DomainError(SpinEraseError, ValueError):
    """An argument is outside its mathematical domain."""


class ProtocolExhaustedError(SpinEraseError):
    """No further erasure cycle is possible for this reservoir size."""


class HistoryError(SpinEraseError):
    """A cross-check was asked for cycles that are missing from the history."""


class SupportError(SpinEraseError):
    """A divergence was requested where the reference assigns zero probability."""


class NormalizationError(SpinEraseError):
    """A probability vector does not sum to one within tolerance."""


class MatchNotFoundError(SpinEraseError):
    """No reservoir size in the scanned range met the similarity tolerance."""
