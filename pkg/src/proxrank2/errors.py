"""Exception types shared across the package.

Exit-code mapping used by the CLI:

* ``UsageError``         -> exit 2 (bad arguments, out-of-range levels, ...)
* ``ExpansionTooLarge``  -> exit 3 (a materialization would exceed the cap)
* every other ``ProxRank2Error`` -> exit 1 (analysis-level failure)
"""
from __future__ import annotations


class ProxRank2Error(Exception):
    """Base class for all package-specific errors."""


class UsageError(ProxRank2Error):
    """A parameter is out of range or a precondition on the call is violated."""


class ExpansionTooLarge(ProxRank2Error):
    """A requested expansion would materialize more symbols than the cap allows."""

    def __init__(self, needed: int, cap: int, what: str = "expansion"):
        self.needed = needed
        self.cap = cap
        self.what = what
        super().__init__(f"{what} needs {needed} materialized entries, cap is {cap}")


class WindowUndetermined(ProxRank2Error):
    """A requested time window leaves the range determined by a finite seed."""

    def __init__(self, first_time: int):
        self.first_time = first_time
        super().__init__(f"window not determined by the seed from relative time {first_time}")


class TruncatedMaximal(ProxRank2Error):
    """The Vershik successor of an all-maximal finite path is not defined at this depth."""


class NotReducedForm(ProxRank2Error):
    """An ordered diagram does not carry the reduced (e-bordered) edge orderings."""


class NotRank2Proximal(ProxRank2Error):
    """An ordered diagram is not the model of a rank-2 proximal covering."""


class RestrictedFormRequired(ProxRank2Error):
    """An operation needs restricted-form level data that the spec does not carry."""


class MissingStageMetadata(ProxRank2Error):
    """An operation needs generator stage metadata that this spec does not carry."""
