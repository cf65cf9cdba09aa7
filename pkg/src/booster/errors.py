"""Exception hierarchy shared across the package."""

from __future__ import annotations


class BoosterError(Exception):
    """Base class for all package errors."""


class UnknownObject(BoosterError):
    """A query references a table or column absent from the schema."""


class UnsatisfiableHints(BoosterError):
    """Query hints exclude every feasible plan."""


class UnknownAdapter(BoosterError):
    """No artifact adapter registered under the requested id."""


class MalformedArtifact(BoosterError):
    """Artifact bundle violates its adapter's layout.

    Carries the offending step index and field path for diagnostics.
    """

    def __init__(self, message: str, step_index: int | None = None, field: str | None = None):
        loc = []
        if step_index is not None:
            loc.append(f"step {step_index}")
        if field:
            loc.append(f"field {field}")
        suffix = f" ({', '.join(loc)})" if loc else ""
        super().__init__(message + suffix)
        self.step_index = step_index
        self.field = field


class ReplayFailure(BoosterError):
    """Neither a recorded execution nor a simulator replay is available."""


class DuplicateId(BoosterError):
    """A QConfig with this id is already stored."""


class EmptySegment(BoosterError):
    """The requested vector-store segment has no entries."""


class UnknownId(BoosterError):
    """No QConfig stored under this id."""


class EmbedderUnavailable(BoosterError):
    """Remote embedding provider could not be reached."""


class ProviderUnavailable(BoosterError):
    """LLM provider could not be reached."""


class BudgetExhausted(BoosterError):
    """Evaluation budget ran out; partial results may be attached."""

    def __init__(self, message: str = "budget exhausted", partial=None):
        super().__init__(message)
        self.partial = partial
