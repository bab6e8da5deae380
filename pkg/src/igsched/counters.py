"""Platform-independent work accounting.

Forward/backward pass counts are the cross-platform latency proxy; one
gradient evaluation costs one forward plus one backward.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class WorkCounters:
    n_forward: int = 0
    n_backward: int = 0
    n_probe_forward: int = 0

    def __post_init__(self):
        if min(self.n_forward, self.n_backward, self.n_probe_forward) < 0:
            raise DomainError("counters must be non-negative")
        if self.n_probe_forward > self.n_forward:
            raise DomainError("probe forwards are a subset of forwards")

    def __add__(self, other: "WorkCounters") -> "WorkCounters":
        return WorkCounters(
            self.n_forward + other.n_forward,
            self.n_backward + other.n_backward,
            self.n_probe_forward + other.n_probe_forward,
        )

    @property
    def total(self) -> int:
        return self.n_forward + self.n_backward

    def probe_estimate(self) -> float:
        """Counter-based overhead estimate: probes / (forwards + backwards)."""
        if self.total == 0:
            return 0.0
        return self.n_probe_forward / self.total
