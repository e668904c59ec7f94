"""Precision escalation driver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, TypeVar

from ..errors import PrecisionExhausted, Undecided

T = TypeVar("T")

DEFAULT_BITS = 128
DEFAULT_CEILING = 8192


@dataclass(frozen=True)
class PrecisionPolicy:
    start: int = DEFAULT_BITS
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        if self.start < 16 or self.ceiling < self.start:
            raise ValueError("need 16 <= start <= ceiling")

    def schedule(self):
        bits = self.start
        while bits <= self.ceiling:
            yield bits
            bits *= 2


@dataclass
class PrecisionTrace:
    """Record of every attempt made by :func:`escalate`."""

    events: list = field(default_factory=list)

    def record(self, stage: str, bits: int, outcome: str, reason: str = ""):
        entry = {"stage": stage, "bits": bits, "outcome": outcome}
        if reason:
            entry["reason"] = reason
        self.events.append(entry)

    def to_json(self) -> list:
        return list(self.events)


def escalate(
    fn: Callable[[int], T],
    policy: PrecisionPolicy | None = None,
    trace: PrecisionTrace | None = None,
    stage: str = "",
) -> T:
    """Call ``fn(bits)`` with doubling precision until it stops raising Undecided."""
    policy = policy or PrecisionPolicy()
    last: Undecided | None = None
    for bits in policy.schedule():
        try:
            result = fn(bits)
        except Undecided as exc:
            last = exc
            if trace is not None:
                trace.record(stage, bits, "undecided", str(exc))
            continue
        if trace is not None:
            trace.record(stage, bits, "decided")
        return result
    raise PrecisionExhausted(
        f"{stage or 'computation'} still undecided at {policy.ceiling} bits: {last}"
    )
