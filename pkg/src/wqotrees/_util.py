"""Small shared helpers: verdicts and deadlines."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Optional


class DeadlineExceeded(RuntimeError):
    """A search ran out of its time budget before deciding."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: truthy when the property holds.

    ``reason`` names the first violated clause and ``witness`` carries the
    offending data (a pair, a quadruple, ...) when the check fails.
    """

    ok: bool
    reason: Optional[str] = None
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def fail(cls, reason: str, witness: Any = None) -> "Verdict":
        return cls(False, reason, witness)


PASS = Verdict(True)


@dataclass
class Deadline:
    """Wall-clock budget; ``None`` seconds means unlimited."""

    seconds: Optional[float] = None
    _start: float = field(default_factory=time.monotonic)
    _ticks: int = 0xFF  # so the first check reads the clock

    def check(self) -> None:
        if self.seconds is None:
            return
        # reading the clock on every call is measurable in tight loops
        self._ticks += 1
        if self._ticks & 0xFF:
            return
        if time.monotonic() - self._start > self.seconds:
            raise DeadlineExceeded(f"deadline of {self.seconds}s exceeded")

    @classmethod
    def of(cls, value: "Deadline | float | None") -> "Deadline":
        if isinstance(value, Deadline):
            return value
        return cls(value)
