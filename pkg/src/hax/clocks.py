"""Injectable time and identifier sources.

Traces, action logs, and sessions must be byte-for-byte reproducible in
tests, so anything that stamps a timestamp or mints an id takes one of
these instead of calling time.time()/uuid4() directly.
"""

from __future__ import annotations

import time
import uuid
from typing import Protocol


class Clock(Protocol):
    def now(self) -> float: ...


class IdSource(Protocol):
    def next_id(self, prefix: str) -> str: ...


class SystemClock:
    """Wall-clock seconds, clamped so repeated reads never go backwards."""

    def __init__(self) -> None:
        self._last = 0.0

    def now(self) -> float:
        t = time.time()
        if t < self._last:
            t = self._last
        self._last = t
        return t


class TickClock:
    """Deterministic clock: starts at epoch and advances step per read."""

    def __init__(self, epoch: float = 1_700_000_000.0, step: float = 1.0) -> None:
        self._next = float(epoch)
        self._step = float(step)

    def now(self) -> float:
        t = self._next
        self._next += self._step
        return t


class RandomIds:
    """Unpredictable ids for live use: ``<prefix>-<uuid4 hex>``."""

    def next_id(self, prefix: str) -> str:
        return f"{prefix}-{uuid.uuid4().hex[:12]}"


class SequentialIds:
    """Deterministic ids: ``<prefix>-0001``, ``<prefix>-0002``, ... per prefix."""

    def __init__(self) -> None:
        self._counters: dict[str, int] = {}

    def next_id(self, prefix: str) -> str:
        n = self._counters.get(prefix, 0) + 1
        self._counters[prefix] = n
        return f"{prefix}-{n:04d}"
