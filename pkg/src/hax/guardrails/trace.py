"""Hash-chained, append-only session trace.

Each entry commits to everything before it: its chain hash is
sha256(previous_hash + canonical JSON of the entry body), with a
64-zero sentinel before the first entry. Any edit, insertion, or
deletion in an exported trace breaks verification at or before the
tampered entry.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Iterator

from ..clocks import Clock
from ..errors import TraceError

SENTINEL_HASH = "0" * 64

_ENTRY_KEYS = {"seq_no", "timestamp", "actor", "summary", "caused_by", "chain_hash"}


@dataclass(frozen=True)
class TraceEntry:
    seq_no: int
    timestamp: float
    actor: str
    summary: str
    caused_by: int | None
    chain_hash: str

    def body_dict(self) -> dict[str, Any]:
        return {
            "seq_no": self.seq_no,
            "timestamp": self.timestamp,
            "actor": self.actor,
            "summary": self.summary,
            "caused_by": self.caused_by,
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.body_dict(), sort_keys=True, separators=(",", ":")).encode()

    def to_dict(self) -> dict[str, Any]:
        out = self.body_dict()
        out["chain_hash"] = self.chain_hash
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TraceEntry":
        if not isinstance(data, dict) or set(data) != _ENTRY_KEYS:
            raise TraceError("trace entry has wrong keys")
        seq_no = data["seq_no"]
        timestamp = data["timestamp"]
        caused_by = data["caused_by"]
        if not isinstance(seq_no, int) or isinstance(seq_no, bool):
            raise TraceError("seq_no must be an integer")
        if isinstance(timestamp, bool) or not isinstance(timestamp, (int, float)):
            raise TraceError("timestamp must be a number")
        if caused_by is not None and (not isinstance(caused_by, int) or isinstance(caused_by, bool)):
            raise TraceError("caused_by must be an integer or null")
        if not isinstance(data["actor"], str) or not isinstance(data["summary"], str):
            raise TraceError("actor and summary must be text")
        if not isinstance(data["chain_hash"], str):
            raise TraceError("chain_hash must be text")
        return cls(
            seq_no=seq_no,
            timestamp=float(timestamp),
            actor=data["actor"],
            summary=data["summary"],
            caused_by=caused_by,
            chain_hash=data["chain_hash"],
        )


def chain_hash(previous_hash: str, canonical: bytes) -> str:
    return hashlib.sha256(previous_hash.encode() + canonical).hexdigest()


class Trace:
    """Append-only entry list; existing entries are never rewritten."""

    def __init__(self, clock: Clock) -> None:
        self._clock = clock
        self._entries: list[TraceEntry] = []

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[TraceEntry]:
        return iter(self._entries)

    def __getitem__(self, seq_no: int) -> TraceEntry:
        return self._entries[seq_no]

    @property
    def entries(self) -> tuple[TraceEntry, ...]:
        return tuple(self._entries)

    def append(self, actor: str, summary: str, caused_by: int | None = None) -> TraceEntry:
        if caused_by is not None and not 0 <= caused_by < len(self._entries):
            raise TraceError(f"caused_by {caused_by} references a future or absent entry")
        timestamp = self._clock.now()
        if self._entries and timestamp < self._entries[-1].timestamp:
            timestamp = self._entries[-1].timestamp
        previous = self._entries[-1].chain_hash if self._entries else SENTINEL_HASH
        body = {
            "seq_no": len(self._entries),
            "timestamp": timestamp,
            "actor": actor,
            "summary": summary,
            "caused_by": caused_by,
        }
        canonical = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
        entry = TraceEntry(chain_hash=chain_hash(previous, canonical), **body)
        self._entries.append(entry)
        return entry

    def diff(self, from_seq: int, to_seq: int) -> list[TraceEntry]:
        """Entries strictly after from_seq up to and including to_seq."""
        if not 0 <= from_seq <= to_seq < len(self._entries):
            raise TraceError(
                f"diff range ({from_seq}, {to_seq}] is outside 0..{len(self._entries) - 1}"
            )
        return self._entries[from_seq + 1 : to_seq + 1]

    def verify(self) -> int | None:
        """Return the seq_no of the first broken entry, or None if intact."""
        return verify_entries(self._entries)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(e.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"
            for e in self._entries
        )

    @classmethod
    def from_jsonl(cls, text: str, clock: Clock) -> "Trace":
        trace = cls(clock)
        trace._entries = list(parse_jsonl(text))
        return trace


def parse_jsonl(text: str) -> Iterator[TraceEntry]:
    for lineno, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceError(f"line {lineno}: {exc.msg}") from None
        yield TraceEntry.from_dict(data)


def verify_entries(entries: list[TraceEntry] | tuple[TraceEntry, ...]) -> int | None:
    """Check seq_nos, timestamps, caused_by bounds, and the hash chain.

    Returns the seq_no (list position) of the first entry that breaks
    the contract, or None when the whole chain is intact.
    """
    previous = SENTINEL_HASH
    last_timestamp = None
    for position, entry in enumerate(entries):
        if entry.seq_no != position:
            return position
        if last_timestamp is not None and entry.timestamp < last_timestamp:
            return position
        if entry.caused_by is not None and not 0 <= entry.caused_by < position:
            return position
        if entry.chain_hash != chain_hash(previous, entry.canonical_bytes()):
            return position
        previous = entry.chain_hash
        last_timestamp = entry.timestamp
    return None


def verify_jsonl(text: str) -> tuple[int | None, int]:
    """Verify an exported trace. Returns (first broken position, entry count).

    A line that cannot even be parsed counts as broken at its position.
    """
    entries: list[TraceEntry] = []
    lines = [l for l in text.splitlines() if l.strip()]
    for position, line in enumerate(lines):
        try:
            data = json.loads(line)
            entries.append(TraceEntry.from_dict(data))
        except (TraceError, json.JSONDecodeError):
            broken = verify_entries(entries)
            return (broken if broken is not None else position), len(lines)
    return verify_entries(entries), len(lines)
