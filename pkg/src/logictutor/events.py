"""Append-only event records and their line-oriented file format.

One JSON object per line with sorted keys and fixed separators: the file is
a bit-exact serialization, so replaying a log and re-serializing it
reproduces the identical bytes.  Every score, classification, and analytic
in the package is computed from these records, never from cached state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

__all__ = ["EventType", "EventRecord", "dumps_event", "loads_event", "write_log", "read_log"]


class EventType:
    SESSION_STARTED = "session_started"
    PROBLEM_STARTED = "problem_started"
    STEP_APPLIED = "step_applied"
    STEP_REJECTED = "step_rejected"
    STRATEGY_SWITCHED = "strategy_switched"
    PROMPT_SHOWN = "prompt_shown"
    WE_STEP_REVEALED = "we_step_revealed"
    PROBLEM_COMPLETED = "problem_completed"
    PHASE_ADVANCED = "phase_advanced"
    SESSION_COMPLETED = "session_completed"

    ALL = frozenset(
        {
            SESSION_STARTED,
            PROBLEM_STARTED,
            STEP_APPLIED,
            STEP_REJECTED,
            STRATEGY_SWITCHED,
            PROMPT_SHOWN,
            WE_STEP_REVEALED,
            PROBLEM_COMPLETED,
            PHASE_ADVANCED,
            SESSION_COMPLETED,
        }
    )


@dataclass(frozen=True)
class EventRecord:
    seq: int
    timestamp_ms: int
    session_id: str
    problem_id: str | None
    event_type: str
    payload: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.event_type not in EventType.ALL:
            raise ValueError(f"unknown event type: {self.event_type}")


def dumps_event(record: EventRecord) -> str:
    return json.dumps(
        {
            "seq": record.seq,
            "timestamp_ms": record.timestamp_ms,
            "session_id": record.session_id,
            "problem_id": record.problem_id,
            "event_type": record.event_type,
            "payload": record.payload,
        },
        sort_keys=True,
        separators=(",", ":"),
    )


def loads_event(line: str) -> EventRecord:
    raw = json.loads(line)
    return EventRecord(
        seq=raw["seq"],
        timestamp_ms=raw["timestamp_ms"],
        session_id=raw["session_id"],
        problem_id=raw["problem_id"],
        event_type=raw["event_type"],
        payload=raw["payload"],
    )


def write_log(records: Iterable[EventRecord], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(dumps_event(record))
            handle.write("\n")


def read_log(path: Path) -> list[EventRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(loads_event(line))
    previous = None
    for record in records:
        if previous is not None and record.seq <= previous:
            raise ValueError(f"event seq not strictly increasing at {record.seq}")
        previous = record.seq
    return records
