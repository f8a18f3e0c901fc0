"""Append-only JSON-lines run store.

One record per line, UTF-8.  Queries tolerate corrupt lines: they are
skipped and counted instead of aborting the scan.  The store path comes
from an explicit argument, the QACCEL_STORE environment variable, or the
default file in the working directory, in that order.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..metrics import MetricSet

ENV_STORE = "QACCEL_STORE"
DEFAULT_STORE = "qaccel_runs.jsonl"


@dataclass(frozen=True)
class FinalState:
    """One retained basis state of a run's final state vector."""

    bitstring: str
    amplitude: tuple[float, float]  # (re, im)
    probability: float

    def to_dict(self) -> dict:
        return {
            "bitstring": self.bitstring,
            "amplitude": [self.amplitude[0], self.amplitude[1]],
            "probability": self.probability,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FinalState":
        re, im = data["amplitude"]
        return cls(data["bitstring"], (float(re), float(im)), float(data["probability"]))


@dataclass
class RunRecord:
    """Identity, configuration, metrics and final-state summary of one run."""

    run_id: str
    timestamp: str
    circuit_hash: str
    config: dict
    metrics: MetricSet
    final_states: list[FinalState] = field(default_factory=list)
    wall_time_ns: int = 0
    peak_state_bytes: int = 0

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "timestamp": self.timestamp,
            "circuit_hash": self.circuit_hash,
            "config": self.config,
            "metrics": self.metrics.to_dict(),
            "final_states": [fs.to_dict() for fs in self.final_states],
            "wall_time_ns": self.wall_time_ns,
            "peak_state_bytes": self.peak_state_bytes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        return cls(
            run_id=data["run_id"],
            timestamp=data["timestamp"],
            circuit_hash=data["circuit_hash"],
            config=dict(data["config"]),
            metrics=MetricSet.from_dict(data["metrics"]),
            final_states=[FinalState.from_dict(fs) for fs in data["final_states"]],
            wall_time_ns=int(data["wall_time_ns"]),
            peak_state_bytes=int(data["peak_state_bytes"]),
        )


def default_store_path() -> Path:
    return Path(os.environ.get(ENV_STORE, DEFAULT_STORE))


def store_append(record: RunRecord, path: str | Path | None = None) -> Path:
    """Append one record as a JSON line; creates parent directories."""
    target = Path(path) if path is not None else default_store_path()
    try:
        if target.parent != Path(""):
            target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record.to_dict()) + "\n")
    except OSError as exc:
        raise OSError(f"cannot append to run store {target}: {exc}") from exc
    return target


@dataclass(frozen=True)
class QueryResult:
    records: tuple[RunRecord, ...]
    corrupt_lines: int


def store_query(
    path: str | Path | None = None,
    *,
    run_id: str | None = None,
    circuit_hash: str | None = None,
    since: str | None = None,
    until: str | None = None,
) -> QueryResult:
    """Scan the store, newest-last, applying the given filters.

    ``since``/``until`` compare ISO-8601 timestamps lexicographically,
    inclusive on both ends.  Undecodable lines are skipped and counted.
    """
    target = Path(path) if path is not None else default_store_path()
    if not target.exists():
        return QueryResult((), 0)
    records: list[RunRecord] = []
    corrupt = 0
    try:
        with target.open("r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                try:
                    record = RunRecord.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                    corrupt += 1
                    continue
                if run_id is not None and record.run_id != run_id:
                    continue
                if circuit_hash is not None and record.circuit_hash != circuit_hash:
                    continue
                if since is not None and record.timestamp < since:
                    continue
                if until is not None and record.timestamp > until:
                    continue
                records.append(record)
    except OSError as exc:
        raise OSError(f"cannot read run store {target}: {exc}") from exc
    return QueryResult(tuple(records), corrupt)
