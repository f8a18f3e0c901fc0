"""Execution pipeline behind the ``run`` subcommand.

parse -> optional map -> simulate -> metrics -> persist.  The recorded
final state is the pre-measurement state: measure instructions mark the
register for readout and sampling, while fidelity and the state summary
are taken before any collapse.  The ideal reference state comes from the
dense oracle whenever it fits (<= 12 qubits, no prep_z), otherwise from a
noiseless engine pass.
"""

from __future__ import annotations

import hashlib
import time
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ..cqasm import Program, emit, parse
from ..gates import GateKind, NoiseConfig, run_circuit, sample
from ..mapper import MappingReport, Topology, build_topology, initial_placement, route, schedule_asap
from ..metrics import MetricSet, fidelity, gate_count, quantum_volume, success_probability
from ..statecore import MemoryParams, estimate_total_memory
from ..tensor_oracle import MAX_ORACLE_QUBITS, simulate_instructions
from .records import FinalState, RunRecord, store_append

#: Ideal-state probabilities above this threshold define the correct-answer set.
SUPPORT_THRESHOLD = 1e-9


def parse_topology_spec(spec: str) -> Topology:
    """Build a topology from a CLI spec: line:N, ring:N, grid:RxC, full:N."""
    kind, _, dims = spec.partition(":")
    kind = kind.strip().lower()
    if not dims:
        raise ValueError(f"topology spec {spec!r} needs dimensions, e.g. line:4")
    if kind == "grid":
        parts = dims.lower().split("x")
        if len(parts) != 2:
            raise ValueError(f"grid spec must be grid:RxC, got {spec!r}")
        return build_topology("grid", int(parts[0]), int(parts[1]))
    return build_topology(kind, int(dims))


@dataclass
class RunOutcome:
    record: RunRecord
    report: MappingReport | None
    histogram: dict[str, int]
    store_path: Path | None


def _ideal_state(program: Program, seed_seq: np.random.SeedSequence) -> np.ndarray:
    unitary = [g for g in program.instructions if g.kind is not GateKind.MEASURE]
    has_prep = any(g.kind is GateKind.PREP_Z for g in unitary)
    if program.n <= MAX_ORACLE_QUBITS and not has_prep:
        return simulate_instructions(program.n, unitary)
    state, _ = run_circuit(
        program.n, unitary, rng=np.random.default_rng(seed_seq.spawn(1)[0])
    )
    return state.live.copy()


def _top_states(amps: np.ndarray, n: int, top_k: int) -> list[FinalState]:
    probs = amps.real**2 + amps.imag**2
    order = sorted(range(amps.size), key=lambda i: (-probs[i], i))[:top_k]
    return [
        FinalState(
            bitstring=format(i, f"0{n}b"),
            amplitude=(float(amps[i].real), float(amps[i].imag)),
            probability=float(probs[i]),
        )
        for i in order
        if probs[i] > 0.0
    ]


def run_program(
    program: Program,
    *,
    shots: int = 1000,
    seed: int | None = None,
    noise_p: float = 0.0,
    topology: str | None = None,
    placement: str = "greedy",
    top_k: int = 16,
    zero_skip: bool = True,
    store_path: str | Path | None = None,
    persist: bool = True,
) -> RunOutcome:
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if top_k < 0:
        raise ValueError(f"top_k must be >= 0, got {top_k}")
    canonical = emit(program)
    circuit_hash = hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    report: MappingReport | None = None
    executed = program
    if topology is not None:
        topo = parse_topology_spec(topology)
        layout = initial_placement(program, topo, placement)
        executed, _final_layout, report = route(program, topo, layout)

    seed_root = np.random.SeedSequence(seed)
    ideal_seq, actual_seq, shot_seq, sample_seq = seed_root.spawn(4)
    unitary = [g for g in executed.instructions if g.kind is not GateKind.MEASURE]
    noise = NoiseConfig(noise_p) if noise_p > 0 else None

    started = time.perf_counter_ns()
    ideal = _ideal_state(executed, ideal_seq)
    ref_state, _ = run_circuit(
        executed.n,
        unitary,
        rng=np.random.default_rng(actual_seq),
        noise=noise,
        zero_skip=zero_skip,
    )
    if noise is None:
        histogram = sample(ref_state, shots, np.random.default_rng(sample_seq))
    else:
        # fresh noisy trajectory per shot, one full-register readout each
        histogram = {}
        shot_rng = np.random.default_rng(shot_seq)
        for _ in range(shots):
            traj, _ = run_circuit(
                executed.n, unitary, rng=shot_rng, noise=noise, zero_skip=zero_skip
            )
            for key, count in sample(traj, 1, shot_rng).items():
                histogram[key] = histogram.get(key, 0) + count
    wall_time_ns = time.perf_counter_ns() - started

    ideal_probs = ideal.real**2 + ideal.imag**2
    support = {
        format(i, f"0{executed.n}b") for i in np.flatnonzero(ideal_probs > SUPPORT_THRESHOLD)
    }
    counts = gate_count(executed)
    depth = schedule_asap(executed).depth
    metric_set = MetricSet(
        total_gates=counts.total,
        by_kind=counts.by_kind,
        depth=depth,
        fidelity=fidelity(ideal, ref_state.live),
        success_probability=success_probability(histogram, support),
        quantum_volume=quantum_volume(depth) if depth <= 62 else None,
    )

    config = {
        "shots": shots,
        "seed": seed,
        "noise_p": noise_p,
        "topology": topology,
        "placement": placement if topology is not None else None,
        "top_k": top_k,
        "zero_skip": zero_skip,
    }
    if report is not None:
        config["mapping"] = report.to_dict()

    record = RunRecord(
        run_id=str(uuid.uuid4()),
        timestamp=datetime.now(timezone.utc).isoformat(),
        circuit_hash=circuit_hash,
        config=config,
        metrics=metric_set,
        final_states=_top_states(ref_state.live, executed.n, top_k),
        wall_time_ns=wall_time_ns,
        peak_state_bytes=estimate_total_memory(MemoryParams(executed.n)),
    )
    stored = store_append(record, store_path) if persist else None
    return RunOutcome(record, report, histogram, stored)


def run_file(path: str | Path, **kwargs) -> RunOutcome:
    """Parse a .qasm file and run it; see run_program for the knobs."""
    text = Path(path).read_text(encoding="utf-8")
    return run_program(parse(text), **kwargs)
