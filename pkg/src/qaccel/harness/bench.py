"""Benchmark suites: per-gate cost, qubit scaling, and circuit-depth scaling.

Timing uses the monotonic clock with a discarded warm-up pass and the
median of 5 measurements per point.  Absolute numbers are machine
dependent and reported, never asserted; the suites exist for the scaling
shapes (exponential in qubits, linear in gate count) and the zero-skip
comparison.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..gates import GateInstance, GateKind, apply_gate
from ..statecore import MAX_QUBITS, alloc_state

#: Gate list of the per-gate timing suite, each with the register size it
#: is measured on (1 qubit for single-qubit gates, 2 for two-qubit, 3 for
#: three-qubit).
BENCH_GATES: tuple[tuple[GateInstance, int], ...] = (
    (GateInstance(GateKind.X, (0,)), 1),
    (GateInstance(GateKind.Y, (0,)), 1),
    (GateInstance(GateKind.Z, (0,)), 1),
    (GateInstance(GateKind.H, (0,)), 1),
    (GateInstance(GateKind.RX, (0,), 0.7), 1),
    (GateInstance(GateKind.RY, (0,), 0.7), 1),
    (GateInstance(GateKind.RZ, (0,), 0.7), 1),
    (GateInstance(GateKind.CNOT, (0, 1)), 2),
    (GateInstance(GateKind.CPHASE, (0, 1)), 2),
    (GateInstance(GateKind.TOFFOLI, (0, 1, 2)), 3),
)

MEASUREMENTS_PER_POINT = 5


@dataclass(frozen=True)
class FitResult:
    model: str
    slope: float
    intercept: float
    r_squared: float
    intercept_stderr: float


@dataclass
class BenchResult:
    """One suite's measurements: per-series times over the variable values."""

    suite: str
    variable: str
    values: list
    series: dict[str, list[float]]  # series name -> wall time in ns per value
    fits: dict[str, FitResult] = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        names = list(self.series)
        if len(names) == 1 and names[0] == "time_ns":
            header = f"{self.variable},time_ns"
        else:
            header = ",".join([self.variable] + [f"{name}_time_ns" for name in names])
        rows = [header]
        for i, value in enumerate(self.values):
            cells = [str(value)] + [f"{self.series[name][i]:.1f}" for name in names]
            rows.append(",".join(cells))
        return "\n".join(rows) + "\n"


def linear_fit(x, y) -> FitResult:
    """Least-squares line with R^2 and the intercept's standard error."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    xbar, ybar = x.mean(), y.mean()
    sxx = float(((x - xbar) ** 2).sum())
    slope = float(((x - xbar) * (y - ybar)).sum() / sxx)
    intercept = float(ybar - slope * xbar)
    residuals = y - (slope * x + intercept)
    ss_res = float((residuals**2).sum())
    ss_tot = float(((y - ybar) ** 2).sum())
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    if n > 2:
        sigma2 = ss_res / (n - 2)
        stderr = math.sqrt(sigma2 * (1.0 / n + xbar**2 / sxx))
    else:
        stderr = 0.0
    return FitResult("linear", slope, intercept, r_squared, stderr)


def _median(values: list[float]) -> float:
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[mid]
    return 0.5 * (ordered[mid - 1] + ordered[mid])


def _time_ns(fn) -> float:
    start = time.perf_counter_ns()
    fn()
    return float(time.perf_counter_ns() - start)


def _median_time_ns(
    fn, repeats: int = MEASUREMENTS_PER_POINT, min_block_ns: float = 10_000_000.0
) -> float:
    """Median over ``repeats`` timed blocks of one warmed-up callable.

    Fast callables are looped inside each block until the block exceeds
    ``min_block_ns``, so scheduler jitter cannot dominate the reading.
    """
    first = _time_ns(fn)  # warm-up, also calibrates the inner loop
    inner = max(1, int(min_block_ns // max(first, 1.0)))
    samples = []
    for _ in range(repeats):
        start = time.perf_counter_ns()
        for _ in range(inner):
            fn()
        samples.append((time.perf_counter_ns() - start) / inner)
    return _median(samples)


def bench_gates(reps: int = 100_000) -> BenchResult:
    """Mean wall time per gate application, medianed over 5 blocks.

    Each gate runs on a fresh ground state of its natural register size,
    applied back-to-back ``reps`` times in total.
    """
    if reps < MEASUREMENTS_PER_POINT:
        raise ValueError(f"reps must be >= {MEASUREMENTS_PER_POINT}, got {reps}")
    block = reps // MEASUREMENTS_PER_POINT
    names: list[str] = []
    times: list[float] = []
    for instance, n_qubits in BENCH_GATES:
        state = alloc_state(n_qubits)
        apply_gate(state, instance)  # warm-up, discarded
        block_means = []
        for _ in range(MEASUREMENTS_PER_POINT):
            start = time.perf_counter_ns()
            for _ in range(block):
                apply_gate(state, instance)
            block_means.append((time.perf_counter_ns() - start) / block)
        names.append(instance.kind.mnemonic)
        times.append(_median(block_means))
    return BenchResult(
        suite="gates",
        variable="gate",
        values=names,
        series={"time_ns": times},
        notes={"reps": reps},
    )


def _epr_chain(n: int) -> list[GateInstance]:
    """H then a CNOT chain: the EPR-pair generator scaled to n qubits."""
    ops = [GateInstance(GateKind.H, (0,))]
    ops.extend(GateInstance(GateKind.CNOT, (i, i + 1)) for i in range(n - 1))
    return ops


def bench_qubit_scaling(n_min: int, n_max: int, zero_skip: bool | None = None) -> BenchResult:
    """Time the EPR chain as the register grows; fit log2(time) against n.

    With ``zero_skip=None`` both modes run and the result carries their
    per-point ratio; otherwise only the requested mode runs.
    """
    if n_min > n_max:
        raise ValueError(f"n_min {n_min} exceeds n_max {n_max}")
    if n_min < 2 or n_max > MAX_QUBITS:
        raise ValueError(f"qubit range must sit inside 2..{MAX_QUBITS}")
    modes = {"skip": True, "noskip": False} if zero_skip is None else (
        {"skip": True} if zero_skip else {"noskip": False}
    )
    values = list(range(n_min, n_max + 1))
    series: dict[str, list[float]] = {name: [] for name in modes}
    for n in values:
        circuit = _epr_chain(n)
        state = alloc_state(n)

        def make_runner(skip):
            def run_once():
                state.reset_ground()
                for g in circuit:
                    apply_gate(state, g, zero_skip=skip)

            return run_once

        runners = {name: make_runner(skip) for name, skip in modes.items()}
        # warm up and calibrate inner loops, then interleave the modes'
        # measurement blocks so clock-speed drift cannot bias their ratio
        inner = {
            name: max(1, int(10_000_000 // max(_time_ns(fn), 1.0)))
            for name, fn in runners.items()
        }
        samples: dict[str, list[float]] = {name: [] for name in runners}
        for _ in range(MEASUREMENTS_PER_POINT):
            for name, fn in runners.items():
                start = time.perf_counter_ns()
                for _ in range(inner[name]):
                    fn()
                samples[name].append((time.perf_counter_ns() - start) / inner[name])
        for name in runners:
            series[name].append(_median(samples[name]))
    fits = {
        name: linear_fit(values, np.log2(times)) for name, times in series.items()
    }
    notes: dict = {"circuit": "epr_chain"}
    if len(series) == 2:
        notes["skip_over_noskip"] = [
            s / ns for s, ns in zip(series["skip"], series["noskip"])
        ]
    return BenchResult("qubits", "n", values, series, fits, notes)


def _repeated_gate_circuit(kind: GateKind, count: int) -> list[GateInstance]:
    if kind.arity == 1:
        template = GateInstance(kind, (0,))
    else:
        template = GateInstance(kind, (0, 1))
    return [template] * count


def bench_depth_scaling(
    gate_counts=(100, 300, 1000, 3000, 10000),
    kinds=(GateKind.X, GateKind.H, GateKind.CNOT),
) -> BenchResult:
    """Time 2-qubit circuits of g repeated gates; one linear fit per kind."""
    values = list(gate_counts)
    if not values or any(g < 1 for g in values):
        raise ValueError("gate counts must be positive")
    series: dict[str, list[float]] = {}
    fits: dict[str, FitResult] = {}
    state = alloc_state(2)
    for kind in kinds:
        times = []
        for count in values:
            circuit = _repeated_gate_circuit(kind, count)

            def run_once():
                state.reset_ground()
                for g in circuit:
                    apply_gate(state, g)

            times.append(_median_time_ns(run_once))
        series[kind.mnemonic] = times
        fits[kind.mnemonic] = linear_fit(values, times)
    return BenchResult("depth", "gates", values, series, fits, {"qubits": 2})
