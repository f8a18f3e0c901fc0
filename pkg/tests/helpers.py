"""Shared test utilities: random circuits and state comparisons."""

from __future__ import annotations

import numpy as np

from qaccel.cqasm import Kernel, Program
from qaccel.gates import GateInstance, GateKind, run_circuit

UNITARY_1Q = (
    GateKind.X,
    GateKind.Y,
    GateKind.Z,
    GateKind.H,
    GateKind.RX,
    GateKind.RY,
    GateKind.RZ,
)
UNITARY_2Q = (GateKind.CNOT, GateKind.CPHASE, GateKind.SWAP)
UNITARY_3Q = (GateKind.TOFFOLI,)


def random_circuit(rng, n, max_gates=20, min_gates=1) -> list[GateInstance]:
    """Random unitary-only circuit over the full gate set that fits n qubits."""
    pool = list(UNITARY_1Q)
    if n >= 2:
        pool += list(UNITARY_2Q)
    if n >= 3:
        pool += list(UNITARY_3Q)
    ops = []
    for _ in range(int(rng.integers(min_gates, max_gates + 1))):
        kind = pool[int(rng.integers(len(pool)))]
        qubits = tuple(int(q) for q in rng.choice(n, size=kind.arity, replace=False))
        angle = float(rng.uniform(-2 * np.pi, 2 * np.pi)) if kind.takes_angle else None
        ops.append(GateInstance(kind, qubits, angle))
    return ops


def make_program(n, instructions, name=None) -> Program:
    return Program("1.0", n, (Kernel(name, tuple(instructions)),))


def engine_state(n, instructions, zero_skip=True) -> np.ndarray:
    """Final amplitude vector of the mapping-function engine."""
    state, _ = run_circuit(n, instructions, zero_skip=zero_skip)
    return state.live.copy()


def random_state(rng, n) -> np.ndarray:
    """Haar-ish random normalized amplitude vector."""
    vec = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return vec / np.linalg.norm(vec)


def undo_layout_permutation(mapped_amps, final_layout, n_virtual) -> np.ndarray:
    """Express a mapped run's state over the original virtual qubits.

    Physical qubits never assigned a virtual state must be |0>; that is
    asserted by the caller via the returned residual mass.
    """
    n_phys = final_layout.n_physical
    v2p = final_layout.v2p[:n_virtual]
    y = np.arange(1 << n_phys)
    x = np.zeros_like(y)
    for v, node in enumerate(v2p):
        x |= ((y >> node) & 1) << v
    extra_nodes = [p for p in range(n_phys) if p not in v2p]
    extra = np.zeros_like(y, dtype=bool)
    for node in extra_nodes:
        extra |= ((y >> node) & 1) == 1
    leak = float(np.abs(mapped_amps[extra]).max()) if extra.any() else 0.0
    virt = np.zeros(1 << n_virtual, dtype=complex)
    keep = ~extra
    virt[x[keep]] = mapped_amps[keep]
    return virt, leak
