"""Amplitude storage: double-buffered state vectors and the memory-cost model.

Amplitudes are complex numbers stored as (real, imaginary) pairs of doubles.
A state holds two 2^n amplitude buffers; one is live (the input to the next
gate), the other receives the gate's output, and a parity flag toggles their
roles after every gate so no copy-back is ever required.

Basis index convention: bit k of a basis index is qubit k, with qubit 0 the
least significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError

#: An amplitude is a complex number; .real/.imag are the stored double pair.
Amplitude = complex

#: Hard cap on simulated qubits: both buffers together stay <= 32 GiB of doubles.
MAX_QUBITS = 30

#: Normalization / equivalence tolerance for double-precision states.
NORM_TOL = 1e-9


@dataclass(frozen=True)
class MemoryParams:
    """Inputs to the memory-cost model.

    ``scalar_bytes`` is the width of one scalar component of an amplitude
    (each amplitude needs two of them).  It parameterizes the cost model
    only; the execution engine always runs in double precision.
    """

    n: int
    scalar_bytes: int = 8

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        if self.scalar_bytes not in (4, 8, 16):
            raise ValueError(f"scalar_bytes must be one of 4, 8, 16, got {self.scalar_bytes}")


def estimate_vector_memory(params: MemoryParams) -> int:
    """Bytes needed for one 2^n amplitude array (two scalars per amplitude)."""
    return 2 * params.scalar_bytes * (1 << params.n)


def estimate_total_memory(params: MemoryParams) -> int:
    """Bytes needed for the double-buffered engine: twice the vector cost."""
    return params.scalar_bytes * (1 << (params.n + 2))


def estimate_matrix_memory(params: MemoryParams) -> int:
    """Bytes a dense 2^n x 2^n gate matrix would occupy.

    The engine never stores such a matrix; this quantifies what converting
    gates into mapping functions avoids.
    """
    return 2 * params.scalar_bytes * (1 << (2 * params.n))


class StateVector:
    """An n-qubit register held in two alternating amplitude buffers.

    ``parity`` names the live buffer: 0 means the even buffer holds the
    current amplitudes, 1 means the odd buffer does.  Between gates the
    non-live buffer is kept all zeros.
    """

    __slots__ = ("n", "dim", "buf_even", "buf_odd", "parity")

    def __init__(self, n: int):
        if not 1 <= n <= MAX_QUBITS:
            msg = f"qubit count {n} outside supported range 1..{MAX_QUBITS}"
            if n >= 1:
                need = estimate_total_memory(MemoryParams(n))
                msg += f": double-buffered state would need {need} bytes"
            raise CapacityError(msg)
        self.n = n
        self.dim = 1 << n
        self.buf_even = np.zeros(self.dim, dtype=np.complex128)
        self.buf_odd = np.zeros(self.dim, dtype=np.complex128)
        self.parity = 0
        self.buf_even[0] = 1.0

    @property
    def live(self) -> np.ndarray:
        """The buffer currently holding the state."""
        return self.buf_even if self.parity == 0 else self.buf_odd

    @property
    def dead(self) -> np.ndarray:
        """The scratch buffer the next gate will write into (all zeros)."""
        return self.buf_odd if self.parity == 0 else self.buf_even

    def toggle_after_gate(self) -> None:
        """Zero the old input buffer and make the output buffer live."""
        self.live[:] = 0
        self.parity ^= 1

    def reset_ground(self) -> None:
        """Return to |0...0> with even parity, reusing the allocated buffers."""
        self.buf_even[:] = 0
        self.buf_odd[:] = 0
        self.buf_even[0] = 1.0
        self.parity = 0

    def amplitude(self, i: int) -> Amplitude:
        if not 0 <= i < self.dim:
            raise IndexError(f"basis index {i} out of range for {self.n} qubits")
        return complex(self.live[i])

    def probabilities(self) -> np.ndarray:
        """Per-basis-state probability: re^2 + im^2 of the live amplitudes."""
        amps = self.live
        return amps.real**2 + amps.imag**2

    def norm_squared(self) -> float:
        return float(self.probabilities().sum())

    def copy(self) -> "StateVector":
        dup = StateVector.__new__(StateVector)
        dup.n = self.n
        dup.dim = self.dim
        dup.buf_even = self.buf_even.copy()
        dup.buf_odd = self.buf_odd.copy()
        dup.parity = self.parity
        return dup

    @classmethod
    def from_amplitudes(cls, amps: np.ndarray) -> "StateVector":
        """Build a state from an explicit amplitude vector (must be normalized)."""
        amps = np.asarray(amps, dtype=np.complex128).ravel()
        n = int(amps.size).bit_length() - 1
        if (1 << n) != amps.size:
            raise ValueError(f"amplitude count {amps.size} is not a power of two")
        norm = float((amps.real**2 + amps.imag**2).sum())
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: sum of squares is {norm!r}")
        state = cls(n)
        state.buf_even[:] = amps
        return state

    def __repr__(self) -> str:
        return f"StateVector(n={self.n}, parity={self.parity})"


def alloc_state(n: int) -> StateVector:
    """Allocate the all-zero ground state |0...0> on n qubits."""
    return StateVector(n)


def get_amplitude(state: StateVector, i: int) -> Amplitude:
    """Read one live-buffer amplitude without disturbing the state."""
    return state.amplitude(i)


def probabilities(state: StateVector) -> np.ndarray:
    """Probability of each basis state in the live buffer."""
    return state.probabilities()
