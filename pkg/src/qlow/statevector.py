"""Dense complex statevectors and the primitive evolutions everything composes.

Amplitudes live in a flat array of length 2^n indexed little-endian: bit i of
the index is qubit i, and Z_i |z> = (1 - 2 z_i) |z>. Hard cap n <= 24 unless
the QLOW_MAX_QUBITS environment variable raises it. Every evolution keeps the
norm within 1e-10; drift beyond that is renormalized and counted, never hidden.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ResourceError

DEFAULT_MAX_QUBITS = 24
NORM_TOL = 1e-10

# Running count of norm-drift renormalizations; see note_renormalization().
_RENORMALIZATIONS = 0


def max_qubits() -> int:
    """Current qubit cap; QLOW_MAX_QUBITS overrides the default of 24."""
    raw = os.environ.get("QLOW_MAX_QUBITS")
    if raw is None:
        return DEFAULT_MAX_QUBITS
    return int(raw)


def renormalization_events() -> int:
    """How many times an operation had to renormalize drifted amplitudes."""
    return _RENORMALIZATIONS


def check_qubit_count(n: int) -> None:
    if n < 1:
        raise ValueError(f"qubit count must be >= 1, got {n}")
    if n > max_qubits():
        raise ResourceError(f"n={n} exceeds the cap of {max_qubits()} qubits")


@dataclass
class Statevector:
    """n qubits, 2^n complex amplitudes, little-endian basis indexing."""

    n: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (1 << self.n,):
            raise ValueError(
                f"amplitude array has shape {self.amps.shape}, expected ({1 << self.n},)"
            )

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def copy(self) -> "Statevector":
        return Statevector(self.n, self.amps.copy())


def _finalize(n: int, amps: np.ndarray) -> Statevector:
    """Wrap raw amplitudes; renormalize only if drift exceeds NORM_TOL."""
    global _RENORMALIZATIONS
    nrm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(nrm2 - 1.0) > NORM_TOL:
        _RENORMALIZATIONS += 1
        amps = amps / np.sqrt(nrm2)
    return Statevector(n, amps)


def plus_state(n: int) -> Statevector:
    """|+>^n: every amplitude 2^(-n/2), phase 0."""
    check_qubit_count(n)
    amps = np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128)
    return Statevector(n, amps)


def basis_state(n: int, z: int) -> Statevector:
    check_qubit_count(n)
    if not 0 <= z < (1 << n):
        raise ValueError(f"basis index {z} out of range for n={n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[z] = 1.0
    return Statevector(n, amps)


def apply_phase(state: Statevector, values: np.ndarray, gamma: float) -> Statevector:
    """amps[z] <- exp(-i * gamma * values[z]) * amps[z].

    values is the dense table f(z) in problem-energy units; the sign follows
    the ansatz convention exp(-i gamma f).
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != state.amps.shape:
        raise ValueError(
            f"phase table length {values.shape} does not match state length {state.amps.shape}"
        )
    return Statevector(state.n, state.amps * np.exp(-1j * gamma * values))


def fwht(state: Statevector) -> Statevector:
    """H^{tensor n} with 2^(-n/2) normalization; self-inverse, O(n 2^n)."""
    amps = fwht_array(state.amps)
    return _finalize(state.n, amps)


def fwht_array(values: np.ndarray) -> np.ndarray:
    """Normalized Walsh-Hadamard transform of a length-2^n array (any dtype)."""
    a = np.array(values, dtype=np.complex128 if np.iscomplexobj(values) else np.float64)
    size = a.shape[0]
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ValueError(f"length {size} is not a power of two")
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a = np.stack([top, bot], axis=1)
        h *= 2
    return a.reshape(size) * 2.0 ** (-n / 2)


def overlap_probability(state: Statevector, target: int) -> float:
    """|<target|state>|^2 for a basis target."""
    if not 0 <= target < state.amps.shape[0]:
        raise ValueError(f"target {target} out of range")
    return float(np.abs(state.amps[target]) ** 2)


def ground_state_mass(state: Statevector, values: np.ndarray, tol: float = 1e-9) -> float:
    """Probability mass on every z attaining min values[z], ties within tol."""
    values = np.asarray(values, dtype=np.float64)
    fmin = float(values.min())
    mask = values <= fmin + tol
    return float(np.sum(np.abs(state.amps[mask]) ** 2))
