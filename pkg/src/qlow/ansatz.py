"""Evolvers: standard and relaxed QAOA, product ansatz, mean-field stepping.

One round applies the problem phase exp(-i gamma f) and then the mixer
exp(-i beta L_bar); rounds compose innermost-first. Relaxed-gamma schedules
carry one angle per problem term, relaxed-beta one angle per qubit (hypercube
mixers only, since per-qubit angles require the tensor structure).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .laplacians import WeightedHypercube, evolve, hypercube_rotation
from .problems import DiagonalProblem
from .statevector import Statevector, apply_phase, plus_state


@dataclass
class Schedule:
    """p rounds of (gamma, beta) angles, optionally relaxed.

    gammas: shape (p,) or (p, T) with T the number of problem terms.
    betas:  shape (p,) or (p, n) with n the qubit count.
    """

    gammas: np.ndarray
    betas: np.ndarray

    def __post_init__(self) -> None:
        self.gammas = np.atleast_1d(np.asarray(self.gammas, dtype=np.float64))
        self.betas = np.atleast_1d(np.asarray(self.betas, dtype=np.float64))
        if self.gammas.ndim > 2 or self.betas.ndim > 2:
            raise ConfigError("schedule arrays must be 1- or 2-dimensional")
        if not (np.all(np.isfinite(self.gammas)) and np.all(np.isfinite(self.betas))):
            raise ConfigError("schedule angles must be finite")
        if self.rounds != (self.betas.shape[0] if self.betas.ndim else 1):
            raise ConfigError("gammas and betas disagree on round count")

    @property
    def rounds(self) -> int:
        return self.gammas.shape[0]

    @property
    def gamma_relaxed(self) -> bool:
        return self.gammas.ndim == 2

    @property
    def beta_relaxed(self) -> bool:
        return self.betas.ndim == 2

    def flat(self) -> np.ndarray:
        """All angles as one parameter vector (gammas first)."""
        return np.concatenate([self.gammas.ravel(), self.betas.ravel()])

    def with_flat(self, params: np.ndarray) -> "Schedule":
        """Rebuild a schedule of identical shape from a flat parameter vector."""
        gs = self.gammas.size
        g = np.asarray(params[:gs]).reshape(self.gammas.shape)
        b = np.asarray(params[gs:]).reshape(self.betas.shape)
        return Schedule(g, b)


def schedule_p1(gamma: float, beta: float) -> Schedule:
    return Schedule(np.array([gamma]), np.array([beta]))


def qaoa_state(
    problem: DiagonalProblem,
    lap,
    schedule: Schedule,
    initial: Statevector | None = None,
) -> Statevector:
    """Alternate phase and mixer evolutions, p rounds, innermost round first."""
    state = plus_state(problem.n) if initial is None else initial
    if state.n != problem.n:
        raise ValueError("initial state size does not match problem")
    if schedule.beta_relaxed and not isinstance(lap, WeightedHypercube):
        raise ConfigError("per-qubit beta requires a hypercube mixer")
    if schedule.gamma_relaxed and schedule.gammas.shape[1] != len(problem.terms):
        raise ConfigError("per-term gammas must match the problem's term count")
    if schedule.beta_relaxed and schedule.betas.shape[1] != problem.n:
        raise ConfigError("per-qubit betas must match the qubit count")
    b = np.asarray(lap.b) if isinstance(lap, WeightedHypercube) else None
    for k in range(schedule.rounds):
        if schedule.gamma_relaxed:
            values = schedule.gammas[k] @ problem.term_tables()
            state = apply_phase(state, values, 1.0)
        else:
            state = apply_phase(state, problem.dense, float(schedule.gammas[k]))
        if schedule.beta_relaxed:
            state = hypercube_rotation(state, schedule.betas[k] * b)
        else:
            state = evolve(state, lap, float(schedule.betas[k]))
    return state


# ---------------------------------------------------------------------------
# product ansatz and its multilinear expectation


def product_state(thetas: np.ndarray) -> Statevector:
    """Tensor product of per-qubit states cos(theta)|0> + sin(theta)|1>."""
    thetas = np.asarray(thetas, dtype=np.float64)
    n = thetas.shape[0]
    amps = np.array([1.0 + 0.0j])
    for i in range(n - 1, -1, -1):
        # qubit 0 is the least significant bit, hence the last kron factor
        amps = np.kron(amps, np.array([np.cos(thetas[i]), np.sin(thetas[i])]))
    return Statevector(n, amps)


def multilinear_value(problem: DiagonalProblem, x: np.ndarray) -> float:
    """f-hat(x): term-wise expectation with each Z_i replaced by (1 - 2 x_i).

    Equals f(z) exactly on 0/1 vertices and the product-state expectation with
    x_i the per-qubit excitation probability.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (problem.n,):
        raise ValueError("x must have one entry per qubit")
    if np.any(x < -1e-12) or np.any(x > 1 + 1e-12):
        raise ConfigError("x must lie in [0, 1]^n")
    s = 1.0 - 2.0 * x
    total = 0.0
    for t in problem.terms:
        total += t.coeff * float(np.prod(s[list(t.qubits)]))
    return total


def multilinear_gradient(problem: DiagonalProblem, x: np.ndarray) -> np.ndarray:
    """d f-hat / d x_i; multilinearity makes each term's factor drop out once."""
    x = np.asarray(x, dtype=np.float64)
    s = 1.0 - 2.0 * x
    grad = np.zeros(problem.n)
    for t in problem.terms:
        if not t.qubits:
            continue
        vals = s[list(t.qubits)]
        prod = np.prod(vals)
        for pos, q in enumerate(t.qubits):
            v = vals[pos]
            if abs(v) > 1e-30:
                rest = prod / v
            else:
                rest = np.prod(np.delete(vals, pos))
            grad[q] += t.coeff * (-2.0) * rest
    return grad


# ---------------------------------------------------------------------------
# mean-field evolution (product states in, product states out)


def meanfield_plus(n: int) -> np.ndarray:
    """(n, 2) array of per-qubit |+> states."""
    q = np.full((n, 2), 1.0 / np.sqrt(2.0), dtype=np.complex128)
    return q


def product_z_expectations(qubits: np.ndarray) -> np.ndarray:
    """<Z_j> per qubit for an (n, 2) product state."""
    return (np.abs(qubits[:, 0]) ** 2 - np.abs(qubits[:, 1]) ** 2).real


def meanfield_step(
    problem: DiagonalProblem,
    lap: WeightedHypercube,
    qubits: np.ndarray,
    gamma: float,
    beta: float,
) -> np.ndarray:
    """One mean-field round on an (n, 2) product state.

    The per-qubit potential keeps only the Z_j part of the trace: a term on T
    containing j contributes coeff * prod_{i in T, i != j} <Z_i> to the field
    on j (identity parts are per-qubit global phases and are dropped). All
    fields come from the pre-step state (synchronous update); the mean-field
    Laplacian of a hypercube is b_j X_j exactly since X_j is one-local.
    """
    if not isinstance(lap, WeightedHypercube):
        raise ConfigError("mean-field stepping is defined for hypercube mixers")
    qubits = np.asarray(qubits, dtype=np.complex128)
    if qubits.shape != (problem.n, 2):
        raise ConfigError("mean-field state must be an (n, 2) product array")
    m = product_z_expectations(qubits)
    fields = np.zeros(problem.n)
    for t in problem.terms:
        if not t.qubits:
            continue
        vals = m[list(t.qubits)]
        prod = np.prod(vals)
        for pos, q in enumerate(t.qubits):
            v = vals[pos]
            if abs(v) > 1e-30:
                rest = prod / v
            else:
                rest = np.prod(np.delete(vals, pos))
            fields[q] += t.coeff * rest
    out = np.empty_like(qubits)
    b = np.asarray(lap.b)
    for j in range(problem.n):
        a0 = qubits[j, 0] * np.exp(-1j * gamma * fields[j])
        a1 = qubits[j, 1] * np.exp(+1j * gamma * fields[j])
        th = beta * b[j]
        c, s = np.cos(th), np.sin(th)
        out[j, 0] = c * a0 - 1j * s * a1
        out[j, 1] = c * a1 - 1j * s * a0
    return out


def meanfield_evolve(
    problem: DiagonalProblem,
    lap: WeightedHypercube,
    schedule: Schedule,
    qubits: np.ndarray | None = None,
) -> np.ndarray:
    if schedule.gamma_relaxed or schedule.beta_relaxed:
        raise ConfigError("mean-field evolution takes scalar per-round angles")
    state = meanfield_plus(problem.n) if qubits is None else np.asarray(qubits, np.complex128)
    for k in range(schedule.rounds):
        state = meanfield_step(
            problem, lap, state, float(schedule.gammas[k]), float(schedule.betas[k])
        )
    return state


def product_overlap(qubits: np.ndarray, target: int) -> float:
    """Probability that measuring the product state yields basis string target."""
    p = 1.0
    for j in range(qubits.shape[0]):
        bit = (target >> j) & 1
        p *= float(np.abs(qubits[j, bit]) ** 2)
    return p


def product_to_statevector(qubits: np.ndarray) -> Statevector:
    n = qubits.shape[0]
    amps = np.array([1.0 + 0.0j])
    for i in range(n - 1, -1, -1):
        amps = np.kron(amps, qubits[i])
    return Statevector(n, amps)
