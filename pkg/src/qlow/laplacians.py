"""Graph Laplacians over bitstring space and exact evolution under them.

The mixer convention throughout is exp(-i beta L_bar) with L_bar = -L_G.
Regular graphs (hypercube, complete graph) drop the degree term as a global
phase, so the hypercube mixer is the product of per-qubit rotations
exp(-i beta b_i X_i) and the complete-graph mixer is the rank-1 update
psi + (exp(-i beta) - 1) <u|psi> u with u the uniform state. kinetic_energy
always uses the positive-semidefinite L_G = D_G - A_G, so it is >= 0 and
vanishes exactly on the uniform state of a connected graph.

CustomSparse and BallCut evolutions exponentiate the explicit matrix: dense
eigendecomposition up to 4096 vertices, Krylov (expm_multiply) above, both
accurate to well under 1e-10.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from . import _bits
from .errors import ConfigError, ResourceError
from .statevector import Statevector, check_qubit_count, plus_state

MATRIX_N_CAP = 16
DENSE_EIG_VERTEX_CAP = 1 << 12


@dataclass(frozen=True)
class WeightedHypercube:
    """L_bar = sum_i b_i X_i; b_i >= 0 are per-qubit edge weights."""

    b: tuple[float, ...]

    def __post_init__(self) -> None:
        b = tuple(float(x) for x in self.b)
        if any(x < 0 for x in b):
            raise ConfigError("hypercube weights must be non-negative")
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.b)


def hypercube(n: int) -> WeightedHypercube:
    """The standard unit-weight hypercube graph on n qubits."""
    return WeightedHypercube((1.0,) * n)


@dataclass(frozen=True)
class CompleteGraph:
    """L_bar = P_plus = |+><+|^n (complete graph over 2^n vertices, normalized)."""

    n: int


@dataclass
class CustomSparse:
    """Arbitrary graph on the 2^n bitstrings: L_G = D_G - A_G.

    adjacency must be symmetric with zero diagonal. Evolution drops the degree
    term only when the graph is regular (global phase), which keeps the generic
    path elementwise-identical to the hypercube fast path on the same graph.
    """

    n: int
    adjacency: sp.csr_matrix
    _eig: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        size = 1 << self.n
        adj = sp.csr_matrix(self.adjacency, dtype=np.float64)
        if adj.shape != (size, size):
            raise ConfigError(f"adjacency must be {size} x {size}")
        if abs(adj - adj.T).max() > 1e-12:
            raise ConfigError("adjacency must be symmetric")
        if abs(adj.diagonal()).max() > 0:
            raise ConfigError("adjacency must have zero diagonal")
        self.adjacency = adj

    @property
    def degrees(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    @property
    def is_regular(self) -> bool:
        d = self.degrees
        return bool(np.ptp(d) <= 1e-12)

    def laplacian(self) -> sp.csr_matrix:
        return sp.diags(self.degrees) - self.adjacency

    def to_edge_json(self) -> str:
        coo = sp.triu(self.adjacency, k=1).tocoo()
        edges = sorted(
            (int(u), int(v), float(w)) for u, v, w in zip(coo.row, coo.col, coo.data)
        )
        return json.dumps({"n": self.n, "edges": edges})

    @staticmethod
    def from_edge_json(text: str) -> "CustomSparse":
        payload = json.loads(text)
        n = payload["n"]
        size = 1 << n
        rows, cols, vals = [], [], []
        for edge in payload["edges"]:
            u, v = int(edge[0]), int(edge[1])
            w = float(edge[2]) if len(edge) > 2 else 1.0
            rows += [u, v]
            cols += [v, u]
            vals += [w, w]
        adj = sp.csr_matrix((vals, (rows, cols)), shape=(size, size))
        return CustomSparse(n, adj)


def custom_from_edges(n: int, edges: list[tuple[int, int]] | list[tuple[int, int, float]]) -> CustomSparse:
    size = 1 << n
    rows, cols, vals = [], [], []
    for edge in edges:
        u, v = int(edge[0]), int(edge[1])
        w = float(edge[2]) if len(edge) > 2 else 1.0
        rows += [u, v]
        cols += [v, u]
        vals += [w, w]
    return CustomSparse(n, sp.csr_matrix((vals, (rows, cols)), shape=(size, size)))


def hypercube_adjacency(n: int, b: tuple[float, ...] | None = None) -> sp.csr_matrix:
    """Adjacency of the weighted hypercube as an explicit sparse matrix."""
    b = (1.0,) * n if b is None else b
    size = 1 << n
    z = np.arange(size)
    rows, cols, vals = [], [], []
    for i in range(n):
        rows.append(z)
        cols.append(z ^ (1 << i))
        vals.append(np.full(size, float(b[i])))
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    )


@dataclass
class BallCut:
    """The inner graph restricted to the Hamming ball B(center, radius).

    Vertices outside the ball are deleted: evolution acts as identity there and
    never exchanges amplitude across the boundary. Inside, the full induced
    Laplacian D - A is used (boundary vertices lose degree, so the degree term
    is not a global phase and must be kept).
    """

    inner: WeightedHypercube | CompleteGraph | CustomSparse
    center: int
    radius: int
    _ball: np.ndarray | None = field(default=None, repr=False)
    _eig: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)
    _lap: sp.csr_matrix | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        n = lap_qubits(self.inner)
        if isinstance(self.inner, BallCut):
            raise ConfigError("nesting ball cuts is not supported")
        if not 0 <= self.radius <= n:
            raise ConfigError(f"radius must lie in [0, {n}]")
        if not 0 <= self.center < (1 << n):
            raise ConfigError("center out of range")

    @property
    def n(self) -> int:
        return lap_qubits(self.inner)

    def ball(self) -> np.ndarray:
        """Sorted basis indices inside the ball."""
        if self._ball is None:
            dist = np.bitwise_count(_bits.indices(self.n) ^ np.uint32(self.center))
            self._ball = np.flatnonzero(dist <= self.radius)
        return self._ball

    def laplacian(self) -> sp.csr_matrix:
        """Induced-subgraph Laplacian on the ball vertices (ball-local indexing)."""
        if self._lap is None:
            ball = self.ball()
            adj = _inner_adjacency(self.inner)[np.ix_(ball, ball)].tocsr()
            deg = np.asarray(adj.sum(axis=1)).ravel()
            self._lap = (sp.diags(deg) - adj).tocsr()
        return self._lap


def lap_qubits(lap) -> int:
    return lap.n


def _inner_adjacency(inner) -> sp.csr_matrix:
    if isinstance(inner, WeightedHypercube):
        return hypercube_adjacency(inner.n, inner.b)
    if isinstance(inner, CompleteGraph):
        size = 1 << inner.n
        # Normalization matching L_bar = P_plus: L = I - P_plus, edge weight 1/2^n.
        adj = sp.csr_matrix(np.full((size, size), 1.0 / size) - np.eye(size) / size)
        return adj
    if isinstance(inner, CustomSparse):
        return inner.adjacency
    raise ConfigError(f"unsupported inner graph {type(inner).__name__}")


# ---------------------------------------------------------------------------
# evolution


def hypercube_rotation(state: Statevector, thetas: np.ndarray) -> Statevector:
    """prod_i exp(-i thetas[i] X_i) applied via the tensor structure."""
    n = state.n
    amps = state.amps
    for i in range(n):
        th = float(thetas[i])
        if th == 0.0:
            continue
        c, s = np.cos(th), np.sin(th)
        v = amps.reshape(1 << (n - 1 - i), 2, 1 << i)
        a0 = v[:, 0, :]
        a1 = v[:, 1, :]
        out = np.empty_like(v)
        out[:, 0, :] = c * a0 - 1j * s * a1
        out[:, 1, :] = c * a1 - 1j * s * a0
        amps = out.reshape(-1)
    return Statevector(n, amps)


def _evolve_matrix(lap, state: Statevector, beta: float) -> Statevector:
    """Generic path: exponentiate the explicit L_bar restricted to its support."""
    if isinstance(lap, CustomSparse):
        if lap.n > MATRIX_N_CAP:
            raise ResourceError(f"custom graphs capped at n={MATRIX_N_CAP}")
        size = 1 << lap.n
        if lap.is_regular:
            lbar = lap.adjacency
        else:
            lbar = lap.adjacency - sp.diags(lap.degrees)
        if size <= DENSE_EIG_VERTEX_CAP:
            if lap._eig is None:
                lap._eig = np.linalg.eigh(lbar.toarray())
            evals, evecs = lap._eig
            phases = np.exp(-1j * beta * evals)
            amps = evecs @ (phases * (evecs.conj().T @ state.amps))
            return Statevector(state.n, amps)
        amps = expm_multiply(-1j * beta * lbar.astype(np.complex128), state.amps)
        return Statevector(state.n, amps)

    if isinstance(lap, BallCut):
        if lap.n > MATRIX_N_CAP:
            raise ResourceError(f"ball cuts capped at n={MATRIX_N_CAP}")
        ball = lap.ball()
        lball = lap.laplacian()
        amps = state.amps.copy()
        seg = amps[ball]
        if ball.size <= DENSE_EIG_VERTEX_CAP:
            if lap._eig is None:
                lap._eig = np.linalg.eigh(lball.toarray())
            evals, evecs = lap._eig
            # L_bar = -L on the ball block.
            seg = evecs @ (np.exp(1j * beta * evals) * (evecs.conj().T @ seg))
        else:
            seg = expm_multiply(1j * beta * lball.astype(np.complex128), seg)
        amps[ball] = seg
        return Statevector(state.n, amps)

    raise ConfigError(f"unsupported Laplacian {type(lap).__name__}")


def evolve(state: Statevector, lap, beta: float) -> Statevector:
    """Exact unitary exp(-i beta L_bar) applied to the state."""
    if lap_qubits(lap) != state.n:
        raise ValueError(
            f"Laplacian is on {lap_qubits(lap)} qubits, state on {state.n}"
        )
    if isinstance(lap, WeightedHypercube):
        return hypercube_rotation(state, beta * np.asarray(lap.b))
    if isinstance(lap, CompleteGraph):
        shift = (np.exp(-1j * beta) - 1.0) * np.mean(state.amps)
        return Statevector(state.n, state.amps + shift)
    return _evolve_matrix(lap, state, beta)


def evolve_many(state: Statevector, lap, betas: np.ndarray) -> list[Statevector]:
    """evolve(state, lap, b) for every b, batched into one GEMM where the
    Laplacian is eigendecomposed anyway (grid scans would otherwise pay a full
    matrix-vector product per grid point)."""
    betas = np.asarray(betas, dtype=np.float64)
    if isinstance(lap, BallCut) and lap.n <= MATRIX_N_CAP:
        ball = lap.ball()
        if ball.size <= DENSE_EIG_VERTEX_CAP:
            if lap._eig is None:
                lap._eig = np.linalg.eigh(lap.laplacian().toarray())
            evals, evecs = lap._eig
            y = evecs.conj().T @ state.amps[ball]
            phases = np.exp(1j * np.outer(evals, betas))
            segs = evecs @ (phases * y[:, None])
            out = []
            for j in range(betas.size):
                amps = state.amps.copy()
                amps[ball] = segs[:, j]
                out.append(Statevector(state.n, amps))
            return out
    if isinstance(lap, CustomSparse) and lap.n <= MATRIX_N_CAP:
        if (1 << lap.n) <= DENSE_EIG_VERTEX_CAP:
            if lap._eig is None:
                lbar = lap.adjacency if lap.is_regular else lap.adjacency - sp.diags(lap.degrees)
                lap._eig = np.linalg.eigh(lbar.toarray())
            evals, evecs = lap._eig
            y = evecs.conj().T @ state.amps
            phases = np.exp(-1j * np.outer(evals, betas))
            batch = evecs @ (phases * y[:, None])
            return [Statevector(state.n, batch[:, j]) for j in range(betas.size)]
    return [evolve(state, lap, float(b)) for b in betas]


# ---------------------------------------------------------------------------
# kinetic energy <L_G> with the positive-semidefinite convention


def _x_expectations(state: Statevector) -> np.ndarray:
    n = state.n
    out = np.empty(n)
    for i in range(n):
        v = state.amps.reshape(1 << (n - 1 - i), 2, 1 << i)
        out[i] = 2.0 * float(np.sum(v[:, 0, :].conj() * v[:, 1, :]).real)
    return out


def kinetic_energy(state: Statevector, lap) -> float:
    """<psi| L_G |psi> with L_G = D_G - A_G (>= 0; 0 iff uniform when connected)."""
    if isinstance(lap, WeightedHypercube):
        b = np.asarray(lap.b)
        return float(np.sum(b * (1.0 - _x_expectations(state))))
    if isinstance(lap, CompleteGraph):
        u_amp = np.sum(state.amps) * 2.0 ** (-state.n / 2)
        return float(1.0 - abs(u_amp) ** 2)
    if isinstance(lap, CustomSparse):
        lmat = lap.laplacian()
        return float(np.real(np.vdot(state.amps, lmat @ state.amps)))
    if isinstance(lap, BallCut):
        ball = lap.ball()
        seg = state.amps[ball]
        return float(np.real(np.vdot(seg, lap.laplacian() @ seg)))
    raise ConfigError(f"unsupported Laplacian {type(lap).__name__}")


# ---------------------------------------------------------------------------
# structured initial states


def ball_uniform_state(n: int, center: int, radius: int) -> Statevector:
    """Equal positive amplitudes on the Hamming ball B(center, radius)."""
    check_qubit_count(n)
    if radius > n or radius < 0:
        raise ConfigError(f"radius must lie in [0, {n}]")
    dist = np.bitwise_count(_bits.indices(n) ^ np.uint32(center))
    mask = dist <= radius
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[mask] = 1.0 / np.sqrt(mask.sum())
    return Statevector(n, amps)


def hamming_shell_state(n: int, weight: int) -> Statevector:
    """Equal positive amplitudes on strings of exactly the given popcount."""
    check_qubit_count(n)
    if not 0 <= weight <= n:
        raise ConfigError(f"weight must lie in [0, {n}]")
    mask = _bits.popcounts(n) == weight
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[mask] = 1.0 / np.sqrt(mask.sum())
    return Statevector(n, amps)


def randomize_phases(state: Statevector, seed: int) -> Statevector:
    """Each nonzero amplitude picks up an i.i.d. uniform phase; magnitudes kept."""
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(0.0, 2.0 * np.pi, size=state.amps.shape[0])
    amps = state.amps.copy()
    nz = amps != 0
    amps[nz] = amps[nz] * np.exp(1j * thetas[nz])
    return Statevector(state.n, amps)


def uniform_is_plus(n: int) -> Statevector:
    """Alias kept for readers: the uniform vertex state is |+>^n."""
    return plus_state(n)
