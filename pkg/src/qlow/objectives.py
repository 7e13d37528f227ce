"""Variational objectives over exact distributions, plus diagnostic metrics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _bits
from .errors import ConfigError, NumericError
from .laplacians import kinetic_energy
from .problems import DiagonalProblem
from .statevector import Statevector, ground_state_mass


@dataclass(frozen=True)
class Mean:
    pass


@dataclass(frozen=True)
class Gibbs:
    """Soft-min objective -log<exp(-eta f)>; discounts high-energy support."""

    eta: float = 20.0

    def __post_init__(self) -> None:
        if not self.eta > 0:
            raise ConfigError("Gibbs eta must be positive")


@dataclass(frozen=True)
class CVaR:
    """Mean of the lowest alpha-quantile of the induced distribution over f."""

    alpha: float = 0.1

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ConfigError("CVaR alpha must lie in (0, 1]")


@dataclass(frozen=True)
class Combined:
    """k1 * inner objective + k2 * kinetic energy of the state."""

    k1: float = 1.0
    k2: float = 1.0
    inner: object = field(default_factory=Mean)


Objective = Mean | Gibbs | CVaR | Combined


def evaluate(
    obj: Objective,
    state: Statevector,
    problem: DiagonalProblem,
    lap=None,
) -> float:
    probs = state.probabilities()
    values = problem.dense
    if isinstance(obj, Mean):
        return float(probs @ values)
    if isinstance(obj, Gibbs):
        t = -obj.eta * values
        shift = float(t.max())
        g = float(probs @ np.exp(t - shift))
        if not np.isfinite(g) or g <= 0.0:
            raise NumericError("Gibbs objective overflowed despite max-shift")
        return -(shift + np.log(g))
    if isinstance(obj, CVaR):
        order = np.argsort(values, kind="stable")
        p = probs[order]
        f = values[order]
        cum = np.cumsum(p)
        k = int(np.searchsorted(cum, obj.alpha))
        if k >= len(p):
            k = len(p) - 1
        below = float(p[:k] @ f[:k])
        taken = float(cum[k - 1]) if k > 0 else 0.0
        below += (obj.alpha - taken) * float(f[k])
        return below / obj.alpha
    if isinstance(obj, Combined):
        if lap is None:
            raise ConfigError("Combined objective requires a Laplacian")
        return obj.k1 * evaluate(obj.inner, state, problem, lap) + obj.k2 * kinetic_energy(
            state, lap
        )
    raise ConfigError(f"unknown objective {obj!r}")


def mean_via_terms(problem: DiagonalProblem, state: Statevector) -> float:
    """Mean energy as sum over terms of coeff * <prod Z>.

    Independent of the dense-table route in evaluate(); kept separate so the
    two can cross-check each other.
    """
    probs = state.probabilities()
    total = 0.0
    for t in problem.terms:
        mask = 0
        for q in t.qubits:
            mask |= 1 << q
        if mask == 0:
            total += t.coeff
        else:
            total += t.coeff * float(probs @ _bits.parity_signs(problem.n, mask))
    return total


def approximation_ratio(problem: DiagonalProblem, mean_value: float) -> float:
    spread = problem.f_max - problem.f_min
    if spread <= 0:
        raise ConfigError("approximation ratio undefined for a constant problem")
    return (problem.f_max - mean_value) / spread


@dataclass(frozen=True)
class ProxyResult:
    """Normalized single-round gain in exact-solution probability."""

    value: float
    initial_mass: float
    final_mass: float
    gamma: float
    beta: float
    degenerate: bool


def improvement_proxy(
    initial: Statevector,
    problem: DiagonalProblem,
    lap,
    optimizer=None,
) -> ProxyResult:
    """One optimized round from `initial`; gain normalized by 1 - 2^-n.

    The normalization makes an exact solve from the uniform state score 1.
    Degenerate minima are handled by tracking total ground-state mass, with
    the flag set in the result.
    """
    if initial.n != problem.n:
        raise ValueError("initial state size does not match problem")
    if optimizer is None:
        from .optimize import SearchConfig, optimize_schedule

        def optimizer(prob, lp, init):
            sched, _ = optimize_schedule(
                prob, lp, 1, Mean(), SearchConfig(), initial=init
            )
            return float(sched.gammas[0]), float(sched.betas[0])

    gamma, beta = optimizer(problem, lap, initial)
    from .ansatz import Schedule, qaoa_state

    final = qaoa_state(problem, lap, Schedule([gamma], [beta]), initial=initial.copy())
    degenerate = len(problem.argmin_set) > 1
    c0 = ground_state_mass(initial, problem.dense)
    cf = ground_state_mass(final, problem.dense)
    norm = 1.0 - 2.0 ** (-problem.n)
    return ProxyResult(
        value=(cf - c0) / norm,
        initial_mass=c0,
        final_mass=cf,
        gamma=gamma,
        beta=beta,
        degenerate=degenerate,
    )
