"""Closed forms for single-round evolution of independent spins, diabatic
sweep (Landau-Zener) averages, and the related bounds.

Distribution conventions for the per-spin field alpha (f = alpha Z):
binary alpha in {-1, +1}; uniform on [-1, 1]; gaussian with variance 1/2,
so E|alpha| = 1/sqrt(pi). Closed forms below assume those normalizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.optimize

from .errors import ConfigError, NumericError

DISTRIBUTIONS = ("binary", "uniform", "gaussian")

# Sherrington-Kirkpatrick ground energy per spin, for annotation only.
SK_REFERENCE_ENERGY = -1.0 / math.sqrt(4.0 * math.e)


def single_spin_overlap(alpha: float, gamma: float, beta: float) -> float:
    """Probability of the single-spin ground state after one round.

    For f = alpha Z starting from |+>: (1/2)(1 - sin(2 beta) sin(2 |alpha| gamma)).
    Not clamped; the caller checks ranges if it needs a probability.
    """
    return 0.5 * (1.0 - math.sin(2.0 * beta) * math.sin(2.0 * abs(alpha) * gamma))


def _gauss_density(alpha: np.ndarray) -> np.ndarray:
    return np.exp(-(alpha**2)) / math.sqrt(math.pi)


def _c_m(dist: str, gamma: float, beta: float) -> float:
    s2b = math.sin(2.0 * beta)
    if dist == "binary":
        return s2b * math.sin(2.0 * gamma)
    if dist == "uniform":
        if abs(gamma) < 1e-5:
            return s2b * (2.0 / 3.0) * gamma
        return (
            s2b
            * (math.sin(2.0 * gamma) - 2.0 * gamma * math.cos(2.0 * gamma))
            / (4.0 * gamma**2)
        )
    if dist == "gaussian":
        return math.exp(-(gamma**2)) * gamma * s2b
    raise ConfigError(f"unknown distribution {dist!r}")


def _overlap(dist: str, gamma: float, beta: float) -> float:
    s2b = math.sin(2.0 * beta)
    if dist == "binary":
        return single_spin_overlap(1.0, gamma, beta)
    if dist == "uniform":
        if abs(gamma) < 1e-8:
            return 0.5
        return 0.5 * (1.0 - s2b * (1.0 - math.cos(2.0 * gamma)) / (2.0 * gamma))
    if dist == "gaussian":
        val, err = scipy.integrate.quad(
            lambda a: single_spin_overlap(a, gamma, beta) * float(_gauss_density(np.array(a))),
            -8.0,
            8.0,
            epsabs=1e-12,
            epsrel=1e-12,
            limit=200,
        )
        if err > 1e-8:
            raise NumericError("overlap quadrature did not converge")
        return val
    raise ConfigError(f"unknown distribution {dist!r}")


def _f_star(dist: str) -> float:
    if dist == "binary":
        return -1.0
    if dist == "uniform":
        return -0.5
    if dist == "gaussian":
        return -1.0 / math.sqrt(math.pi)
    raise ConfigError(f"unknown distribution {dist!r}")


@dataclass(frozen=True)
class DistributionSummary:
    dist: str
    gamma: float
    beta: float
    c_m: float
    overlap: float
    f_star: float
    ratio: float


def distribution_qaoa(dist: str, gamma: float, beta: float) -> DistributionSummary:
    """Per-spin averages over a field distribution after one round.

    The ratio uses f_max = -f_star, which holds for all three symmetric
    distributions here.
    """
    c_m = _c_m(dist, gamma, beta)
    o = _overlap(dist, gamma, beta)
    f_star = _f_star(dist)
    f_max = -f_star
    ratio = (f_max - c_m) / (f_max - f_star)
    return DistributionSummary(dist, gamma, beta, c_m, o, f_star, ratio)


def optimal_gamma(dist: str, beta: float = math.pi / 4) -> float:
    """Best scalar gamma for the per-spin mean energy at fixed beta."""
    brackets = {"binary": (-1.4, -0.3), "uniform": (-1.5, -0.6), "gaussian": (-1.1, -0.3)}
    if dist not in brackets:
        raise ConfigError(f"unknown distribution {dist!r}")
    res = scipy.optimize.minimize_scalar(
        lambda g: _c_m(dist, g, beta), bounds=brackets[dist], method="bounded",
        options={"xatol": 1e-10},
    )
    return float(res.x)


# ---------------------------------------------------------------------------
# diabatic sweep averages


@dataclass(frozen=True)
class LandauZener:
    """Sweep-rate-Gamma averages for gaussian per-spin fields.

    p_lz(alpha) is the per-spin success probability; o_lz its average over
    the field distribution; a_lz the average final energy per spin; r_lz the
    corresponding approximation ratio.
    """

    gamma_rate: float

    def __post_init__(self) -> None:
        if not self.gamma_rate > 0:
            raise ConfigError("sweep rate must be positive")

    def p_lz(self, alpha: float) -> float:
        return 1.0 - math.exp(-math.pi * alpha**2 / self.gamma_rate)

    @property
    def o_lz(self) -> float:
        g = self.gamma_rate
        return 1.0 - math.sqrt(g / (g + math.pi))

    @property
    def a_lz(self) -> float:
        return -math.sqrt(math.pi) / (math.pi + self.gamma_rate)

    @property
    def r_lz(self) -> float:
        g = self.gamma_rate
        return (2.0 * math.pi + g) / (2.0 * (math.pi + g))


def landau_zener(gamma_rate: float) -> LandauZener:
    return LandauZener(gamma_rate)


def lz_overlap_quadrature(gamma_rate: float) -> float:
    """O as a direct average of p_lz over the gaussian field, for checking."""
    lz = LandauZener(gamma_rate)
    val, err = scipy.integrate.quad(
        lambda a: lz.p_lz(a) * float(_gauss_density(np.array(a))),
        -8.0,
        8.0,
        epsabs=1e-12,
        epsrel=1e-12,
        limit=200,
    )
    if err > 1e-9:
        raise NumericError("sweep quadrature did not converge")
    return val


def lz_numeric_success(
    gamma_rate: float,
    alpha: float = 1.0,
    t_final: float = 80.0,
    rtol: float = 1e-9,
) -> float:
    """Success probability from integrating the two-level sweep directly.

    H(t) = alpha X + (gamma_rate) t Z, swept from -t_final to +t_final,
    started in the instantaneous ground state (|0> for large negative t).
    The asymptotic probability oscillates at finite time, so the tail is
    averaged over a window of checkpoints.
    """
    if gamma_rate <= 0:
        raise ConfigError("sweep rate must be positive")

    def rhs(t, y):
        a0 = y[0] + 1j * y[1]
        a1 = y[2] + 1j * y[3]
        d0 = -1j * (gamma_rate * t * a0 + alpha * a1)
        d1 = -1j * (alpha * a0 - gamma_rate * t * a1)
        return [d0.real, d0.imag, d1.real, d1.imag]

    checkpoints = np.linspace(0.8 * t_final, t_final, 25)
    sol = scipy.integrate.solve_ivp(
        rhs,
        (-t_final, t_final),
        [1.0, 0.0, 0.0, 0.0],
        method="DOP853",
        rtol=rtol,
        atol=rtol * 1e-2,
        t_eval=checkpoints,
        max_step=1.0,
    )
    if not sol.success:
        raise NumericError(f"sweep integration failed: {sol.message}")
    p1 = sol.y[2] ** 2 + sol.y[3] ** 2
    return float(np.mean(p1))


# ---------------------------------------------------------------------------
# bounds


def measure_vote_bound(c: float) -> float:
    """Success lower bound (1 - 2c)^2 for disagreement fraction c < 1/2."""
    if not 0.0 <= c < 0.5:
        raise ConfigError("disagreement fraction must lie in [0, 1/2)")
    return (1.0 - 2.0 * c) ** 2


@dataclass(frozen=True)
class GammaBound:
    """Largest sweep rate achieving target success q over n independent spins.

    exact inverts (o_lz)^n = q in closed form; simplified omits the pi factor
    (kept for reference); approx further reduces to (1 - q^(1/n))^2.
    """

    exact: float
    simplified: float
    approx: float


def gamma_success_bound(q: float, n: int) -> GammaBound:
    if not 0.0 < q < 1.0:
        raise ConfigError("target probability must lie in (0, 1)")
    if n < 1:
        raise ConfigError("need at least one spin")
    u = q ** (1.0 / n)
    core = (1.0 - u) ** 2 / (u * (2.0 - u))
    return GammaBound(exact=math.pi * core, simplified=core, approx=(1.0 - u) ** 2)
