import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlow import _bits
from qlow.errors import ConfigError
from qlow.problems import (
    DiagonalProblem,
    ZTerm,
    bush,
    chain_detuned,
    conflicted_pairs,
    fisher_chain,
    freeze,
    from_dense,
    from_terms,
    grid_ferromagnet_2d,
    hamming_ramp,
    kspin_ferromagnet,
    maxcut_3regular,
    spike,
    spike_band,
    uncoupled_spins,
)

from conftest import small_problems


def brute_values(n, terms):
    """Reference evaluation: product of (1 - 2 z_i) per term, summed."""
    out = np.zeros(1 << n)
    for z in range(1 << n):
        total = 0.0
        for t in terms:
            prod = t.coeff
            for q in t.qubits:
                prod *= 1 - 2 * ((z >> q) & 1)
            total += prod
        out[z] = total
    return out


def test_zterm_sorts_and_rejects_duplicates():
    t = ZTerm((2, 0), 1.5)
    assert t.qubits == (0, 2)
    with pytest.raises(ValueError):
        ZTerm((1, 1), 1.0)


@settings(max_examples=50)
@given(st.integers(1, 4), st.data())
def test_from_terms_matches_brute_force(n, data):
    n_terms = data.draw(st.integers(0, 4))
    terms = []
    for _ in range(n_terms):
        size = data.draw(st.integers(0, n))
        qubits = tuple(data.draw(st.permutations(range(n)))[:size])
        coeff = data.draw(st.floats(-5, 5, allow_nan=False))
        terms.append(ZTerm(qubits, coeff))
    prob = from_terms(n, terms)
    np.testing.assert_allclose(prob.dense, brute_values(n, terms), atol=1e-10)


def test_from_dense_recovers_terms():
    rng = np.random.default_rng(3)
    values = rng.normal(size=16)
    prob = from_dense(4, values)
    np.testing.assert_allclose(brute_values(4, prob.terms), values, atol=1e-9)


def test_dense_term_consistency_guard():
    with pytest.raises(ValueError):
        DiagonalProblem(2, [ZTerm((0,), 1.0)], np.zeros(4))


def test_json_roundtrip():
    prob = conflicted_pairs(4, 0.5, 3.0)
    again = DiagonalProblem.from_json(prob.to_json())
    np.testing.assert_allclose(again.dense, prob.dense, atol=1e-12)
    assert json.loads(prob.to_json())["n"] == 4


def test_hamming_ramp_values_are_popcounts():
    prob = hamming_ramp(5)
    expected = np.array([bin(z).count("1") for z in range(32)], dtype=float)
    np.testing.assert_allclose(prob.dense, expected, atol=1e-12)
    assert prob.f_min == 0.0 and prob.f_max == 5.0


def test_argmin_set_degenerate():
    prob = from_dense(2, np.array([1.0, 0.0, 0.0, 3.0]))
    assert list(prob.argmin_set) == [1, 2]


def test_spike_band_inward_rounding():
    # n=8, narrow band: only the single weight w=2, which is 28/256 = 0.109375
    # of the domain -- the fraction the measure-vote bound is quoted for.
    assert spike_band(8, 0.109375) == (2, 2)
    assert spike_band(8, 0.5) == (1, 3)


def test_spike_values():
    prob = spike(8, 0.5, 1.0)
    w = _bits.popcounts(8)
    inside = (w >= 1) & (w <= 3)
    np.testing.assert_allclose(prob.dense[~inside], w[~inside].astype(float))
    np.testing.assert_allclose(prob.dense[inside], w[inside] + 8.0)


def test_spike_requires_divisible_n():
    with pytest.raises(ConfigError):
        spike(6, 0.5, 1.0)


def test_bush_values():
    prob = bush(4)
    for z in range(16):
        expected = 1.0 if (z & 1) == 0 else float(bin(z).count("1"))
        assert prob.dense[z] == expected


def test_kspin_values_and_ground():
    prob = kspin_ferromagnet(5, 3)
    s = 5 - 2 * _bits.popcounts(5)
    np.testing.assert_allclose(prob.dense, -(s.astype(float) ** 3))
    assert list(prob.argmin_set) == [0]


def test_uncoupled_spins_distributions():
    for dist in ("binary", "uniform", "gaussian"):
        prob = uncoupled_spins(6, dist, seed=2)
        assert len(prob.terms) == 6
        assert all(len(t.qubits) == 1 for t in prob.terms)
    binary = uncoupled_spins(8, "binary", seed=0)
    assert all(abs(abs(t.coeff) - 1.0) < 1e-12 for t in binary.terms)
    uniform = uncoupled_spins(8, "uniform", seed=0)
    assert all(-1.0 <= t.coeff <= 1.0 for t in uniform.terms)
    with pytest.raises(ConfigError):
        uncoupled_spins(4, "cauchy", seed=0)


def test_uncoupled_ground_is_signwise():
    prob = uncoupled_spins(7, "gaussian", seed=11)
    coeffs = {t.qubits[0]: t.coeff for t in prob.terms}
    z = sum((1 << q) for q, c in coeffs.items() if c > 0)
    assert list(prob.argmin_set) == [z]


def test_conflicted_pairs_grounds():
    prob = conflicted_pairs(4, 0.5, 3.0)
    # each pair anti-aligns with the strong spin at its one-body minimum (bit 0)
    assert list(prob.argmin_set) == [0b1010]
    with pytest.raises(ConfigError):
        conflicted_pairs(5, 0.5, 3.0)
    with pytest.raises(ConfigError):
        conflicted_pairs(4, 0.5, 2.0)


def test_fisher_chain_couplings():
    prob = fisher_chain(6, seed=4)
    pair_terms = [t for t in prob.terms if len(t.qubits) == 2]
    assert len(pair_terms) == 5
    assert all(t.coeff in (-0.5, -1.0) for t in pair_terms)
    # aligned states are exact grounds at value 0
    assert prob.f_min == pytest.approx(0.0, abs=1e-12)
    assert 0 in prob.argmin_set and 63 in prob.argmin_set


def test_chain_detuned_split():
    prob = chain_detuned(5, 0.3)
    coeffs = [t.coeff for t in sorted(prob.terms, key=lambda t: t.qubits)]
    assert coeffs == [-1.0, -1.0, -0.3, -0.3]


def test_grid_ferromagnet_edges():
    prob = grid_ferromagnet_2d(3, 3, 0.5)
    assert len(prob.terms) == 12  # 3x3 grid has 12 edges
    assert {0, 511} <= set(prob.argmin_set.tolist())
    j2_edges = [t for t in prob.terms if t.coeff == -0.5]
    assert len(j2_edges) > 0


def test_maxcut_3regular_degree():
    prob = maxcut_3regular(8, 0.25, 0.5, seed=9)
    degree = np.zeros(8, dtype=int)
    edges = set()
    for t in prob.terms:
        assert len(t.qubits) == 2
        assert t.qubits not in edges  # simple graph
        edges.add(t.qubits)
        degree[list(t.qubits)] += 1
    assert np.all(degree == 3)
    assert len(edges) == 12
    k = sum(1 for t in prob.terms if t.coeff == 0.5)
    assert k == round(12 * 0.25)


def test_maxcut_seed_determinism():
    a = maxcut_3regular(10, 0.5, 0.7, seed=3)
    b = maxcut_3regular(10, 0.5, 0.7, seed=3)
    np.testing.assert_array_equal(a.dense, b.dense)
    with pytest.raises(ConfigError):
        maxcut_3regular(7, 0.5, 0.7, seed=3)


@settings(max_examples=40)
@given(small_problems(max_n=4), st.data())
def test_freeze_matches_restriction(prob, data):
    if prob.n < 2:
        return
    q = data.draw(st.integers(0, prob.n - 1))
    bit = data.draw(st.integers(0, 1))
    sub, keep = freeze(prob, {q: bit})
    assert len(keep) == prob.n - 1
    for z_sub in range(1 << sub.n):
        z_full = bit << q
        for new, orig in enumerate(keep):
            z_full |= ((z_sub >> new) & 1) << orig
        assert sub.dense[z_sub] == pytest.approx(prob.dense[z_full], abs=1e-9)


def test_freeze_all_raises():
    prob = hamming_ramp(2)
    with pytest.raises(ValueError):
        freeze(prob, {0: 0, 1: 1})


def test_term_tables_sum_to_dense():
    prob = conflicted_pairs(6, 0.25, 3.0)
    np.testing.assert_allclose(prob.term_tables().sum(axis=0), prob.dense, atol=1e-10)
