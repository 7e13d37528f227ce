#!/usr/bin/env python3
"""Walk the exactly-solvable single-round constructions and print what each
reaches: ramp, k=3 ferromagnet, single pair, GHZ preparation, and the 3-site
chain that needs an end-only mixer."""

import argparse
import math

import numpy as np

from qlow.ansatz import Schedule, qaoa_state
from qlow.laplacians import WeightedHypercube, evolve, hypercube
from qlow.problems import ZTerm, from_terms, hamming_ramp, kspin_ferromagnet
from qlow.statevector import (
    apply_phase,
    ground_state_mass,
    overlap_probability,
    plus_state,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ramp-max-n", type=int, default=12)
    args = ap.parse_args()

    q = math.pi / 4

    print("ramp f = |z| at (gamma, beta) = (-pi/2, pi/4):")
    for n in range(2, args.ramp_max_n + 1):
        prob = hamming_ramp(n)
        state = qaoa_state(prob, hypercube(n), Schedule([-math.pi / 2], [q]))
        print(f"  n={n:<3d} P(0...0) = {overlap_probability(state, 0):.12f}")

    print("\nk=3 ferromagnet f = -(sum Z)^3 at (-pi/4, pi/4):")
    for n in (3, 5, 7):
        prob = kspin_ferromagnet(n, 3)
        state = qaoa_state(prob, hypercube(n), Schedule([-q], [q]))
        anti = qaoa_state(prob, hypercube(n), Schedule([q], [q]))
        print(
            f"  n={n}  ground mass = {ground_state_mass(state, prob.dense):.12f}"
            f"  (at +pi/4 the all-ones mass is "
            f"{overlap_probability(anti, (1 << n) - 1):.12f})"
        )

    prob = from_terms(2, [ZTerm((0, 1), -1.0)])
    state = qaoa_state(prob, hypercube(2), Schedule([-q], [math.pi / 8]))
    print(
        f"\npair -Z1Z2 at (-pi/4, pi/8): ground mass = "
        f"{ground_state_mass(state, prob.dense):.12f}"
    )

    ghz_prob = from_terms(3, [ZTerm((0, 1), q), ZTerm((1, 2), q), ZTerm((0, 2), q)])
    state = qaoa_state(ghz_prob, hypercube(3), Schedule([1.0], [q]))
    print(
        f"GHZ-3 via (pi/4)(Z1Z2 + Z2Z3 + Z1Z3) at (1, pi/4): "
        f"p(000) = {overlap_probability(state, 0):.12f}, "
        f"p(111) = {overlap_probability(state, 7):.12f}"
    )

    chain = from_terms(3, [ZTerm((0, 1), -1.0), ZTerm((1, 2), -1.0)])
    ends = WeightedHypercube((1.0, 0.0, 1.0))
    state = qaoa_state(chain, ends, Schedule([3 * math.pi / 4], [q]))
    best = 0.0
    for g in np.linspace(-math.pi, math.pi, 201):
        phased = apply_phase(plus_state(3), chain.dense, float(g))
        for b in np.linspace(0.0, math.pi, 101):
            best = max(
                best,
                ground_state_mass(evolve(phased, hypercube(3), float(b)), chain.dense),
            )
    print(
        f"3-site chain -(Z1Z2 + Z2Z3): end-only mixer X1 + X3 at (3pi/4, pi/4) "
        f"reaches {ground_state_mass(state, chain.dense):.12f}; "
        f"full-mixer grid max is only {best:.4f}"
    )


if __name__ == "__main__":
    main()
