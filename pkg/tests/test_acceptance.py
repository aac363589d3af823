"""Acceptance suite: the headline results, one test per criterion.

Each test prints a PASS/FAIL line (visible with -v via the test name,
and with -s via stdout) and asserts the documented tolerance.  Timed
criteria measure the operation itself after a warm-up call, so import
and JIT-less Python startup costs are not billed to the algorithm.
"""

import math
import time

import numpy as np
import pytest

import branchsim as bs
from branchsim import oracle, verify
from branchsim.reference_states import (bidirectional_states, collision_states,
                                        epr_states, single_chain_states)

R2 = 1 / math.sqrt(2)
LN2 = math.log(2.0)


def _report(label: str, ok: bool, detail: str = ""):
    print(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"{label}: {detail}"


def test_c01_single_chain_reproduces_closed_form_states():
    expected = single_chain_states()[:4]
    bs.scenario_single(R2, R2, 4).run(horizon=3)  # warm-up
    t0 = time.perf_counter()
    states = bs.scenario_single(R2, R2, 4).run(horizon=3)
    elapsed = time.perf_counter() - t0
    worst = min(bs.overlap(s, e) for s, e in zip(states, expected))
    ok = len(states) == 4 and worst >= 1.0 - 1e-12 and elapsed < 0.010
    _report("single chain state sequence (t=0..3)", ok,
            f"min overlap {worst:.15f}, {elapsed * 1000:.2f} ms")


def test_c02_coupled_qubit_maximally_mixed_in_every_basis():
    state = bs.scenario_single(R2, R2, 4).run()[1]
    rho = bs.reduced_density_matrix(state, [0])
    entrywise = float(np.abs(rho.matrix - np.eye(2) / 2).max())
    rng = np.random.default_rng(2)
    worst = max(
        bs.coherence(bs.change_basis(rho, {0: oracle.random_gate1(rng)}))
        for _ in range(100))
    ok = entrywise <= 1e-12 and worst < 1e-12
    _report("coupled qubit maximally mixed, coherence 0 in all bases", ok,
            f"entrywise {entrywise:.2e}, worst coherence {worst:.2e}")


def test_c03_biased_qubit_keeps_coherence_in_rotated_basis():
    state = bs.scenario_single(math.sqrt(2 / 3), math.sqrt(1 / 3), 4).run()[1]
    rho = bs.reduced_density_matrix(state, [0])
    diag_err = float(np.abs(rho.matrix - np.diag([2 / 3, 1 / 3])).max())
    rotated = bs.change_basis(rho, {0: bs.hadamard_gate()})
    rot_err = float(np.abs(rotated.matrix - np.array([[0.5, 1 / 6], [1 / 6, 0.5]])).max())
    ok = diag_err <= 1e-12 and rot_err <= 1e-12
    _report("biased qubit: diag(2/3,1/3), rotated [[1/2,1/6],[1/6,1/2]]", ok,
            f"diag err {diag_err:.2e}, rotated err {rot_err:.2e}")


def test_c04_bidirectional_branching_state():
    expected = bidirectional_states()[4]
    state = bs.scenario_bidirectional(4).run()[4]
    value = bs.overlap(state, expected)
    ok = value >= 1.0 - 1e-12
    _report("bidirectional branching final state", ok, f"overlap {value:.15f}")


def test_c05_collision_branches_and_separability():
    states = bs.scenario_collision(4).run()
    decomp = bs.branch_decompose(states[3])
    weight_err = max(abs(w - 0.25) for w in decomp.weights)
    p1 = bs.purity(bs.reduced_density_matrix(states[2], [1]))
    p4 = bs.purity(bs.reduced_density_matrix(states[2], [4]))
    mi = bs.mutual_information(states[3], [0], [5])
    ok = (decomp.n_branches == 4 and weight_err <= 1e-12
          and abs(p1 - 1.0) <= 1e-10 and abs(p4 - 1.0) <= 1e-10
          and abs(mi) <= 1e-10)
    _report("collision: 4 x weight-1/4 branches, transit sites separable, "
            "qubits uncorrelated", ok,
            f"{decomp.n_branches} branches, weight err {weight_err:.2e}, "
            f"MI {mi:.2e}")


def test_c06_entangled_pair_is_one_extended_branch():
    states = bs.scenario_epr(4).run()
    decomp = bs.branch_decompose(states[3])
    weight_err = max(abs(w - 0.5) for w in decomp.weights)
    clusters = bs.extended_branch_clusters(states[1])
    one = clusters.n_clusters == 1 and clusters.clusters[0].sites == (0, 1, 4, 5)
    ok = (decomp.n_branches == 2 and weight_err <= 1e-12
          and one and clusters.clusters[0].n_branches == 2)
    _report("entangled qubits: 2 branches forming one 4-site cluster", ok,
            f"weight err {weight_err:.2e}, cluster sites "
            f"{clusters.clusters[0].sites}")


def test_c07_strict_light_cone_on_longer_chain():
    states = bs.scenario_single(R2, R2, 12).run()
    worst = 0.0
    for t, state in enumerate(states):
        for k in range(1, 13):
            if t < k:
                p = bs.purity(bs.reduced_density_matrix(state, [k]))
                worst = max(worst, abs(p - 1.0))
    ok = worst <= 1e-10
    _report("light cone: purity 1 outside the causal region (12 sites)", ok,
            f"worst deviation {worst:.2e}")


def test_c08_record_chsh_scan_violates_only_for_entangled_qubits():
    bs.record_chsh_scan(bs.scenario_epr(), (2, 3), resolution_deg=30.0)  # warm-up
    t0 = time.perf_counter()
    entangled = bs.record_chsh_scan(bs.scenario_epr(), (2, 3), resolution_deg=1.0)
    product = bs.record_chsh_scan(bs.scenario_collision(), (2, 3), resolution_deg=1.0)
    elapsed = time.perf_counter() - t0
    ok = (entangled.value >= 2.82
          and abs(entangled.value - 2 * math.sqrt(2)) <= 1e-3
          and product.value <= 2.0 + 1e-9
          and elapsed < 30.0)
    _report("CHSH record scan at 1 degree: entangled 2*sqrt(2), product <= 2", ok,
            f"epr {entangled.value:.9f}, collision {product.value:.9f}, "
            f"{elapsed:.1f} s")


def test_c09_sparse_and_dense_engines_agree():
    t0 = time.perf_counter()
    scenario_checks = verify.check_scenario_differential(tol=1e-10)
    random_check = verify.check_random_differential(n_trials=10_000, tol=1e-10)
    elapsed = time.perf_counter() - t0
    ok = (all(r.passed for r in scenario_checks) and random_check.passed
          and elapsed < 120.0)
    _report("engine equivalence: 4 scenarios + 10^4 random sequences", ok,
            f"{random_check.detail}, {elapsed:.1f} s")


def test_c10_born_sampling_matches_branch_weights():
    state = bs.scenario_single(R2, R2, 4).run()[3]
    n = 10_000
    downs, single_branch = 0, True
    for seed in range(n):
        outcome, post = bs.sample_measurement(state, bs.MeasurementSetting(1), seed)
        downs += outcome
        single_branch &= bs.branch_decompose(post).n_branches == 1
    sigma = math.sqrt(n * 0.25)
    ok = abs(downs - n / 2) <= 3 * sigma and single_branch
    _report("Born sampling: record frequency 1/2 within 3 sigma, clean collapse",
            ok, f"{downs}/{n} down outcomes, all posts single-branch: {single_branch}")
