"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
go by; plain `pytest -v` shows the per-criterion verdicts via test names.
"""
import math
import time
from fractions import Fraction

import numpy as np

from sign_table import BRANCH_TABLE, expected_branch_amplitudes
from dense_oracle import enumerate_occupations
from fockjoin.fock import (
    basis_state,
    bipartition,
    fidelity,
    inner_product,
    schmidt_values,
)
from fockjoin.gates import (
    NETWORK_SUCCESS_AMPLITUDE,
    build_postselected_cnot_network,
    network_input,
    postselect_rail_pairs,
    vacuum_failure_demo,
)
from fockjoin.nogo import (
    RANK_THRESHOLD,
    adversarial_search,
    end_to_end_projection_check,
    max_abs_core_determinant,
    rank_scan,
    rank_scan_control,
    symbolic_core_determinant,
)
from fockjoin.optics import apply_unitary, haar_random_unitary, random_projector
from fockjoin.permanent import transition_amplitude
from fockjoin.schemes import (
    PHYSICAL_PIPELINE,
    IDEAL_PIPELINE,
    ProbabilityModel,
    compose_success_probability,
    drop_control_photon,
    join_deterministic,
    join_projective,
    joined_ququart,
    split_deterministic,
    split_projective,
    two_qubit_input,
)
from fockjoin.tpes import ALL_BELL_OUTCOMES, build_tpes, expand_five_photon, teleport_join, tpes_via_joining

ROOT_HALF = 1 / math.sqrt(2)


def _report(num: int, detail: str):
    print(f"criterion {num:02d} PASS: {detail}")


def _random_alpha_batch(seed: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    batch = rng.standard_normal((count, 4)) + 1j * rng.standard_normal((count, 4))
    batch /= np.linalg.norm(batch, axis=1, keepdims=True)
    batch[0] = np.array([ROOT_HALF, 0, 0, ROOT_HALF])  # entangled reference input
    return batch


def test_criterion_01_projective_joining():
    start = time.perf_counter()
    for alphas in _random_alpha_batch(1001, 100):
        state = two_qubit_input(alphas)
        plus = join_projective(state, branch="plus")
        assert abs(plus.success_probability - 0.5) <= 1e-12
        assert plus.fidelity_to_expected >= 1 - 1e-10
        minus = join_projective(state, branch="minus", feed_forward=True)
        assert abs(minus.success_probability - 1.0) <= 1e-12
        assert minus.fidelity_to_expected >= 1 - 1e-10
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _report(1, f"100 inputs, branch probability 1/2 exact, feed-forward total 1 ({elapsed:.2f}s)")


def test_criterion_02_deterministic_joining():
    cut = bipartition(6, [4, 5])
    for alphas in _random_alpha_batch(1001, 100):
        report = join_deterministic(two_qubit_input(alphas))
        assert report.success_probability == 1.0
        assert report.fidelity_to_expected >= 1 - 1e-10
        sigmas = schmidt_values(report.output, cut)
        assert len(sigmas) == 1 or sigmas[1] < 1e-10
    _report(2, "100 inputs, control photon factored out, second Schmidt value < 1e-10")


def test_criterion_03_splitting_and_round_trips():
    start = time.perf_counter()
    for alphas in _random_alpha_batch(1003, 100):
        q = joined_ququart(alphas)
        projective = split_projective(q, branch="plus")
        assert abs(projective.success_probability - 0.5) <= 1e-12
        assert projective.fidelity_to_expected >= 1 - 1e-10
        deterministic = split_deterministic(q)
        assert deterministic.success_probability == 1.0
        assert deterministic.fidelity_to_expected >= 1 - 1e-10
    for alphas in _random_alpha_batch(1004, 100):
        s = two_qubit_input(alphas)
        back = split_deterministic(drop_control_photon(join_deterministic(s).output)).output
        assert fidelity(back, s) >= 1 - 1e-10
    for alphas in _random_alpha_batch(1005, 100):
        q = joined_ququart(alphas)
        again = drop_control_photon(join_deterministic(split_deterministic(q).output).output)
        assert fidelity(again, q) >= 1 - 1e-10
    elapsed = time.perf_counter() - start
    assert elapsed < 2.0
    _report(3, f"splitting 1/2 and 1, both round trips identity on 100 inputs each ({elapsed:.2f}s)")


def test_criterion_04_probability_model_constants():
    assert compose_success_probability(IDEAL_PIPELINE) == Fraction(1, 2)
    assert compose_success_probability(PHYSICAL_PIPELINE) == Fraction(1, 32)
    recovered = ProbabilityModel(Fraction(1, 4), 2, Fraction(1, 2), feed_forward=True)
    assert compose_success_probability(recovered) == Fraction(1, 8)
    _report(4, "exact rationals 1/2, 1/32 and 1/8 reproduced")


def test_criterion_05_rank_certificates():
    start = time.perf_counter()
    assert symbolic_core_determinant() == {}
    assert max_abs_core_determinant(100_000, seed=1050) < 1e-12
    for m in (4, 5, 6):
        cert = rank_scan(m, trials=10_000, seed=1051 + m)
        assert cert.verdict == "rank-deficient"
        assert cert.max_sigma_min < RANK_THRESHOLD
    adv = adversarial_search(4, restarts=20, iterations=500, seed=1060)
    assert adv.verdict == "rank-deficient"
    assert adv.max_sigma_min < RANK_THRESHOLD
    control = rank_scan_control(4, trials=200, seed=1070)
    assert control.max_sigma_min > 1e-3
    assert control.verdict == "counterexample-found"
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _report(5, f"zero polynomial, 1e5 determinants, 3x1e4 scans, 20x500 search ({elapsed:.1f}s)")


def test_criterion_06_pipeline_matches_analytic_modes():
    rng = np.random.default_rng(1006)
    worst = 0.0
    for k in range(100):
        m = 4 if k < 70 else 6
        u = haar_random_unitary(m, 20_000 + k)
        phi = random_projector(m, np.random.default_rng(30_000 + k))
        alpha = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        alpha /= np.linalg.norm(alpha)
        worst = max(worst, end_to_end_projection_check(alpha, u, phi))
    assert worst < 1e-10
    _report(6, f"100 random draws, worst simulation/analytic gap {worst:.2e}")


def test_criterion_07_tpes_variants():
    worst = 1.0
    states = []
    for pol, path in ALL_BELL_OUTCOMES:
        direct = build_tpes(pol, path)
        states.append(direct)
        worst = min(worst, fidelity(tpes_via_joining(pol, path), direct))
    assert worst >= 1 - 1e-10
    gram = np.array([[inner_product(a, b) for b in states] for a in states])
    gap = float(np.max(np.abs(gram - np.eye(16))))
    assert gap < 1e-10
    _report(7, f"16 variants built by joining (worst fidelity 1-{1 - worst:.1e}), Gram defect {gap:.1e}")


def test_criterion_08_teleportation_joining():
    start = time.perf_counter()
    rng = np.random.default_rng(1008)
    for _ in range(100):
        raw = rng.standard_normal(8)
        a, b = complex(raw[0], raw[1]), complex(raw[2], raw[3])
        g, d = complex(raw[4], raw[5]), complex(raw[6], raw[7])
        na = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        ng = math.sqrt(abs(g) ** 2 + abs(d) ** 2)
        a, b, g, d = a / na, b / na, g / ng, d / ng
        branches = expand_five_photon(a, b, g, d)
        for outcome, _, weight in branches:
            assert abs(weight - 1 / 16) <= 1e-12
        for outcome in ALL_BELL_OUTCOMES:
            report = teleport_join((a, b), (g, d), outcome=outcome)
            assert report.fidelity_to_expected >= 1 - 1e-10
    # Term-for-term comparison against the transcribed sign table.
    basis = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    for k in range(10):
        raw = np.random.default_rng(4000 + k).standard_normal(8)
        a, b = complex(raw[0], raw[1]), complex(raw[2], raw[3])
        g, d = complex(raw[4], raw[5]), complex(raw[6], raw[7])
        na = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        ng = math.sqrt(abs(g) ** 2 + abs(d) ** 2)
        a, b, g, d = a / na, b / na, g / ng, d / ng
        branches = {outcome: (state, w) for outcome, state, w in expand_five_photon(a, b, g, d)}
        for row in BRANCH_TABLE:
            state, weight = branches[(row[0], row[1])]
            got = [state.amplitude(occ) * math.sqrt(weight) for occ in basis]
            assert np.allclose(got, expected_branch_amplitudes(row, a, b, g, d), atol=1e-10)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report(8, f"16 outcomes x 100 inputs at weight 1/16 and unit fidelity; sign table matches ({elapsed:.2f}s)")


def test_criterion_09_physical_network_fixture():
    network = build_postselected_cnot_network()
    expected_logical = {(0, 0): (0, 0), (0, 1): (0, 1), (1, 0): (1, 1), (1, 1): (1, 0)}
    patterns = {0: (1, 0), 1: (0, 1)}
    for (c_bit, t_bit), (out_c, out_t) in expected_logical.items():
        source = network_input(patterns[c_bit], patterns[t_bit])
        surviving = postselect_rail_pairs(apply_unitary(source, network))
        probability = sum(abs(amp) ** 2 for amp in surviving.terms.values())
        assert abs(probability - 1 / 9) <= 1e-10
        occ = [0] * 6
        occ[1], occ[2] = patterns[out_c]
        occ[3], occ[4] = patterns[out_t]
        assert surviving.terms.keys() == {tuple(occ)}
        # Independent oracle for the surviving amplitude.
        (in_occ,) = source.terms
        oracle_amp = transition_amplitude(network.matrix, in_occ, tuple(occ))
        assert abs(surviving.terms[tuple(occ)] - oracle_amp) <= 1e-12
        assert abs(abs(oracle_amp) ** 2 - 1 / 9) <= 1e-10
    demo = vacuum_failure_demo(network)
    assert demo.demonstrates_failure
    for case in demo.cases:
        if case.target_pattern == (0, 0):
            assert not case.consistent_with_scaled_identity
            assert abs(case.intact_amplitude - NETWORK_SUCCESS_AMPLITUDE) > 1e-3 or case.target_leak_probability > 1e-3
    _report(9, "truth table at 1/9 on all four inputs; vacuum target breaks scaled identity")


def test_criterion_10_permanent_oracle_equivalence():
    worst = 0.0
    for m in range(2, 7):
        u = haar_random_unitary(m, 5000 + m)
        occupations = enumerate_occupations(m, 3)
        by_total = {}
        for occ in occupations:
            by_total.setdefault(sum(occ), []).append(occ)
        for occ_in in occupations:
            evolved = apply_unitary(basis_state(m, occ_in), u)
            for occ_out in by_total[sum(occ_in)]:
                expected = transition_amplitude(u.matrix, occ_in, occ_out)
                worst = max(worst, abs(evolved.amplitude(occ_out) - expected))
    assert worst < 1e-10
    _report(10, f"exhaustive <=3 photons on 2..6 modes, worst amplitude gap {worst:.2e}")
