"""Acceptance checks, one group per criterion.

Run ``pytest tests/test_acceptance.py`` and read the "acceptance criteria"
section of the summary: one PASS/FAIL line per criterion.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from structqap import fixtures
from structqap.decomposition import (
    cdw_decomposition,
    cdw_feasibility,
    cut_weight_matrix,
    kalmanson_decomposition,
    benevolent_split,
    robinson_kalmanson_decomposition,
)
from structqap.generators import (
    RaySpec,
    admissible_shifts,
    cut_matrix_from_blocks,
    extremal_anti_monge,
    permuted_ray_formula,
    ps_ray,
    random_instance,
    stripe_matrix,
    supnick_permutation,
)
from structqap.matrix import ExactMatrix, Permutation, apply_permutation, compose, identity, invert, qap_objective
from structqap.recognizers import (
    BlockPartition,
    check_cut_matrix,
    check_kalmanson,
    check_monge_family,
    check_robinson,
    extract_toeplitz_profile,
    kalmanson_quadruple_witness,
    monge_quadruple_witness,
)
from structqap.solver import brute_force, case_permutation, detect_case, selection_optimum

from .strategies import CASE_CLASSES, case_instance
from .test_recognizers import SEC42

TRIALS = 1000


def crit(number, title):
    return pytest.mark.criterion(number, title)


# -- 1: the 6x6 worked example ------------------------------------------------------------


@crit(1, "6x6 worked example: cut weights, five-cut decomposition, two sorted-block cuts")
def test_worked_example_exact():
    start = time.perf_counter()
    D = cut_weight_matrix(SEC42)
    assert D.positive() == {(1, 2): 1, (1, 3): 1, (3, 4): 1, (4, 6): 1, (5, 6): 1}
    rk = robinson_kalmanson_decomposition(SEC42)
    assert {t.label: t.weight for t in rk.terms} == {
        "delta_3_4": 1, "alpha_2": 1, "alpha_3": 1, "beta_3": 1, "beta_4": 1}
    assert rk.offset == -2
    assert rk.reconstructs(SEC42)
    v = cdw_decomposition(SEC42)
    assert v
    terms = v.certificate.terms
    assert len(terms) == 2 and all(t.weight == 1 for t in terms)
    assert {t.blocks.blocks for t in terms} == {((1, 3), (4, 6)), ((1, 2), (3, 4), (5, 6))}
    assert v.certificate.reconstructs(SEC42)
    assert time.perf_counter() - start < 1


# -- 2: natural summands are not sorted, the sum is -----------------------------------------


@crit(2, "6x6 example: its three natural cuts are unsorted, yet it is a sorted-block combination")
def test_unsorted_summands_sorted_sum():
    start = time.perf_counter()
    parts = [
        BlockPartition(6, ((1, 3), (4, 4), (5, 6))),
        BlockPartition(6, ((1, 2), (3, 3), (4, 6))),
        BlockPartition(6, ((1, 1), (2, 2), (3, 4), (5, 5), (6, 6))),
    ]
    mats = [cut_matrix_from_blocks(p) for p in parts]
    assert mats[0] + mats[1] + mats[2] == SEC42
    for M, part in zip(mats, parts):
        v = check_cut_matrix(M)
        assert v and v.certificate == part and not v.certificate.cdw
    assert cdw_feasibility(cut_weight_matrix(SEC42))
    assert cdw_decomposition(SEC42)
    assert time.perf_counter() - start < 1


# -- 3: bundled matrices -------------------------------------------------------------


def _profile(name):
    return extract_toeplitz_profile(fixtures.load(name)).certificate


@crit(3, "bundled matrices pass their recognizers; the misprinted one fails at its cell")
def test_fixture_recognizers():
    start = time.perf_counter()
    assert check_robinson(fixtures.load("robinson"))
    assert cdw_decomposition(fixtures.load("cdw_conic"))
    assert check_monge_family(fixtures.load("monotone_anti_monge"), "monotone_anti_monge")
    assert check_kalmanson(fixtures.load("kalmanson"))
    assert _profile("dw_toeplitz").is_dw
    kr = fixtures.load("kalmanson_robinson")
    assert check_kalmanson(kr) and check_robinson(kr)
    assert _profile("down_benevolent").is_down_benevolent
    assert check_monge_family(fixtures.load("anti_monge"), "anti_monge")
    assert _profile("up_benevolent").is_up_benevolent
    misprinted = fixtures.load("simple_toeplitz_misprinted")
    v = extract_toeplitz_profile(misprinted)
    assert not v
    assert v.witness.indices == (2, 5) and v.witness.rhs == ((1, 4),)
    assert v.witness.evaluate(misprinted) is False
    assert time.perf_counter() - start < 1


# -- 4: theorem suite ---------------------------------------------------------------------------


@crit(4, "every solvable case: the named permutation attains the exhaustive minimum, 200 instances each")
@pytest.mark.slow
@pytest.mark.parametrize("case", list(CASE_CLASSES))
def test_theorem_suite(case):
    failures = []
    for seed in range(200):
        n = 5 + seed % 4
        A, B, split = case_instance(case, n, seed)
        cert = detect_case(A, B, split, cases=(case,))
        assert cert is not None, (case, seed)
        p = case_permutation(case, n)
        if qap_objective(A, B, p) != brute_force(A, B).value:
            failures.append(seed)
    assert failures == []


# -- 5: n = 10 brute force ----------------------------------------------------------------


@crit(5, "n = 10 brute force confirms the identity on the two bundled instance pairs")
@pytest.mark.slow
@pytest.mark.parametrize("pair, case", [("down_benevolent", "down_benevolent"), ("kalmanson_dw", "DW_kalmanson_dw")])
def test_bundled_pairs_brute_force(pair, case):
    A, B = fixtures.load_pair(pair)
    assert A.n == 10
    assert detect_case(A, B).case == case
    sol = brute_force(A, B, threads=4)
    assert sol.value == qap_objective(A, B, identity(10))
    assert sol.certificate.permutations_checked == 3628800


@pytest.mark.slow
def test_anti_monge_up_benevolent_pair_record():
    # the printed anti-Monge matrix is not monotone, so no case claims it; record the optimum
    A, B = fixtures.load_pair("antimonge_up_benevolent")
    assert check_monge_family(A, "anti_monge") and not check_monge_family(A, "monotone")
    assert detect_case(A, B) is None
    sol = brute_force(A, B, threads=4)
    assert sol.value == 92050
    assert sol.permutation.images == (1, 2, 3, 4, 6, 8, 10, 9, 7, 5)
    pi = supnick_permutation(10)
    values = {qap_objective(A, B, p) for p in (identity(10), pi, invert(pi))}
    assert values == {96362, 94120, 103684}


# -- 6: structural properties -----------------------------------------------------------------------


def _rand_matrix(rng, n, lo=-9, hi=9, den=(1, 2, 3)):
    return ExactMatrix([[Fraction(rng.randint(lo, hi), rng.choice(den)) for _ in range(n)] for _ in range(n)])


def _rand_perm(rng, n):
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(images)


@crit(6, "structural properties, 1000 trials each")
def test_permuted_instance_identity_trials():
    rng = random.Random(6001)
    for _ in range(TRIALS):
        n = rng.randint(1, 7)
        A, B = _rand_matrix(rng, n), _rand_matrix(rng, n)
        pi, psi, phi = (_rand_perm(rng, n) for _ in range(3))
        lhs = qap_objective(apply_permutation(A, pi), apply_permutation(B, psi), phi)
        assert lhs == qap_objective(A, B, compose(compose(pi, phi), invert(psi)))


@crit(6, "structural properties, 1000 trials each")
def test_adjacent_conditions_trials():
    rng = random.Random(6002)
    seen = {True: 0, False: 0}
    for _ in range(TRIALS):
        n = rng.randint(2, 7)
        vals = {(i, j): rng.randint(0, 3) for i in range(1, n + 1) for j in range(i, n + 1)}
        S = ExactMatrix.from_function(n, lambda i, j: vals[min(i, j), max(i, j)])
        ok = bool(check_kalmanson(S))
        assert ok == (kalmanson_quadruple_witness(S) is None)
        seen[ok] += 1
        # structured inputs hit the "yes" side as often as the random ones hit "no"
        K = random_instance("kalmanson", n, rng.randint(0, 10**6))
        assert check_kalmanson(K) and kalmanson_quadruple_witness(K) is None
        M = _rand_matrix(rng, n, 0, 4, (1,))
        assert bool(check_monge_family(M, "anti_monge")) == (monge_quadruple_witness(M, anti=True) is None)
        AM = random_instance("monotone_anti_monge_asym", n, rng.randint(0, 10**6))
        assert check_monge_family(AM, "anti_monge") and monge_quadruple_witness(AM, anti=True) is None
    assert seen[False] > 0


@crit(6, "structural properties, 1000 trials each")
def test_robinson_kalmanson_weights_nonnegative_trials():
    rng = random.Random(6003)
    for _ in range(TRIALS):
        n = rng.randint(4, 9)
        C = random_instance("robinson_kalmanson", n, rng.randint(0, 10**6))
        D = cut_weight_matrix(C)
        assert D.negative_cell() is None
        rk = robinson_kalmanson_decomposition(C)
        assert all(t.weight >= 0 for t in rk.terms)
        assert rk.reconstructs(C)


@crit(6, "structural properties, 1000 trials each")
def test_decomposition_reconstructions_trials():
    rng = random.Random(6004)
    for _ in range(TRIALS):
        n = rng.randint(4, 9)
        seed = rng.randint(0, 10**6)
        K = random_instance("kalmanson", n, seed)
        assert kalmanson_decomposition(K).reconstruct().off_diagonal_equal(K)
        C = random_instance("cdw_conic", n, seed)
        v = cdw_decomposition(C)
        assert v and v.certificate.reconstructs(C)
        B = random_instance("down_benevolent", n, seed)
        assert benevolent_split(B).reconstruct() == B


@crit(6, "structural properties, 1000 trials each")
@pytest.mark.slow
def test_selection_against_maximize_trials():
    rng = random.Random(6005)
    for _ in range(TRIALS):
        n = rng.randint(3, 7)
        i = rng.randint(-(-(n - 1) // 2) + 1, n - 1)
        vals = {(r, c): rng.randint(-5, 9) for r in range(1, n + 1) for c in range(r, n + 1)}
        A = ExactMatrix.from_function(n, lambda r, c: vals[min(r, c), max(r, c)])
        best = brute_force(A, stripe_matrix(n, i), maximize=True).value
        assert 2 * selection_optimum(A, i) == best


@crit(6, "structural properties, 1000 trials each")
def test_cdw_feasibility_trials():
    rng = random.Random(6006)
    for _ in range(TRIALS):
        n = rng.randint(4, 10)
        C = random_instance("cdw_conic", n, rng.randint(0, 10**6))
        assert cdw_feasibility(cut_weight_matrix(C))
    single = cut_matrix_from_blocks(BlockPartition(6, ((1, 2), (3, 3), (4, 4), (5, 5), (6, 6))))
    v = cdw_feasibility(cut_weight_matrix(single))
    assert not v and v.certificate == (2, 1)


# -- 7: permuted-shifted rays -------------------------------------------------------------------------


@crit(7, "Supnick-permuted rays match the displayed cross formula; objective is shift-invariant")
@pytest.mark.xfail(strict=True, reason="the displayed formula differs from the construction for odd n-p "
                                       "with odd q-p, and for p = q; see the decisions ledger")
def test_closed_form_literal():
    bad = []
    for n in range(1, 13):
        for p in range(1, n + 1):
            for q in range(p, n + 1):
                built = ps_ray(RaySpec(n, p, q, 1))
                if built != permuted_ray_formula(n, p, q, parity_corrected=False):
                    bad.append((n, p, q))
    assert bad == []


@crit(7, "Supnick-permuted rays match the displayed cross formula; objective is shift-invariant")
def test_shift_invariance_trials():
    rng = random.Random(7001)
    for _ in range(500):
        n = rng.randint(1, 12)
        p = rng.randint(1, n)
        q = rng.randint(p, n)
        u = rng.choice(admissible_shifts(n, p, q))
        vals = [Fraction(rng.randint(-9, 9), rng.choice((1, 2))) for _ in range(2 * n - 1)]
        B = ExactMatrix.from_function(n, lambda i, j: vals[i - j + n - 1])
        ref = qap_objective(apply_permutation(extremal_anti_monge(n, p, q), supnick_permutation(n)), B, identity(n))
        assert qap_objective(ps_ray(RaySpec(n, p, q, u)), B, identity(n)) == ref


def test_closed_form_corrected_all_triples():
    # not an acceptance line: the parity-corrected reading agrees everywhere
    for n, p in itertools.product(range(1, 13), range(1, 13)):
        for q in range(p, n + 1):
            assert ps_ray(RaySpec(n, p, q, 1)) == permuted_ray_formula(n, p, q)
