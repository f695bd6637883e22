from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from structqap import fixtures, lp
from structqap.decomposition import (
    CutWeightMatrix,
    CutWeightMultigraph,
    NegativeCutWeightError,
    PreconditionError,
    benevolent_split,
    cdw_decomposition,
    cdw_feasibility,
    cut_weight_matrix,
    kalmanson_decomposition,
    path_partition,
    robinson_kalmanson_decomposition,
    weak_sum_parameters,
)
from structqap.generators import (
    cut_matrix,
    cut_matrix_from_blocks,
    random_cdw_partition,
    random_instance,
    stripe_matrix,
    sum_matrix,
    toeplitz_from_profile,
)
from structqap.matrix import ExactMatrix
from structqap.recognizers import (
    BlockPartition,
    NotSymmetricError,
    ToeplitzProfile,
    check_cut_matrix,
    check_kalmanson,
    check_robinson,
    check_sum_family,
)

from .strategies import seeds
from .test_recognizers import SEC42

SEC42_D = {(1, 2): 1, (1, 3): 1, (3, 4): 1, (4, 6): 1, (5, 6): 1}


def single_cut_a12():
    return cut_matrix_from_blocks(BlockPartition(6, ((1, 2), (3, 3), (4, 4), (5, 5), (6, 6))))


# -- cut-weight matrix --------------------------------------------------------


def test_cut_weights_worked_example():
    D = cut_weight_matrix(SEC42)
    assert D.positive() == SEC42_D
    assert D.negative_cell() is None
    expect = ExactMatrix.from_function(6, lambda i, j: SEC42_D.get((i, j), 0))
    assert D.as_matrix() == expect


def test_cut_weights_weak_constant_is_zero():
    assert cut_weight_matrix(ExactMatrix.constant(6, 5, diagonal=0)).positive() == {}


@given(st.integers(4, 9).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n - 1)))))
def test_cut_weights_of_single_cut(args):
    n, cuts = args
    bounds = [0, *sorted(cuts), n]
    part = BlockPartition(n, tuple((a + 1, b) for a, b in zip(bounds, bounds[1:])))
    if part.blocks == ((1, n),):
        return
    D = cut_weight_matrix(cut_matrix_from_blocks(part))
    assert D.positive() == {b: 1 for b in part.multi_blocks()}
    assert D.negative_cell() is None


def test_cut_weights_errors():
    with pytest.raises(ValueError):
        cut_weight_matrix(ExactMatrix.zeros(3))
    with pytest.raises(NotSymmetricError):
        cut_weight_matrix(ExactMatrix.from_function(4, lambda i, j: i))


# -- Kalmanson decomposition --------------------------------------------------


def test_kalmanson_decomposition_worked_example():
    kd = kalmanson_decomposition(SEC42)
    assert {k: w for k, w in kd.delta.items() if w} == {(3, 4): 1}
    assert {i: w for i, w in kd.alpha.items() if w} == {2: 1, 3: 1}
    assert {i: w for i, w in kd.beta.items() if w} == {3: 1, 4: 1}
    assert kd.reconstruct().off_diagonal_equal(SEC42)
    assert check_sum_family(kd.residual(), "weak_sum")


def test_kalmanson_decomposition_weak_sum_input():
    g = [Fraction(v) for v in (3, -1, 4, 1, 5)]
    W = ExactMatrix.from_function(5, lambda i, j: 0 if i == j else g[i - 1] + g[j - 1])
    kd = kalmanson_decomposition(W)
    assert not any(kd.delta.values()) and not any(kd.alpha.values()) and not any(kd.beta.values())
    assert list(kd.gamma) == g


def test_kalmanson_decomposition_rejects():
    A = ExactMatrix([[0, 5, 1, 5], [5, 0, 5, 1], [1, 5, 0, 5], [5, 1, 5, 0]])
    with pytest.raises(PreconditionError) as exc:
        kalmanson_decomposition(A)
    assert exc.value.verdict.witness.evaluate(A) is False


@given(st.integers(4, 8), seeds())
def test_kalmanson_decomposition_round_trip(n, seed):
    C = random_instance("kalmanson", n, seed)
    kd = kalmanson_decomposition(C)
    assert all(w >= 0 for w in kd.delta.values())
    assert all(kd.alpha[i] + kd.beta[i] >= 0 for i in kd.alpha)
    assert kd.reconstruct().off_diagonal_equal(C)


# -- Robinson and Kalmanson decomposition ------------------------------------


def test_robinson_kalmanson_worked_example():
    cd = robinson_kalmanson_decomposition(SEC42)
    assert cd.offset == -2
    assert {t.label: t.weight for t in cd.terms} == {
        "delta_3_4": 1, "alpha_2": 1, "alpha_3": 1, "beta_3": 1, "beta_4": 1,
    }
    assert cd.reconstructs(SEC42)


def test_robinson_kalmanson_weak_constant():
    cd = robinson_kalmanson_decomposition(ExactMatrix.constant(5, 7, diagonal=0))
    assert cd.offset == 7 and cd.terms == ()


@given(st.integers(2, 9).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n - 1)))))
def test_cut_matrix_decomposes_into_its_blocks(args):
    n, cuts = args
    bounds = [0, *sorted(cuts), n]
    part = BlockPartition(n, tuple((a + 1, b) for a, b in zip(bounds, bounds[1:])))
    cd = robinson_kalmanson_decomposition(cut_matrix_from_blocks(part))
    multi = part.multi_blocks()
    if len(part.blocks) == 1:
        # the zero matrix is already weak constant
        assert cd.offset == 0 and cd.terms == ()
    elif n >= 3:
        assert cd.offset == -(len(multi) - 1) if multi else cd.offset == 1
        assert sorted(t.blocks.multi_blocks()[0] for t in cd.terms) == sorted(multi)
        assert all(t.weight == 1 for t in cd.terms)
    assert cd.reconstructs(cut_matrix_from_blocks(part))


def test_robinson_kalmanson_requires_both():
    with pytest.raises(PreconditionError):
        robinson_kalmanson_decomposition(fixtures.load("kalmanson"))


@given(st.integers(3, 9), seeds())
def test_cut_weights_nonnegative_for_robinson_kalmanson(n, seed):
    C = random_instance("robinson_kalmanson", n, seed)
    assert check_robinson(C) and check_kalmanson(C)
    if n >= 4:
        assert cut_weight_matrix(C).negative_cell() is None
    assert robinson_kalmanson_decomposition(C).reconstructs(C)


# -- weak sum parameters ------------------------------------------------------


def test_weak_sum_examples():
    W = ExactMatrix.from_function(3, lambda i, j: 0 if i == j else i + j)
    assert weak_sum_parameters(W) == [1, 2, 3]
    assert weak_sum_parameters(ExactMatrix.constant(4, 6, diagonal=0)) == [3, 3, 3, 3]
    with pytest.raises(PreconditionError) as exc:
        weak_sum_parameters(SEC42)
    assert exc.value.verdict.witness is not None


@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=6), min_size=1, max_size=8))
def test_weak_sum_round_trip(g):
    n = len(g)
    W = ExactMatrix.from_function(n, lambda i, j: 11 if i == j else g[i - 1] + g[j - 1])
    got = weak_sum_parameters(W)
    if n >= 3:
        assert got == g
    rebuilt = ExactMatrix.from_function(n, lambda i, j: 0 if i == j else got[i - 1] + got[j - 1])
    assert rebuilt.off_diagonal_equal(W)


# -- CDW feasibility and peeling ---------------------------------------------


def test_feasibility_examples():
    assert cdw_feasibility(cut_weight_matrix(SEC42))
    v = cdw_feasibility(cut_weight_matrix(single_cut_a12()))
    assert not v and v.certificate == (2, 1)
    assert cdw_feasibility(CutWeightMatrix(6, {}))
    with pytest.raises(NegativeCutWeightError):
        cdw_feasibility(CutWeightMatrix(5, {(2, 3): Fraction(-1)}))


def test_peeling_worked_example():
    v = cdw_decomposition(SEC42)
    dec = v.certificate
    assert dec.paths == ((1, 4, 7), (1, 3, 5, 7))
    assert [t.blocks.blocks for t in dec.terms] == [((1, 3), (4, 6)), ((1, 2), (3, 4), (5, 6))]
    assert all(t.weight == 1 and t.blocks.cdw for t in dec.terms)
    # the two sorted-block cuts leave a residual of +1 off the diagonal
    assert dec.offset == 1
    assert dec.reconstructs(SEC42)


def test_peeling_bundled_fixture():
    C = fixtures.load("cdw_conic")
    v = cdw_decomposition(C)
    assert v and v.certificate.reconstructs(C)
    assert all(t.blocks.cdw for t in v.certificate.terms)


def test_peeling_rejects_single_unsorted_cut():
    v = cdw_decomposition(single_cut_a12())
    assert not v and v.certificate == (2, 1)


def test_peeling_does_not_accept_the_unsorted_summands():
    for blocks in (((1, 3), (4, 4), (5, 6)), ((1, 2), (3, 3), (4, 6)), ((1, 1), (2, 2), (3, 4), (5, 5), (6, 6))):
        M = cut_matrix_from_blocks(BlockPartition(6, blocks))
        assert not check_cut_matrix(M).certificate.cdw
        assert not cdw_decomposition(M)


@st.composite
def cdw_combinations(draw, max_n=10):
    import random

    n = draw(st.integers(2, max_n))
    rng = random.Random(draw(seeds()))
    k = draw(st.integers(0, 5))
    total = ExactMatrix.constant(n, draw(st.fractions(-5, 5, max_denominator=3)), diagonal=0)
    for _ in range(k):
        w = draw(st.fractions(min_value=Fraction(1, 7), max_value=9, max_denominator=7))
        total = total + w * cut_matrix_from_blocks(random_cdw_partition(rng, n))
    return total


@given(cdw_combinations())
def test_feasibility_sound_on_sorted_block_combinations(C):
    v = cdw_decomposition(C)
    assert v
    dec = v.certificate
    assert dec.reconstructs(C)
    assert all(t.blocks.cdw and t.weight > 0 for t in dec.terms)
    if C.n >= 4:
        D = cut_weight_matrix(C)
        assert len(dec.terms) <= len(D.positive())


@given(cdw_combinations())
def test_peeling_keeps_graph_balanced(C):
    if C.n < 4:
        return
    g = CutWeightMultigraph.from_cut_weights(cut_weight_matrix(C))
    assert all(h - t >= 2 for t, h in g.edges)
    while True:
        assert g.balanced()
        path = g.longest_path()
        if path is None:
            break
        before = len(g.edges)
        g.remove_path(path, g.path_weight(path))
        assert len(g.edges) < before
    assert not g.edges


def test_path_partition():
    assert path_partition(6, (1, 4, 7)).blocks == ((1, 3), (4, 6))
    assert path_partition(6, (3, 5, 7)).blocks == ((1, 1), (2, 2), (3, 4), (5, 6))


# -- exact LP oracle for the sorted-block cone --------------------------------


def _sorted_compositions(n, lo=1):
    if n == 0:
        yield ()
        return
    for s in range(lo, n + 1):
        for rest in _sorted_compositions(n - s, s):
            yield (s,) + rest


def cone_member(C: ExactMatrix) -> bool:
    """Is C (off the diagonal) a constant plus a conic combination of sorted-block cuts?"""
    n = C.n
    mats = [cut_matrix_from_blocks(BlockPartition.from_sizes(s)) for s in _sorted_compositions(n) if len(s) > 1]
    eq = [([M[i, j] for M in mats] + [1], C[i, j]) for i in range(n) for j in range(i + 1, n)]
    return lp.find_feasible(len(mats) + 1, eq=eq, free=[len(mats)]) is not None


@pytest.mark.parametrize("n", [4, 5, 6])
def test_feasibility_matches_cone_oracle(n):
    agree = 0
    for seed in range(60):
        C = random_instance("robinson_kalmanson", n, seed)
        assert bool(cdw_decomposition(C)) == cone_member(C), seed
        agree += 1
    assert agree == 60


def test_last_feasibility_row_is_needed():
    # block {2,3} ending at n-1 followed by {4}: not sorted, and only the k = n-1 row sees it
    M = cut_matrix_from_blocks(BlockPartition(4, ((1, 1), (2, 3), (4, 4))))
    assert not cone_member(M)
    v = cdw_feasibility(cut_weight_matrix(M))
    assert not v and v.certificate[0] == 3


# -- benevolent split ---------------------------------------------------------


def test_benevolent_split_fixture():
    B = fixtures.load("down_benevolent")
    bs = benevolent_split(B)
    assert bs.betas == {6: 2, 7: 10, 8: 5, 9: 18}
    assert bs.dw_profile.is_dw
    assert bs.reconstruct() == B


def test_benevolent_split_of_dw_is_trivial():
    B = fixtures.load("dw_toeplitz")
    bs = benevolent_split(B)
    assert not any(bs.betas.values()) and bs.dw == B


def test_benevolent_split_rejects():
    with pytest.raises(PreconditionError):
        benevolent_split(fixtures.load("up_benevolent"))
    with pytest.raises(PreconditionError):
        benevolent_split(SEC42)


@given(st.integers(1, 11), seeds())
def test_benevolent_split_round_trip(n, seed):
    B = random_instance("down_benevolent", n, seed)
    bs = benevolent_split(B)
    assert all(b >= 0 for b in bs.betas.values())
    assert bs.reconstruct() == B
    total = bs.dw
    for i, b in bs.betas.items():
        total = total - b * stripe_matrix(n, i)
    assert total == B
