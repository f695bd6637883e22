"""Cut-weight decompositions of Kalmanson and Robinson matrices.

A Kalmanson matrix is a weak sum matrix plus a linear combination of the cut
matrices ``A^(k,l)`` (one multi-element block ``{k..l}``); when it is also
Robinson every weight is nonnegative and the residual is weak constant.  The
weights are read off the matrix by closed formulas and collected in the
cut-weight matrix ``D``, where ``d[k, l]`` is the weight of ``A^(k,l)``.
Whether the same matrix is a conic combination of cut matrices with sorted
block sizes is decided by linear inequalities on ``D`` and, if so, a
decomposition is built by peeling paths off a multigraph on nodes ``1..n+1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .generators import cut_matrix, cut_matrix_from_blocks, stripe_matrix, toeplitz_from_profile
from .matrix import ExactMatrix, format_rational
from .recognizers import (
    BlockPartition,
    NotSymmetricError,
    ToeplitzProfile,
    Verdict,
    Witness,
    _ceil_half,
    _require_symmetric,
    check_kalmanson,
    check_robinson,
    extract_toeplitz_profile,
)


class PreconditionError(ValueError):
    """Input is outside the class an operation requires; ``verdict`` explains why."""

    def __init__(self, message: str, verdict: Verdict | None = None):
        super().__init__(message)
        self.verdict = verdict


class NegativeCutWeightError(ValueError):
    def __init__(self, cell: tuple[int, int], value: Fraction):
        super().__init__(f"cut weight d{cell} = {format_rational(value)} is negative")
        self.cell = cell
        self.value = value


def _require_kalmanson(C: ExactMatrix, robinson: bool = False) -> None:
    v = check_kalmanson(C)
    if not v:
        raise PreconditionError("matrix is not Kalmanson", v)
    if robinson:
        v = check_robinson(C)
        if not v:
            raise PreconditionError("matrix is not Robinson", v)


# -- cut-weight matrix ----------------------------------------------------


def cut_weight_cells(n: int) -> list[tuple[int, int]]:
    """The cells ``(k, l)`` of ``D`` that carry a weight, i.e. all ``k < l`` except ``(1, n)``."""
    return [(k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1) if (k, l) != (1, n)]


def cut_label(n: int, k: int, l: int) -> str:
    if k == 1:
        return f"alpha_{l}"
    if l == n:
        return f"beta_{k - 1}"
    return f"delta_{k}_{l}"


@dataclass(frozen=True)
class CutWeightMatrix:
    """``d[k, l]`` = weight of the cut ``A^(k,l)``; cells outside :func:`cut_weight_cells` are 0."""

    n: int
    weights: dict[tuple[int, int], Fraction]

    def get(self, k: int, l: int) -> Fraction:
        return self.weights.get((k, l), Fraction(0))

    def as_matrix(self) -> ExactMatrix:
        return ExactMatrix.from_function(self.n, self.get)

    def negative_cell(self) -> tuple[int, int] | None:
        for cell in cut_weight_cells(self.n):
            if self.get(*cell) < 0:
                return cell
        return None

    def positive(self) -> dict[tuple[int, int], Fraction]:
        return {c: w for c, w in sorted(self.weights.items()) if w > 0}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "weights": [
                {"k": k, "l": l, "label": cut_label(self.n, k, l), "weight": format_rational(w)}
                for (k, l), w in sorted(self.weights.items()) if w != 0
            ],
        }


def _cut_weights(C: ExactMatrix) -> CutWeightMatrix:
    n, c = C.n, C.entry
    w: dict[tuple[int, int], Fraction] = {}
    for k, l in cut_weight_cells(n):
        if k == 1:
            w[(k, l)] = c(l + 1, 1) - c(l, 1)
        elif l == n:
            w[(k, l)] = c(k - 1, n) - c(k, n)
        else:
            w[(k, l)] = c(k - 1, l) + c(k, l + 1) - c(k, l) - c(k - 1, l + 1)
    return CutWeightMatrix(n, w)


def cut_weight_matrix(C: ExactMatrix) -> CutWeightMatrix:
    """Closed-form cut weights of a symmetric matrix (signs are not checked)."""
    _require_symmetric(C)
    if C.n < 4:
        raise ValueError(f"cut-weight matrix needs n >= 4, got {C.n}")
    return _cut_weights(C)


# -- conic decompositions -------------------------------------------------


@dataclass(frozen=True)
class CutTerm:
    weight: Fraction
    blocks: BlockPartition
    label: str = ""

    def to_json(self) -> dict:
        out = {"weight": format_rational(self.weight), "blocks": self.blocks.to_json(), "cdw": self.blocks.cdw}
        if self.label:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class ConicDecomposition:
    """``offset`` off the diagonal plus ``sum(weight * cut matrix)``.

    ``residual_gammas`` is set instead of a meaningful ``offset`` when the
    residual is a weak sum matrix ``gamma_i + gamma_j``.
    """

    n: int
    offset: Fraction
    terms: tuple[CutTerm, ...]
    residual_gammas: tuple[Fraction, ...] | None = None
    paths: tuple[tuple[int, ...], ...] | None = None

    def residual(self) -> ExactMatrix:
        if self.residual_gammas is not None:
            g = self.residual_gammas
            return ExactMatrix.from_function(self.n, lambda i, j: 0 if i == j else g[i - 1] + g[j - 1])
        return ExactMatrix.constant(self.n, self.offset, diagonal=0)

    def reconstruct(self) -> ExactMatrix:
        """The represented matrix with a zero diagonal."""
        total = self.residual()
        for t in self.terms:
            total = total + t.weight * cut_matrix_from_blocks(t.blocks)
        return total

    def reconstructs(self, C: ExactMatrix) -> bool:
        return self.reconstruct().off_diagonal_equal(C)

    def to_json(self) -> dict:
        out = {"n": self.n, "terms": [t.to_json() for t in self.terms]}
        if self.residual_gammas is None:
            out["offset"] = format_rational(self.offset)
        else:
            out["residual_gammas"] = [format_rational(g) for g in self.residual_gammas]
        if self.paths is not None:
            out["paths"] = [list(p) for p in self.paths]
        return out


@dataclass(frozen=True)
class KalmansonDecomposition:
    """Interior weights ``delta[(k, l)]`` for ``A^(k,l)``, boundary pairs
    ``alpha[i]`` (for ``A^(1,i)``) and ``beta[i]`` (for ``A^(i+1,n)``), and
    the weak sum residual given by ``gamma``."""

    n: int
    delta: dict[tuple[int, int], Fraction]
    alpha: dict[int, Fraction]
    beta: dict[int, Fraction]
    gamma: tuple[Fraction, ...]

    def residual(self) -> ExactMatrix:
        g = self.gamma
        return ExactMatrix.from_function(self.n, lambda i, j: 0 if i == j else g[i - 1] + g[j - 1])

    def as_conic(self) -> ConicDecomposition:
        n = self.n
        terms = [CutTerm(w, BlockPartition.single_block(n, k, l), cut_label(n, k, l))
                 for (k, l), w in sorted(self.delta.items()) if w]
        for i in sorted(self.alpha):
            if self.alpha[i]:
                terms.append(CutTerm(self.alpha[i], BlockPartition.single_block(n, 1, i), f"alpha_{i}"))
            if self.beta[i]:
                terms.append(CutTerm(self.beta[i], BlockPartition.single_block(n, i + 1, n), f"beta_{i}"))
        return ConicDecomposition(n, Fraction(0), tuple(terms), residual_gammas=self.gamma)

    def reconstruct(self) -> ExactMatrix:
        return self.as_conic().reconstruct()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "delta": [{"k": k, "l": l, "weight": format_rational(w)} for (k, l), w in sorted(self.delta.items())],
            "boundary": [
                {"i": i, "alpha": format_rational(self.alpha[i]), "beta": format_rational(self.beta[i])}
                for i in sorted(self.alpha)
            ],
            "gamma": [format_rational(g) for g in self.gamma],
        }


def kalmanson_decomposition(C: ExactMatrix) -> KalmansonDecomposition:
    """Weak sum matrix plus cut matrices, with ``delta >= 0`` and ``alpha_i + beta_i >= 0``."""
    _require_symmetric(C)
    _require_kalmanson(C)
    n = C.n
    D = _cut_weights(C)
    delta = {(k, l): D.get(k, l) for k in range(2, n) for l in range(k + 1, n)}
    alpha, beta = {}, {}
    for i in range(2, n - 1):
        # the pair is only split off where its inequality is strict
        a, b = D.get(1, i), D.get(i + 1, n)
        alpha[i], beta[i] = (a, b) if a + b > 0 else (Fraction(0), Fraction(0))
    rest = C.with_zero_diagonal()
    for (k, l), w in delta.items():
        if w:
            rest = rest - w * cut_matrix(n, k, l)
    for i in alpha:
        rest = rest - alpha[i] * cut_matrix(n, 1, i) - beta[i] * cut_matrix(n, i + 1, n)
    gamma = weak_sum_parameters(rest)
    return KalmansonDecomposition(n, delta, alpha, beta, tuple(gamma))


def robinson_kalmanson_decomposition(C: ExactMatrix) -> ConicDecomposition:
    """Weak constant offset plus a conic combination of the cuts ``A^(k,l)``."""
    _require_symmetric(C)
    _require_kalmanson(C, robinson=True)
    n = C.n
    if n <= 2:
        return ConicDecomposition(n, C.entry(1, 2) if n == 2 else Fraction(0), ())
    D = _cut_weights(C)
    bad = D.negative_cell()
    if bad is not None:
        raise AssertionError(f"negative weight {D.get(*bad)} at {bad} for a Robinson and Kalmanson matrix")
    terms = []
    rest = C.with_zero_diagonal()
    for (k, l), w in sorted(D.weights.items(), key=lambda kv: _term_order(n, *kv[0])):
        if w:
            terms.append(CutTerm(w, BlockPartition.single_block(n, k, l), cut_label(n, k, l)))
            rest = rest - w * cut_matrix(n, k, l)
    offset = rest.entry(1, 2)
    if not rest.off_diagonal_equal(ExactMatrix.constant(n, offset, diagonal=0)):
        raise AssertionError("residual after removing the cut weights is not weak constant")
    return ConicDecomposition(n, offset, tuple(terms))


def _term_order(n, k, l):
    # interior cuts first, then the alpha family, then the beta family
    if k == 1:
        return (1, l, 0)
    if l == n:
        return (2, k, 0)
    return (0, k, l)


def weak_sum_parameters(C: ExactMatrix) -> list[Fraction]:
    """``gamma`` with ``c[i, j] = gamma_i + gamma_j`` for all ``i != j``.

    Requires a symmetric matrix whose adjacent Kalmanson inequalities all hold
    with equality; otherwise raises :class:`PreconditionError` with a witness.
    """
    _require_symmetric(C)
    n, c = C.n, C.entry
    if n == 1:
        return [Fraction(0)]
    if n == 2:
        return [c(1, 2) / 2, c(1, 2) / 2]
    for i in range(1, n - 2):
        for j in range(i + 2, n):
            if c(i, j + 1) + c(i + 1, j) != c(i, j) + c(i + 1, j + 1):
                w = Witness((i, j), ((i, j + 1), (i + 1, j)), "==", ((i, j), (i + 1, j + 1)))
                raise PreconditionError("an adjacent Kalmanson inequality is strict", Verdict.no(w))
    for i in range(2, n - 1):
        if c(i, 1) + c(i + 1, n) != c(i, n) + c(i + 1, 1):
            w = Witness((i,), ((i, 1), (i + 1, n)), "==", ((i, n), (i + 1, 1)))
            raise PreconditionError("an adjacent Kalmanson inequality is strict", Verdict.no(w))
    # b_i is the common difference c[i+1, j] - c[i, j] over j outside {i, i+1}
    b = [None] + [c(i + 1, 1 if i > 1 else 3) - c(i, 1 if i > 1 else 3) for i in range(1, n)]
    gamma = [(c(1, 2) - b[1]) / 2]
    for i in range(2, n + 1):
        gamma.append(gamma[0] + sum(b[1:i], Fraction(0)))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if c(i, j) != gamma[i - 1] + gamma[j - 1]:
                raise AssertionError(f"weak sum reconstruction failed at ({i}, {j})")
    return gamma


# -- sorted-block (CDW) conic combinations --------------------------------


def cdw_feasibility(D: CutWeightMatrix) -> Verdict:
    """Decide whether ``D`` is the cut-weight matrix of a conic combination of
    cut matrices with non-decreasing block sizes (plus a weak constant).

    Checks ``sum_{i<=l} d[i,k] <= sum_{j>=2k+1-l} d[k+1,j]`` for
    ``k = 2..n-1`` and ``l = 1..k-1``.  The row ``k = n-1`` has an empty
    right-hand side and forbids edges into node ``n``: a multi-element block
    ending at ``n-1`` would have to be followed by the singleton ``{n}``.
    The certificate of a rejection is the first violated ``(k, l)``.
    """
    bad = D.negative_cell()
    if bad is not None:
        raise NegativeCutWeightError(bad, D.get(*bad))
    n = D.n
    for k in range(2, n):
        for l in range(1, k):
            lhs = [(i, k) for i in range(1, l + 1)]
            rhs = [(k + 1, j) for j in range(2 * k + 1 - l, n + 1)] if k + 1 <= n else []
            if sum((D.get(*x) for x in lhs), Fraction(0)) > sum((D.get(*x) for x in rhs), Fraction(0)):
                w = Witness((k, l), tuple(lhs), "<=", tuple(rhs))
                return Verdict(
                    "no", witness=w, certificate=(k, l),
                    reason=f"edges of length >= {k + 1 - l} entering node {k + 1} outnumber those leaving it",
                )
    return Verdict.yes()


@dataclass
class CutWeightMultigraph:
    """Nodes ``1..n+1``; ``d[k, l] > 0`` gives an edge ``k -> l+1`` of that multiplicity."""

    n: int
    edges: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @classmethod
    def from_cut_weights(cls, D: CutWeightMatrix) -> "CutWeightMultigraph":
        return cls(D.n, {(k, l + 1): w for (k, l), w in D.positive().items()})

    def copy(self) -> "CutWeightMultigraph":
        return CutWeightMultigraph(self.n, dict(self.edges))

    def entering(self, node: int, min_length: int) -> Fraction:
        return sum((m for (t, h), m in self.edges.items() if h == node and h - t >= min_length), Fraction(0))

    def leaving(self, node: int, min_length: int) -> Fraction:
        return sum((m for (t, h), m in self.edges.items() if t == node and h - t >= min_length), Fraction(0))

    def balanced(self) -> bool:
        """Every node passes on at least as many long edges as it receives."""
        for node in range(1, self.n + 1):
            for x in range(2, node):
                if self.entering(node, x) > self.leaving(node, x):
                    return False
        return True

    def longest_path(self) -> tuple[int, ...] | None:
        """Walk backwards from ``n+1`` along longest edges of non-increasing length."""
        node, limit = self.n + 1, self.n + 1
        path = [node]
        while True:
            cands = [t for (t, h), m in self.edges.items() if h == node and m > 0 and h - t <= limit]
            if not cands:
                break
            tail = min(cands)
            limit = node - tail
            node = tail
            path.append(node)
        return tuple(reversed(path)) if len(path) > 1 else None

    def remove_path(self, path: tuple[int, ...], weight: Fraction) -> None:
        for e in zip(path, path[1:]):
            left = self.edges[e] - weight
            if left < 0:
                raise ValueError(f"edge {e} has multiplicity below {weight}")
            if left:
                self.edges[e] = left
            else:
                del self.edges[e]

    def path_weight(self, path: tuple[int, ...]) -> Fraction:
        return min(self.edges[e] for e in zip(path, path[1:]))


def path_partition(n: int, path: tuple[int, ...]) -> BlockPartition:
    """Singletons before the first node, then one block per path edge."""
    blocks = [(i, i) for i in range(1, path[0])]
    blocks += [(a, b - 1) for a, b in zip(path, path[1:])]
    return BlockPartition(n, tuple(blocks))


def cdw_decomposition(C: ExactMatrix) -> Verdict:
    """Conic combination of sorted-block cut matrices plus a weak constant.

    Returns a "yes" verdict whose certificate is a :class:`ConicDecomposition`
    (with the peeled paths), or a "no" verdict certified by the first violated
    feasibility pair ``(k, l)``.
    """
    _require_symmetric(C)
    _require_kalmanson(C, robinson=True)
    n = C.n
    D = _cut_weights(C)
    feasible = cdw_feasibility(D)
    if not feasible:
        return feasible
    graph = CutWeightMultigraph.from_cut_weights(D)
    terms, paths = [], []
    while True:
        path = graph.longest_path()
        if path is None:
            break
        w = graph.path_weight(path)
        graph.remove_path(path, w)
        paths.append(path)
        terms.append(CutTerm(w, path_partition(n, path), "path " + ",".join(map(str, path))))
    if graph.edges:
        raise AssertionError(f"feasible cut weights left edges {sorted(graph.edges)} after peeling")
    rest = C.with_zero_diagonal()
    for t in terms:
        rest = rest - t.weight * cut_matrix_from_blocks(t.blocks)
    offset = rest.entry(1, 2) if n > 1 else Fraction(0)
    if not rest.off_diagonal_equal(ExactMatrix.constant(n, offset, diagonal=0)):
        raise AssertionError("residual after peeling is not weak constant")
    return Verdict.yes(ConicDecomposition(n, offset, tuple(terms), paths=tuple(paths)))


# -- down-benevolent split ------------------------------------------------


@dataclass(frozen=True)
class BenevolentSplit:
    """``B = dw - sum(betas[i] * T^(i))`` with ``dw`` circulant of the DW class."""

    dw: ExactMatrix
    dw_profile: ToeplitzProfile
    betas: dict[int, Fraction]

    def reconstruct(self) -> ExactMatrix:
        out = self.dw
        for i, b in self.betas.items():
            out = out - b * stripe_matrix(self.dw.n, i)
        return out

    def to_json(self) -> dict:
        return {
            "dw_profile": self.dw_profile.to_json(),
            "betas": {str(i): format_rational(b) for i, b in sorted(self.betas.items())},
        }


def benevolent_split(B: ExactMatrix) -> BenevolentSplit:
    v = extract_toeplitz_profile(B)
    if not v:
        raise PreconditionError("matrix is not Toeplitz", v)
    prof: ToeplitzProfile = v.certificate
    if not prof.is_down_benevolent:
        raise PreconditionError("Toeplitz profile is not down-benevolent", Verdict("no", certificate=prof))
    n, h = B.n, _ceil_half(B.n - 1)
    f = [prof.f(k) for k in range(n)]
    g = [f[k] if k <= h else f[n - k] for k in range(n)]
    dw_prof = ToeplitzProfile.symmetric(g)
    betas = {i: f[n - i] - f[i] for i in range(h + 1, n)}
    return BenevolentSplit(toeplitz_from_profile(dw_prof), dw_prof, betas)


__all__ = [
    "BenevolentSplit",
    "ConicDecomposition",
    "CutTerm",
    "CutWeightMatrix",
    "CutWeightMultigraph",
    "KalmansonDecomposition",
    "NegativeCutWeightError",
    "NotSymmetricError",
    "PreconditionError",
    "benevolent_split",
    "cdw_decomposition",
    "cdw_feasibility",
    "cut_label",
    "cut_weight_cells",
    "cut_weight_matrix",
    "kalmanson_decomposition",
    "path_partition",
    "robinson_kalmanson_decomposition",
    "weak_sum_parameters",
]
