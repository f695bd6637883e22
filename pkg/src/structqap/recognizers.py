"""Exact membership tests for the structured matrix classes.

Every test returns a :class:`Verdict`.  A rejection always carries a
:class:`Witness`: the lexicographically smallest violating index tuple and the
inequality it breaks, written over matrix cells so that it can be re-evaluated
against the source matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterator

from .matrix import ExactMatrix, format_rational

YES, NO, NOT_APPLICABLE = "yes", "no", "not-applicable"


class NotSymmetricError(ValueError):
    def __init__(self, cell: tuple[int, int]):
        super().__init__(f"matrix is not symmetric at {cell}")
        self.cell = cell


def _require_symmetric(A: ExactMatrix) -> None:
    cell = A.first_asymmetry()
    if cell is not None:
        raise NotSymmetricError(cell)


_RELATIONS = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
}


@dataclass(frozen=True)
class Witness:
    """A violated relation ``sum(lhs cells) <relation> sum(rhs cells) + constant``.

    Cells are 1-based ``(row, column)`` pairs.
    """

    indices: tuple[int, ...]
    lhs: tuple[tuple[int, int], ...]
    relation: str
    rhs: tuple[tuple[int, int], ...] = ()
    constant: Fraction = Fraction(0)

    def sides(self, A: ExactMatrix) -> tuple[Fraction, Fraction]:
        left = sum((A.entry(i, j) for i, j in self.lhs), Fraction(0))
        right = sum((A.entry(i, j) for i, j in self.rhs), Fraction(0)) + self.constant
        return left, right

    def evaluate(self, A: ExactMatrix) -> bool:
        """Whether the relation holds on ``A`` (false for a genuine witness)."""
        left, right = self.sides(A)
        return _RELATIONS[self.relation](left, right)

    def describe(self) -> str:
        def side(cells):
            return " + ".join(f"a[{i},{j}]" for i, j in cells)

        right = side(self.rhs)
        if self.constant or not right:
            right = f"{right} + {format_rational(self.constant)}" if right else format_rational(self.constant)
        return f"{side(self.lhs)} {self.relation} {right}"

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "inequality": self.describe(),
            "lhs": [list(c) for c in self.lhs],
            "relation": self.relation,
            "rhs": [list(c) for c in self.rhs],
            "constant": format_rational(self.constant),
        }


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Witness | None = None
    certificate: Any = None
    reason: str | None = None

    def __bool__(self):
        return self.status == YES

    @classmethod
    def yes(cls, certificate=None) -> "Verdict":
        return cls(YES, certificate=certificate)

    @classmethod
    def no(cls, witness: Witness | None, reason: str | None = None) -> "Verdict":
        return cls(NO, witness=witness, reason=reason)


def _no(indices, lhs, relation, rhs=(), constant=0, reason=None) -> Verdict:
    return Verdict.no(Witness(tuple(indices), tuple(lhs), relation, tuple(rhs), Fraction(constant)), reason)


# -- Robinson -------------------------------------------------------------


def check_robinson(A: ExactMatrix, similarity: bool = False) -> Verdict:
    """Robinson dissimilarity (or, with ``similarity=True``, Robinsonian similarity).

    Rows must not decrease moving away from the diagonal (not increase, for
    the similarity variant).  The diagonal is ignored.
    """
    _require_symmetric(A)
    n, a = A.n, A.rows
    sign = -1 if similarity else 1
    for i in range(n):
        row = a[i]
        # right of the diagonal the row must not decrease, left of it not increase
        right = any(sign * (row[j] - row[j + 1]) > 0 for j in range(i + 1, n - 1))
        left = any(sign * (row[j + 1] - row[j]) > 0 for j in range(0, i - 1))
        if right or left:
            return _robinson_triple_witness(A, similarity)
    return Verdict.yes()


def _robinson_triple_witness(A: ExactMatrix, similarity: bool) -> Verdict:
    rel = "<=" if similarity else ">="
    op = _RELATIONS[rel]
    for i in range(1, A.n + 1):
        for j in range(i + 1, A.n + 1):
            for k in range(j + 1, A.n + 1):
                if not op(A.entry(i, k), A.entry(i, j)):
                    return _no((i, j, k), [(i, k)], rel, [(i, j)])
                if not op(A.entry(i, k), A.entry(j, k)):
                    return _no((i, j, k), [(i, k)], rel, [(j, k)])
    raise AssertionError("adjacent Robinson scan failed but no violating triple exists")


# -- Kalmanson ------------------------------------------------------------


def kalmanson_adjacent_violation(A: ExactMatrix) -> tuple[int, int] | tuple[int] | None:
    """First failing adjacent condition, ``(i, j)`` or ``(i,)``; ``None`` if all hold."""
    c = A.entry
    n = A.n
    for i in range(1, n - 2):
        for j in range(i + 2, n):
            if c(i, j + 1) + c(i + 1, j) > c(i, j) + c(i + 1, j + 1):
                return (i, j)
    for i in range(2, n - 1):
        if c(i, 1) + c(i + 1, n) > c(i, n) + c(i + 1, 1):
            return (i,)
    return None


def kalmanson_quadruple_witness(A: ExactMatrix) -> Witness | None:
    """Full four-point scan over all ``i < j < k < l``."""
    c = A.entry
    n = A.n
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                for l in range(k + 1, n + 1):
                    if c(i, j) + c(k, l) > c(i, k) + c(j, l):
                        return Witness((i, j, k, l), ((i, j), (k, l)), "<=", ((i, k), (j, l)))
                    if c(i, k) + c(j, l) < c(i, l) + c(j, k):
                        return Witness((i, j, k, l), ((i, k), (j, l)), ">=", ((i, l), (j, k)))
    return None


def check_kalmanson(A: ExactMatrix) -> Verdict:
    _require_symmetric(A)
    if kalmanson_adjacent_violation(A) is None:
        return Verdict.yes()
    w = kalmanson_quadruple_witness(A)
    assert w is not None, "adjacent Kalmanson scan failed but every quadruple holds"
    return Verdict.no(w)


# -- Monge family ---------------------------------------------------------

MONGE_VARIANTS = ("monge", "anti_monge", "monotone", "monotone_anti_monge")


def check_monge_family(A: ExactMatrix, variant: str) -> Verdict:
    if variant not in MONGE_VARIANTS:
        raise ValueError(f"unknown Monge variant {variant!r}")
    n, b = A.n, A.rows
    if variant != "monotone":
        for i in range(n):
            for j in range(n):
                if b[i][j] < 0:
                    return _no((i + 1, j + 1), [(i + 1, j + 1)], ">=", reason="negative entry")
    if variant in ("monotone", "monotone_anti_monge"):
        w = _monotone_witness(A)
        if w is not None:
            return w
    if variant == "monotone":
        return Verdict.yes()
    anti = variant != "monge"
    if _adjacent_monge_holds(A, anti):
        return Verdict.yes()
    w = monge_quadruple_witness(A, anti)
    assert w is not None, "adjacent Monge scan failed but every 2x2 submatrix holds"
    return Verdict.no(w)


def _monotone_witness(A: ExactMatrix) -> Verdict | None:
    n, b = A.n, A.rows
    for i in range(n):
        for j in range(n):
            if j + 1 < n and b[i][j] > b[i][j + 1]:
                return _no((i + 1, j + 1, i + 1, j + 2), [(i + 1, j + 1)], "<=", [(i + 1, j + 2)])
            if i + 1 < n and b[i][j] > b[i + 1][j]:
                return _no((i + 1, j + 1, i + 2, j + 1), [(i + 1, j + 1)], "<=", [(i + 2, j + 1)])
    return None


def _adjacent_monge_holds(A: ExactMatrix, anti: bool) -> bool:
    n, b = A.n, A.rows
    for i in range(n - 1):
        for j in range(n - 1):
            diag = b[i][j] + b[i + 1][j + 1]
            off = b[i][j + 1] + b[i + 1][j]
            if (diag < off) if anti else (diag > off):
                return False
    return True


def monge_quadruple_witness(A: ExactMatrix, anti: bool) -> Witness | None:
    """Full scan over rows ``i < r`` and columns ``j < s``; indices ``(i, r, j, s)``."""
    n = A.n
    b = A.entry
    rel = ">=" if anti else "<="
    op = _RELATIONS[rel]
    for i in range(1, n + 1):
        for r in range(i + 1, n + 1):
            for j in range(1, n + 1):
                for s in range(j + 1, n + 1):
                    if not op(b(i, j) + b(r, s), b(i, s) + b(r, j)):
                        return Witness((i, r, j, s), ((i, j), (r, s)), rel, ((i, s), (r, j)))
    return None


# -- Toeplitz -------------------------------------------------------------


def _ceil_half(m: int) -> int:
    return -(-m // 2)


@dataclass(frozen=True)
class ToeplitzProfile:
    """Generating function ``f(-n+1..n-1)`` of an ``n x n`` Toeplitz matrix.

    ``values[k + n - 1]`` holds ``f(k)``; the matrix is ``b[i, j] = f(i - j)``.
    """

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if self.n < 1 or len(vals) != 2 * self.n - 1:
            raise ValueError(f"profile of a {self.n}x{self.n} matrix needs {2 * self.n - 1} values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def symmetric(cls, f: list) -> "ToeplitzProfile":
        """From ``[f(0), f(1), ..., f(n-1)]`` with ``f(-k) = f(k)``."""
        n = len(f)
        return cls(n, tuple(reversed(f[1:])) + tuple(f))

    def f(self, k: int) -> Fraction:
        if not -self.n < k < self.n:
            raise IndexError(k)
        return self.values[k + self.n - 1]

    @property
    def half(self) -> int:
        """``ceil((n - 1) / 2)``."""
        return _ceil_half(self.n - 1)

    @cached_property
    def is_symmetric(self) -> bool:
        return all(self.f(k) == self.f(-k) for k in range(1, self.n))

    @cached_property
    def is_circulant(self) -> bool:
        return all(self.f(i) == self.f(i - self.n) for i in range(1, self.n))

    def _base(self) -> bool:
        return self.is_symmetric and self.f(0) == 0

    def _head_nonincreasing(self) -> bool:
        return all(self.f(k) >= self.f(k + 1) for k in range(1, self.half))

    def _head_nondecreasing(self) -> bool:
        return all(self.f(k) <= self.f(k + 1) for k in range(1, self.half))

    @cached_property
    def is_simple(self) -> bool:
        return self._base() and all(self.f(k) >= self.f(k + 1) for k in range(1, self.n - 1))

    @cached_property
    def is_dw(self) -> bool:
        n = self.n
        return (
            self._base() and self.is_circulant and self._head_nonincreasing()
            and all(self.f(i) == self.f(n - i) for i in range(self.half + 1, n))
        )

    @cached_property
    def is_up_benevolent(self) -> bool:
        return (
            self._base() and self._head_nondecreasing()
            and all(self.f(i) <= self.f(self.n - i) for i in range(1, self.half + 1))
        )

    @cached_property
    def is_down_benevolent(self) -> bool:
        return (
            self._base() and self._head_nonincreasing()
            and all(self.f(i) >= self.f(self.n - i) for i in range(1, self.half + 1))
        )

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "symmetric": self.is_symmetric,
            "circulant": self.is_circulant,
            "simple": self.is_simple,
            "dw": self.is_dw,
            "up_benevolent": self.is_up_benevolent,
            "down_benevolent": self.is_down_benevolent,
        }

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "f": {str(k): format_rational(self.f(k)) for k in range(-self.n + 1, self.n)},
            "flags": self.flags,
        }


def extract_toeplitz_profile(A: ExactMatrix) -> Verdict:
    """Profile of ``A`` if every diagonal is constant, else the first offending cell."""
    n = A.n
    for i in range(2, n + 1):
        for j in range(2, n + 1):
            if A.entry(i, j) != A.entry(i - 1, j - 1):
                return _no((i, j), [(i, j)], "==", [(i - 1, j - 1)], reason="diagonal not constant")
    values = [A.entry(1, 1 - k) for k in range(-n + 1, 0)] + [A.entry(k + 1, 1) for k in range(n)]
    return Verdict.yes(ToeplitzProfile(n, tuple(values)))


TOEPLITZ_CLASSES = ("simple", "dw", "up_benevolent", "down_benevolent")


def check_toeplitz_class(A: ExactMatrix, kind: str) -> Verdict:
    """Membership in one Toeplitz sub-class; the certificate is the profile."""
    if kind not in TOEPLITZ_CLASSES:
        raise ValueError(f"unknown Toeplitz class {kind!r}")
    v = extract_toeplitz_profile(A)
    if not v:
        return v
    prof: ToeplitzProfile = v.certificate
    if prof.flags[kind]:
        return v
    return Verdict(NO, certificate=prof, reason=f"Toeplitz profile is not {kind}")


# -- sum and constant matrices --------------------------------------------

SUM_VARIANTS = ("sum", "weak_sum", "constant", "weak_constant")


def check_sum_family(A: ExactMatrix, variant: str) -> Verdict:
    """Sum / weak sum / constant / weak constant membership.

    Certificates: ``{"alpha", "beta"}`` for the sum variants (plus ``"gamma"``
    when a weak sum matrix is symmetric) and ``{"constant"}`` otherwise.
    """
    if variant not in SUM_VARIANTS:
        raise ValueError(f"unknown sum variant {variant!r}")
    n, a = A.n, A.entry
    if variant == "constant":
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if a(i, j) != a(1, 1):
                    return _no((i, j), [(i, j)], "==", [(1, 1)])
        return Verdict.yes({"constant": a(1, 1)})
    if variant == "weak_constant":
        if n == 1:
            return Verdict.yes({"constant": Fraction(0)})
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j and a(i, j) != a(1, 2):
                    return _no((i, j), [(i, j)], "==", [(1, 2)])
        return Verdict.yes({"constant": a(1, 2)})
    if variant == "sum":
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if a(i, j) + a(1, 1) != a(i, 1) + a(1, j):
                    return _no((i, j), [(i, j), (1, 1)], "==", [(i, 1), (1, j)])
        alpha = [a(i, 1) - a(1, 1) for i in range(1, n + 1)]
        beta = [a(1, j) for j in range(1, n + 1)]
        return Verdict.yes({"alpha": alpha, "beta": beta})
    return _check_weak_sum(A)


def _check_weak_sum(A: ExactMatrix) -> Verdict:
    n, a = A.n, A.entry
    zero = Fraction(0)
    if n <= 2:
        alpha = [zero] * n
        beta = [a(2, 1), a(1, 2)] if n == 2 else [zero]
        cert = {"alpha": alpha, "beta": beta}
        if n == 2 and A.is_symmetric():
            cert["gamma"] = [a(1, 2) / 2, a(1, 2) / 2]
        return Verdict.yes(cert)
    # alpha_1 = 0 fixes the free shift between alpha and beta.
    alpha = [zero] * (n + 1)
    beta = [zero] * (n + 1)
    for j in range(2, n + 1):
        beta[j] = a(1, j)
    for i in range(2, n + 1):
        j = 2 if i != 2 else 3
        alpha[i] = a(i, j) - beta[j]
    beta[1] = a(2, 1) - alpha[2]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and a(i, j) != alpha[i] + beta[j]:
                return _no((i, j), [(i, j)], "==", constant=alpha[i] + beta[j],
                           reason="entry does not fit the sum pattern of the preceding entries")
    cert = {"alpha": alpha[1:], "beta": beta[1:]}
    if A.is_symmetric():
        cert["gamma"] = [(alpha[i] + beta[i]) / 2 for i in range(1, n + 1)]
    return Verdict.yes(cert)


# -- cut matrices ---------------------------------------------------------


@dataclass(frozen=True)
class BlockPartition:
    """Consecutive intervals ``(start, end)`` (1-based, inclusive) covering ``1..n``."""

    n: int
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        blocks = tuple((int(s), int(e)) for s, e in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        expect = 1
        for s, e in blocks:
            if s != expect or e < s:
                raise ValueError(f"blocks {blocks} do not partition 1..{self.n} consecutively")
            expect = e + 1
        if expect != self.n + 1:
            raise ValueError(f"blocks {blocks} do not cover 1..{self.n}")

    @classmethod
    def from_sizes(cls, sizes) -> "BlockPartition":
        blocks, start = [], 1
        for s in sizes:
            blocks.append((start, start + s - 1))
            start += s
        return cls(start - 1, tuple(blocks))

    @classmethod
    def single_block(cls, n: int, k: int, l: int) -> "BlockPartition":
        """Partition of the cut matrix ``A^(k,l)``: ``{k..l}`` plus singletons."""
        if not 1 <= k <= l <= n:
            raise ValueError(f"need 1 <= k <= l <= n, got k={k}, l={l}, n={n}")
        return cls(n, tuple((i, i) for i in range(1, k)) + ((k, l),) + tuple((i, i) for i in range(l + 1, n + 1)))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(e - s + 1 for s, e in self.blocks)

    @property
    def cdw(self) -> bool:
        sz = self.sizes
        return all(a <= b for a, b in zip(sz, sz[1:]))

    def block_of(self) -> list[int]:
        """0-based block label for each index ``1..n`` (list position ``i - 1``)."""
        out = []
        for label, (s, e) in enumerate(self.blocks):
            out += [label] * (e - s + 1)
        return out

    def multi_blocks(self) -> tuple[tuple[int, int], ...]:
        return tuple(b for b in self.blocks if b[1] > b[0])

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def check_cut_matrix(A: ExactMatrix) -> Verdict:
    """Cut matrix test; the certificate is the (maximal-block) partition."""
    n = A.n
    blocks, start = [], 1
    for i in range(1, n):
        if A.entry(i, i + 1) != 0:
            blocks.append((start, i))
            start = i + 1
    blocks.append((start, n))
    part = BlockPartition(n, tuple(blocks))
    label = part.block_of()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            expect = 0 if label[i - 1] == label[j - 1] else 1
            if A.entry(i, j) != expect:
                return _no((i, j), [(i, j)], "==", constant=expect, reason="entry breaks the block pattern")
    return Verdict.yes(part)


# -- classification report ------------------------------------------------


@dataclass
class ClassificationReport:
    n: int
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Verdict:
        return self.verdicts[name]

    def items(self) -> Iterator[tuple[str, Verdict]]:
        return iter(self.verdicts.items())

    def to_json(self) -> dict:
        classes = {}
        for name, v in self.verdicts.items():
            entry: dict[str, Any] = {"verdict": v.status}
            if v.witness is not None:
                entry["witness"] = v.witness.to_json()
            if v.reason:
                entry["reason"] = v.reason
            if isinstance(v.certificate, ToeplitzProfile):
                entry["profile"] = v.certificate.to_json()
            elif isinstance(v.certificate, BlockPartition):
                entry["blocks"] = v.certificate.to_json()
                entry["cdw"] = v.certificate.cdw
            elif isinstance(v.certificate, dict):
                entry["certificate"] = {
                    k: ([format_rational(x) for x in val] if isinstance(val, list) else format_rational(val))
                    for k, val in v.certificate.items()
                }
            classes[name] = entry
        return {"n": self.n, "classes": classes}


def classify(A: ExactMatrix) -> ClassificationReport:
    """Run every recognizer; symmetric-only classes are not applicable to asymmetric input."""
    rep = ClassificationReport(A.n)
    symmetric = A.is_symmetric()
    na = Verdict(NOT_APPLICABLE, reason="matrix is not symmetric")
    rep.verdicts["robinson"] = check_robinson(A) if symmetric else na
    rep.verdicts["robinsonian_similarity"] = check_robinson(A, similarity=True) if symmetric else na
    rep.verdicts["kalmanson"] = check_kalmanson(A) if symmetric else na
    for variant in MONGE_VARIANTS:
        rep.verdicts[variant] = check_monge_family(A, variant)
    tv = extract_toeplitz_profile(A)
    rep.verdicts["toeplitz"] = tv
    for kind in TOEPLITZ_CLASSES:
        rep.verdicts[f"{kind}_toeplitz"] = check_toeplitz_class(A, kind)
    for variant in SUM_VARIANTS:
        rep.verdicts[variant] = check_sum_family(A, variant)
    rep.verdicts["cut_matrix"] = check_cut_matrix(A)
    return rep
