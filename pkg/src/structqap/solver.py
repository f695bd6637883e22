"""Case detection, certified optimal solutions and the exhaustive oracle.

Every solvable case pairs a structured ``A`` with a structured ``B`` and names
a permutation that is optimal for ``min_p sum_ij A[p(i), p(j)] * B[i, j]``.
``detect_case`` tries the cases in a fixed order, most specific first, and
returns the evidence for each hypothesis so the verdict can be re-checked.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from . import lp
from .decomposition import cdw_decomposition
from .generators import RaySpec, admissible_shifts, ps_ray, supnick_permutation, toeplitz_from_profile
from .matrix import DimensionError, ExactMatrix, Permutation, format_rational, identity, qap_objective
from .recognizers import (
    NotSymmetricError,
    ToeplitzProfile,
    Verdict,
    _ceil_half,
    check_kalmanson,
    check_monge_family,
    check_robinson,
    check_sum_family,
    extract_toeplitz_profile,
)

CASE_ORDER = (
    "combined_1",
    "combined_2",
    "combined_3",
    "down_benevolent",
    "DW_kalmanson_dw",
    "LS_robinson_simple",
    "CDW_antimonge",
    "PSmonge_down_benevolent",
    "BCRW_antimonge_benevolent",
    "up_benevolent_PS",
)

CASE_HYPOTHESES = {
    "combined_1": "A: conic combination of sorted-block cut matrices (constant diagonal); "
                  "B = monotone anti-Monge + down-benevolent Toeplitz",
    "combined_2": "A: down-benevolent Toeplitz; B = PS monotone Monge + Kalmanson and Robinson",
    "combined_3": "A: DW Toeplitz; B = cyclic PS monotone Monge + Kalmanson",
    "down_benevolent": "A: Kalmanson and Robinson; B: down-benevolent Toeplitz",
    "DW_kalmanson_dw": "A: Kalmanson; B: DW Toeplitz",
    "LS_robinson_simple": "A: Robinson; B: simple Toeplitz",
    "CDW_antimonge": "A: conic combination of sorted-block cut matrices (constant diagonal); "
                     "B: monotone anti-Monge",
    "PSmonge_down_benevolent": "A: PS monotone Monge; B: down-benevolent Toeplitz",
    "BCRW_antimonge_benevolent": "A: monotone anti-Monge; B: up-benevolent Toeplitz",
    "up_benevolent_PS": "A: PS monotone anti-Monge; B: up-benevolent Toeplitz",
}


class NoCaseError(ValueError):
    """No solvable case applies; fall back to :func:`brute_force`."""


class SplitError(ValueError):
    """A supplied ``b_split`` does not add up to ``B``."""


@dataclass
class CaseCertificate:
    case: str
    evidence: dict[str, Any]
    optimal_permutation: Permutation

    @property
    def hypotheses(self) -> str:
        return CASE_HYPOTHESES[self.case]

    def recheck(self, A: ExactMatrix, B: ExactMatrix, b_split=None) -> bool:
        """Re-derive the case from scratch and compare."""
        found = _CASES[self.case](A, B, b_split)
        return found is not None

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "hypotheses": self.hypotheses,
            "evidence": {k: _evidence_json(v) for k, v in self.evidence.items()},
            "permutation": list(self.optimal_permutation.images),
        }


@dataclass
class BruteForce:
    permutations_checked: int
    maximize: bool = False

    def to_json(self) -> dict:
        return {"brute_force": True, "permutations_checked": self.permutations_checked, "maximize": self.maximize}


@dataclass
class Solution:
    permutation: Permutation
    value: Fraction
    certificate: CaseCertificate | BruteForce

    def to_json(self) -> dict:
        return {
            "permutation": list(self.permutation.images),
            "value": format_rational(self.value),
            "certificate": self.certificate.to_json(),
        }


def _evidence_json(v):
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, Verdict):
        return v.status
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return [_evidence_json(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _evidence_json(x) for k, x in v.items()}
    return v


# -- PS matrix recognition ------------------------------------------------


@dataclass(frozen=True)
class PSDecomposition:
    """``sign * sum(weight * ray) + alpha_i + beta_j`` off the diagonal."""

    n: int
    kind: str
    terms: tuple[tuple[Fraction, RaySpec], ...]
    alpha: tuple[Fraction, ...] | None = None
    beta: tuple[Fraction, ...] | None = None

    def reconstruct(self) -> ExactMatrix:
        total = ExactMatrix.zeros(self.n)
        for w, spec in self.terms:
            total = total + w * ps_ray(spec)
        if self.kind == "monge":
            total = -total
            if self.alpha is not None:
                a, b = self.alpha, self.beta
                total = total + ExactMatrix.from_function(self.n, lambda i, j: a[i - 1] + b[j - 1])
        return total

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "terms": [{"weight": format_rational(w), **s.to_json()} for w, s in self.terms],
        }
        if self.alpha is not None:
            out["sum_part"] = {"alpha": [format_rational(x) for x in self.alpha],
                               "beta": [format_rational(x) for x in self.beta]}
        return out


@lru_cache(maxsize=64)
def _distinct_rays(n: int, cyclic: bool) -> tuple[tuple[RaySpec, ExactMatrix], ...]:
    seen = {}
    for p in range(1, n + 1):
        for q in range(p, n + 1):
            for u in admissible_shifts(n, p, q, cyclic):
                spec = RaySpec(n, p, q, u, cyclic)
                M = ps_ray(spec)
                seen.setdefault(M, spec)
    return tuple((s, M) for M, s in seen.items())


def recognize_ps(A: ExactMatrix, kind: str = "anti_monge", cyclic: bool = False,
                 sum_part: str = "none") -> PSDecomposition | None:
    """Exact cone-membership test for PS monotone (anti-)Monge matrices.

    Only off-diagonal entries are matched.  ``sum_part`` is ``"none"``,
    ``"constant"`` (one free constant) or ``"sum"`` (free ``alpha_i + beta_j``)
    and only applies to the Monge kind.
    """
    if kind not in ("anti_monge", "monge"):
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "anti_monge" and sum_part != "none":
        raise ValueError("a sum part only applies to the Monge kind")
    n = A.n
    rays = _distinct_rays(n, cyclic)
    sign = 1 if kind == "anti_monge" else -1
    n_rays = len(rays)
    if sum_part == "none":
        extra = 0
    elif sum_part == "constant":
        extra = 1
    elif sum_part == "sum":
        extra = 2 * n
    else:
        raise ValueError(f"unknown sum_part {sum_part!r}")
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    eq = []
    for i, j in cells:
        row = [sign * M[i, j] for _, M in rays] + [0] * extra
        if sum_part == "constant":
            row[n_rays] = 1
        elif sum_part == "sum":
            row[n_rays + i] = 1
            row[n_rays + n + j] = 1
        eq.append((row, A[i, j]))
    free = list(range(n_rays, n_rays + extra))
    x = lp.find_feasible(n_rays + extra, eq=eq, free=free)
    if x is None:
        return None
    terms = tuple((x[k], rays[k][0]) for k in range(n_rays) if x[k] > 0)
    alpha = beta = None
    if sum_part == "constant":
        alpha, beta = (x[n_rays],) * n, (Fraction(0),) * n
    elif sum_part == "sum":
        alpha, beta = tuple(x[n_rays:n_rays + n]), tuple(x[n_rays + n:])
    dec = PSDecomposition(n, kind, terms, alpha, beta)
    assert dec.reconstruct().off_diagonal_equal(A), "LP solution does not reconstruct the input"
    return dec


# -- automatic split for combined case 1 ----------------------------------


@dataclass(frozen=True)
class Combined1Split:
    anti_monge: ExactMatrix
    toeplitz: ExactMatrix
    profile: ToeplitzProfile

    def to_json(self) -> dict:
        return {"toeplitz_profile": self.profile.to_json(),
                "anti_monge": [[format_rational(v) for v in r] for r in self.anti_monge.rows]}


def split_combined1(B: ExactMatrix) -> Combined1Split | None:
    """Find ``B = B1 + B2`` with ``B1`` monotone anti-Monge and ``B2`` down-benevolent Toeplitz.

    The unknowns are ``f(1..n-1)`` of ``B2`` (with ``f(0) = 0``).  Every
    inequality on ``B1 = B - T(f)`` involves ``f`` only through the diagonal
    offset of its cells, so constraints are grouped per offset, keeping the
    tightest right-hand side.
    """
    if not B.is_symmetric():
        return None
    n = B.n
    if n == 1:
        if B[0, 0] < 0:
            return None
        prof = ToeplitzProfile.symmetric([0])
        return Combined1Split(B, ExactMatrix.zeros(1), prof)
    nv = n - 1  # variable k-1 holds f(k)

    def coeffs(terms: dict[int, int]) -> list[int]:
        row = [0] * nv
        for d, c in terms.items():
            d = abs(d)
            if d:
                row[d - 1] += c
        return row

    tight: dict[tuple, Fraction] = {}

    def add(terms: dict[int, int], rhs: Fraction):
        key = tuple(coeffs(terms))
        if key not in tight or rhs < tight[key]:
            tight[key] = rhs

    b = B.entry
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            # nonnegativity: f(r-c) <= b[r,c]
            add({r - c: 1}, b(r, c))
            if c < n:
                # row monotone: b1[r,c] <= b1[r,c+1]
                add({r - c - 1: 1, r - c: -1}, b(r, c + 1) - b(r, c))
            if r < n:
                add({r + 1 - c: 1, r - c: -1}, b(r + 1, c) - b(r, c))
            if r < n and c < n:
                # anti-Monge: b1[r,c] + b1[r+1,c+1] >= b1[r,c+1] + b1[r+1,c]
                d = r - c
                add({d: 2, d - 1: -1, d + 1: -1}, b(r, c) + b(r + 1, c + 1) - b(r, c + 1) - b(r + 1, c))
    h = _ceil_half(n - 1)
    for k in range(1, h):
        add({k + 1: 1, k: -1}, Fraction(0))
    for i in range(1, h + 1):
        if n - i != i:
            add({n - i: 1, i: -1}, Fraction(0))
    le = []
    for key, rhs in tight.items():
        if any(key):
            le.append((list(key), rhs))
        elif rhs < 0:
            return None
    x = lp.find_feasible(nv, le=le, free=range(nv))
    if x is None:
        return None
    prof = ToeplitzProfile.symmetric([Fraction(0)] + x)
    B2 = toeplitz_from_profile(prof)
    B1 = B - B2
    assert check_monge_family(B1, "monotone_anti_monge") and prof.is_down_benevolent
    return Combined1Split(B1, B2, prof)


# -- case hypotheses ------------------------------------------------------


def _sym_check(fn, M, **kw) -> Verdict:
    try:
        return fn(M, **kw)
    except NotSymmetricError:
        return Verdict("not-applicable", reason="matrix is not symmetric")


def _toeplitz_flag(M: ExactMatrix, flag: str) -> ToeplitzProfile | None:
    v = extract_toeplitz_profile(M)
    if v and v.certificate.flags[flag]:
        return v.certificate
    return None


def _constant_diagonal(M: ExactMatrix) -> bool:
    return all(M[i, i] == M[0, 0] for i in range(M.n))


def _cdw(A: ExactMatrix):
    if not A.is_symmetric() or not _constant_diagonal(A):
        return None
    if not (check_kalmanson(A) and check_robinson(A)):
        return None
    v = cdw_decomposition(A)
    return v.certificate if v else None


def _robinson_kalmanson(M: ExactMatrix) -> bool:
    return bool(_sym_check(check_kalmanson, M)) and bool(_sym_check(check_robinson, M))


def _case_combined_1(A, B, b_split):
    dec = _cdw(A)
    if dec is None:
        return None
    if b_split is not None:
        B1, B2 = b_split
        prof = _toeplitz_flag(B2, "down_benevolent")
        if prof is None or not check_monge_family(B1, "monotone_anti_monge"):
            return None
        return {"A_cdw_decomposition": dec, "B_split": Combined1Split(B1, B2, prof)}
    split = split_combined1(B)
    if split is None:
        return None
    return {"A_cdw_decomposition": dec, "B_split": split}


def _case_combined_2(A, B, b_split):
    if b_split is None:
        return None
    prof = _toeplitz_flag(A, "down_benevolent")
    if prof is None:
        return None
    B1, B2 = b_split
    if not _robinson_kalmanson(B2):
        return None
    ps = recognize_ps(B1, "monge", cyclic=False, sum_part="sum" if prof.is_circulant else "constant")
    if ps is None:
        return None
    return {"A_profile": prof, "B1_ps_monge": ps, "B2_kalmanson_robinson": "yes"}


def _case_combined_3(A, B, b_split):
    if b_split is None:
        return None
    prof = _toeplitz_flag(A, "dw")
    if prof is None:
        return None
    B1, B2 = b_split
    if not _sym_check(check_kalmanson, B2):
        return None
    ps = recognize_ps(B1, "monge", cyclic=True, sum_part="sum")
    if ps is None:
        return None
    return {"A_profile": prof, "B1_cyclic_ps_monge": ps, "B2_kalmanson": "yes"}


def _case_down_benevolent(A, B, b_split):
    prof = _toeplitz_flag(B, "down_benevolent")
    if prof is None or not _robinson_kalmanson(A):
        return None
    return {"A_kalmanson": "yes", "A_robinson": "yes", "B_profile": prof}


def _case_dw_kalmanson(A, B, b_split):
    prof = _toeplitz_flag(B, "dw")
    if prof is None or not _sym_check(check_kalmanson, A):
        return None
    return {"A_kalmanson": "yes", "B_profile": prof}


def _case_ls(A, B, b_split):
    prof = _toeplitz_flag(B, "simple")
    if prof is None or not _sym_check(check_robinson, A):
        return None
    return {"A_robinson": "yes", "B_profile": prof}


def _case_cdw_antimonge(A, B, b_split):
    if not check_monge_family(B, "monotone_anti_monge"):
        return None
    dec = _cdw(A)
    if dec is None:
        return None
    return {"A_cdw_decomposition": dec, "B_monotone_anti_monge": "yes"}


def _case_psmonge(A, B, b_split):
    prof = _toeplitz_flag(B, "down_benevolent")
    if prof is None:
        return None
    # a non-constant sum part is only neutral against a circulant partner
    ps = recognize_ps(A, "monge", cyclic=False, sum_part="sum" if prof.is_circulant else "constant")
    if ps is None:
        return None
    return {"A_ps_monge": ps, "B_profile": prof}


def _case_bcrw(A, B, b_split):
    prof = _toeplitz_flag(B, "up_benevolent")
    if prof is None or not check_monge_family(A, "monotone_anti_monge"):
        return None
    return {"A_monotone_anti_monge": "yes", "B_profile": prof}


def _case_up_ps(A, B, b_split):
    prof = _toeplitz_flag(B, "up_benevolent")
    if prof is None:
        return None
    ps = recognize_ps(A, "anti_monge", cyclic=False)
    if ps is None:
        return None
    return {"A_ps_anti_monge": ps, "B_profile": prof}


_CASES: dict[str, Callable] = {
    "combined_1": _case_combined_1,
    "combined_2": _case_combined_2,
    "combined_3": _case_combined_3,
    "down_benevolent": _case_down_benevolent,
    "DW_kalmanson_dw": _case_dw_kalmanson,
    "LS_robinson_simple": _case_ls,
    "CDW_antimonge": _case_cdw_antimonge,
    "PSmonge_down_benevolent": _case_psmonge,
    "BCRW_antimonge_benevolent": _case_bcrw,
    "up_benevolent_PS": _case_up_ps,
}


def case_permutation(case: str, n: int) -> Permutation:
    return supnick_permutation(n) if case == "BCRW_antimonge_benevolent" else identity(n)


def detect_case(A: ExactMatrix, B: ExactMatrix, b_split=None, cases=CASE_ORDER) -> CaseCertificate | None:
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: A {A.n}, B {B.n}")
    if b_split is not None:
        B1, B2 = b_split
        if B1.n != B.n or B2.n != B.n:
            raise DimensionError("b_split parts must match the dimension of B")
        if B1 + B2 != B:
            raise SplitError("b_split parts do not add up to B")
    for case in cases:
        ev = _CASES[case](A, B, b_split)
        if ev is not None:
            return CaseCertificate(case, ev, case_permutation(case, A.n))
    return None


def solve_structured(A: ExactMatrix, B: ExactMatrix, b_split=None) -> Solution:
    cert = detect_case(A, B, b_split)
    if cert is None:
        raise NoCaseError("no solvable case applies to this pair")
    p = cert.optimal_permutation
    return Solution(p, qap_objective(A, B, p), cert)


# -- exhaustive oracles ---------------------------------------------------


def _scaled(M: ExactMatrix) -> tuple[list[list[int]], int]:
    den = 1
    for r in M.rows:
        for v in r:
            den = math.lcm(den, v.denominator)
    return [[int(v * den) for v in r] for r in M.rows], den


@lru_cache(maxsize=16)
def _lex_perms(k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.permutations(range(k))), dtype=np.int64)


def brute_force(A: ExactMatrix, B: ExactMatrix, max_n: int = 10, maximize: bool = False,
                threads: int = 1) -> Solution:
    """Exact optimum over all ``n!`` permutations.

    Ties go to the lexicographically smallest permutation.  The search is
    split into chunks by a fixed prefix; with ``threads > 1`` chunks run in
    parallel and are reduced in prefix order, so the result does not depend
    on the thread count.
    """
    n = A.n
    if B.n != n:
        raise DimensionError(f"dimension mismatch: A {n}, B {B.n}")
    if n > max_n:
        raise ValueError(f"n = {n} exceeds the brute-force cap of {max_n}")
    a_int, da = _scaled(A)
    b_int, db = _scaled(B)
    bound = max((abs(v) for r in a_int for v in r), default=0) * max((abs(v) for r in b_int for v in r), default=0)
    dtype = np.int64 if bound * n * n < 2 ** 62 else object
    a_np = np.array(a_int, dtype=dtype)
    b_np = np.array(b_int, dtype=dtype)

    prefix_len = min(2, n)
    suffix = _lex_perms(n - prefix_len)
    prefixes = list(itertools.permutations(range(n), prefix_len))

    def run(prefix):
        rest = np.array([v for v in range(n) if v not in prefix], dtype=np.int64)
        P = np.empty((len(suffix), n), dtype=np.int64)
        P[:, :prefix_len] = prefix
        P[:, prefix_len:] = rest[suffix] if len(rest) else suffix
        Z = np.zeros(len(P), dtype=dtype)
        for i in range(n):
            rows = a_np[P[:, i]]
            G = np.take_along_axis(rows, P, axis=1)
            Z = Z + G.dot(b_np[i])
        k = int(np.argmax(Z) if maximize else np.argmin(Z))
        return Z[k], P[k]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, prefixes))
    else:
        results = [run(pre) for pre in prefixes]
    best_val, best_perm = None, None
    for val, perm in results:
        better = best_val is None or (val > best_val if maximize else val < best_val)
        if better:
            best_val, best_perm = val, perm
    p = Permutation.from_zero_based([int(v) for v in best_perm])
    value = qap_objective(A, B, p)
    if value != Fraction(int(best_val), da * db):
        raise AssertionError("integer-scaled objective disagrees with the exact objective")
    return Solution(p, value, BruteForce(math.factorial(n), maximize))


def selection_optimum(A: ExactMatrix, i: int) -> Fraction:
    """Best sum of ``n - i`` above-diagonal entries with pairwise disjoint indices."""
    if not A.is_symmetric():
        raise NotSymmetricError(A.first_asymmetry())
    n = A.n
    if not _ceil_half(n - 1) < i <= n - 1:
        raise ValueError(f"selection index {i} outside ({_ceil_half(n - 1)}, {n - 1}]")
    m = n - i
    a = A.entry
    best = None

    def rec(free: list[int], chosen: int, skips: int, total: Fraction):
        nonlocal best
        if chosen == m:
            if best is None or total > best:
                best = total
            return
        if len(free) < 2:
            return
        first, rest = free[0], free[1:]
        for k, partner in enumerate(rest):
            rec(rest[:k] + rest[k + 1:], chosen + 1, skips, total + a(first, partner))
        if skips:
            rec(rest, chosen, skips - 1, total)

    rec(list(range(1, n + 1)), 0, n - 2 * m, Fraction(0))
    return best
