"""Constructors for the structured matrices and permutations, and seeded random
members of every class.

Random instances are always built from a parameterization of the class (a
conic combination of known rays, or a monotone profile), never by rejection
sampling, so every output passes its recognizer by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .matrix import ExactMatrix, Permutation, apply_permutation, format_rational
from .recognizers import BlockPartition, ToeplitzProfile


def supnick_permutation(n: int) -> Permutation:
    """Odd values ascending, then even values descending: ``<1,3,5,...,6,4,2>``."""
    if n < 1:
        raise ValueError("n must be positive")
    odd = list(range(1, n + 1, 2))
    even = list(range(2, n + 1, 2))
    return Permutation(tuple(odd + even[::-1]))


def cyclic_shift(n: int, u: int) -> Permutation:
    """``<u, u+1, ..., n, 1, ..., u-1>``."""
    if not 1 <= u <= n:
        raise ValueError(f"shift u={u} outside 1..{n}")
    return Permutation(tuple((u - 1 + i) % n + 1 for i in range(n)))


def _check_pq(n: int, p: int, q: int):
    if not 1 <= p <= q <= n:
        raise ValueError(f"need 1 <= p <= q <= n, got p={p}, q={q}, n={n}")


def extremal_anti_monge(n: int, p: int, q: int, symmetric: bool = True) -> ExactMatrix:
    """``R^(p,q)`` (ones on the bottom-right ``p x q`` corner) or its symmetrization.

    The symmetric ray is ``R^(p,q) + R^(q,p)`` for ``p < q`` and ``R^(p,p)``
    for ``p = q``.  In non-symmetric mode ``p > q`` is also allowed.
    """
    if symmetric:
        _check_pq(n, p, q)
    elif not (1 <= p <= n and 1 <= q <= n):
        raise ValueError(f"need 1 <= p, q <= n, got p={p}, q={q}, n={n}")

    def r(pp, qq, i, j):
        return int(i > n - pp and j > n - qq)

    if not symmetric or p == q:
        return ExactMatrix.from_function(n, lambda i, j: r(p, q, i, j))
    return ExactMatrix.from_function(n, lambda i, j: r(p, q, i, j) + r(q, p, i, j))


def _ceil_half(m: int) -> int:
    return -(-m // 2)


def permuted_ray_formula(n: int, p: int, q: int, parity_corrected: bool = True) -> ExactMatrix:
    """Index formula for the Supnick-permuted symmetric ray (a cross shape).

    Used only to cross-check :func:`ps_ray`.  The centre is the ``p x p``
    block ``ceil((n-p)/2)+1 .. n-floor((n-p)/2)``; the ``q - p`` arm indices
    split into ``floor((q-p)/2)`` before and ``ceil((q-p)/2)`` after it.
    When ``n - p`` is odd the Supnick order puts the larger half before the
    centre, so ``parity_corrected`` swaps the split in that case and uses
    centre value 1 for ``p == q``.  With ``parity_corrected=False`` the
    uncorrected variant is produced (split never swapped, centre always 2,
    the bound ``(n-p)/2 + 1 <= j`` evaluated as a real inequality).
    """
    _check_pq(n, p, q)
    c = _ceil_half(n - p)
    lo, hi = c + 1, n - (n - p) // 2
    before, after = (q - p) // 2, _ceil_half(q - p)
    if parity_corrected and (n - p) % 2:
        before, after = after, before
    centre = 2 if (p < q or not parity_corrected) else 1
    first_col = lo if parity_corrected else Fraction(n - p, 2) + 1

    def val(i, j):
        if i > j:
            i, j = j, i
        if lo <= i <= hi and lo <= j <= hi:
            return centre
        if c - before + 1 <= i <= c and first_col <= j <= hi:
            return 1
        if lo <= i <= hi and hi + 1 <= j <= hi + after:
            return 1
        return 0

    return ExactMatrix.from_function(n, val)


def shift_bounds(n: int, p: int, q: int, parity_corrected: bool = True) -> tuple[int, int]:
    """``(L, R)``: non-wrapping shifts are ``u = 1``, ``1 < u <= L`` and ``R <= u <= n``.

    The arm lengths follow :func:`permuted_ray_formula`; without the parity
    swap some shifts at the ends of the range wrap an arm around the border.
    """
    before, after = (q - p) // 2, _ceil_half(q - p)
    if parity_corrected and (n - p) % 2:
        before, after = after, before
    low = _ceil_half(n - p) - before + 1
    high = n - (n - p) // 2 + after + 1
    return low, high


def admissible_shifts(n: int, p: int, q: int, cyclic: bool = False) -> list[int]:
    _check_pq(n, p, q)
    if cyclic:
        return list(range(1, n + 1))
    low, high = shift_bounds(n, p, q)
    return sorted({1, *range(2, low + 1), *range(max(high, 2), n + 1)})


@dataclass(frozen=True)
class RaySpec:
    n: int
    p: int
    q: int
    u: int = 1
    cyclic: bool = False

    def __post_init__(self):
        _check_pq(self.n, self.p, self.q)
        if self.u not in admissible_shifts(self.n, self.p, self.q, self.cyclic):
            raise ValueError(
                f"shift u={self.u} is not admissible for n={self.n}, p={self.p}, q={self.q}"
                + ("" if self.cyclic else " (non-cyclic)")
            )

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "u": self.u, "cyclic": self.cyclic}


def ps_ray(spec: RaySpec) -> ExactMatrix:
    """The symmetric ray, permuted by the Supnick permutation, then by the shift ``u``."""
    ray = extremal_anti_monge(spec.n, spec.p, spec.q, symmetric=True)
    permuted = apply_permutation(ray, supnick_permutation(spec.n))
    return apply_permutation(permuted, cyclic_shift(spec.n, spec.u))


def sum_matrix(alpha: Sequence, beta: Sequence) -> ExactMatrix:
    if len(alpha) != len(beta):
        raise ValueError("alpha and beta must have equal length")
    return ExactMatrix.from_function(len(alpha), lambda i, j: Fraction(alpha[i - 1]) + Fraction(beta[j - 1]))


def ps_matrix(
    n: int,
    terms: Sequence[tuple[Any, RaySpec]],
    kind: str = "anti_monge",
    sum_part: tuple[Sequence, Sequence] | None = None,
) -> ExactMatrix:
    """Conic combination of PS rays; the Monge kind negates it and adds ``sum_part``."""
    if kind not in ("anti_monge", "monge"):
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "anti_monge" and sum_part is not None:
        raise ValueError("a sum part only applies to the Monge kind")
    total = ExactMatrix.zeros(n)
    for w, spec in terms:
        w = Fraction(w)
        if w <= 0:
            raise ValueError(f"ray weight must be positive, got {w}")
        if spec.n != n:
            raise ValueError(f"ray for n={spec.n} in a {n}x{n} combination")
        total = total + w * ps_ray(spec)
    if kind == "anti_monge":
        return total
    total = -total
    if sum_part is not None:
        total = total + sum_matrix(*sum_part)
    return total


def stripe_matrix(n: int, i: int) -> ExactMatrix:
    """0/1 symmetric Toeplitz matrix with ones exactly at diagonal distance ``i``.

    For ``ceil((n-1)/2) < i <= n-1`` this has ``2(n-i)`` ones.
    """
    if not _ceil_half(n - 1) < i <= n - 1:
        raise ValueError(f"stripe index {i} outside ({_ceil_half(n - 1)}, {n - 1}]")
    return ExactMatrix.from_function(n, lambda r, c: int(abs(r - c) == i))


def toeplitz_from_profile(profile: ToeplitzProfile) -> ExactMatrix:
    return ExactMatrix.from_function(profile.n, lambda i, j: profile.f(i - j))


def cut_matrix_from_blocks(blocks: BlockPartition) -> ExactMatrix:
    label = blocks.block_of()
    return ExactMatrix.from_function(blocks.n, lambda i, j: int(label[i - 1] != label[j - 1]))


def cut_matrix(n: int, k: int, l: int) -> ExactMatrix:
    """``A^(k,l)``: the cut whose only multi-element block is ``{k..l}``."""
    return cut_matrix_from_blocks(BlockPartition.single_block(n, k, l))


# -- random instances -----------------------------------------------------

RANDOM_CLASSES = (
    "robinson",
    "kalmanson",
    "robinson_kalmanson",
    "cdw_conic",
    "monotone_anti_monge",
    "monotone_anti_monge_asym",
    "up_benevolent",
    "down_benevolent",
    "dw_toeplitz",
    "simple_toeplitz",
    "ps_anti_monge",
    "ps_monge",
    "cyclic_ps_monge",
)


def _weight(rng: random.Random, lo: int = 1, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 1, 1, 2, 3)))


def _nonneg(rng: random.Random) -> Fraction:
    return Fraction(0) if rng.random() < 0.3 else _weight(rng)


def _signed(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 2)))


def _fmt(v) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    if isinstance(v, dict):
        return {k: _fmt(x) for k, x in v.items()}
    return v


def random_instance(cls: str, n: int, seed: int) -> ExactMatrix:
    return random_instance_with_spec(cls, n, seed)[0]


def random_instance_with_spec(cls: str, n: int, seed: int) -> tuple[ExactMatrix, dict]:
    """Deterministic random member of ``cls`` plus its generating parameters (JSON-ready)."""
    if cls not in RANDOM_CLASSES:
        raise ValueError(f"unknown class {cls!r}; choose from {', '.join(RANDOM_CLASSES)}")
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(f"{cls}:{n}:{seed}")
    A, spec = _BUILDERS[cls](rng, n)
    spec = {"class": cls, "n": n, "seed": seed, **spec}
    return A, _fmt(spec)


def _random_diagonal(rng, n) -> list[Fraction]:
    return [_signed(rng) for _ in range(n)]


def _with_diagonal(A: ExactMatrix, diag) -> ExactMatrix:
    return ExactMatrix([[diag[i] if i == j else v for j, v in enumerate(r)] for i, r in enumerate(A.rows)])


def _gen_robinson(rng, n):
    a = [[Fraction(0)] * n for _ in range(n)]
    for gap in range(1, n):
        for i in range(n - gap):
            j = i + gap
            base = max(a[i][j - 1], a[i + 1][j]) if gap > 1 else _signed(rng)
            a[i][j] = a[j][i] = base + _nonneg(rng)
    diag = _random_diagonal(rng, n)
    return _with_diagonal(ExactMatrix(a), diag), {"diagonal": diag}


def _gen_kalmanson(rng, n):
    gamma = [_signed(rng) for _ in range(n)]
    A = ExactMatrix.from_function(n, lambda i, j: 0 if i == j else gamma[i - 1] + gamma[j - 1])
    cuts = []
    for i in range(1, n - 2):
        for j in range(i + 2, n):
            w = _nonneg(rng)
            if w:
                cuts.append({"k": i + 1, "l": j, "weight": w})
                A = A + w * cut_matrix(n, i + 1, j)
    pairs = []
    for i in range(2, n - 1):
        alpha = _signed(rng)
        beta = -alpha + _nonneg(rng)
        pairs.append({"i": i, "alpha": alpha, "beta": beta})
        A = A + alpha * cut_matrix(n, 1, i) + beta * cut_matrix(n, i + 1, n)
    diag = _random_diagonal(rng, n)
    return _with_diagonal(A, diag), {"gamma": gamma, "cuts": cuts, "boundary": pairs, "diagonal": diag}


def _gen_robinson_kalmanson(rng, n):
    offset = _signed(rng)
    A = ExactMatrix.constant(n, offset, diagonal=0)
    cuts = []
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            if (k, l) == (1, n):
                continue
            w = _nonneg(rng) if rng.random() < 0.6 else Fraction(0)
            if w:
                cuts.append({"k": k, "l": l, "weight": w})
                A = A + w * cut_matrix(n, k, l)
    diag = _random_diagonal(rng, n)
    return _with_diagonal(A, diag), {"offset": offset, "cuts": cuts, "diagonal": diag}


def random_cdw_partition(rng: random.Random, n: int) -> BlockPartition:
    """Random partition with non-decreasing block sizes (a sorted random composition)."""
    cuts = sorted(rng.sample(range(1, n), rng.randint(0, n - 1))) if n > 1 else []
    edges = [0, *cuts, n]
    sizes = sorted(b - a for a, b in zip(edges, edges[1:]))
    return BlockPartition.from_sizes(sizes)


def _gen_cdw_conic(rng, n):
    offset = _signed(rng)
    A = ExactMatrix.constant(n, offset, diagonal=0)
    terms = []
    for _ in range(rng.randint(1, 4)):
        part = random_cdw_partition(rng, n)
        w = _weight(rng)
        terms.append({"weight": w, "blocks": part.to_json()})
        A = A + w * cut_matrix_from_blocks(part)
    return A, {"offset": offset, "terms": terms}


def _gen_monotone_anti_monge(rng, n, symmetric=True):
    A = ExactMatrix.zeros(n)
    rays = []
    for p in range(1, n + 1):
        for q in range(p if symmetric else 1, n + 1):
            if rng.random() < 0.35:
                w = _weight(rng)
                rays.append({"p": p, "q": q, "weight": w})
                A = A + w * extremal_anti_monge(n, p, q, symmetric)
    return A, {"rays": rays, "symmetric": symmetric}


def _profile_spec(f):
    return {"profile": list(f)}


def _toeplitz_sym(f):
    return toeplitz_from_profile(ToeplitzProfile.symmetric(f))


def _head(rng, n, increasing):
    h = _ceil_half(n - 1)
    f = [Fraction(0)] * n
    if n > 1:
        f[1] = _signed(rng, 20)
    for k in range(2, h + 1):
        step = _nonneg(rng)
        f[k] = f[k - 1] + step if increasing else f[k - 1] - step
    return f, h


def _gen_up_benevolent(rng, n):
    f, h = _head(rng, n, increasing=True)
    for j in range(h + 1, n):
        f[j] = f[n - j] + _nonneg(rng)
    return _toeplitz_sym(f), _profile_spec(f)


def _gen_down_benevolent(rng, n):
    f, h = _head(rng, n, increasing=False)
    for j in range(h + 1, n):
        f[j] = f[n - j] - _nonneg(rng)
    return _toeplitz_sym(f), _profile_spec(f)


def _gen_dw(rng, n):
    f, h = _head(rng, n, increasing=False)
    for j in range(h + 1, n):
        f[j] = f[n - j]
    return _toeplitz_sym(f), _profile_spec(f)


def _gen_simple(rng, n):
    f = [Fraction(0)] * n
    if n > 1:
        f[1] = _signed(rng, 20)
    for k in range(2, n):
        f[k] = f[k - 1] - _nonneg(rng)
    return _toeplitz_sym(f), _profile_spec(f)


def _random_ray_terms(rng, n, cyclic):
    terms = []
    for _ in range(rng.randint(1, 5)):
        p = rng.randint(1, n)
        q = rng.randint(p, n)
        u = rng.choice(admissible_shifts(n, p, q, cyclic))
        terms.append((_weight(rng), RaySpec(n, p, q, u, cyclic)))
    return terms


def _ray_spec_json(terms):
    return [{"weight": w, **s.to_json()} for w, s in terms]


def _gen_ps_anti_monge(rng, n):
    terms = _random_ray_terms(rng, n, cyclic=False)
    return ps_matrix(n, terms, "anti_monge"), {"terms": _ray_spec_json(terms)}


def _gen_ps_monge(rng, n):
    # the sum part is a constant: a non-constant sum part is not neutral
    # against a non-circulant Toeplitz partner
    terms = _random_ray_terms(rng, n, cyclic=False)
    c = _signed(rng)
    alpha = [c] * n
    beta = [Fraction(0)] * n
    return ps_matrix(n, terms, "monge", (alpha, beta)), {
        "terms": _ray_spec_json(terms), "sum_part": {"alpha": alpha, "beta": beta}}


def _gen_cyclic_ps_monge(rng, n):
    terms = _random_ray_terms(rng, n, cyclic=True)
    alpha = [_signed(rng) for _ in range(n)]
    return ps_matrix(n, terms, "monge", (alpha, alpha)), {
        "terms": _ray_spec_json(terms), "sum_part": {"alpha": alpha, "beta": alpha}}


_BUILDERS = {
    "robinson": _gen_robinson,
    "kalmanson": _gen_kalmanson,
    "robinson_kalmanson": _gen_robinson_kalmanson,
    "cdw_conic": _gen_cdw_conic,
    "monotone_anti_monge": _gen_monotone_anti_monge,
    "monotone_anti_monge_asym": lambda rng, n: _gen_monotone_anti_monge(rng, n, symmetric=False),
    "up_benevolent": _gen_up_benevolent,
    "down_benevolent": _gen_down_benevolent,
    "dw_toeplitz": _gen_dw,
    "simple_toeplitz": _gen_simple,
    "ps_anti_monge": _gen_ps_anti_monge,
    "ps_monge": _gen_ps_monge,
    "cyclic_ps_monge": _gen_cyclic_ps_monge,
}
