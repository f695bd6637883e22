"""Exact rational square matrices, permutations and the QAP objective.

Matrices are indexed 0-based from Python (``A[i, j]``), but every index that
leaves the library (permutation images, witnesses, block boundaries, files)
is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Number = int | Fraction


class DimensionError(ValueError):
    """Operands do not share the same dimension."""


class MatrixFormatError(ValueError):
    """A matrix text file could not be parsed."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact entry")


def parse_rational(token: str) -> Fraction:
    """Parse ``"-7"`` or ``"3/4"`` (denominator strictly positive)."""
    num, sep, den = token.partition("/")
    if not _is_int(num) or (sep and (not den.isdigit() or int(den) == 0)):
        raise ValueError(f"not a rational: {token!r}")
    return Fraction(int(num), int(den) if sep else 1)


def _is_int(s: str) -> bool:
    body = s[1:] if s[:1] in "+-" else s
    return body.isdigit()


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class ExactMatrix:
    """Immutable dense ``n x n`` matrix of :class:`~fractions.Fraction`."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        n = len(data)
        if n == 0:
            raise DimensionError("matrix must have n >= 1")
        for r in data:
            if len(r) != n:
                raise DimensionError(f"matrix is not square: row of length {len(r)} in {n}x{n}")
        self._rows = data
        self._hash = None

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, int], Number]) -> "ExactMatrix":
        """Build from ``fn(i, j)`` evaluated on 1-based indices."""
        return cls([[fn(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)])

    @classmethod
    def zeros(cls, n: int) -> "ExactMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def constant(cls, n: int, value: Number, diagonal: Number | None = None) -> "ExactMatrix":
        d = value if diagonal is None else diagonal
        return cls.from_function(n, lambda i, j: d if i == j else value)

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def entry(self, i: int, j: int) -> Fraction:
        """1-based access."""
        return self._rows[i - 1][j - 1]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._rows)
        return f"ExactMatrix([{body}])"

    def _check_same(self, other: "ExactMatrix"):
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in r] for r in self._rows])

    def __mul__(self, scalar: Number) -> "ExactMatrix":
        if isinstance(scalar, ExactMatrix):
            return NotImplemented
        s = to_fraction(scalar)
        return ExactMatrix([[s * a for a in r] for r in self._rows])

    __rmul__ = __mul__

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self._rows))

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def is_symmetric(self) -> bool:
        r = self._rows
        return all(r[i][j] == r[j][i] for i in range(self.n) for j in range(i + 1, self.n))

    def first_asymmetry(self) -> tuple[int, int] | None:
        """1-based ``(i, j)``, ``i < j``, of the first cell with ``a_ij != a_ji``."""
        r = self._rows
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if r[i][j] != r[j][i]:
                    return (i + 1, j + 1)
        return None

    def off_diagonal_equal(self, other: "ExactMatrix") -> bool:
        self._check_same(other)
        return all(
            self._rows[i][j] == other._rows[i][j]
            for i in range(self.n) for j in range(self.n) if i != j
        )

    def with_zero_diagonal(self) -> "ExactMatrix":
        return ExactMatrix([[0 if i == j else v for j, v in enumerate(r)] for i, r in enumerate(self._rows)])

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def to_text(self) -> str:
        return format_matrix(self)


def as_matrix(a) -> ExactMatrix:
    return a if isinstance(a, ExactMatrix) else ExactMatrix(a)


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..n}`` stored as its 1-based image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_zero_based(cls, images: Sequence[int]) -> "Permutation":
        return cls(tuple(v + 1 for v in images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __len__(self):
        return len(self.images)

    def zero_based(self) -> tuple[int, ...]:
        return tuple(v - 1 for v in self.images)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, 1))

    def __str__(self):
        return "<" + ",".join(map(str, self.images)) + ">"


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``(p o q)(i) = p(q(i))``."""
    if p.n != q.n:
        raise DimensionError(f"dimension mismatch: {p.n} vs {q.n}")
    return Permutation(tuple(p(q(i)) for i in range(1, q.n + 1)))


def invert(p: Permutation) -> Permutation:
    out = [0] * p.n
    for i, v in enumerate(p.images, 1):
        out[v - 1] = i
    return Permutation(tuple(out))


def qap_objective(A: ExactMatrix, B: ExactMatrix, p: Permutation) -> Fraction:
    """``sum_{i,j} A[p(i), p(j)] * B[i, j]``, exactly."""
    n = A.n
    if B.n != n or p.n != n:
        raise DimensionError(f"dimension mismatch: A {n}, B {B.n}, permutation {p.n}")
    perm = p.zero_based()
    a, b = A.rows, B.rows
    total = Fraction(0)
    for i in range(n):
        ai = a[perm[i]]
        bi = b[i]
        total += sum(ai[perm[j]] * bi[j] for j in range(n) if bi[j])
    return total


def apply_permutation(A: ExactMatrix, p: Permutation) -> ExactMatrix:
    """Simultaneous row/column permutation: ``result[i, j] = A[p(i), p(j)]``."""
    if A.n != p.n:
        raise DimensionError(f"dimension mismatch: matrix {A.n}, permutation {p.n}")
    perm = p.zero_based()
    a = A.rows
    return ExactMatrix([[a[pi][pj] for pj in perm] for pi in perm])


# -- text format ----------------------------------------------------------


def format_matrix(A: ExactMatrix) -> str:
    lines = [str(A.n)]
    lines += [" ".join(format_rational(x) for x in row) for row in A.rows]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> ExactMatrix:
    """Read the plain text format: dimension line, then ``n`` rows of rationals.

    Lines starting with ``#`` and blank lines are skipped.
    """
    n = None
    rows: list[list[Fraction]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        last_line = lineno
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if n is None:
            if not stripped.isdigit() or int(stripped) < 1:
                raise MatrixFormatError(f"expected a positive dimension, got {stripped!r}", lineno, 1)
            n = int(stripped)
            continue
        if len(rows) == n:
            raise MatrixFormatError("extra row after the last matrix row", lineno, 1)
        row = []
        for col, start, token in _tokens(raw):
            try:
                row.append(parse_rational(token))
            except ValueError:
                raise MatrixFormatError(f"bad rational {token!r}", lineno, start + 1) from None
            if col >= n:
                raise MatrixFormatError(f"row has more than {n} entries", lineno, start + 1)
        if len(row) != n:
            raise MatrixFormatError(f"row has {len(row)} entries, expected {n}", lineno, len(raw) + 1)
        rows.append(row)
    if n is None:
        raise MatrixFormatError("empty input", max(last_line, 1), 1)
    if len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(rows)}", last_line + 1, 1)
    return ExactMatrix(rows)


def _tokens(line: str):
    col = 0
    pos = 0
    for token in line.split():
        start = line.index(token, pos)
        pos = start + len(token)
        yield col, start, token
        col += 1


def read_matrix(path) -> ExactMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(A: ExactMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_matrix(A))
