"""Dense exact linear algebra over a prime field F_p.

Scalars are plain Python ints kept in canonical form ``0 <= x < p``.  Vectors
and matrices are immutable and carry their modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from ggs.errors import UsageError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise UsageError(f"p must be an odd prime, got {p}")


def inv_mod(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(x, -1, p)


@dataclass(frozen=True)
class FpVector:
    p: int
    entries: tuple[int, ...]

    def __init__(self, p: int, entries: Iterable[int]):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "entries", tuple(int(x) % p for x in entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __add__(self, other: FpVector) -> FpVector:
        _same_field(self.p, other.p)
        return FpVector(self.p, (x + y for x, y in zip(self.entries, other.entries)))

    def scale(self, k: int) -> FpVector:
        return FpVector(self.p, (k * x for x in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def dot(self, other: Sequence[int]) -> int:
        return sum(x * y for x, y in zip(self.entries, other)) % self.p


@dataclass(frozen=True)
class FpMatrix:
    p: int
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __init__(self, p: int, rows: Iterable[Iterable[int]], ncols: int | None = None):
        rows = tuple(tuple(int(x) % p for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise UsageError("an empty matrix needs an explicit column count")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise UsageError("matrix rows must all have the same length")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, p: int, n: int) -> FpMatrix:
        return cls(p, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zero(cls, p: int, nrows: int, ncols: int) -> FpMatrix:
        return cls(p, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def from_columns(cls, p: int, cols: Sequence[Sequence[int]]) -> FpMatrix:
        return cls(p, zip(*cols)) if cols else cls(p, [], 0)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def transpose(self) -> FpMatrix:
        return FpMatrix(self.p, zip(*self.rows), self.nrows) if self.rows else FpMatrix(self.p, [], 0)

    def apply(self, v: Sequence[int]) -> FpVector:
        """Return ``m . v`` for a column vector ``v``."""
        if len(v) != self.ncols:
            raise UsageError(f"vector of length {len(v)} against {self.ncols} columns")
        p = self.p
        return FpVector(p, (sum(a * b for a, b in zip(r, v)) % p for r in self.rows))


def _same_field(p, q):
    if p != q:
        raise UsageError(f"moduli differ: {p} vs {q}")


def _rref(rows: list[list[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        k = inv_mod(rows[r][c], p)
        rows[r] = [x * k % p for x in rows[r]]
        top = rows[r]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], top)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def row_reduce(m: FpMatrix) -> FpMatrix:
    """Reduced row echelon form; the row space is unchanged, zero rows stay at the bottom."""
    rows, _ = _rref([list(r) for r in m.rows], m.ncols, m.p)
    return FpMatrix(m.p, rows, m.ncols)


def rank(m: FpMatrix) -> int:
    _, pivots = _rref([list(r) for r in m.rows], m.ncols, m.p)
    return len(pivots)


def kernel_basis(m: FpMatrix) -> list[FpVector]:
    """Basis of the right kernel ``{v : m v = 0}``, one vector per free column."""
    p = m.p
    rows, pivots = _rref([list(r) for r in m.rows], m.ncols, p)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * m.ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f] % p
        basis.append(FpVector(p, v))
    return basis


def span_rank(p: int, vectors: Sequence[Sequence[int]], dim: int) -> int:
    """Dimension of the span of ``vectors`` inside F_p^dim."""
    if not vectors:
        return 0
    return rank(FpMatrix(p, vectors, dim))


def same_row_space(a: FpMatrix, b: FpMatrix) -> bool:
    if a.p != b.p or a.ncols != b.ncols:
        return False
    ra = [r for r in row_reduce(a).rows if any(r)]
    rb = [r for r in row_reduce(b).rows if any(r)]
    return ra == rb


def binomial_mod(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    return comb(n, k) % p
