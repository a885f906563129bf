"""Circulant spaces over F_p and the level vectors attached to a defining tuple.

A level vector has one coordinate per first-level vertex ``0..p-1``.  The
cyclic shift moves coordinate ``i`` to ``i+1``.  Cyclically invariant subspaces
of F_p^n form a single flag ``Circ_0 < Circ_1 < ... < Circ_n``, and a vector
lies in ``Circ_i`` exactly when the rank of its circulant matrix is at most
``i``.  That rank is read off from iterated division of
``E_d(X) = sum d_i X^i`` by ``X - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ggs.errors import TheoremViolation, UsageError
from ggs.fplinalg import FpMatrix, binomial_mod, rank
from ggs.tuples import DefiningTuple, first_difference


@dataclass(frozen=True)
class LevelVector:
    p: int
    coords: tuple[int, ...]

    def __init__(self, p: int, coords: Iterable[int]):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coords", tuple(int(x) % p for x in coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def shift(self, k: int = 1) -> LevelVector:
        """Cyclic shift sending coordinate ``i`` to ``i + k``."""
        n = len(self.coords)
        return LevelVector(self.p, (self.coords[(i - k) % n] for i in range(n)))

    @classmethod
    def placed(cls, p: int, n: int, entries: dict[int, int]) -> LevelVector:
        """Vector of length ``n`` with the given ``{coordinate: value}`` and zeros elsewhere."""
        v = [0] * n
        for i, x in entries.items():
            v[i % n] += x
        return cls(p, v)


def _divide_by_x_minus_1(q: list[int], p: int) -> tuple[list[int], int]:
    """Synthetic division of ``sum q_k X^k`` by ``X - 1``: (quotient, remainder)."""
    n = len(q)
    if n == 0:
        return [], 0
    out = [0] * (n - 1)
    acc = 0
    for k in range(n - 1, 0, -1):
        acc = (acc + q[k]) % p
        out[k - 1] = acc
    return out, (acc + q[0]) % p


def r_map(d: LevelVector | Sequence[int], p: int | None = None) -> tuple[int, ...]:
    """``(R_1, ..., R_n)`` where ``R_i`` is the remainder of the ``(n-i+1)``-th division.

    ``R_n`` is the remainder of ``E_d`` itself, ``R_{n-1}`` that of the
    quotient, and so on down to the constant ``R_1``.
    """
    if p is None:
        p = d.p
    q = [x % p for x in d]
    n = len(q)
    rs = [0] * n
    for i in range(n, 0, -1):
        q, rs[i - 1] = _divide_by_x_minus_1(q, p)
    return tuple(rs)


def r_map_closed_form(d: LevelVector | Sequence[int], p: int | None = None) -> tuple[int, ...]:
    """Binomial closed form ``R_{n-k} = sum_j C(j, k) d_j``, kept as an independent check."""
    if p is None:
        p = d.p
    n = len(d)
    return tuple(
        sum(binomial_mod(j, n - i, p) * d[j] for j in range(n)) % p for i in range(1, n + 1)
    )


def pascal_matrix(n: int, p: int) -> FpMatrix:
    """Right-justified Pascal triangle: entry ``(k, j)`` is ``C(j, k) mod p``."""
    return FpMatrix(p, [[binomial_mod(j, k, p) for j in range(n)] for k in range(n)], n)


def koenig_rados_rank(d: LevelVector | Sequence[int], p: int | None = None) -> int:
    """``n - m`` with ``m`` the multiplicity of 1 as a root of ``E_d``; 0 for ``d = 0``."""
    if p is None:
        p = d.p
    q = [x % p for x in d]
    n = len(q)
    if not any(q):
        return 0
    m = 0
    while True:
        quot, r = _divide_by_x_minus_1(q, p)
        if r:
            return n - m
        q = quot
        m += 1


def circulant_matrix(d: LevelVector | Sequence[int], p: int | None = None) -> FpMatrix:
    """Rows are the cyclic shifts of ``d``."""
    if p is None:
        p = d.p
    d = list(d)
    n = len(d)
    return FpMatrix(p, [[d[(j - i) % n] for j in range(n)] for i in range(n)], n)


def circulant_rank_by_elimination(d: LevelVector | Sequence[int], p: int | None = None) -> int:
    return rank(circulant_matrix(d, p))


def circ_dim(d: LevelVector) -> int:
    """Dimension of the circulant space of ``d``: the largest ``i`` with ``R_i != 0``."""
    rs = r_map(d)
    for i in range(len(rs), 0, -1):
        if rs[i - 1]:
            return i
    return 0


def circ_dim_of_set(ds: Iterable[LevelVector]) -> int:
    return max((circ_dim(d) for d in ds), default=0)


def flag_member(d: LevelVector, i: int) -> bool:
    """Whether ``d`` lies in ``Circ_i``, the ``i``-dimensional invariant subspace."""
    if not 0 <= i <= len(d):
        raise UsageError(f"flag index {i} outside 0..{len(d)}")
    return circ_dim(d) <= i


@dataclass(frozen=True)
class CirculantProfile:
    vector: LevelVector
    r_values: tuple[int, ...]
    dim: int


def profile(d: LevelVector) -> CirculantProfile:
    return CirculantProfile(d, r_map(d), circ_dim(d))


def theta_b(e: DefiningTuple) -> LevelVector:
    """Root actions of the first-level sections of ``b``: ``(0, e_1, ..., e_{p-1})``."""
    return LevelVector(e.p, (0, *e.e))


def theta_c(e: DefiningTuple) -> LevelVector:
    """Root actions of the first-level sections of ``c = [b, a]``."""
    p = e.p
    ep = first_difference(e)
    return LevelVector(p, (e.at(p - 1), -e.at(1), *ep.entries))


def stab_rank_t(e: DefiningTuple) -> int:
    """Rank of the circulant matrix of ``(0, e_1, ..., e_{p-1})``; always in ``2..p``."""
    t = koenig_rados_rank(theta_b(e))
    if t < 2:
        raise TheoremViolation(f"{e}: circulant rank {t} < 2")
    return t


def commutator_vector(e: DefiningTuple, i: int) -> LevelVector:
    """The c-exponents of the first-level sections of ``[c, c_i]`` modulo gamma_3.

    ``c_i`` is ``c`` conjugated by ``a^i``; ``i`` ranges over ``1..(p-1)/2``.
    """
    p = e.p
    if not 1 <= i <= (p - 1) // 2:
        raise UsageError(f"commutator index {i} outside 1..{(p - 1) // 2}")
    ep = first_difference(e).at
    if i == 1:
        return LevelVector.placed(p, p, {0: -ep(p - 1), 1: e.at(p - 1) - e.at(1), 2: -ep(2)})
    return LevelVector.placed(
        p, p, {0: -ep(p - i), 1: ep(p - i + 1), i: ep(i), i + 1: -ep(i + 1)}
    )


def commutator_vectors(e: DefiningTuple) -> list[LevelVector]:
    return [commutator_vector(e, i) for i in range(1, (e.p - 1) // 2 + 1)]


def w_codim(e: DefiningTuple) -> int:
    """Codimension in F_p^p of the circulant space spanned by the commutator vectors."""
    return e.p - circ_dim_of_set(commutator_vectors(e))
