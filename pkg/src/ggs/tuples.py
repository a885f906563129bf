"""Defining tuples, their difference tuples, and the isomorphism test.

Tuples are indexed the way they are written down for GGS-groups: the defining
tuple runs over ``1..p-1``, the first difference tuple over ``2..p-1`` and the
second difference tuple over ``3..p-1``.  Use :meth:`DefiningTuple.at` and
:meth:`DifferenceTuple.at` for index-faithful access.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Literal, NamedTuple

from ggs.errors import ConstantTupleError, TheoremViolation, UsageError
from ggs.fplinalg import FpMatrix, FpVector, check_odd_prime, kernel_basis


@dataclass(frozen=True)
class DefiningTuple:
    p: int
    e: tuple[int, ...]

    def __init__(self, p: int, e):
        check_odd_prime(p)
        e = tuple(int(x) % p for x in e)
        if len(e) != p - 1:
            raise UsageError(f"a defining tuple for p={p} has {p - 1} entries, got {len(e)}")
        if len(set(e)) == 1:
            raise ConstantTupleError()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "e", e)

    def at(self, i: int) -> int:
        """Entry ``e_i``; the index is read mod p and must not be 0."""
        i %= self.p
        if i == 0:
            raise IndexError("defining tuples have no entry at index 0")
        return self.e[i - 1]

    def __iter__(self):
        return iter(self.e)

    def __str__(self):
        return f"p={self.p} e={','.join(map(str, self.e))}"

    @classmethod
    def parse(cls, text: str) -> DefiningTuple:
        """Parse ``"p=5 e=1,0,0,1"`` (a comma between the two fields is tolerated)."""
        m = re.fullmatch(r"\s*p\s*=\s*(\d+)\s*,?\s*e\s*=\s*([-\d,\s]+?)\s*", text)
        if not m:
            raise UsageError(f"cannot parse tuple {text!r}; expected 'p=5 e=1,0,0,1'")
        return cls(int(m.group(1)), parse_entries(m.group(2)))


def parse_entries(text: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            out.append(int(tok))
        except ValueError:
            raise UsageError(f"bad tuple entry {tok!r}") from None
    return out


def read_corpus(lines) -> list[DefiningTuple]:
    """One tuple per line; blank lines and ``#`` comments are skipped."""
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(DefiningTuple.parse(line))
    return out


def all_tuples(p: int) -> Iterator[DefiningTuple]:
    """Every non-constant defining tuple for ``p`` in lexicographic order."""
    for e in itertools.product(range(p), repeat=p - 1):
        if len(set(e)) > 1:
            yield DefiningTuple(p, e)


@dataclass(frozen=True)
class DifferenceTuple:
    p: int
    kind: Literal["first", "second"]
    entries: tuple[int, ...]

    @property
    def start(self) -> int:
        return 2 if self.kind == "first" else 3

    def at(self, i: int) -> int:
        if not self.start <= i <= self.p - 1:
            raise IndexError(f"{self.kind} difference index {i} outside {self.start}..{self.p - 1}")
        return self.entries[i - self.start]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def first_difference(e: DefiningTuple) -> DifferenceTuple:
    p = e.p
    return DifferenceTuple(p, "first", tuple((e.at(i - 1) - e.at(i)) % p for i in range(2, p)))


def second_difference(e: DefiningTuple) -> DifferenceTuple:
    p = e.p
    return DifferenceTuple(
        p, "second", tuple((e.at(i - 2) - 2 * e.at(i - 1) + e.at(i)) % p for i in range(3, p))
    )


def is_symmetric(t: DefiningTuple | DifferenceTuple) -> int:
    """1 if the tuple reads the same backwards, else 0.

    For every kind of tuple here the pairing ``i <-> (first + last) - i`` is an
    index reversal, so this is a palindrome test.  Empty tuples count as
    symmetric.
    """
    xs = tuple(t.e) if isinstance(t, DefiningTuple) else t.entries
    return int(xs == xs[::-1])


def is_constant(t: DefiningTuple | DifferenceTuple) -> int:
    xs = tuple(t.e) if isinstance(t, DefiningTuple) else t.entries
    return int(len(set(xs)) <= 1)


class TupleClass(NamedTuple):
    sym_e: int
    con_eprime: int
    sym_esecond: int

    @property
    def class_value(self) -> int:
        return self.con_eprime + self.sym_esecond - self.sym_e


def classify(e: DefiningTuple) -> TupleClass:
    c = TupleClass(
        is_symmetric(e),
        is_constant(first_difference(e)),
        is_symmetric(second_difference(e)),
    )
    if c.sym_e and not c.sym_esecond:
        raise TheoremViolation(f"{e}: symmetric tuple with non-symmetric second difference")
    return c


def symmetry_matrix(p: int) -> FpMatrix:
    """Rows ``x_i - x_{p-i}`` for ``i = 1..(p-1)/2``; the kernel is the symmetric tuples."""
    rows = []
    for i in range(1, (p - 1) // 2 + 1):
        r = [0] * (p - 1)
        r[i - 1] += 1
        r[p - i - 1] -= 1
        rows.append(r)
    return FpMatrix(p, rows, p - 1)


def second_symmetry_matrix(p: int) -> FpMatrix:
    """Rows ``x''_j - x''_{p+2-j}`` for ``j = 3..(p+1)/2``, expanded in the ``x_i``.

    Its kernel is the set of tuples whose second difference is symmetric.  For
    p = 3 the matrix has no rows.
    """

    def second(j):
        r = [0] * (p - 1)
        r[j - 3] += 1
        r[j - 2] -= 2
        r[j - 1] += 1
        return r

    rows = []
    for j in range(3, (p + 1) // 2 + 1):
        a, b = second(j), second(p + 2 - j)
        rows.append([x - y for x, y in zip(a, b)])
    return FpMatrix(p, rows, p - 1)


def symmetry_via_kernel(e: DefiningTuple, which: Literal["M", "Mdd"]) -> int:
    """Kernel-membership version of ``sym(e)`` (``M``) or ``sym(e'')`` (``Mdd``)."""
    if which not in ("M", "Mdd"):
        raise UsageError(f"unknown matrix {which!r}")
    m = symmetry_matrix(e.p) if which == "M" else second_symmetry_matrix(e.p)
    return int(m.apply(e.e).is_zero())


def symmetric_subspace(p: int, which: Literal["M", "Mdd"] = "M"):
    """Kernel basis of ``M`` (resp. ``Mdd``) as vectors of F_p^(p-1)."""
    m = symmetry_matrix(p) if which == "M" else second_symmetry_matrix(p)
    if m.nrows == 0:
        return [FpVector(p, [int(i == j) for j in range(p - 1)]) for i in range(p - 1)]
    return kernel_basis(m)


def lemma23_check(e: DefiningTuple) -> Literal["holds", "not_applicable"]:
    """If ``e''`` is symmetric then ``2(e_{p-1} - e_1) + (e_2 - e_{p-2}) = 0``."""
    if not is_symmetric(second_difference(e)):
        return "not_applicable"
    p = e.p
    val = (2 * (e.at(p - 1) - e.at(1)) + (e.at(2) - e.at(p - 2))) % p
    if val:
        raise TheoremViolation(f"{e}: symmetric second difference but linear relation gives {val}")
    return "holds"


class Witness(NamedTuple):
    lam: int
    mu: int


def transform(d: DefiningTuple, lam: int, mu: int) -> DefiningTuple:
    """The tuple ``i -> mu * d_{lam*i}``."""
    p = d.p
    return DefiningTuple(p, (mu * d.at(lam * i) for i in range(1, p)))


def are_isomorphic(e: DefiningTuple, d: DefiningTuple) -> Witness | None:
    """Search all ``(lam, mu)`` with ``e_i = mu * d_{lam*i}``; ``mu`` varies slowest."""
    if e.p != d.p:
        raise UsageError(f"tuples live over different primes ({e.p} and {d.p})")
    p = e.p
    for mu in range(1, p):
        for lam in range(1, p):
            if all(e.at(i) == mu * d.at(lam * i) % p for i in range(1, p)):
                return Witness(lam, mu)
    return None


class NormalForm(NamedTuple):
    form: DefiningTuple
    witness: Witness


class NormalForms(NamedTuple):
    form_a: NormalForm
    form_b: NormalForm


def normal_forms(e: DefiningTuple) -> NormalForms:
    """Isomorphic tuples with ``e_1 = 1`` and with some ``e'_i = 1``.

    The first hit in the ``are_isomorphic`` search order is returned; each
    form's witness satisfies ``form_i = mu * e_{lam*i}``.
    """
    p = e.p
    form_a = form_b = None
    for mu in range(1, p):
        for lam in range(1, p):
            f = transform(e, lam, mu)
            if form_a is None and f.at(1) == 1:
                form_a = NormalForm(f, Witness(lam, mu))
            if form_b is None and 1 in first_difference(f).entries:
                form_b = NormalForm(f, Witness(lam, mu))
            if form_a and form_b:
                return NormalForms(form_a, form_b)
    raise TheoremViolation(f"{e}: no normal form found")
