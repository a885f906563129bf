"""Words in the generators ``a`` and ``b`` of a GGS-group, with section calculus.

``a`` is the rooted p-cycle ``x -> x + 1`` on the first level and ``b`` fixes
the first level with sections ``b|_0 = b`` and ``b|_x = a^(e_x)`` for
``x != 0``.  Elements act on the right, so ``u^(gh) = (u^g)^h`` and
``(gh)|_u = g|_u h|_(u^g)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Literal, NamedTuple, Sequence

from ggs.errors import UsageError
from ggs.permgrp import Permutation
from ggs.tuples import DefiningTuple

Letter = tuple[str, int]


def _reduce(letters: Iterable[Letter], p: int) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, k in letters:
        k %= p
        if not k:
            continue
        if out and out[-1][0] == g:
            k = (out[-1][1] + k) % p
            out.pop()
            if k:
                out.append((g, k))
        else:
            out.append((g, k))
    return tuple(out)


@dataclass(frozen=True)
class TreeWord:
    tuple: DefiningTuple
    letters: tuple[Letter, ...] = ()

    def __init__(self, e: DefiningTuple, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "tuple", e)
        object.__setattr__(self, "letters", _reduce(letters, e.p))

    @property
    def p(self) -> int:
        return self.tuple.p

    @classmethod
    def a(cls, e: DefiningTuple, k: int = 1) -> TreeWord:
        return cls(e, [("a", k)])

    @classmethod
    def b(cls, e: DefiningTuple, k: int = 1) -> TreeWord:
        return cls(e, [("b", k)])

    @classmethod
    def identity(cls, e: DefiningTuple) -> TreeWord:
        return cls(e)

    @classmethod
    def parse(cls, e: DefiningTuple, text: str) -> TreeWord:
        """Parse ``"b a^2 b^-1 a"``.  Raises :class:`WordSyntaxError` with a position."""
        letters = []
        for m in re.finditer(r"\S+", text):
            tok = m.group()
            mm = re.fullmatch(r"([ab])(?:\^(-?\d+))?", tok)
            if not mm:
                raise WordSyntaxError(text, m.start(), tok)
            letters.append((mm.group(1), int(mm.group(2) or 1)))
        return cls(e, letters)

    def _check(self, other: TreeWord):
        if other.tuple != self.tuple:
            raise UsageError("words over different GGS-groups")

    def __mul__(self, other: TreeWord) -> TreeWord:
        self._check(other)
        return TreeWord(self.tuple, self.letters + other.letters)

    def inverse(self) -> TreeWord:
        return TreeWord(self.tuple, [(g, -k) for g, k in reversed(self.letters)])

    def __pow__(self, n: int) -> TreeWord:
        if n < 0:
            return self.inverse() ** -n
        return TreeWord(self.tuple, self.letters * n)

    def conj(self, h: TreeWord) -> TreeWord:
        """``h^-1 self h``."""
        return h.inverse() * self * h

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(g if k == 1 else f"{g}^{k}" for g, k in self.letters)

    @property
    def syllables(self) -> int:
        """Number of ``b``-syllables."""
        return sum(1 for g, _ in self.letters if g == "b")


class WordSyntaxError(UsageError):
    def __init__(self, text: str, pos: int, token: str):
        self.text, self.pos, self.token = text, pos, token
        super().__init__(f"cannot parse word at position {pos}: {token!r}")


def commutator(g: TreeWord, h: TreeWord) -> TreeWord:
    """``[g, h] = g^-1 h^-1 g h``."""
    return g.inverse() * h.inverse() * g * h


def c_word(e: DefiningTuple) -> TreeWord:
    """``c = [b, a]``."""
    return commutator(TreeWord.b(e), TreeWord.a(e))


def c_i_word(e: DefiningTuple, i: int) -> TreeWord:
    return conjugate_by_a_power(c_word(e), i)


def root_action(w: TreeWord) -> int:
    """The ``k`` such that ``w`` acts on the first level as ``a^k``."""
    return sum(k for g, k in w.letters if g == "a") % w.p


def b_exponent(w: TreeWord) -> int:
    return sum(k for g, k in w.letters if g == "b") % w.p


def _section_at_digit(w: TreeWord, x: int) -> TreeWord:
    e, p = w.tuple, w.p
    pos = x % p
    out = []
    for g, k in w.letters:
        if g == "a":
            pos = (pos + k) % p
        elif pos == 0:
            out.append(("b", k))
        else:
            out.append(("a", k * e.at(pos)))
    return TreeWord(e, out)


def _vertex_digits(v) -> tuple[int, ...]:
    if isinstance(v, str):
        return tuple(int(ch) for ch in v)
    if isinstance(v, int):
        return (v,)
    return tuple(v)


def section(w: TreeWord, v) -> TreeWord:
    """``w|_v`` for a vertex given as a digit string, a digit sequence or a single digit."""
    for x in _vertex_digits(v):
        if not 0 <= x < w.p:
            raise UsageError(f"digit {x} outside 0..{w.p - 1}")
        w = _section_at_digit(w, x)
    return w


def vertex_image(w: TreeWord, v) -> tuple[int, ...]:
    """``v^w`` for a vertex ``v``."""
    out = []
    for x in _vertex_digits(v):
        out.append((x + root_action(w)) % w.p)
        w = _section_at_digit(w, x)
    return tuple(out)


def psi(w: TreeWord) -> list[TreeWord]:
    """First-level sections of a first-level stabilizing word, in vertex order."""
    r = root_action(w)
    if r:
        raise UsageError(f"psi needs a first-level stabilizing word; root action is a^{r}")
    return [_section_at_digit(w, x) for x in range(w.p)]


def conjugate_by_a_power(w: TreeWord, i: int) -> TreeWord:
    """``w^(a^i) = a^-i w a^i``."""
    return w.conj(TreeWord.a(w.tuple, i))


class NucleusElement(NamedTuple):
    kind: Literal["power_of_a", "power_of_b"]
    exponent: int


def as_nucleus(w: TreeWord) -> NucleusElement | None:
    if not w.letters:
        return NucleusElement("power_of_a", 0)
    if len(w.letters) == 1:
        g, k = w.letters[0]
        return NucleusElement("power_of_a" if g == "a" else "power_of_b", k)
    return None


class Contraction(NamedTuple):
    level: int
    nucleus: NucleusElement | None
    """Set only when the word itself is a nucleus element (level 0)."""


def contract(w: TreeWord, depth_budget: int | None = None) -> Contraction | None:
    """First level at which every section of ``w`` is a power of ``a`` or of ``b``.

    Returns ``None`` when the budget is exhausted first.  The default budget
    is ``2 + syllables``.
    """
    if depth_budget is None:
        depth_budget = 2 + w.syllables
    nuc = as_nucleus(w)
    if nuc is not None:
        return Contraction(0, nuc)
    layer = {w}
    for level in range(1, depth_budget + 1):
        layer = {_section_at_digit(u, x) for u in layer for x in range(w.p)}
        if all(as_nucleus(u) is not None for u in layer):
            return Contraction(level, None)
        layer = {u for u in layer if as_nucleus(u) is None}
    return None


def is_identity(w: TreeWord) -> bool:
    """Decide ``w = 1`` in G by descending until every branch is a nucleus element."""
    seen = set()
    todo = [w]
    while todo:
        u = todo.pop()
        if u in seen:
            continue
        seen.add(u)
        if root_action(u):
            return False
        nuc = as_nucleus(u)
        if nuc is not None:
            # a^k and b^k are nontrivial for 0 < k < p
            if nuc.exponent:
                return False
            continue
        todo.extend(_section_at_digit(u, x) for x in range(u.p))
    return True


def equal(w1: TreeWord, w2: TreeWord) -> bool:
    w1._check(w2)
    return is_identity(w1 * w2.inverse())


def heisenberg_image(w: TreeWord) -> tuple[int, int, int]:
    """Image in the Heisenberg group over F_p with ``a -> (1,0,0)``, ``b -> (0,1,0)``.

    Triples multiply as upper unitriangular matrices:
    ``(x, y, z)(x', y', z') = (x + x', y + y', z + z' + x y')``.
    """
    p = w.p
    x = y = z = 0
    for g, k in w.letters:
        if g == "a":
            x += k
        else:
            z += x * k
            y += k
    return x % p, y % p, z % p


def c_exponent_mod_gamma3(w: TreeWord) -> int:
    """For ``w`` in G', the ``k`` with ``w = c^k`` modulo gamma_3(G)."""
    x, y, z = heisenberg_image(w)
    if x or y:
        raise UsageError(f"word {w} is not in the derived subgroup")
    zc = heisenberg_image(c_word(w.tuple))[2]
    return z * pow(zc, -1, w.p) % w.p


def fractal_lift(e: DefiningTuple, x: int, gen: Literal["a", "b"]) -> TreeWord:
    """A first-level stabilizing word whose section at ``x`` is the given generator."""
    p = e.p
    b = TreeWord.b(e)
    if gen == "b":
        return conjugate_by_a_power(b, x)
    for i in range(p):
        if (x - i) % p and e.at(x - i):
            return conjugate_by_a_power(b, i) ** pow(e.at(x - i), -1, p)
    raise AssertionError("constant tuples are excluded, so some e_j is nonzero")


# --- truncation to finite levels ------------------------------------------


@lru_cache(maxsize=None)
def _a_images(p: int, n: int) -> tuple[int, ...]:
    step, size = p ** (n - 1), p**n
    return tuple((i + step) % size for i in range(size))


@lru_cache(maxsize=None)
def _b_images(e: DefiningTuple, n: int) -> tuple[int, ...]:
    p = e.p
    if n == 1:
        return tuple(range(p))
    block = p ** (n - 1)
    inner_b = _b_images(e, n - 1)
    inner_a = _a_images(p, n - 1)
    out = list(inner_b)
    for x in range(1, p):
        k = e.at(x)
        sub = tuple(range(block))
        for _ in range(k):
            sub = tuple(inner_a[i] for i in sub)
        out.extend(x * block + j for j in sub)
    return tuple(out)


def generator_images(e: DefiningTuple, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Raw image tuples of ``a`` and ``b`` on level ``n`` (vertices in lexicographic order)."""
    if n < 1:
        raise UsageError(f"truncation level must be >= 1, got {n}")
    return _a_images(e.p, n), _b_images(e, n)


def vertex_index(digits: Sequence[int], p: int) -> int:
    i = 0
    for d in digits:
        i = i * p + d
    return i


def index_vertex(i: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        i, d = divmod(i, p)
        out.append(d)
    return tuple(reversed(out))


def truncate(w: TreeWord, n: int) -> Permutation:
    """The permutation ``w`` induces on the ``p^n`` vertices of level ``n``."""
    a, b = generator_images(w.tuple, n)
    perm = Permutation.identity(len(a))
    pa, pb = Permutation(a), Permutation(b)
    for g, k in w.letters:
        perm = perm * (pa if g == "a" else pb) ** k
    return perm


def portrait(w: TreeWord, depth: int) -> dict:
    """Nested dict: root action plus the section tree down to ``depth``."""
    node = {"word": str(w), "root_action": root_action(w)}
    nuc = as_nucleus(w)
    if nuc is not None:
        g = "a" if nuc.kind == "power_of_a" else "b"
        node["nucleus"] = "1" if nuc.exponent == 0 else g if nuc.exponent == 1 else f"{g}^{nuc.exponent}"
    if depth > 0:
        node["sections"] = [portrait(_section_at_digit(w, x), depth - 1) for x in range(w.p)]
    return node
