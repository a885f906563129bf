"""Permutation groups via stabilizer chains (deterministic Schreier-Sims).

Permutations act on the right: ``i^(gh) = (i^g)^h``, so ``g * h`` means
"first g, then h".  Internally images are plain tuples; the chain is built
with Knuth's incremental form of Sims' algorithm, which only ever adds
generators and therefore lets subgroups grow one element at a time (normal
closures rely on this).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ggs.errors import NotAPowerError, UsageError

Perm = tuple  # raw image tuple


def _mul(g: Perm, h: Perm) -> Perm:
    return tuple(map(h.__getitem__, g))


def _inv(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[j] = i
    return tuple(out)


def _pow(g: Perm, k: int) -> Perm:
    if k < 0:
        g, k = _inv(g), -k
    result = tuple(range(len(g)))
    while k:
        if k & 1:
            result = _mul(result, g)
        g = _mul(g, g)
        k >>= 1
    return result


def _comm(g: Perm, h: Perm) -> Perm:
    return _mul(_mul(_inv(g), _inv(h)), _mul(g, h))


class Permutation:
    """An immutable bijection of ``{0, ..., degree-1}``."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise UsageError("not a permutation")
        self.images = images

    @classmethod
    def _raw(cls, images: Perm) -> Permutation:
        obj = cls.__new__(cls)
        obj.images = images
        return obj

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Permutation:
        img = list(range(degree))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise UsageError(f"degrees differ: {self.degree} vs {other.degree}")
        return Permutation._raw(_mul(self.images, other.images))

    def inverse(self) -> Permutation:
        return Permutation._raw(_inv(self.images))

    def __pow__(self, k: int) -> Permutation:
        return Permutation._raw(_pow(self.images, k))

    def conj(self, h: Permutation) -> Permutation:
        """``h^-1 self h``."""
        return h.inverse() * self * h

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def order(self) -> int:
        from math import lcm

        seen = [False] * self.degree
        out = 1
        for i in range(self.degree):
            if not seen[i]:
                n, j = 0, i
                while not seen[j]:
                    seen[j] = True
                    j = self.images[j]
                    n += 1
                out = lcm(out, n)
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cycles = []
        seen = set()
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [i], self.images[i]
            seen.add(i)
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return f"Permutation<{self.degree}>" + ("".join(cycles) or "()")


def commutator(g: Permutation, h: Permutation) -> Permutation:
    return Permutation._raw(_comm(g.images, h.images))


class _Level:
    __slots__ = ("base", "gens", "trans", "inv")

    def __init__(self, base: int, identity: Perm):
        self.base = base
        self.gens: list[Perm] = []
        self.trans: dict[int, Perm] = {base: identity}
        self.inv: dict[int, Perm] = {base: identity}


class PermutationGroup:
    """A permutation group with a lazily built stabilizer chain.

    ``base`` optionally fixes a prefix of base points (kept even when their
    orbits are trivial); further base points are chosen as the smallest point
    moved by the element that forces a new level.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = (), base: Sequence[int] = ()):
        self.degree = degree
        self._id = tuple(range(degree))
        self._prefix = tuple(base)
        self._levels: list[_Level] | None = None
        self._gens: list[Perm] = []
        for g in generators:
            if g.degree != degree:
                raise UsageError(f"generator of degree {g.degree} in a group of degree {degree}")
            if g.images != self._id:
                self._gens.append(g.images)

    @classmethod
    def _from_raw(cls, degree: int, gens: Iterable[Perm]) -> PermutationGroup:
        G = cls(degree)
        G._gens = [g for g in gens if g != G._id]
        return G

    # -- chain ---------------------------------------------------------------

    def _chain(self) -> list[_Level]:
        if self._levels is None:
            self._levels = [_Level(b, self._id) for b in self._prefix]
            for g in self._gens:
                if self._sift(g, 0) != self._id:
                    self._extend(g)
        return self._levels

    def _sift(self, g: Perm, start: int) -> Perm:
        for lev in self._levels[start:]:
            j = g[lev.base]
            if j == lev.base:
                continue
            u = lev.inv.get(j)
            if u is None:
                return g
            g = tuple(map(u.__getitem__, g))
        return g

    def _new_level(self, g: Perm) -> _Level:
        b = next(i for i, x in enumerate(g) if i != x)
        lev = _Level(b, self._id)
        self._levels.append(lev)
        return lev

    def _extend(self, g: Perm, k: int = 0) -> None:
        """Add ``g`` (fixing the first ``k`` base points) at level ``k`` and restore closure."""
        levels = self._levels
        ident = self._id
        stack = [(True, k, g)]
        while stack:
            is_add, k, g = stack.pop()
            if is_add:
                lev = levels[k] if k < len(levels) else self._new_level(g)
                lev.gens.append(g)
                for u in list(lev.trans.values()):
                    stack.append((False, k, tuple(map(g.__getitem__, u))))
                continue
            lev = levels[k]
            j = g[lev.base]
            uinv = lev.inv.get(j)
            if uinv is None:
                lev.trans[j] = g
                lev.inv[j] = _inv(g)
                for s in lev.gens:
                    stack.append((False, k, tuple(map(s.__getitem__, g))))
                continue
            h = g if j == lev.base else tuple(map(uinv.__getitem__, g))
            if h != ident and self._sift(h, k + 1) != ident:
                stack.append((True, k + 1, h))

    def _add_generator(self, g: Perm) -> bool:
        """Grow the group by ``g``; returns False if ``g`` was already a member."""
        self._chain()
        if self._sift(g, 0) == self._id:
            return False
        self._gens.append(g)
        self._extend(g)
        return True

    # -- queries -------------------------------------------------------------

    @property
    def generators(self) -> list[Permutation]:
        return [Permutation._raw(g) for g in self._gens]

    @property
    def base(self) -> list[int]:
        return [lev.base for lev in self._chain()]

    def transversal_sizes(self) -> list[int]:
        return [len(lev.trans) for lev in self._chain()]

    def strong_generators(self, level: int) -> list[Permutation]:
        """Generators of the pointwise stabilizer of the first ``level`` base points."""
        chain = self._chain()
        seen, out = set(), []
        for lev in chain[level:]:
            for g in lev.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(Permutation._raw(g))
        return out

    def order(self) -> int:
        n = 1
        for lev in self._chain():
            n *= len(lev.trans)
        return n

    def _contains_raw(self, g: Perm) -> bool:
        self._chain()
        return self._sift(g, 0) == self._id

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise UsageError(f"degree {g.degree} element against a group of degree {self.degree}")
        return self._contains_raw(g.images)

    __contains__ = contains

    def is_subgroup_of(self, other: PermutationGroup) -> bool:
        return all(other._contains_raw(g) for g in self._gens)

    def __eq__(self, other):
        if not isinstance(other, PermutationGroup) or other.degree != self.degree:
            return NotImplemented
        return self.order() == other.order() and self.is_subgroup_of(other)

    __hash__ = None

    def is_trivial(self) -> bool:
        return not self._gens

    def is_abelian(self) -> bool:
        gs = self._gens
        return all(_mul(g, h) == _mul(h, g) for i, g in enumerate(gs) for h in gs[i + 1 :])

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, gens={len(self._gens)}, order={self.order()})"


def group_order(G: PermutationGroup) -> int:
    return G.order()


def contains(G: PermutationGroup, g: Permutation) -> bool:
    return G.contains(g)


def _normal_closure_raw(ambient: PermutationGroup, S: Iterable[Perm], start: PermutationGroup | None = None) -> PermutationGroup:
    N = PermutationGroup._from_raw(ambient.degree, start._gens if start else ())
    pending = list(N._gens)
    for s in S:
        if N._add_generator(s):
            pending.append(s)
    conj = [(x, _inv(x)) for x in ambient._gens]
    while pending:
        g = pending.pop()
        for x, xi in conj:
            y = _mul(_mul(xi, g), x)
            if N._add_generator(y):
                pending.append(y)
    return N


def normal_closure(G: PermutationGroup, S: Sequence[Permutation]) -> PermutationGroup:
    """Smallest normal subgroup of ``G`` containing ``S``."""
    for s in S:
        if not G.contains(s):
            raise UsageError(f"{s!r} is not an element of the ambient group")
    return _normal_closure_raw(G, [s.images for s in S])


def commutator_subgroup(H: PermutationGroup, K: PermutationGroup, ambient: PermutationGroup) -> PermutationGroup:
    """``[H, K]`` for ``H`` and ``K`` normal in ``ambient``."""
    comms = [_comm(h, k) for h in H._gens for k in K._gens]
    return _normal_closure_raw(ambient, comms)


def derived_subgroup(G: PermutationGroup, ambient: PermutationGroup | None = None) -> PermutationGroup:
    return commutator_subgroup(G, G, ambient or G)


def derived_series(G: PermutationGroup, n_max: int) -> list[PermutationGroup]:
    """``[G, G', G'', ...]`` up to ``G^(n_max)``, stopping early once a term is trivial."""
    series = [G]
    while len(series) <= n_max and not series[-1].is_trivial():
        series.append(commutator_subgroup(series[-1], series[-1], G))
    return series


def lower_central(G: PermutationGroup, k: int) -> PermutationGroup:
    """``gamma_k(G)`` with ``gamma_2 = G'`` and ``gamma_(k+1) = [gamma_k, G]``."""
    if k < 2:
        raise UsageError(f"lower central term needs k >= 2, got {k}")
    term = commutator_subgroup(G, G, G)
    for _ in range(k - 2):
        term = commutator_subgroup(term, G, G)
    return term


def level_stabilizers(G: PermutationGroup, p: int, n_total: int) -> list[PermutationGroup]:
    """Kernels of ``G`` on levels ``0..n_total`` (leaves of depth ``n_total``), from one chain.

    Leaves are in lexicographic order, so a level-``k`` vertex is a block of
    ``p^(n_total-k)`` consecutive points.  ``G`` is rebuilt on the vertices of
    levels ``1..n_total-1`` plus the leaves, with the vertices as base prefix in
    level order; each kernel is then a tail of that chain.  Tails made of leaf
    base points are copied out as they are; the others keep only their strong
    generators and rebuild.
    """
    if G.degree != p**n_total:
        raise UsageError(f"degree {G.degree} is not {p}^{n_total}")
    offsets, off = [], 0
    for k in range(1, n_total):
        offsets.append(off)
        off += p**k
    nv = off

    def lift(g: Perm) -> Perm:
        out = []
        for k in range(1, n_total):
            shift = p ** (n_total - k)
            out.extend(offsets[k - 1] + g[i * shift] // shift for i in range(p**k))
        out.extend(nv + x for x in g)
        return tuple(out)

    big = PermutationGroup._from_raw(nv + G.degree, map(lift, G._gens))
    big._prefix = tuple(range(nv))
    chain = big._chain()
    out = [G]
    for k in range(1, n_total):
        tail = chain[offsets[k - 1] + p**k :]
        if all(lev.base >= nv for lev in tail if lev.gens or len(lev.trans) > 1):
            out.append(_chain_tail(G.degree, tail, nv))
        else:
            # deeper vertices are still base points: only the generators carry over
            gens = dict.fromkeys(g for lev in tail for g in lev.gens)
            out.append(PermutationGroup._from_raw(G.degree, (tuple(x - nv for x in g[nv:]) for g in gens)))
    out.append(PermutationGroup(G.degree))
    return out


def _chain_tail(degree: int, levels: list[_Level], drop: int) -> PermutationGroup:
    """The group whose chain is ``levels`` with the first ``drop`` points removed."""
    H = PermutationGroup(degree)

    def cut(g: Perm) -> Perm:
        return tuple(x - drop for x in g[drop:])

    seen = set()
    H._levels = []
    for lev in levels:
        if len(lev.trans) == 1 and not lev.gens:
            continue
        new = _Level(lev.base - drop, H._id)
        new.gens = [cut(g) for g in lev.gens]
        new.trans = {j - drop: cut(u) for j, u in lev.trans.items()}
        new.inv = {j - drop: cut(u) for j, u in lev.inv.items()}
        H._levels.append(new)
        for g in new.gens:
            if g not in seen and g != H._id:
                seen.add(g)
                H._gens.append(g)
    return H


def level_stabilizer(G: PermutationGroup, p: int, n_total: int, k: int) -> PermutationGroup:
    """Kernel of the action of ``G`` (on the ``p^n_total`` leaves) on the level-``k`` vertices."""
    if not 0 <= k <= n_total:
        raise UsageError(f"level {k} outside 0..{n_total}")
    if k == 0:
        return G
    return level_stabilizers(G, p, n_total)[k]


def power_subgroup_mod(H: PermutationGroup, N: PermutationGroup, p: int | None = None) -> PermutationGroup:
    """``<N, h^p : h in gens(H)>``, which is ``N H^p`` when ``H/N`` is abelian.

    ``p`` defaults to the prime dividing ``|H|`` (the groups here are p-groups).
    """
    for i, g in enumerate(H._gens):
        for h in H._gens[i + 1 :]:
            if not N._contains_raw(_comm(g, h)):
                raise UsageError("H/N is not abelian")
    if p is None:
        p = _smallest_prime_factor(H.order())
    out = PermutationGroup._from_raw(H.degree, N._gens)
    if p is None:
        return out
    for h in H._gens:
        out._add_generator(_pow(h, p))
    return out


def _smallest_prime_factor(n: int) -> int | None:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n if n > 1 else None


def subgroup_index(G: PermutationGroup, H: PermutationGroup) -> int:
    if not H.is_subgroup_of(G):
        raise UsageError("H is not a subgroup of G")
    return G.order() // H.order()


def log_p(n: int, p: int) -> int:
    """Exact base-p logarithm; raises :class:`NotAPowerError` if ``n`` is not a power of ``p``."""
    k = 0
    m = n
    while m > 1 and m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise NotAPowerError(f"{n} is not a power of {p}")
    return k


def index_log(G: PermutationGroup, H: PermutationGroup, p: int) -> int:
    return log_p(subgroup_index(G, H), p)


def subgroup(G: PermutationGroup, gens: Iterable[Permutation]) -> PermutationGroup:
    return PermutationGroup(G.degree, gens)
