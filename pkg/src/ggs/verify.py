"""Brute-force checks of the closed forms inside finite congruence quotients.

The level-``n`` quotient ``Q_n = G / Stab_G(n)`` is the permutation group that
``a`` and ``b`` generate on the ``p^n`` vertices of level ``n``.  A subgroup of
G that contains ``Stab_G(n)`` has the same index in G as its image in ``Q_n``,
so every index below is exact once the level is high enough.  Since
``Stab_G(k+1) <= G^(k)``, the level ``n+1`` quotient already determines
``|G : G^(n)|``.

For a first-level stabilizing element, its sections at the first-level
vertices are just its restrictions to the ``p`` blocks of leaves.  A group of
the form ``K x ... x K`` is therefore realised on the same leaves by copying
the generators of ``K`` into every block.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ggs import permgrp as pg
from ggs.circulant import LevelVector, flag_member, stab_rank_t, w_codim
from ggs.errors import UsageError
from ggs.fplinalg import span_rank
from ggs.formulas import (
    derived_index_log,
    lattice_report,
    printed_stabilizer_index_log,
    stabilizer_index_log,
)
from ggs.permgrp import Permutation, PermutationGroup
from ggs.treeauto import TreeWord, c_word, generator_images, truncate
from ggs.tuples import DefiningTuple, all_tuples, classify

CHECKS = ("derived", "stabilizers", "branching", "small_quotients", "local_laws", "g2_structure")


@dataclass
class CheckRecord:
    name: str
    statement: str
    predicted: object
    computed: object
    verdict: str
    runtime: float = 0.0
    notes: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "predicted": self.predicted,
            "computed": self.computed,
            "verdict": self.verdict,
            "runtime": round(self.runtime, 4),
            "notes": self.notes,
        }


@dataclass
class VerificationPlan:
    tuple: DefiningTuple
    max_level: int
    checks: tuple[str, ...] = CHECKS
    n: int | None = None

    def __post_init__(self):
        if self.max_level < 2:
            raise UsageError(f"max_level must be at least 2, got {self.max_level}")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
        if self.n is not None and "derived" in self.checks:
            _check_keystone(self.n, self.max_level)


@dataclass
class VerificationReport:
    tuple: DefiningTuple
    level: int
    checks: tuple[str, ...]
    records: list[CheckRecord] = field(default_factory=list)
    seed: int | None = None

    @property
    def verdict(self) -> str:
        return "fail" if any(r.verdict == "fail" for r in self.records) else "pass"

    def as_dict(self) -> dict:
        return {
            "p": self.tuple.p,
            "e": list(self.tuple.e),
            "level": self.level,
            "checks": list(self.checks),
            "seed": self.seed,
            "verdict": self.verdict,
            "records": [r.as_dict() for r in self.records],
        }


def _check_keystone(n: int, level: int) -> None:
    if n < 1:
        raise UsageError(f"derived depth must be >= 1, got {n}")
    need = n + 1
    if level < need:
        raise UsageError(
            f"level {level} is too small for derived depth {n}: "
            f"Stab(n+1) <= G^(n) only makes level >= {need} exact"
        )


class Quotients:
    """Memoised congruence quotients of one GGS-group and their subgroups."""

    def __init__(self, e: DefiningTuple):
        self.e = e
        self.p = e.p
        self._cache: dict = {}

    def _memo(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def Q(self, n: int) -> PermutationGroup:
        def build():
            a, b = generator_images(self.e, n)
            return PermutationGroup._from_raw(len(a), [a, b])

        return self._memo(("Q", n), build)

    def perm(self, w: TreeWord, n: int) -> Permutation:
        return truncate(w, n)

    def derived(self, n: int, k: int) -> PermutationGroup:
        if k == 0:
            return self.Q(n)
        return self._memo(
            ("der", n, k),
            lambda: pg.commutator_subgroup(self.derived(n, k - 1), self.derived(n, k - 1), self.Q(n)),
        )

    def gamma(self, n: int, k: int) -> PermutationGroup:
        if k == 1:
            return self.Q(n)
        if k == 2:
            return self.derived(n, 1)
        return self._memo(
            ("gam", n, k), lambda: pg.commutator_subgroup(self.gamma(n, k - 1), self.Q(n), self.Q(n))
        )

    def stab(self, n: int, k: int) -> PermutationGroup:
        if k == 0:
            return self.Q(n)
        if k == 1:
            # the first-level stabilizer is the normal closure of b
            return self._memo(
                ("stab", n, 1),
                lambda: pg._normal_closure_raw(self.Q(n), [generator_images(self.e, n)[1]]),
            )
        return self._memo(("stabs", n), lambda: pg.level_stabilizers(self.Q(n), self.p, n))[k]

    def stab1_derived(self, n: int) -> PermutationGroup:
        return self._memo(
            ("s1'", n), lambda: pg.commutator_subgroup(self.stab(n, 1), self.stab(n, 1), self.Q(n))
        )

    def gamma3_stab1(self, n: int) -> PermutationGroup:
        return self._memo(
            ("g3s1", n), lambda: pg.commutator_subgroup(self.stab1_derived(n), self.stab(n, 1), self.Q(n))
        )

    def power(self, K: PermutationGroup, n: int) -> PermutationGroup:
        """``K x ... x K`` (p factors) for ``K <= Q_(n-1)``, acting on level ``n``."""
        return product_group([K] * self.p, self.p, n)

    def log(self, G: PermutationGroup, H: PermutationGroup) -> int:
        return pg.index_log(G, H, self.p)


def product_group(factors: Sequence[PermutationGroup], p: int, n: int) -> PermutationGroup:
    """Direct product of subgroups of ``Q_(n-1)``, factor ``x`` acting on the block below ``x``."""
    block = p ** (n - 1)
    gens = []
    for x, K in enumerate(factors):
        off = x * block
        for g in K._gens:
            img = list(range(p**n))
            img[off : off + block] = [off + j for j in g]
            gens.append(tuple(img))
    return PermutationGroup._from_raw(p**n, gens)


def restrict(g: Permutation | tuple, p: int, n: int, x: int) -> tuple:
    """Restriction of a first-level stabilizing permutation to the block below ``x``."""
    images = g.images if isinstance(g, Permutation) else g
    block = p ** (n - 1)
    off = x * block
    return tuple(images[off + j] - off for j in range(block))


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rec = fn(*args, **kwargs)
        rec.runtime = time.perf_counter() - t0
        return rec

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


@_timed
def verify_derived(e: DefiningTuple, n: int, level: int | None = None, qs: Quotients | None = None) -> CheckRecord:
    """``log_p |Q : Q^(n)|`` in the level-``level`` quotient against the closed form."""
    if level is None:
        level = max(n + 1, 2)
    _check_keystone(n, level)
    qs = qs or Quotients(e)
    Q, D = qs.Q(level), qs.derived(level, n)
    brute = qs.log(Q, D)
    notes = {"level": level}
    ok = True
    if level > n + 1:
        contained = qs.stab(level, n + 1).is_subgroup_of(D)
        notes["stab_n_plus_1_in_derived"] = contained
        ok = contained
    predicted = derived_index_log(e, n)
    return CheckRecord(f"derived[n={n}]", "derived_index", predicted, brute, _verdict(ok and brute == predicted), notes=notes)


@_timed
def verify_stabilizers(e: DefiningTuple, level: int, qs: Quotients | None = None) -> CheckRecord:
    """``log_p |Q : Stab(k)|`` for ``k = 1..level`` and the quotient-consistency identity."""
    if level < 1:
        raise UsageError(f"level must be >= 1, got {level}")
    qs = qs or Quotients(e)
    t = stab_rank_t(e)
    Q = qs.Q(level)
    brute = [qs.log(Q, qs.stab(level, k)) for k in range(1, level + 1)]
    predicted = [stabilizer_index_log(e, k, t) for k in range(1, level + 1)]
    consistent = all(
        qs.Q(k + 1).order() == qs.Q(k).order() * qs.stab(k + 1, k).order() for k in range(1, level)
    )
    notes = {
        "t": t,
        "printed_formula": [printed_stabilizer_index_log(e, k, t) for k in range(1, level + 1)],
        "quotient_consistency": consistent,
    }
    return CheckRecord(
        f"stabilizers[level={level}]", "stabilizer_index", predicted, brute,
        _verdict(brute == predicted and consistent), notes=notes,
    )


def branching_level(p: int) -> int:
    return 4 if p == 3 else 3


@_timed
def verify_branching(e: DefiningTuple, level: int | None = None, qs: Quotients | None = None) -> CheckRecord:
    """Branch structure seen through psi inside the level-``level`` quotient.

    * ``psi(gamma_3(Stab(1))) = gamma_3(G)^p``
    * ``log_p [G'^p : psi(Stab(1)')] = sym(e)``
    * ``[Stab(1)', G'] = gamma_3(Stab(1))``
    * ``psi(G^(n)) = (G^(n-1))^p`` for n = 3 (needs level >= 4) and, when the
      class value is 0, for n = 2; otherwise the n = 2 index is only recorded.
    """
    p = e.p
    m = level or branching_level(p)
    if m < 3:
        raise UsageError("branching checks need a quotient of level >= 3")
    qs = qs or Quotients(e)
    c = classify(e)
    Q = qs.Q(m)
    g3s1 = qs.gamma3_stab1(m)
    s1d = qs.stab1_derived(m)

    computed, predicted = {}, {}
    computed["gamma3_stab1_is_product"] = g3s1 == qs.power(qs.gamma(m - 1, 3), m)
    predicted["gamma3_stab1_is_product"] = True

    Gp = qs.power(qs.derived(m - 1, 1), m)
    computed["log_index_stab1_derived_in_product"] = qs.log(Gp, s1d)
    predicted["log_index_stab1_derived_in_product"] = c.sym_e

    computed["stab1_derived_comm_G_derived_is_gamma3_stab1"] = (
        pg.commutator_subgroup(s1d, qs.derived(m, 1), Q) == g3s1
    )
    predicted["stab1_derived_comm_G_derived_is_gamma3_stab1"] = True

    notes = {"level": m, "class_value": c.class_value}
    if m >= 4:
        computed["psi_third_derived_is_product"] = qs.derived(m, 3) == qs.power(qs.derived(m - 1, 2), m)
        predicted["psi_third_derived_is_product"] = True
    prod = qs.power(qs.derived(m - 1, 1), m)
    d2 = qs.derived(m, 2)
    idx2 = qs.log(prod, d2)
    notes["log_index_second_derived_in_product"] = idx2
    # the lattice edges force this index to be con(e') + sym(e'')
    notes["lattice_value"] = c.con_eprime + c.sym_esecond
    if c.class_value == 0:
        computed["psi_second_derived_is_product"] = idx2 == 0
        predicted["psi_second_derived_is_product"] = True
    ok = computed == predicted
    return CheckRecord("branching", "branching_structure", predicted, computed, _verdict(ok), notes=notes)


@_timed
def verify_small_quotients(e: DefiningTuple, qs: Quotients | None = None) -> CheckRecord:
    """Orders and shapes of ``G/G'``, ``G/gamma_3(G)``, ``G/Stab(1)'`` in the level-3 quotient."""
    p = e.p
    qs = qs or Quotients(e)
    n = 3
    Q, D, g3 = qs.Q(n), qs.derived(n, 1), qs.gamma(n, 3)
    a, b = (Permutation._raw(x) for x in generator_images(e, n))
    c = qs.perm(c_word(e), n)
    words = [a, b, a * b, a * b * b, b * a * a * b]
    computed = {
        "log_index_derived": qs.log(Q, D),
        "abelianization_exponent_p": all(D.contains(g**p) for g in (a, b)),
        "log_index_gamma3": qs.log(Q, g3),
        "heisenberg_nonabelian": not g3.contains(c),
        "heisenberg_exponent_p": all(g3.contains(g**p) for g in words + [c]),
        "log_index_stab1_derived": qs.log(Q, qs.stab1_derived(n)),
        "pth_powers_in_derived": all(D.contains(g**p) for g in words),
    }
    predicted = {
        "log_index_derived": 2,
        "abelianization_exponent_p": True,
        "log_index_gamma3": 3,
        "heisenberg_nonabelian": True,
        "heisenberg_exponent_p": True,
        "log_index_stab1_derived": p + 1,
        "pth_powers_in_derived": True,
    }
    return CheckRecord("small_quotients", "small_quotients", predicted, computed, _verdict(computed == predicted))


def local_laws_depth(p: int) -> int:
    return 3 if p == 3 else 2


@_timed
def verify_local_laws(e: DefiningTuple, n_max: int | None = None, qs: Quotients | None = None) -> CheckRecord:
    """Iterated local laws against the derived series, plus ``(G')^p <= G''``.

    ``L_1`` is the normal closure of ``[a, b]``, ``a^p``, ``b^p``; each later
    term is generated by the commutators and p-th powers of the previous one.
    """
    p = e.p
    n_max = n_max or local_laws_depth(p)
    if not 1 <= n_max <= 3:
        raise UsageError(f"local-law depth {n_max} outside 1..3")
    qs = qs or Quotients(e)
    level = max(n_max + 1, 3)
    Q = qs.Q(level)
    a, b = generator_images(e, level)
    L = pg._normal_closure_raw(Q, [pg._comm(a, b), pg._pow(a, p), pg._pow(b, p)])
    computed, predicted = {}, {}
    for k in range(1, n_max + 1):
        if k > 1:
            L = pg.power_subgroup_mod(L, pg.commutator_subgroup(L, L, Q), p)
        computed[f"L{k}_equals_derived"] = L == qs.derived(level, k)
        predicted[f"L{k}_equals_derived"] = True
    lemma = pg.power_subgroup_mod(qs.derived(level, 1), qs.derived(level, 2), p)
    computed["derived_pth_powers_in_second_derived"] = lemma == qs.derived(level, 2)
    predicted["derived_pth_powers_in_second_derived"] = True
    return CheckRecord(
        f"local_laws[n_max={n_max}]", "local_laws", predicted, computed,
        _verdict(computed == predicted), notes={"level": level},
    )


def c_power_readout(qs: Quotients, g: tuple) -> int | None:
    """The ``k`` with ``g = c^k`` modulo ``gamma_3(Q_2)`` for ``g`` in ``Q_2'``; None if absent."""
    p = qs.p
    g3 = qs.gamma(2, 3)
    c = qs.perm(c_word(qs.e), 2).images
    cinv = pg._inv(c)
    h = g
    for k in range(p):
        if g3._contains_raw(h):
            return k
        h = pg._mul(cinv, h)
    return None


def g2_vectors(qs: Quotients) -> list[LevelVector]:
    """Images of the generators of ``G''`` in ``(G'/gamma_3(G))^p``."""
    p = qs.p
    out = []
    for g in qs.derived(3, 2)._gens:
        ks = [c_power_readout(qs, restrict(g, p, 3, x)) for x in range(p)]
        if None in ks:
            raise UsageError("a section of G'' fell outside G'")
        out.append(LevelVector(p, ks))
    return out


@_timed
def verify_g2_structure(e: DefiningTuple, qs: Quotients | None = None) -> CheckRecord:
    """``psi(G'')`` modulo ``gamma_3(G)^p`` against the flag space ``Circ_(p-i)``.

    The asserted exponent is ``i = con(e') + sym(e'') - sym(e)``.  The notes
    list the other candidate exponents and which of them the brute-forced
    dimension agrees with.
    """
    p = e.p
    qs = qs or Quotients(e)
    c = classify(e)
    vecs = g2_vectors(qs)
    dim_w = span_rank(p, [v.coords for v in vecs], p)
    # W is cyclically invariant, so it is a flag space exactly when its vectors fit in Circ_dim
    is_flag_space = all(flag_member(v, dim_w) for v in vecs)
    candidates = {
        "con_eprime_plus_sym_esecond_minus_sym_e": c.con_eprime + c.sym_esecond - c.sym_e,
        "con_e_plus_sym_esecond_minus_sym_e": 0 + c.sym_esecond - c.sym_e,  # con(e) = 0 here
        "con_eprime_plus_sym_esecond": c.con_eprime + c.sym_esecond,
    }
    i = candidates["con_eprime_plus_sym_esecond_minus_sym_e"]
    computed = {"dim_W": dim_w, "W_is_flag_space": is_flag_space}
    predicted = {"dim_W": p - i, "W_is_flag_space": True}
    notes = {
        "candidate_exponents": candidates,
        "matching_candidates": [k for k, v in candidates.items() if p - v == dim_w],
        "commutator_vector_codim": w_codim(e),
    }
    return CheckRecord("g2_structure", "second_derived_structure", predicted, computed,
                       _verdict(computed == predicted), notes=notes)


@_timed
def verify_lattice(e: DefiningTuple, qs: Quotients | None = None) -> CheckRecord:
    """Brute-force every lattice edge that has an independent computation (level 3)."""
    qs = qs or Quotients(e)
    report = fill_lattice(e, qs)
    bad = [ed.name for ed in report.lattice_edges if ed.verdict == "mismatch"]
    return CheckRecord(
        "lattice", "lattice_edges",
        {ed.name: ed.predicted for ed in report.lattice_edges},
        {ed.name: ed.brute for ed in report.lattice_edges},
        _verdict(not bad), notes={"mismatched": bad},
    )


def fill_lattice(e: DefiningTuple, qs: Quotients | None = None):
    qs = qs or Quotients(e)
    report = lattice_report(e)
    n = 3
    left = {
        "G": qs.Q(n),
        "Stab(1)": qs.stab(n, 1),
        "G'": qs.derived(n, 1),
        "gamma3": qs.gamma(n, 3),
        "Stab(2)": qs.stab(n, 2),
        "Stab(1)'": qs.stab1_derived(n),
        "G''": qs.derived(n, 2),
        "gamma3(Stab(1))": qs.gamma3_stab1(n),
        "Stab(3)": PermutationGroup(qs.p**n),
    }
    right = {
        "G^p": qs.power(qs.Q(n - 1), n),
        "Stab(1)^p": qs.power(qs.stab(n - 1, 1), n),
        "G'^p": qs.power(qs.derived(n - 1, 1), n),
        "gamma3^p": qs.power(qs.gamma(n - 1, 3), n),
        "Stab(2)^p": PermutationGroup(qs.p**n),
    }
    groups = {**left, **right}
    for ed in report.lattice_edges:
        if ed.formula_only:
            continue
        upper, lower = groups[ed.upper], groups[ed.lower]
        if ed.upper in left and ed.lower in right:
            upper, lower = lower, upper  # cross edge: |right : psi(left)|
        ed.brute = qs.log(upper, lower)
    return report


_RUNNERS = {
    "small_quotients": lambda e, lv, qs: [verify_small_quotients(e, qs)],
    "branching": lambda e, lv, qs: [verify_branching(e, None, qs)],
    "local_laws": lambda e, lv, qs: [verify_local_laws(e, None, qs)],
    "g2_structure": lambda e, lv, qs: [verify_g2_structure(e, qs)],
    "stabilizers": lambda e, lv, qs: [verify_stabilizers(e, lv, qs)],
}


def run_plan(plan: VerificationPlan) -> VerificationReport:
    e, level = plan.tuple, plan.max_level
    qs = Quotients(e)
    report = VerificationReport(e, level, tuple(plan.checks))
    for name in CHECKS:
        if name not in plan.checks:
            continue
        if name == "derived":
            ns = [plan.n] if plan.n is not None else range(1, level)
            report.records.extend(verify_derived(e, n, level, qs) for n in ns)
        else:
            report.records.extend(_RUNNERS[name](e, level, qs))
    return report


def _run_one(args) -> dict:
    e, level, checks = args
    return run_plan(VerificationPlan(e, level, checks)).as_dict()


def sample_tuples(p: int, k: int, seed: int = 1) -> list[DefiningTuple]:
    """``k`` distinct non-constant tuples drawn with a seeded generator, in draw order."""
    rng = random.Random(seed)
    seen, out = set(), []
    total = p ** (p - 1)
    while len(out) < k:
        code = rng.randrange(total)
        digits = []
        for _ in range(p - 1):
            code, d = divmod(code, p)
            digits.append(d)
        e = tuple(digits)
        if len(set(e)) > 1 and e not in seen:
            seen.add(e)
            out.append(DefiningTuple(p, e))
    return out


@dataclass
class SweepResult:
    p: int
    level: int
    checks: tuple[str, ...]
    seed: int | None
    reports: list[dict]

    @property
    def passed(self) -> int:
        return sum(r["verdict"] == "pass" for r in self.reports)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed == len(self.reports) else "fail"

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "level": self.level,
            "checks": list(self.checks),
            "seed": self.seed,
            "tuples": len(self.reports),
            "passed": self.passed,
            "verdict": self.verdict,
            "reports": self.reports,
        }


def sweep(
    p: int,
    level: int,
    checks: Iterable[str] = CHECKS,
    sample: int | None = None,
    seed: int = 1,
    tuples: Sequence[DefiningTuple] | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Run the selected checks over every tuple (or a seeded sample, or a given corpus).

    Results come back in tuple order whatever the worker count.
    """
    checks = tuple(c for c in CHECKS if c in set(checks))
    VerificationPlan(DefiningTuple(p, [0] * (p - 2) + [1]), level, checks)  # validates arguments
    if tuples is None:
        if sample is None and p > 5:
            sample = 50
        tuples = sample_tuples(p, sample, seed) if sample is not None else list(all_tuples(p))
    else:
        tuples = list(tuples)
        if any(e.p != p for e in tuples):
            raise UsageError("corpus tuples must all use the sweep's prime")
    jobs = [(e, level, checks) for e in tuples]
    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(_run_one, jobs, chunksize=4))
    else:
        reports = [_run_one(j) for j in jobs]
    return SweepResult(p, level, checks, seed if sample is not None else None, reports)
