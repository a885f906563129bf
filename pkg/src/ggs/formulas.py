"""Closed-form logarithmic indices and the lattice of subgroups near the top of G.

All values are base-p logarithms of indices and are computed in exact integer
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ggs.circulant import stab_rank_t
from ggs.errors import UsageError
from ggs.tuples import DefiningTuple, TupleClass, classify


def _geometric(p: int, k: int) -> int:
    """``(p^k - 1) / (p - 1)`` for ``k >= 0``."""
    return (p**k - 1) // (p - 1)


def derived_index_log(e: DefiningTuple, n: int) -> int:
    """``log_p |G : G^(n)|``."""
    if n < 1:
        raise UsageError(f"derived index needs n >= 1, got {n}")
    if n == 1:
        return 2
    p = e.p
    c = classify(e)
    return p ** (n - 2) * (p + c.con_eprime + c.sym_esecond) - _geometric(p, n - 1) * c.sym_e + 1


def second_derived_index_log(e: DefiningTuple) -> int:
    c = classify(e)
    return e.p + 1 + c.con_eprime + c.sym_esecond - c.sym_e


def _stabilizer_log(e: DefiningTuple, n: int, t: int | None, sign: int) -> int:
    if n < 1:
        raise UsageError(f"stabilizer index needs n >= 1, got {n}")
    if n == 1:
        return 1
    p = e.p
    if t is None:
        t = stab_rank_t(e)
    return t * p ** (n - 2) + sign * _geometric(p, n - 2) * classify(e).sym_e + 1


def stabilizer_index_log(e: DefiningTuple, n: int, t: int | None = None) -> int:
    """``log_p |G : Stab_G(n)|``; ``t`` is the circulant rank of ``(0, e)``.

    Symmetric tuples lose ``(p^(n-2) - 1)/(p - 1)`` against the rank term,
    matching brute force in the congruence quotients.
    """
    return _stabilizer_log(e, n, t, -1)


def printed_stabilizer_index_log(e: DefiningTuple, n: int, t: int | None = None) -> int:
    """The same count with the symmetric correction added instead of subtracted.

    Kept only so the published variant can be compared with brute force; it
    overcounts for symmetric tuples once ``n >= 3``.
    """
    return _stabilizer_log(e, n, t, +1)


# Subgroups of G on the left, their psi-counterparts inside G x ... x G on the right.
LEFT_CHAIN = ("G", "Stab(1)", "G'", "gamma3", "Stab(2)", "Stab(1)'", "G''", "gamma3(Stab(1))", "Stab(3)")
RIGHT_CHAIN = ("G^p", "Stab(1)^p", "G'^p", "gamma3^p", "Stab(2)^p")


@dataclass
class LatticeEdge:
    upper: str
    lower: str
    predicted: int
    brute: int | None = None
    formula_only: bool = False
    printed: int | None = None
    """Label as originally drawn, when it differs from ``predicted``."""

    @property
    def name(self) -> str:
        return f"{self.upper} -> {self.lower}"

    @property
    def verdict(self) -> str:
        if self.brute is None:
            return "formula_only" if self.formula_only else "pending"
        return "match" if self.brute == self.predicted else "mismatch"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "predicted": self.predicted,
            "brute": self.brute,
            "verdict": self.verdict,
            **({"printed": self.printed} if self.printed is not None else {}),
        }


@dataclass
class IndexReport:
    tuple: DefiningTuple
    t: int
    class_bits: TupleClass
    derived_logs: list[tuple[int, int]] = field(default_factory=list)
    stabilizer_logs: list[tuple[int, int]] = field(default_factory=list)
    lattice_edges: list[LatticeEdge] = field(default_factory=list)

    def edge(self, upper: str, lower: str) -> LatticeEdge:
        for ed in self.lattice_edges:
            if ed.upper == upper and ed.lower == lower:
                return ed
        raise KeyError(f"{upper} -> {lower}")

    def as_dict(self) -> dict:
        c = self.class_bits
        return {
            "p": self.tuple.p,
            "e": list(self.tuple.e),
            "t": self.t,
            "sym_e": c.sym_e,
            "con_eprime": c.con_eprime,
            "sym_esecond": c.sym_esecond,
            "class_value": c.class_value,
            "derived_logs": [[n, v] for n, v in self.derived_logs],
            "stabilizer_logs": [[n, v] for n, v in self.stabilizer_logs],
            "lattice_edges": [ed.as_dict() for ed in self.lattice_edges],
        }


def lattice_edges(p: int, t: int, c: TupleClass) -> list[LatticeEdge]:
    """Every edge of the lattice figure, labelled with its predicted log index.

    Vertical edges on the left are ``log_p |upper : lower|`` for subgroups of G,
    on the right for subgroups of the p-fold product.  A cross edge
    ``(left, right)`` is ``log_p |right : psi(left)|``.
    """
    con, sym2, sym = c.con_eprime, c.sym_esecond, c.sym_e
    E = LatticeEdge
    return [
        E("G", "Stab(1)", 1),
        E("Stab(1)", "G'", 1),
        E("G'", "gamma3", 1),
        E("gamma3", "Stab(2)", t - 2),
        E("Stab(2)", "Stab(1)'", p - t),
        E("Stab(1)'", "G''", con + sym2 - sym),
        E("G''", "gamma3(Stab(1))", p - con - sym2),
        E("gamma3(Stab(1))", "Stab(3)", p * (t - 2)),
        E("G^p", "Stab(1)^p", p),
        E("Stab(1)^p", "G'^p", p),
        E("G'^p", "gamma3^p", p),
        E("gamma3^p", "Stab(2)^p", p * (t - 2)),
        E("Stab(1)", "G^p", p + sym, printed=p - t),
        E("Stab(2)", "Stab(1)^p", t + sym, formula_only=True),
        E("Stab(1)'", "G'^p", sym),
        E("gamma3(Stab(1))", "gamma3^p", 0),
        E("Stab(3)", "Stab(2)^p", 0),
    ]


def lattice_report(e: DefiningTuple, n_max: int = 4) -> IndexReport:
    t = stab_rank_t(e)
    c = classify(e)
    return IndexReport(
        tuple=e,
        t=t,
        class_bits=c,
        derived_logs=[(n, derived_index_log(e, n)) for n in range(1, n_max + 1)],
        stabilizer_logs=[(n, stabilizer_index_log(e, n, t)) for n in range(1, n_max + 1)],
        lattice_edges=lattice_edges(e.p, t, c),
    )
