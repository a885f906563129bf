import json
import os

import pytest

from ggs import permgrp as pg
from ggs.errors import UsageError
from ggs.formulas import derived_index_log, stabilizer_index_log
from ggs.tuples import DefiningTuple, all_tuples
from ggs.verify import (
    CHECKS,
    Quotients,
    VerificationPlan,
    c_power_readout,
    fill_lattice,
    restrict,
    run_plan,
    sample_tuples,
    sweep,
    verify_branching,
    verify_derived,
    verify_g2_structure,
    verify_lattice,
    verify_local_laws,
    verify_small_quotients,
    verify_stabilizers,
)

E3 = DefiningTuple(3, (1, 2))
SYM5 = DefiningTuple(5, (1, 0, 0, 1))
CLASS0 = DefiningTuple(5, (1, 1, 0, 0))


@pytest.fixture(scope="module")
def qs3():
    return Quotients(E3)


# -- derived ---------------------------------------------------------------


@pytest.mark.parametrize(
    "e, n, level, value",
    [(E3, 2, 3, 6), (E3, 1, 2, 2), (CLASS0, 2, 3, 6), (E3, 3, 4, 16)],
)
def test_derived_examples(e, n, level, value):
    r = verify_derived(e, n, level)
    assert (r.predicted, r.computed, r.verdict) == (value, value, "pass")
    assert r.runtime >= 0


def test_derived_keystone_checked_above_minimum_level(qs3):
    r = verify_derived(E3, 1, 3, qs3)
    assert r.notes["stab_n_plus_1_in_derived"] is True
    assert r.verdict == "pass"


def test_derived_default_level_is_n_plus_1():
    assert verify_derived(E3, 2).notes["level"] == 3


@pytest.mark.parametrize("n, level", [(2, 2), (3, 3), (0, 3)])
def test_derived_rejects_levels_below_keystone(n, level):
    with pytest.raises(UsageError):
        verify_derived(E3, n, level)


# -- stabilizers -----------------------------------------------------------


def test_stabilizer_examples():
    assert verify_stabilizers(E3, 3).computed == [1, 3, 7]
    assert verify_stabilizers(SYM5, 2).computed[0] == 1
    r = verify_stabilizers(DefiningTuple(5, (1, 1, 1, 0)), 2)
    assert r.computed == [1, 6] and r.notes["t"] == 5 and r.verdict == "pass"


def test_stabilizers_record_printed_formula_and_consistency():
    r = verify_stabilizers(SYM5, 3)
    assert r.computed == [1, 6, 25] and r.verdict == "pass"
    assert r.notes["printed_formula"] == [1, 6, 27]
    assert r.notes["quotient_consistency"] is True


def test_level_stabilizers_agree_with_membership(qs3):
    # every kernel generator acts trivially on its level and the index matches the closed form
    p, n = 3, 4
    Q = qs3.Q(n)
    for k in range(1, n + 1):
        K = qs3.stab(n, k)
        shift = p ** (n - k)
        assert all(g[i] // shift == i // shift for g in K._gens for i in range(p**n))
        assert qs3.log(Q, K) == stabilizer_index_log(E3, k)


# -- branching -------------------------------------------------------------


def test_branching_p3(qs3):
    r = verify_branching(E3, qs=qs3)
    assert r.verdict == "pass"
    assert r.computed["log_index_stab1_derived_in_product"] == 0
    assert r.computed["psi_third_derived_is_product"] is True


def test_branching_class0_asymmetric():
    r = verify_branching(CLASS0)
    assert r.computed["psi_second_derived_is_product"] is True
    assert r.verdict == "pass"


def test_branching_symmetric_class0_records_nonzero_index():
    # symmetric class-0 tuples: psi(G'') sits at index p^sym inside G' x ... x G'
    r = verify_branching(SYM5)
    assert r.computed["log_index_stab1_derived_in_product"] == 1
    assert r.computed["gamma3_stab1_is_product"] is True
    assert r.computed["stab1_derived_comm_G_derived_is_gamma3_stab1"] is True
    assert r.notes["log_index_second_derived_in_product"] == 1
    assert r.notes["lattice_value"] == 1
    assert r.computed["psi_second_derived_is_product"] is False
    assert r.verdict == "fail"


def test_branching_needs_level_3():
    with pytest.raises(UsageError):
        verify_branching(E3, level=2)


def test_restrict_is_block_action(qs3):
    a, b = (qs3.Q(2)._gens[i] for i in (0, 1))
    # b fixes the first level, its sections are b, a, a^2
    sec = [restrict(b, 3, 2, x) for x in range(3)]
    assert sec[0] == tuple(b[i] for i in range(3))
    assert sec[1] == (1, 2, 0) and sec[2] == (2, 0, 1)


# -- small quotients, local laws ---------------------------------------------


@pytest.mark.parametrize("e", [E3, CLASS0, SYM5])
def test_small_quotients(e):
    r = verify_small_quotients(e)
    assert r.verdict == "pass"
    assert r.computed["log_index_stab1_derived"] == e.p + 1


def test_local_laws_p3():
    r = verify_local_laws(E3)
    assert r.verdict == "pass"
    assert set(r.computed) == {"L1_equals_derived", "L2_equals_derived", "L3_equals_derived",
                               "derived_pth_powers_in_second_derived"}


def test_local_laws_sym5():
    r = verify_local_laws(SYM5)
    assert r.verdict == "pass" and r.notes["level"] == 3


def test_local_laws_depth_bounds():
    with pytest.raises(UsageError):
        verify_local_laws(E3, 4)


# -- G'' structure -----------------------------------------------------------


def test_c_power_readout(qs3):
    c = qs3.derived(2, 1)._gens[0]
    k = c_power_readout(qs3, c)
    assert k in range(1, 3)
    assert c_power_readout(qs3, pg._pow(c, 2)) == (2 * k) % 3
    assert c_power_readout(qs3, qs3.Q(2)._gens[0]) is None


@pytest.mark.parametrize(
    "e, dim, verdict",
    [((1, 1, 0, 0), 5, "pass"), ((1, 0, 4, 3), 3, "pass"), ((1, 0, 0, 1), 4, "fail")],
)
def test_g2_examples(e, dim, verdict):
    r = verify_g2_structure(DefiningTuple(5, e))
    assert r.computed["dim_W"] == dim
    assert r.computed["W_is_flag_space"] is True
    assert r.verdict == verdict
    # the con(e')+sym(e'') exponent is always among the matches
    assert "con_eprime_plus_sym_esecond" in r.notes["matching_candidates"]


def test_g2_dimension_tracks_commutator_codim():
    for e in all_tuples(3):
        r = verify_g2_structure(e)
        assert r.computed["dim_W"] == 3 - r.notes["commutator_vector_codim"]


# -- lattice -----------------------------------------------------------------


@pytest.mark.parametrize("e", [E3, DefiningTuple(3, (1, 0)), SYM5, DefiningTuple(5, (1, 2, 3, 4))])
def test_lattice_edges_match(e):
    r = verify_lattice(e)
    assert r.verdict == "pass", r.notes


def test_fill_lattice_cross_edge_reports_printed_label():
    rep = fill_lattice(SYM5)
    edge = next(ed for ed in rep.lattice_edges if (ed.upper, ed.lower) == ("Stab(1)", "G^p"))
    assert edge.brute == edge.predicted == 6
    assert edge.as_dict()["printed"] == 5 - 5  # p - t with t = 5


# -- plans, sweeps -----------------------------------------------------------


def test_plan_validation():
    with pytest.raises(UsageError):
        VerificationPlan(E3, 1)
    with pytest.raises(UsageError):
        VerificationPlan(E3, 3, ("derived", "bogus"))
    with pytest.raises(UsageError):
        VerificationPlan(E3, 2, ("derived",), n=2)
    VerificationPlan(E3, 2, ("stabilizers",), n=2)


def test_run_plan_records_and_json():
    rep = run_plan(VerificationPlan(E3, 3, ("derived", "small_quotients")))
    assert [r.name for r in rep.records] == ["derived[n=1]", "derived[n=2]", "small_quotients"]
    d = rep.as_dict()
    json.dumps(d)
    assert d["verdict"] == "pass" and d["e"] == [1, 2]


def test_sweep_p3_all_checks():
    res = sweep(3, 3, CHECKS, workers=1)
    assert len(res.reports) == 6 and res.passed == 6 and res.verdict == "pass"
    assert res.seed is None


def test_sweep_is_deterministic_and_ordered():
    tuples = list(all_tuples(3))[::-1]
    one = sweep(3, 3, ("derived", "stabilizers"), tuples=tuples, workers=1).as_dict()
    two = sweep(3, 3, ("derived", "stabilizers"), tuples=tuples, workers=2).as_dict()
    strip = lambda d: [(r["e"], [(x["name"], x["computed"]) for x in r["records"]]) for r in d["reports"]]
    assert strip(one) == strip(two)
    assert [r["e"] for r in one["reports"]] == [list(e.e) for e in tuples]


def test_sweep_rejects_foreign_corpus():
    with pytest.raises(UsageError):
        sweep(3, 3, tuples=[SYM5])


def test_sample_tuples_deterministic():
    a, b = sample_tuples(7, 5, 1), sample_tuples(7, 5, 1)
    assert [e.e for e in a] == [e.e for e in b]
    assert len({e.e for e in a}) == 5
    assert all(len(set(e.e)) > 1 for e in a)
    assert [e.e for e in sample_tuples(7, 5, 2)] != [e.e for e in a]


def test_sweep_p7_sample_head():
    res = sweep(7, 3, ("derived", "stabilizers"), sample=1, seed=1, workers=1)
    assert res.verdict == "pass" and res.seed == 1
    e = DefiningTuple(7, res.reports[0]["e"])
    assert res.reports[0]["records"][1]["computed"] == derived_index_log(e, 2)


@pytest.mark.skipif(not os.environ.get("GGS_SLOW"), reason="set GGS_SLOW=1 for the 50-tuple p=7 sweep")
def test_sweep_p7_sample_50():
    res = sweep(7, 3, ("derived", "stabilizers"), sample=50, seed=1)
    assert res.passed == 50
