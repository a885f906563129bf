import itertools
import random

import pytest

from ggs.circulant import (
    LevelVector,
    circ_dim,
    circ_dim_of_set,
    circulant_rank_by_elimination,
    commutator_vector,
    commutator_vectors,
    flag_member,
    koenig_rados_rank,
    pascal_matrix,
    profile,
    r_map,
    r_map_closed_form,
    stab_rank_t,
    theta_b,
    theta_c,
    w_codim,
)
from ggs.errors import UsageError
from ggs.fplinalg import FpMatrix, rank
from ggs.tuples import DefiningTuple, all_tuples, classify, is_symmetric, second_difference


def V(p, *xs):
    return LevelVector(p, xs)


def T(p, *e):
    return DefiningTuple(p, e)


def test_koenig_rados_examples():
    for p in (3, 5, 7):
        assert koenig_rados_rank(LevelVector(p, [1] * p)) == 1
        assert koenig_rados_rank(LevelVector.placed(p, p, {0: 1})) == p
        assert koenig_rados_rank(LevelVector(p, [0] * p)) == 0
    assert koenig_rados_rank(V(3, 0, 1, 2)) == 2


def test_r_map_examples():
    assert r_map(V(5, 0, 0, 0, 0, 0)) == (0,) * 5
    assert r_map(V(3, 1, 1, 1)) == (1, 0, 0)
    r = r_map(V(5, 0, 0, 0, 0, 1))
    assert (r[4], r[3], r[2]) == (1, 4, 1)


def test_r_map_top_components_are_moment_sums():
    rng = random.Random(1)
    for p in (5, 7):
        for _ in range(50):
            d = [rng.randrange(p) for _ in range(p)]
            r = r_map(d, p)
            assert r[p - 1] == sum(d) % p
            assert r[p - 2] == sum(i * x for i, x in enumerate(d)) % p
            assert r[p - 3] == sum(i * (i - 1) // 2 * x for i, x in enumerate(d)) % p


@pytest.mark.parametrize("p", [3, 5, 7])
def test_r_map_matrix_is_pascal(p):
    # column j of the map's matrix is r_map(b_j), listed from R_p down to R_1
    cols = [tuple(reversed(r_map(LevelVector.placed(p, p, {j: 1})))) for j in range(p)]
    assert FpMatrix.from_columns(p, cols) == pascal_matrix(p, p)
    for j in range(p):
        assert r_map(LevelVector.placed(p, p, {j: 1})) == r_map_closed_form(LevelVector.placed(p, p, {j: 1}))
    # Circ_i is cut out by R_(i+1) = ... = R_p = 0, i.e. by the first p - i Pascal rows
    pascal = pascal_matrix(p, p)
    for i in range(p + 1):
        assert rank(FpMatrix(p, pascal.rows[: p - i], p)) == p - i


@pytest.mark.parametrize("p", [3, 5])
def test_flag_dimensions_by_counting(p):
    counts = [0] * (p + 1)
    for d in itertools.product(range(p), repeat=p):
        counts[circ_dim(LevelVector(p, d))] += 1
    for i in range(p + 1):
        assert sum(counts[: i + 1]) == p**i


def test_circ_dim_examples():
    assert circ_dim(V(3, 0, 0, 0)) == 0
    assert circ_dim(V(3, 1, 1, 1)) == 1
    assert circ_dim(V(3, 0, 1, 2)) == 2
    assert circ_dim_of_set([]) == 0
    assert circ_dim_of_set([V(3, 1, 1, 1), V(3, 0, 1, 2)]) == 2
    assert circ_dim_of_set([LevelVector.placed(7, 7, {0: 1})]) == 7


def test_flag_member_examples():
    assert flag_member(V(3, 2, 0, 1), 3)
    assert flag_member(V(3, 0, 0, 0), 0)
    assert not flag_member(V(3, 1, 1, 1), 0)
    assert flag_member(V(3, 1, 1, 1), 1)
    with pytest.raises(UsageError):
        flag_member(V(3, 1, 1, 1), 4)


@pytest.mark.parametrize("p", [3, 5])
def test_three_ranks_agree_exhaustively(p):
    for d in itertools.product(range(p), repeat=p):
        v = LevelVector(p, d)
        k = circ_dim(v)
        assert k == koenig_rados_rank(v) == circulant_rank_by_elimination(v)
        assert r_map(v) == r_map_closed_form(v)
        assert circ_dim(v.shift()) == k


@pytest.mark.parametrize("p", [7, 11])
def test_three_ranks_agree_randomly(p):
    rng = random.Random(1)
    for _ in range(1000):
        v = LevelVector(p, [rng.randrange(p) for _ in range(p)])
        assert circ_dim(v) == koenig_rados_rank(v) == circulant_rank_by_elimination(v)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_flag_spaces_are_invariant_subspaces(p):
    rng = random.Random(1)
    for _ in range(500):
        i = rng.randrange(p + 1)
        u = LevelVector(p, [rng.randrange(p) for _ in range(p)])
        w = LevelVector(p, [rng.randrange(p) for _ in range(p)])
        if flag_member(u, i):
            assert i == p or flag_member(u, i + 1)
        if flag_member(u, i) and flag_member(w, i):
            k = rng.randrange(p)
            assert flag_member(LevelVector(p, (x + k * y for x, y in zip(u, w))), i)
            assert flag_member(u.shift(rng.randrange(p)), i)


def test_profile():
    pr = profile(V(3, 1, 1, 1))
    assert pr.r_values == (1, 0, 0) and pr.dim == 1


def test_theta_examples():
    assert theta_b(T(3, 1, 2)).coords == (0, 1, 2)
    assert theta_b(T(5, 1, 0, 0, 1)).coords == (0, 1, 0, 0, 1)
    assert theta_b(T(5, 1, 1, 0, 0)).coords == (0, 1, 1, 0, 0)
    assert theta_c(T(3, 1, 2)).coords == (2, 2, 2)
    assert theta_c(T(5, 1, 0, 0, 1)).coords == (1, 4, 1, 0, 4)
    assert theta_c(T(5, 1, 1, 1, 0)).coords == (0, 4, 0, 0, 1)


def test_stab_rank_examples():
    assert stab_rank_t(T(3, 1, 2)) == 2
    assert stab_rank_t(T(3, 0, 1)) == 3
    assert stab_rank_t(T(5, 1, 1, 1, 0)) == 5


@pytest.mark.parametrize("p", [3, 5, 7])
def test_t_in_range(p):
    assert {stab_rank_t(e) for e in all_tuples(p)} <= set(range(2, p + 1))


def test_commutator_vector_examples():
    assert commutator_vector(T(5, 1, 0, 0, 1), 1).coords == (1, 0, 4, 0, 0)
    assert commutator_vector(T(5, 1, 0, 0, 1), 2).coords == (0, 4, 1, 0, 0)
    assert commutator_vector(T(3, 1, 2), 1).coords == (1, 1, 1)
    with pytest.raises(UsageError):
        commutator_vector(T(3, 1, 2), 2)
    with pytest.raises(UsageError):
        commutator_vector(T(5, 1, 0, 0, 1), 0)


def test_w_codim_examples():
    assert w_codim(T(5, 1, 1, 0, 0)) == 0
    assert w_codim(T(5, 1, 0, 0, 1)) == 1
    assert w_codim(T(5, 1, 0, 4, 3)) == 2


def _w_codim_matches(e):
    c = classify(e)
    return w_codim(e) == c.con_eprime + c.sym_esecond


@pytest.mark.parametrize("p", [3, 5])
def test_w_codim_case_analysis_exhaustive(p):
    assert all(_w_codim_matches(e) for e in all_tuples(p))


def test_w_codim_case_analysis_sampled_p7():
    rng = random.Random(1)
    n = 0
    while n < 500:
        e = [rng.randrange(7) for _ in range(6)]
        if len(set(e)) > 1:
            assert _w_codim_matches(DefiningTuple(7, e))
            n += 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_first_commutator_vector_sums_to_zero_when_second_difference_symmetric(p):
    for e in all_tuples(p):
        if is_symmetric(second_difference(e)):
            assert r_map(commutator_vector(e, 1))[p - 1] == 0
            assert len(commutator_vectors(e)) == (p - 1) // 2
