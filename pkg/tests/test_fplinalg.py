import itertools

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from ggs.errors import UsageError
from ggs.fplinalg import (
    FpMatrix,
    FpVector,
    binomial_mod,
    check_odd_prime,
    inv_mod,
    kernel_basis,
    rank,
    row_reduce,
    same_row_space,
    span_rank,
)
from ggs.tuples import second_symmetry_matrix, symmetry_matrix


def matrices(p, max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r
            ).map(lambda rows: FpMatrix(p, rows, c))
        )
    )


def test_residues_are_canonical():
    v = FpVector(5, [-1, 7, 5])
    assert v.entries == (4, 2, 0)
    assert FpMatrix(3, [[-1, 4]]).rows == ((2, 1),)


def test_modulus_must_be_odd_prime():
    for bad in (2, 4, 9, 1):
        with pytest.raises(UsageError):
            check_odd_prime(bad)


def test_inverse():
    assert all(x * inv_mod(x, 7) % 7 == 1 for x in range(1, 7))
    with pytest.raises(ZeroDivisionError):
        inv_mod(0, 7)


def test_row_reduce_fixed_points():
    z = FpMatrix.zero(5, 3, 3)
    i = FpMatrix.identity(5, 3)
    assert row_reduce(z) == z
    assert row_reduce(i) == i


def test_rank_examples():
    assert rank(FpMatrix.zero(3, 3, 3)) == 0
    assert rank(FpMatrix.identity(7, 7)) == 7
    assert rank(FpMatrix(3, [[1, 1, 1]] * 3)) == 1


def test_kernel_examples():
    assert kernel_basis(FpMatrix.identity(5, 4)) == []
    assert len(kernel_basis(FpMatrix.zero(3, 2, 2))) == 2


def test_symmetry_kernel_is_the_symmetric_tuples():
    p = 5
    basis = kernel_basis(symmetry_matrix(p))
    assert len(basis) == 2
    sym = [e for e in itertools.product(range(p), repeat=p - 1) if all(e[i] == e[p - 2 - i] for i in range(p - 1))]
    assert span_rank(p, sym, p - 1) == 2
    assert span_rank(p, sym + [b.entries for b in basis], p - 1) == 2


# second-symmetry matrices after elimination, as displayed (rows = displayed columns)
N_DD = {
    5: [[1, -3, 3, -1]],
    7: [[1, 0, 2, -2, 0, -1], [0, 1, -3, 3, -1, 0]],
}


@pytest.mark.parametrize("p", [5, 7])
def test_second_symmetry_matrix_reduces_to_displayed_form(p):
    assert same_row_space(second_symmetry_matrix(p), FpMatrix(p, N_DD[p], p - 1))


def test_binomial_examples():
    assert binomial_mod(4, 2, 3) == 0
    assert all(binomial_mod(n, 0, p) == 1 for n in range(20) for p in (3, 5, 7))
    assert binomial_mod(7, 3, 5) == 0
    assert binomial_mod(2, 5, 7) == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_pascal_recurrence(p):
    for n in range(1, 3 * p + 1):
        for k in range(1, 3 * p + 1):
            assert binomial_mod(n, k, p) == (binomial_mod(n - 1, k, p) + binomial_mod(n - 1, k - 1, p)) % p


@seed(1)
@settings(max_examples=200)
@given(st.sampled_from([3, 5, 7]).flatmap(matrices))
def test_kernel_rank_and_idempotence(m):
    ker = kernel_basis(m)
    assert all(m.apply(v).is_zero() for v in ker)
    assert rank(m) + len(ker) == m.ncols
    r = row_reduce(m)
    assert row_reduce(r) == r
    assert same_row_space(r, m)


def test_apply_length_mismatch():
    with pytest.raises(UsageError):
        FpMatrix.identity(3, 2).apply([1, 2, 3])
