import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qforge.catalog import resolve
from qforge.errors import BudgetExceededError, DegenerateLatticeError
from qforge.lattice import (
    QuadLattice,
    all_values_divisible_by,
    diag_lattice,
    direct_sum,
    discriminant_group,
    enumerate_values,
    from_rows,
    iter_search_vectors,
    min_nonzero_abs,
    orthogonal_complement,
    pairing,
    qvalue,
    saturate,
    saturation_index,
    signature,
    span,
)

U = from_rows([[0, 1], [1, 0]], label="U")


def test_signature_hyperbolic_plane():
    assert signature(U) == (1, 1)


def test_signature_definite():
    assert signature(diag_lattice(2, 5)) == (2, 0)


def test_signature_k3():
    assert signature(resolve("K3")) == (3, 19)


def test_signature_degenerate_rejected():
    with pytest.raises(DegenerateLatticeError):
        signature(diag_lattice(1, 0))


def test_qvalue_and_pairing():
    assert qvalue(U, (1, 0)) == 0
    assert qvalue(diag_lattice(30, -10), (1, 1)) == 20
    assert qvalue(diag_lattice(5, -10), (1, 1)) == -5
    assert pairing(U, (1, 0), (0, 1)) == 1


def test_saturate_index_two():
    sub = span(diag_lattice(1, 1), [(2, 0), (0, 1)])
    sat = saturate(sub)
    assert sat.basis == ((1, 0), (0, 1))
    assert saturation_index(sub) == 2


def test_saturate_primitive_is_identity():
    sub = span(diag_lattice(1, 1), [(1, 0)])
    assert saturate(sub).basis == ((1, 0),)
    assert saturation_index(sub) == 1


def test_saturation_index_diagonal():
    assert saturation_index(span(diag_lattice(1, 1), [(2, 0), (0, 3)])) == 6


def test_saturate_in_rank5():
    # the coordinate matrix has coprime 2x2 minors, so the span is primitive
    amb = direct_sum(U, U, diag_lattice(2))
    sub = span(amb, [(3, 5, 0, 0, 0), (0, 0, 1, -5, 0)])
    assert saturation_index(sub) == 1
    sat = saturate(sub)
    assert sat.rank == 2
    assert saturation_index(sat) == 1


def test_orthogonal_complement_isotropic():
    comp = orthogonal_complement(span(U, [(1, 0)]))
    assert comp.basis == ((1, 0),)


def test_orthogonal_complement_definite():
    comp = orthogonal_complement(span(diag_lattice(1, -1, -1), [(1, 0, 0)]))
    assert comp.basis == ((0, 1, 0), (0, 0, 1))


def test_orthogonal_complement_block():
    amb = direct_sum(U, U, diag_lattice(2))
    comp = orthogonal_complement(span(amb, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)]))
    assert comp.basis == ((0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1))


def test_discriminant_unimodular_trivial():
    assert discriminant_group(U).is_trivial()
    assert discriminant_group(resolve("E8")).is_trivial()


def test_discriminant_minus_two():
    from fractions import Fraction

    dg = discriminant_group(diag_lattice(-2))
    assert dg.orders == (2,)
    assert dg.even
    # q = -1/2 mod 2Z, canonical representative 3/2
    assert dg.qvalues[0] == Fraction(3, 2)


def test_discriminant_scaled():
    dg = discriminant_group(diag_lattice(5, -5))
    assert dg.orders == (5, 5)
    assert not dg.even
    assert sorted(dg.qvalues) == [  # 1/5 and -1/5 mod Z
        pytest.approx(v) for v in sorted([1 / 5, 4 / 5])
    ]
    assert dg.size == 25 == abs(diag_lattice(5, -5).det())
    assert not dg.has_2_torsion()


def test_enumerate_values_hyperbolic_plane():
    assert set(enumerate_values(U, 1)) == {-2, 0, 2}


def test_enumerate_values_minus_two():
    assert set(enumerate_values(diag_lattice(-2), 3)) == {-2, -8, -18}


def test_enumerate_values_min_abs():
    best, witness = min_nonzero_abs(diag_lattice(30, -10), 100)
    assert best == 10
    assert abs(qvalue(diag_lattice(30, -10), witness)) == 10


def test_enumerate_budget_guard():
    with pytest.raises(BudgetExceededError):
        enumerate_values(diag_lattice(*([1] * 8)), 100, budget=10**6)


def test_enumerate_witnesses_verify():
    latt = from_rows([[2, 1], [1, -4]])
    for value, witness in enumerate_values(latt, 3).items():
        assert qvalue(latt, witness) == value


def test_enumerate_monotone_in_height():
    latt = from_rows([[2, 1], [1, -4]])
    small = set(enumerate_values(latt, 2))
    big = set(enumerate_values(latt, 4))
    assert small <= big


def test_divisibility_scan():
    ok, _ = all_values_divisible_by(diag_lattice(20, -10), 5, 50)
    assert ok
    ok, witness = all_values_divisible_by(diag_lattice(20, -9), 5, 50)
    assert not ok and witness is not None


def test_search_order_canon():
    first = list(iter_search_vectors(2, 2))
    assert first == [(1, 0), (0, 1), (1, 1), (1, -1)]


def _random_lattice(rng: random.Random, rank: int) -> QuadLattice:
    while True:
        rows = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            for j in range(i, rank):
                rows[i][j] = rows[j][i] = rng.randint(-9, 9)
        latt = from_rows(rows)
        if latt.det() != 0:
            return latt


@given(st.integers(0, 10**6), st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_saturate_properties(seed, rank):
    rng = random.Random(seed)
    latt = _random_lattice(rng, rank)
    k = rng.randint(1, rank)
    rows = []
    while len(rows) < k:
        cand = tuple(rng.randint(-4, 4) for _ in range(rank))
        from qforge.linalg import rational_rank

        if any(cand) and rational_rank(rows + [cand]) == len(rows) + 1:
            rows.append(cand)
    sub = span(latt, rows)
    sat = saturate(sub)
    # idempotent and primitive
    assert saturate(sat).basis == sat.basis
    assert saturation_index(sat) == 1
    # index relation between determinants
    idx = saturation_index(sub)
    from qforge.linalg import det_bareiss

    det_sub = det_bareiss(sub.gram())
    det_sat = det_bareiss(sat.gram())
    assert det_sub == idx * idx * det_sat
    # sub is contained in its saturation
    from qforge.linalg import solve

    for v in sub.basis:
        x = solve(tuple(zip(*sat.basis)), v)
        assert x is not None and all(f.denominator == 1 for f in x)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_double_complement_is_saturation(seed):
    rng = random.Random(seed)
    latt = _random_lattice(rng, 4)
    while True:
        v = tuple(rng.randint(-3, 3) for _ in range(4))
        if any(v) and qvalue(latt, v) != 0:
            break
    sub = span(latt, [v])
    double = orthogonal_complement(orthogonal_complement(sub))
    assert double.basis == saturate(sub).basis


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=25, deadline=None)
def test_signature_additivity(seed, r1, r2):
    rng = random.Random(seed)
    a = _random_lattice(rng, r1)
    b = _random_lattice(rng, r2)
    sa, sb = signature(a), signature(b)
    assert signature(direct_sum(a, b)) == (sa[0] + sb[0], sa[1] + sb[1])


def test_discriminant_size_matches_det():
    for entries in [(3, 5), (2, -4), (6, -9, 2)]:
        latt = diag_lattice(*entries)
        assert discriminant_group(latt).size == abs(latt.det())


def test_dimension_mismatch_errors():
    from qforge.errors import DimensionMismatchError

    with pytest.raises(DimensionMismatchError):
        qvalue(U, (1, 0, 0))
    with pytest.raises(DimensionMismatchError):
        pairing(U, (1, 0), (1,))
    with pytest.raises(DimensionMismatchError):
        from_rows([[0, 1], [2, 0]])  # not symmetric


def test_discriminant_group_degenerate_rejected():
    with pytest.raises(DegenerateLatticeError):
        discriminant_group(diag_lattice(2, 0))


def test_span_rejects_dependent_basis():
    from qforge.errors import DimensionMismatchError

    with pytest.raises(DimensionMismatchError):
        span(diag_lattice(1, 1), [(1, 0), (2, 0)])
