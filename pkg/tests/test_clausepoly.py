import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cpsat.clausepoly import (DensePoly, clause_poly, eval_clause_at, eval_ones_at,
                              formula_poly, hadamard_diag, ones_poly, pattern_table,
                              poly_eval, poly_mul, preadd_transform, premult_transform,
                              var_poly)
from cpsat.field import GF
from cpsat.formula import Clause, parse_clause_spec

from helpers import brute_indicator, clause_pairs, clauses, primes, random_clause

F17 = GF(17)


def cl(spec, V):
    return parse_clause_spec(spec, V)


@pytest.mark.parametrize("m, V, neg, want", [
    (0, 3, False, [0, 1, 0, 1, 0, 1, 0, 1]),
    (1, 3, False, [0, 0, 1, 1, 0, 0, 1, 1]),
    (0, 3, True, [1, 0, 1, 0, 1, 0, 1, 0]),
    (0, 1, False, [0, 1]),
])
def test_var_poly_figures(m, V, neg, want):
    assert var_poly(m, V, neg).tolist() == want


def test_var_poly_range():
    with pytest.raises(ValueError):
        var_poly(3, 3)


@pytest.mark.parametrize("spec, want", [
    ("x0|x1", [0, 1, 1, 1, 0, 1, 1, 1]),
    ("x0|x1|x2", [0, 1, 1, 1, 1, 1, 1, 1]),
    ("x0|~x1|x2", [1, 1, 0, 1, 1, 1, 1, 1]),
    ("x0|~x1", [1, 1, 0, 1, 1, 1, 0, 1]),
])
def test_clause_poly_figures(spec, want):
    assert clause_poly(cl(spec, 3), 3).tolist() == want


def test_x1_or_x3_column_over_five_variables():
    col = clause_poly(cl("x1|x3", 5), 5).tolist()
    block = [0, 0, 1, 1, 0, 0, 1, 1] + [1] * 8
    assert col == block * 2


def test_empty_and_tautological_clauses():
    assert clause_poly(Clause(), 2).tolist() == [0, 0, 0, 0]
    assert clause_poly(Clause.true(), 2).tolist() == [1, 1, 1, 1]


def test_ones_poly():
    assert ones_poly(2).tolist() == [1, 1, 1, 1]
    assert ones_poly(1).tolist() == [1, 1]
    assert poly_eval(ones_poly(2), F17(3)) == 6
    assert eval_ones_at(2, F17(3)).value == 6


def test_premult_examples():
    a = F17(5)
    assert premult_transform(clause_poly(cl("x0", 2), 2), a).tolist() == [1, 5, 1, 5]
    assert premult_transform(clause_poly(cl("x0", 2), 2), F17(1)).tolist() == [1] * 4
    assert premult_transform(ones_poly(2), a).tolist() == [5] * 4
    with pytest.raises(ValueError):
        premult_transform(DensePoly([0, 2]), a)


def test_preadd_examples():
    assert preadd_transform(clause_poly(cl("x0", 3), 3)).support() == [2, 6, 10, 14]
    assert preadd_transform(DensePoly([0, 0])).support() == []
    # ones over V=2 doubled: (1 + x^2)(1 + x^4)
    assert preadd_transform(ones_poly(2)).support() == [0, 2, 4, 6]


@pytest.mark.parametrize("spec, want", [("x0", 13), ("~x0|x1", 3), ("x1", 2)])
def test_scalar_evaluations(spec, want):
    c = cl(spec, 2)
    assert eval_clause_at(c, 2, F17(3)).value == want
    assert poly_eval(clause_poly(c, 2), F17(3)) == want


def test_scalar_eval_doubling_point():
    ev = eval_clause_at(cl("x0", 2), 2, F17(3), doubling=1)
    assert ev.point == 9
    assert ev.value == poly_eval(clause_poly(cl("x0", 2), 2), F17(9))


def test_poly_mul_and_hadamard_grid():
    f0, f1 = clause_poly(cl("x0", 2), 2), clause_poly(cl("x1", 2), 2)
    prod = poly_mul(f0, f1)
    assert prod.tolist()[6] == 1
    assert prod.support() == [3, 4, 5, 6]
    assert hadamard_diag(f0, f1).tolist()[::2] == [0, 0, 0, 1]
    assert poly_mul(f0, DensePoly(np.zeros(4))).support() == []
    with pytest.raises(ValueError):
        poly_mul(f0, ones_poly(3))
    with pytest.raises(ValueError):
        hadamard_diag(f0, ones_poly(3))


def test_hadamard_with_ones_doubles_powers():
    f = clause_poly(cl("x0|~x2", 3), 3)
    assert hadamard_diag(f, ones_poly(3)) == preadd_transform(f)


def test_pattern_table():
    lines = pattern_table([cl("x0|~x1", 3)], 3).splitlines()
    assert lines[0] == "t\tx0|~x1"
    assert [ln.split("\t")[1] for ln in lines[1:]] == list("11011101")


def test_dense_poly_validates_size():
    with pytest.raises(ValueError):
        DensePoly([1, 0, 1])


def test_bit_order_x0_is_least_significant():
    # assignment t=1 sets x0 only
    assert clause_poly(cl("x0", 2), 2).tolist()[1] == 1
    assert clause_poly(cl("x1", 2), 2).tolist()[1] == 0


# -- invariants --------------------------------------------------------------

def test_indicator_random_clauses_up_to_ten_variables():
    rng = random.Random(3)
    for _ in range(1000):
        V = rng.randint(1, 10)
        c = random_clause(rng, V, max_len=V)
        assert clause_poly(c, V).tolist() == brute_indicator(c, V)


@pytest.mark.parametrize("V", range(1, 11))
def test_var_poly_periodicity(V):
    for m in range(V):
        block = [0] * (1 << m) + [1] * (1 << m)
        assert var_poly(m, V).tolist() == block * (1 << (V - m - 1))


@pytest.mark.parametrize("V", range(1, 9))
def test_negation_complement(V):
    for m in range(V):
        total = var_poly(m, V).coeffs + var_poly(m, V, True).coeffs
        assert total.tolist() == ones_poly(V).tolist()


@given(st.integers(1, 10).flatmap(lambda V: st.tuples(st.just(V), clauses(V, max_len=V))),
       primes(), st.integers(0, 10 ** 6))
def test_scalar_matches_dense_evaluation(vc, p, x):
    V, c = vc
    xe = GF(p)(x)
    assert eval_clause_at(c, V, xe).value == poly_eval(clause_poly(c, V), xe)


@given(st.integers(1, 8).flatmap(lambda V: st.tuples(st.just(V), clauses(V, max_len=V))),
       primes(), st.integers(0, 10 ** 6))
def test_preadd_law(vc, p, x):
    V, c = vc
    xe = GF(p)(x)
    f = clause_poly(c, V)
    assert poly_eval(preadd_transform(f), xe) == poly_eval(f, xe * xe)


@pytest.mark.parametrize("V", range(1, 5))
def test_premult_map_exhaustive(V):
    F = GF(101)
    for mask in range(1 << (1 << V)):
        f = DensePoly([(mask >> t) & 1 for t in range(1 << V)])
        for a in (0, 2, 57, 100):
            h = premult_transform(f, F(a)).tolist()
            assert h == [a if bit else 1 for bit in f.tolist()]


@given(clause_pairs(max_vars=8))
def test_diagonal_law(pair):
    V, A, B = pair
    diag = hadamard_diag(clause_poly(A, V), clause_poly(B, V)).tolist()
    for t in range(1 << V):
        assert diag[2 * t] == int(A.satisfied_by_index(t) and B.satisfied_by_index(t))
    assert not any(diag[1::2])
    assert diag[::2] == formula_poly([A, B], V).tolist()


@given(clause_pairs(max_vars=6), primes(), st.integers(0, 10 ** 6))
def test_poly_mul_is_evaluation_homomorphism(pair, p, x):
    V, A, B = pair
    xe = GF(p)(x)
    fa, fb = clause_poly(A, V), clause_poly(B, V)
    assert poly_eval(poly_mul(fa, fb), xe) == poly_eval(fa, xe) * poly_eval(fb, xe)
