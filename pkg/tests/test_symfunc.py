import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qjd.symfunc import (
    SymFuncExpansion,
    SymPoly,
    add,
    clip_variation_bound,
    cone_partitions,
    dominates,
    e_poly,
    evaluate,
    evaluate_in_power_basis,
    evaluate_truncated,
    lift,
    m_poly,
    multiply,
    one_poly,
    p_poly,
    partition_sort_key,
    power_values,
    project,
    scale,
    sub,
    sup_abs_bound,
    symfunc_from_json,
    symfunc_to_json,
    sympoly_from_json,
    sympoly_to_json,
    to_power_basis,
    zero_poly,
)

import oracle_brute as brute


def rand_vec(rng, n):
    return tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(n))


def rand_poly(rng, N, max_size=3):
    coeffs = {}
    for lam in cone_partitions(max_size, N):
        if rng.random() < 0.5:
            coeffs[lam] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return SymPoly(N, coeffs)


def test_sympoly_drops_zero_terms_and_validates_length():
    f = SymPoly(2, {(1,): Fraction(0), (2,): Fraction(3)})
    assert (1,) not in f.coeffs
    assert f.coeff((2,)) == 3
    assert f.coeff((5,)) == 0
    with pytest.raises(ValueError):
        SymPoly(1, {(1, 1): 1})
    with pytest.raises(ValueError):
        SymPoly(-1, {})


def test_degree_and_is_zero():
    assert zero_poly(3).is_zero()
    assert zero_poly(3).degree() == 0
    assert one_poly(3).degree() == 0
    assert not one_poly(3).is_zero()
    assert m_poly((3, 1), 4).degree() == 4


def test_generator_polys():
    assert e_poly(2, 3) == m_poly((1, 1), 3)
    assert e_poly(4, 3).is_zero()
    assert p_poly(0, 3) == SymPoly(3, {(): 3})
    assert p_poly(2, 3) == m_poly((2,), 3)


def test_arithmetic_variable_count_mismatch():
    with pytest.raises(ValueError):
        add(one_poly(2), one_poly(3))
    with pytest.raises(ValueError):
        multiply(one_poly(2), one_poly(3))


def test_evaluate_matches_brute_monomial_oracle():
    rng = random.Random(20)
    for _ in range(20):
        n = rng.randint(1, 4)
        lam = tuple(sorted((rng.randint(1, 3) for _ in range(rng.randint(0, n))), reverse=True))
        xs = rand_vec(rng, n)
        assert evaluate(m_poly(lam, n), xs) == brute.monomial_value(lam, xs)


def test_multiply_matches_pointwise_product():
    rng = random.Random(21)
    for _ in range(12):
        n = rng.randint(1, 3)
        f, g = rand_poly(rng, n), rand_poly(rng, n)
        h = multiply(f, g)
        for _ in range(4):
            xs = rand_vec(rng, n)
            assert evaluate(h, xs) == evaluate(f, xs) * evaluate(g, xs)


def test_add_scale_sub_pointwise():
    rng = random.Random(22)
    n = 3
    f, g = rand_poly(rng, n), rand_poly(rng, n)
    c = Fraction(-7, 3)
    xs = rand_vec(rng, n)
    assert evaluate(add(f, g), xs) == evaluate(f, xs) + evaluate(g, xs)
    assert evaluate(sub(f, g), xs) == evaluate(f, xs) - evaluate(g, xs)
    assert evaluate(scale(f, c), xs) == c * evaluate(f, xs)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_multiply_commutes_property(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    f, g = rand_poly(rng, n, 2), rand_poly(rng, n, 2)
    assert multiply(f, g) == multiply(g, f)


def test_project_and_lift_roundtrip():
    F = SymFuncExpansion("monomial", {(2, 1): Fraction(5), (1, 1, 1): Fraction(1), (): 2})
    f2 = project(F, 2)
    assert f2.coeff((2, 1)) == 5 and f2.coeff((1, 1, 1)) == 0 and f2.coeff(()) == 2
    f3 = project(F, 3)
    assert f3.coeff((1, 1, 1)) == 1
    again = lift(f3, 3)
    assert dict(again.coeffs) == dict(F.coeffs)
    with pytest.raises(ValueError):
        lift(f3, 2)  # degree 3 does not fit in bound 2


def test_project_requires_monomial_basis():
    F = SymFuncExpansion("macdonald", {(1,): 1})
    with pytest.raises(ValueError):
        project(F, 2)


def test_dominates_classics():
    assert dominates((2,), (1, 1))
    assert not dominates((1, 1), (2,))
    assert dominates((3, 1), (2, 2))
    assert not dominates((2, 2), (3, 1))
    # classic incomparable pair at size 6
    assert not dominates((3, 1, 1, 1), (2, 2, 2))
    assert not dominates((2, 2, 2), (3, 1, 1, 1))
    # different sizes never compare
    assert not dominates((3,), (2,))


def test_cone_partitions_order():
    cone = cone_partitions(3, 2)
    assert cone == [(), (1,), (2,), (1, 1), (3,), (2, 1)]
    keys = [partition_sort_key(lam) for lam in cone]
    assert keys == sorted(keys)


def test_to_power_basis_hand_identities():
    # m_(1,1) = (p_1^2 - p_2)/2, e_3 = (p_1^3 - 3 p_1 p_2 + 2 p_3)/6
    assert to_power_basis(m_poly((1, 1), 4)) == {
        (1, 1): Fraction(1, 2),
        (2,): Fraction(-1, 2),
    }
    assert to_power_basis(e_poly(3, 5)) == {
        (1, 1, 1): Fraction(1, 6),
        (2, 1): Fraction(-1, 2),
        (3,): Fraction(1, 3),
    }
    assert to_power_basis(m_poly((2,), 3)) == {(2,): Fraction(1)}


def test_to_power_basis_reproduces_values():
    rng = random.Random(23)
    for _ in range(8):
        n = rng.randint(1, 4)
        f = rand_poly(rng, n)
        pc = to_power_basis(f)
        xs = rand_vec(rng, n)
        pv = power_values(xs, f.degree())
        assert evaluate_in_power_basis(pc, pv) == evaluate(f, xs)


def test_power_values_direct():
    xs = (Fraction(2), Fraction(-1, 2))
    assert power_values(xs, 3) == [
        Fraction(2),
        Fraction(3, 2),
        Fraction(17, 4),
        Fraction(63, 8),
    ]


def test_sup_abs_bound_dominates_samples():
    rng = random.Random(24)
    for _ in range(6):
        n = rng.randint(1, 3)
        f = rand_poly(rng, n)
        x_max = Fraction(3, 2)
        bound = sup_abs_bound(f, x_max)
        for _ in range(10):
            xs = tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(n))
            assert abs(evaluate(f, xs)) <= bound


def test_clip_variation_bound_dominates_samples():
    rng = random.Random(25)
    f = rand_poly(rng, 4)
    x_max, x_cut = Fraction(2), Fraction(1, 4)
    bound = clip_variation_bound(f, x_max, x_cut, n_clip=2, n_total=4)
    for _ in range(10):
        xs = list(rand_vec(rng, 2)) + [
            Fraction(rng.randint(-1, 1), 4),
            Fraction(rng.randint(-1, 1), 8),
        ]
        xs = [min(max(x, -x_max), x_max) for x in xs]
        clipped = xs[:2] + [Fraction(0), Fraction(0)]
        assert abs(evaluate(f, xs) - evaluate(f, clipped)) <= bound


def test_evaluate_truncated_contains_true_value():
    # function p_1 + m_(1,1); full vector has a geometric tail with ratio t
    F = SymFuncExpansion("monomial", {(1,): 1, (1, 1): 1})
    t = Fraction(1, 3)
    full = [Fraction(1, 2) * t**i for i in range(12)]
    stored, omitted = full[:4], full[4:]
    x_cut = abs(stored[-1]) * t
    value, tail = evaluate_truncated(F, stored, t, Fraction(1, 2), x_cut)
    true_value = evaluate(project(F, len(full)), full)
    assert abs(true_value - value) <= tail


def test_sympoly_json_roundtrip():
    rng = random.Random(26)
    f = rand_poly(rng, 3)
    blob = json.dumps(sympoly_to_json(f))
    assert sympoly_from_json(json.loads(blob)) == f


def test_symfunc_json_roundtrip_and_float_rejection():
    F = SymFuncExpansion("macdonald", {(2, 1): Fraction(3, 7), (): 1})
    blob = json.dumps(symfunc_to_json(F))
    back = symfunc_from_json(json.loads(blob))
    assert back.basis == F.basis and dict(back.coeffs) == dict(F.coeffs)
    floaty = SymFuncExpansion("bigqjacobi", {(1,): 0.5})
    with pytest.raises(ValueError):
        symfunc_to_json(floaty)


def test_unknown_basis_rejected():
    with pytest.raises(ValueError):
        SymFuncExpansion("fourier", {})
