import random
from fractions import Fraction

import pytest

from qjd.bigqjacobi import (
    CertifiedBound,
    EigenvalueCollisionError,
    apply_D1,
    apply_DN,
    big_qjacobi_poly,
    h_norm,
    mu_N,
    mu_infinity,
    phi_symfunc,
    pi_coeffs,
    quadratic_form_bounds,
    sigma,
)
from qjd.macdonald import basis_cache, to_macdonald_basis
from qjd.qalgebra import gen_pochhammer, make_params, partitions_up_to, shift_level
from qjd.symfunc import SymPoly, contains, evaluate, one_poly, scale, sub

import oracle_brute as brute
from conftest import random_params


def test_sigma_positive_branch_everywhere():
    rng = random.Random(41)
    for _ in range(10):
        p = random_params(rng)
        x = Fraction(rng.randint(-40, 40), rng.randint(1, 9)) or Fraction(1)
        assert sigma(p, rng.randint(1, 4), x, 1) > 0


def test_sigma_matches_brute_and_vanishes_at_boundary():
    rng = random.Random(42)
    for _ in range(8):
        p = random_params(rng)
        N = rng.randint(1, 3)
        x = Fraction(rng.randint(1, 30), rng.randint(1, 7))
        assert sigma(p, N, x, 1) == brute.sigma_plus(p, N, x)
        assert sigma(p, N, -x, -1) == brute.sigma_minus(p, N, -x)
        # down moves die exactly at the outermost grid points q/a and q/b
        assert sigma(p, N, p.q / p.a, -1) == 0
        assert sigma(p, N, p.q / p.b, -1) == 0


def test_sigma_rejects_bad_input():
    rng = random.Random(43)
    p = random_params(rng)
    with pytest.raises(ValueError):
        sigma(p, 1, 0, 1)
    with pytest.raises(ValueError):
        sigma(p, 1, 1, 2)


def test_apply_D1_matches_brute_closed_form():
    rng = random.Random(44)
    for _ in range(6):
        p = random_params(rng)
        for n in range(0, 7):
            f = SymPoly(1, {(n,) if n else (): Fraction(1)})
            image = apply_D1(f, p)
            assert dict(image.coeffs) == brute.univariate_monomial_image(n, p)


def test_apply_D1_kills_constants_and_rejects_multivariate():
    rng = random.Random(45)
    p = random_params(rng)
    assert apply_D1(one_poly(1), p).is_zero()
    with pytest.raises(ValueError):
        apply_D1(one_poly(2), p)


def test_apply_DN_agrees_with_apply_D1():
    rng = random.Random(46)
    for _ in range(5):
        p = random_params(rng)
        f = SymPoly(1, {(3,): Fraction(2), (1,): Fraction(-1, 3), (): 5})
        assert apply_DN(f, p, 1) == apply_D1(f, p)


def test_apply_DN_matches_brute_point_values():
    rng = random.Random(47)
    for _ in range(6):
        p = random_params(rng)
        N = rng.randint(1, 3)
        coeffs = {}
        for lam in partitions_up_to(3, N):
            if rng.random() < 0.6:
                coeffs[lam] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        f = SymPoly(N, coeffs)
        image = apply_DN(f, p, N)
        for _ in range(3):
            xs = tuple(Fraction(rng.randint(1, 9), rng.randint(1, 7)) + 10 * i for i in range(N))
            assert evaluate(image, xs) == brute.generator_point_value(coeffs, p, N, xs)


def test_mu_values_and_level_shift():
    rng = random.Random(48)
    p = random_params(rng)
    assert mu_N((), p, 3) == 0
    assert mu_infinity((), p) == 0
    # the level shift turns the level-N eigenvalue into the level-free one
    for lam in [(1,), (2,), (1, 1), (3, 2), (2, 2, 1)]:
        for N in range(len(lam), len(lam) + 3):
            assert mu_N(lam, shift_level(p, N), N) == mu_infinity(lam, p)
    with pytest.raises(ValueError):
        mu_N((1, 1), p, 1)


def test_mu_single_row_closed_form():
    rng = random.Random(49)
    p = random_params(rng)
    for m in (1, 2, 5):
        lead = p.s2 * p.q / (p.a * p.b)
        expected = -(lead * p.t ** (2 * 3 - 2) * (p.q**m - 1) + (p.q**-m - 1))
        assert mu_N((m,), p, 3) == expected


def test_phi_empty_is_one():
    rng = random.Random(50)
    p = random_params(rng)
    assert big_qjacobi_poly((), p, 2) == one_poly(2)


def test_eigenrelation_exact_random_params():
    rng = random.Random(51)
    for _ in range(4):
        p = random_params(rng)
        N = rng.randint(1, 2)
        for lam in partitions_up_to(3, N):
            phi = big_qjacobi_poly(lam, p, N)
            residual = sub(apply_DN(phi, p, N), scale(phi, mu_N(lam, p, N)))
            assert residual.is_zero()


def test_expansion_support_and_normalization(base_params):
    lam = (2, 1)
    table = pi_coeffs(lam, base_params, 2)
    assert table[lam] == 1
    assert all(contains(nu, lam) for nu in table)
    # leading Macdonald coefficient of phi itself is 1 as well
    phi = big_qjacobi_poly(lam, base_params, 2)
    mac = to_macdonald_basis(phi, basis_cache(2, base_params.q, base_params.t))
    assert mac[lam] == 1
    # pi relates to the raw coefficients through the Pochhammer ratio
    q, t = base_params.q, base_params.t
    tn = t**2
    for nu, c in mac.items():
        ratio = gen_pochhammer(tn, lam, q, t) / gen_pochhammer(tn, nu, q, t)
        assert c == ratio * table[nu]


def test_pi_stability_across_levels(base_params):
    for lam in [(1,), (2,), (2, 1), (2, 2)]:
        for N in (2, 3):
            low = pi_coeffs(lam, shift_level(base_params, N), N)
            high = pi_coeffs(lam, shift_level(base_params, N + 1), N + 1)
            assert low == high


def test_phi_symfunc_is_stable_macdonald_expansion(base_params):
    F = phi_symfunc((2, 1), base_params)
    assert F.basis == "macdonald"
    assert F.coeff((2, 1)) == 1
    assert all(contains(nu, (2, 1)) for nu in F.coeffs)


def test_eigenvalue_collision_detected():
    # s2 = -a b / (q^3 t) forces mu_(2) == mu_(1,1) at N = 2
    p = make_params(Fraction(1, 2), Fraction(1, 5), 1, -1, 0, 40)
    assert mu_N((2,), p, 2) == mu_N((1, 1), p, 2)
    with pytest.raises(EigenvalueCollisionError):
        big_qjacobi_poly((2,), p, 2)


def test_h_norm_basics():
    rng = random.Random(52)
    for _ in range(8):
        p = random_params(rng)
        assert h_norm((), p) == 1
        assert h_norm((1,), p) > 0


def test_h_norm_t_equals_q_simplification():
    # at t = q the two C-ratio factors cancel and the formula collapses
    q = Fraction(1, 3)
    p = make_params(q, q, Fraction(1, 2), Fraction(-1, 3), Fraction(1, 2), Fraction(5, 16))
    from qjd.qalgebra import gen_pochhammer_conjpair, partition_stats

    for lam in [(1,), (2,), (2, 1), (2, 2)]:
        stats = partition_stats(lam)
        n_conj = sum(part * (part - 1) // 2 for part in lam)
        s = p.s2 * q / (p.a * p.b)
        expected = (s * q * q / (p.a * p.b)) ** stats.size
        expected *= q ** (2 * n_conj - 2 * stats.n_lam)
        expected /= gen_pochhammer(s * q, stats.double_union, q, q)
        expected *= gen_pochhammer_conjpair(q / p.a, p.cd, lam, q, q)
        expected *= gen_pochhammer_conjpair(q / p.b, p.cd, lam, q, q)
        assert h_norm(lam, p) == expected


def test_quadratic_form_bounds_exact_square():
    first, second = quadratic_form_bounds(Fraction(1, 4), Fraction(1, 2))
    assert first.is_exact and first.value == Fraction(5, 2)
    assert second.is_exact and second.value == Fraction(5, 2)
    # smaller t pushes the second bound to (1+t^2)/t
    first, second = quadratic_form_bounds(Fraction(1, 4), Fraction(1, 5))
    assert second.value == Fraction(26, 5)


def test_quadratic_form_bounds_irrational_root():
    first, second = quadratic_form_bounds(Fraction(1, 2), Fraction(1, 2))
    assert not first.is_exact
    assert first.hi - first.lo < Fraction(1, 10**6)
    # (1+q)/sqrt(q) = 3/sqrt(2) = 2.12...; with t = 1/2 the t-branch (5/2) wins
    assert first.lo < Fraction(2122, 1000) and first.hi > Fraction(2121, 1000)
    assert second.is_exact and second.value == Fraction(5, 2)
    with pytest.raises(ValueError):
        quadratic_form_bounds(Fraction(3, 2), Fraction(1, 2))


def test_certified_bound_validation():
    with pytest.raises(ValueError):
        CertifiedBound(Fraction(2), Fraction(1))
    b = CertifiedBound(Fraction(1), Fraction(2))
    with pytest.raises(ValueError):
        _ = b.value
