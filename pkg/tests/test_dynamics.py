import math
import random
from fractions import Fraction

import pytest

import qjd.dynamics as dyn
from qjd.bigqjacobi import big_qjacobi_poly, mu_N
from qjd.dynamics import (
    MeasureTable,
    RateTable,
    constant_term_check,
    constant_term_oracle,
    eigen_check,
    empirical_vs_stationary,
    functional_uniqueness_check,
    generator_via_spectrum,
    ground_state,
    intertwining_check,
    occupation_measure,
    orthogonality_check,
    pmp_test,
    rates,
    resolvent_approx_check,
    reversibility_check,
    semigroup_apply,
    semigroup_composition_check,
    semigroup_positivity_check,
    simulate,
    spectral_consistency_check,
    stationary_measure,
    to_bigqjacobi_basis,
    tv_distance,
)
from qjd.dynamics import from_bigqjacobi_coeffs, to_bigqjacobi_symfunc, univariate_consistency_check
from qjd.bigqjacobi import apply_DN
from qjd.statespace import State, coords_of, is_admissible, is_frontier
from qjd.symfunc import (
    SymFuncExpansion,
    SymPoly,
    cone_partitions,
    evaluate,
    m_poly,
    one_poly,
    sub,
)

import oracle_brute as brute
from conftest import random_params


def test_ground_state():
    assert ground_state(3, 1) == State((1, 1), (1,), 3)
    assert ground_state(2, 0) == State((1, 1), (), 2)
    with pytest.raises(ValueError):
        ground_state(2, 3)


def test_rates_single_particle_matches_brute_ladder(base_params):
    for k in range(1, 6):
        entries = rates(State((k,), (), 1), base_params, 1)
        by_dir = {e.direction: e for e in entries}
        assert by_dir["up"].rate == brute.ladder_rate(base_params, k, "up")
        if k == 1:
            assert by_dir["down"].target is None
            assert by_dir["down"].rate == 0
        else:
            assert by_dir["down"].rate == brute.ladder_rate(base_params, k, "down")
            assert by_dir["down"].target == State((k - 1,), (), 1)


def test_rates_validation(base_params):
    with pytest.raises(ValueError, match="particles at 0"):
        rates(State((1,), (), 2), base_params, 2)
    with pytest.raises(ValueError, match="capacity"):
        rates(State((1,), (), 1), base_params, 2)
    with pytest.raises(ValueError, match="admissible"):
        rates(State((3, 1), (), 2), base_params, 2)


def test_rates_blocked_moves_vanish(base_params):
    # equal adjacent indices: the interaction factor kills the crossing moves
    entries = rates(State((1, 1), (), 2), base_params, 2)
    blocked = [e for e in entries if e.target is None or not is_admissible(e.target)]
    assert blocked and all(e.rate == 0 for e in blocked)
    open_moves = [e for e in entries if e.target is not None and is_admissible(e.target)]
    assert open_moves and all(e.rate > 0 for e in open_moves)
    assert len(entries) == 4


def test_rates_count_matches_two_per_particle(base_params):
    s = State((1, 3), (2,), 3)
    assert len(rates(s, base_params, 3)) == 6


def test_rate_table_totals_and_lookup(base_params):
    rt = RateTable(base_params, 1)
    s = State((2,), (), 1)
    assert rt.total_exit(s) == sum(e.rate for e in rt.entries(s))
    up = State((3,), (), 1)
    assert rt.rate_between(s, up) == brute.ladder_rate(base_params, 2, "up")
    assert rt.rate_between(s, State((), (2,), 1)) == 0
    assert all(e.rate > 0 for e in rt.positive(s))


def test_simulate_deterministic(sim_params):
    start = ground_state(1, 0)
    a = simulate(start, sim_params, 1, horizon=40.0, K=8, seed=99)
    b = simulate(start, sim_params, 1, horizon=40.0, K=8, seed=99)
    assert a == b
    c = simulate(start, sim_params, 1, horizon=40.0, K=8, seed=100)
    assert a != c


def test_simulate_invariants(sim_params):
    rt = RateTable(sim_params, 1)
    traj = simulate(ground_state(1, 0), sim_params, 1, horizon=60.0, K=9, seed=3, rate_table=rt)
    times = [t for t, _ in traj.events]
    assert all(t0 < t1 for t0, t1 in zip(times, times[1:]))
    for (_, s0), (_, s1) in zip(traj.events, traj.events[1:]):
        assert rt.rate_between(s0, s1) > 0
    assert traj.n_jumps == len(traj.events) - 1
    if traj.truncated:
        assert is_frontier(traj.events[-1][1], 9)
        assert traj.end_time == times[-1]
    else:
        assert traj.end_time == 60.0


def test_simulate_zero_horizon(base_params):
    traj = simulate(ground_state(1, 0), base_params, 1, horizon=0.0, K=5, seed=1)
    assert traj.events == ((0.0, ground_state(1, 0)),)
    assert traj.end_time == 0.0 and not traj.truncated


def test_simulate_max_events(sim_params):
    traj = simulate(
        ground_state(1, 0), sim_params, 1, horizon=math.inf, K=10, seed=7, max_events=25
    )
    assert traj.truncated or traj.n_jumps == 25


def test_simulate_rejects_bad_starts(base_params):
    with pytest.raises(ValueError, match="window edge"):
        simulate(State((5,), (), 1), base_params, 1, horizon=1.0, K=5, seed=0)
    with pytest.raises(ValueError, match="all N particles"):
        simulate(State((1,), (), 2), base_params, 2, horizon=1.0, K=5, seed=0)
    with pytest.raises(ValueError, match="horizon"):
        simulate(ground_state(1, 0), base_params, 1, horizon=-1.0, K=5, seed=0)


def test_occupation_measure_normalization(sim_params):
    traj = simulate(ground_state(1, 0), sim_params, 1, horizon=30.0, K=8, seed=5)
    occ = occupation_measure(traj)
    assert abs(sum(occ.values()) - 1.0) < 1e-12
    assert all(v >= 0 for v in occ.values())
    frozen = simulate(ground_state(1, 0), sim_params, 1, horizon=0.0, K=8, seed=5)
    assert occupation_measure(frozen) == {ground_state(1, 0): 1.0}


def test_tv_distance_basics():
    a, b = State((1,), (), 1), State((2,), (), 1)
    assert tv_distance({a: 1.0}, {b: 1.0}) == 1.0
    assert tv_distance({a: 1.0}, {a: 1.0}) == 0.0
    assert tv_distance({a: 0.5, b: 0.5}, {a: 1.0}) == pytest.approx(0.5)


def test_stationary_measure_n1_matches_brute_ladder(base_params):
    K = 8
    mt = stationary_measure(base_params, 1, K)
    assert sum(mt.weights.values()) == 1
    assert mt.method == "detailed_balance"
    assert set(mt.component_masses) == {(1, 0), (0, 1)}
    assert all(m > 0 for m in mt.component_masses.values())
    for side, sign in (("+", (1, 0)), ("-", (0, 1))):
        w = brute.ladder_weights(base_params, K, side)
        for k in range(1, K):
            if side == "+":
                lo, hi = State((k,), (), 1), State((k + 1,), (), 1)
            else:
                lo, hi = State((), (k,), 1), State((), (k + 1,), 1)
            assert mt.weight(hi) * w[k] == mt.weight(lo) * w[k + 1]


def test_stationary_measure_weights_positive_interior_only(base_params):
    mt = stationary_measure(base_params, 2, 5)
    assert sum(mt.weights.values()) == 1
    assert all(s.count == 2 for s in mt.weights)
    assert all(w > 0 for w in mt.weights.values())
    # zero-containing states carry no weight
    assert mt.weight(State((1,), (), 2)) == 0
    assert set(mt.component_masses) == {(2, 0), (1, 1), (0, 2)}


def test_stationary_measure_validation(base_params):
    with pytest.raises(ValueError):
        stationary_measure(base_params, 0, 5)
    with pytest.raises(ValueError):
        stationary_measure(base_params, 1, 1)


def test_measure_table_expectation_and_tolerance(base_params):
    mt = stationary_measure(base_params, 1, 8)
    assert mt.expectation(one_poly(1)) == 1
    assert mt.tail_bound is not None and mt.tail_bound > 0
    tol = mt.tolerance_for(m_poly((1,), 1))
    assert tol > 0
    fw = mt.float_weights()
    assert abs(sum(fw.values()) - 1.0) < 1e-12


def test_tail_bound_uncertified_at_large_q(sim_params):
    # diagonal departures boost the outward ratio past 1 at q = 2/3
    mt = stationary_measure(sim_params, 2, 6)
    assert mt.tail_bound is None
    assert mt.outward_ratio >= 1
    with pytest.raises(ValueError, match="tail bound"):
        mt.tolerance_for(one_poly(2))
    # the exact window weights themselves remain fully valid
    assert sum(mt.weights.values()) == 1


def test_reversibility_exact(base_params):
    rep = reversibility_check(base_params, 2, 5)
    assert rep["status"] == "pass"
    assert rep["max_detailed_balance_residual"]["exact"] == "0"
    assert rep["max_global_balance_residual"]["exact"] == "0"


def test_orthogonality_small(base_params):
    rep = orthogonality_check(base_params, 1, 8, max_size=2)
    assert rep["status"] == "pass"
    assert rep["pairs"] == 3


def test_semigroup_apply_eigenmode(base_params):
    lam = (2,)
    phi = big_qjacobi_poly(lam, base_params, 2)
    out = semigroup_apply(phi, 0.7, base_params, 2)
    assert out.basis == "bigqjacobi"
    assert set(out.coeffs) == {lam}
    expected = math.exp(0.7 * float(mu_N(lam, base_params, 2)))
    assert out.coeffs[lam] == pytest.approx(expected, rel=1e-15)
    # constants are fixed by the semigroup
    ones = semigroup_apply(one_poly(2), 5.0, base_params, 2)
    assert dict(ones.coeffs) == {(): 1.0}


def test_semigroup_level_free_route(base_params):
    F = SymFuncExpansion("monomial", {(1,): Fraction(2), (): Fraction(1)})
    out = semigroup_apply(F, 0.5, base_params, None)
    assert out.basis == "bigqjacobi"
    with pytest.raises(ValueError, match="SymFuncExpansion"):
        semigroup_apply(one_poly(2), 0.5, base_params, None)


def test_semigroup_composition(base_params):
    rep = semigroup_composition_check(base_params, 2)
    assert rep["status"] == "pass"
    assert rep["identity_exact"] and rep["conserves_constants"]
    assert rep["max_residual"]["float"] <= 1e-12


def test_spectral_consistency_exact(base_params):
    rep = spectral_consistency_check(base_params, 2)
    assert rep["status"] == "pass"
    assert rep["max_residual"]["exact"] == "0"


def test_generator_via_spectrum_matches_operator(base_params):
    f = SymPoly(2, {(2,): Fraction(1), (1, 1): Fraction(-2, 3), (1,): 1, (): 4})
    assert sub(generator_via_spectrum(f, base_params, 2), apply_DN(f, base_params, 2)).is_zero()


def test_resolvent_distances_decrease(base_params):
    f = SymPoly(1, {(2,): Fraction(1), (1,): Fraction(1, 2)})
    rep = resolvent_approx_check(f, 1.0, (10, 100, 1000), base_params, 1, K=6)
    assert rep["status"] == "pass" and rep["monotone"]
    d = [entry["float"] for entry in rep["distances"]]
    assert d[0] > d[1] > d[2]
    with pytest.raises(ValueError, match="r > 0"):
        resolvent_approx_check(f, 1.0, (0,), base_params, 1, K=6)


def test_semigroup_positivity_small(base_params):
    rep = semigroup_positivity_check(base_params, 1, 8, seed=4, trials=3)
    assert rep["status"] == "pass"


def test_positivity_requires_certified_tail(sim_params):
    with pytest.raises(ValueError, match="tail bound"):
        semigroup_positivity_check(sim_params, 2, 6, seed=4, trials=1)


def test_pmp_small(base_params):
    rep = pmp_test(base_params, 1, 8, trials=40, seed=12)
    assert rep["status"] == "pass"
    assert rep["violations"] == []
    assert rep["asserted"] > 0


def test_intertwining(base_params):
    assert intertwining_check((2, 1), base_params, 2)
    assert intertwining_check((1,), base_params, 1)
    with pytest.raises(ValueError):
        intertwining_check((1, 1), base_params, 1)


def test_functional_uniqueness(base_params):
    rep = functional_uniqueness_check(base_params, 3)
    assert rep["status"] == "pass"
    assert rep["dimension"] == len(cone_partitions(3, 3))


def test_eigen_and_univariate_reports(base_params):
    rep = eigen_check(base_params, 1, max_size=3)
    assert rep["status"] == "pass" and rep["max_residual"]["exact"] == "0"
    rep = univariate_consistency_check(base_params, n_max=5)
    assert rep["status"] == "pass" and rep["max_residual"]["exact"] == "0"


def test_constant_terms_match_direct_expansion(base_params):
    rng = random.Random(61)
    for _ in range(3):
        p = random_params(rng)
        for n in (1, 2, 3):
            ct_p, ct_e = constant_term_oracle(p, n)
            from qjd.symfunc import e_poly, p_poly

            assert apply_DN(p_poly(2, n), p, n).coeff(()) == ct_p
            assert apply_DN(e_poly(2, n), p, n).coeff(()) == ct_e
    rep = constant_term_check(base_params, N_max=4)
    assert rep["status"] == "pass" and rep["max_residual"]["exact"] == "0"


def test_basis_roundtrip(base_params):
    f = SymPoly(2, {(2, 1): Fraction(3), (1,): Fraction(-1, 2), (): 2})
    coeffs = to_bigqjacobi_basis(f, base_params, 2)
    assert from_bigqjacobi_coeffs(coeffs, base_params, 2) == f
    # the eigenfunction coordinates of phi itself are a single spike
    phi = big_qjacobi_poly((2,), base_params, 2)
    assert to_bigqjacobi_basis(phi, base_params, 2) == {(2,): Fraction(1)}


def test_symfunc_basis_conversion(base_params):
    from qjd.bigqjacobi import phi_symfunc

    # P_(1) = Phi_(1) - pi((1), ()) Phi_(), and the constant 1 is Phi_()
    F = SymFuncExpansion("macdonald", {(1,): Fraction(1), (): Fraction(2)})
    coeffs = to_bigqjacobi_symfunc(F, base_params)
    ct = phi_symfunc((1,), base_params).coeff(())
    assert coeffs == {(1,): Fraction(1), (): Fraction(2) - ct}


def test_empirical_vs_stationary_smoke(sim_params):
    rep = empirical_vs_stationary(sim_params, 1, 6, min_events=4000, seed=2, tv_tolerance=0.2)
    assert rep["status"] == "pass"
    assert rep["events"] >= 4000
    assert rep["tv_distance"]["float"] <= 0.2
