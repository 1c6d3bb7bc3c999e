"""Markov jump dynamics generated by D_N, with exact verification suites.

D_N read as a jump-process generator moves one particle index at a time:
the rate of the move x_i -> q^{+1/-1} x_i is the interaction ratio
prod_{j != i} (t^{+1/-1} x_i - x_j)/(x_i - x_j) times sigma_N^{+/-}(x_i).
Rates are exact rationals; moves that would break the spacing constraint
vanish analytically, never by clamping.

This module provides the exact pieces built on those rates: event-driven
simulation (float time draws on exact rates), stationary measures on
truncated windows constructed by detailed balance and validated edge by
edge, spectral semigroup and resolvent action on the eigenfunction basis,
the positive-maximum-principle test with a certified-minimizer gate, and
the level-to-level intertwining check.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from . import _linalg
from .bigqjacobi import (
    apply_D1,
    apply_DN,
    big_qjacobi_poly,
    family,
    h_norm,
    mu_N,
    mu_infinity,
    phi_symfunc,
    pi_coeffs,
    sigma,
)
from .macdonald import basis_cache, to_macdonald_basis
from .qalgebra import Params, Partition, Scalar, as_partition, frac, shift_level
from .statespace import (
    Direction,
    Side,
    State,
    coords_of,
    enumerate_truncated,
    is_admissible,
    is_frontier,
    state_to_str,
)
from .symfunc import (
    SymFuncExpansion,
    SymPoly,
    add,
    clip_variation_bound,
    cone_partitions,
    e_poly,
    evaluate_in_power_basis,
    m_poly,
    one_poly,
    multiply,
    p_poly,
    partition_sort_key,
    power_values,
    project,
    scale,
    sub,
    sup_abs_bound,
    to_power_basis,
    zero_poly,
)


def exact_entry(value: Scalar) -> dict:
    """Report entry for an exactly computed number."""
    value = frac(value)
    try:
        text = str(value)
    except ValueError:  # exceeds the int-to-str digit limit
        import sys

        digits = max(value.numerator.bit_length(), value.denominator.bit_length())
        sys.set_int_max_str_digits(max(sys.get_int_max_str_digits(), digits + 10))
        text = str(value)
    return {"exact": text, "float": float(value)}


def round_up_bound(value: Fraction, digits: int = 30) -> Fraction:
    """Round a nonnegative certified bound up to a compact rational.

    Exact bounds picked up along rate products and tail series can carry
    thousand-digit denominators; rounding up preserves their upper-bound
    role and keeps reports readable.
    """
    if value < 0:
        raise ValueError(f"bounds must be nonnegative, got {value}")
    scale = 10**digits
    return Fraction(math.ceil(value * scale), scale)


def float_entry(value: float) -> dict:
    """Report entry for a float-precision number."""
    return {"exact": None, "float": float(value)}


def params_dict(p: Params) -> Dict[str, str]:
    return {
        "q": str(p.q),
        "t": str(p.t),
        "a": str(p.a),
        "b": str(p.b),
        "s1": str(p.s1),
        "s2": str(p.s2),
    }


def coordinate_bound(p: Params) -> Fraction:
    """Largest coordinate magnitude on the lattice: max(1/a, 1/|b|) * q."""
    return max(1 / p.a, -1 / p.b) * p.q


def truncation_cut(p: Params, K: int) -> Fraction:
    """Magnitude bound for coordinates at indices beyond the window edge K."""
    return coordinate_bound(p) * p.q**K


def ground_state(N: int, n_minus: int) -> State:
    """The all-ones configuration with n_minus negative particles."""
    if not 0 <= n_minus <= N:
        raise ValueError(f"need 0 <= n_minus <= N, got {n_minus}")
    return State((1,) * (N - n_minus), (1,) * n_minus, N)


# ---------------------------------------------------------------------------
# Rates.


class RateEntry(NamedTuple):
    side: Side
    position: int  # 1-based within its side
    direction: Direction
    target: Optional[State]  # None when the move leaves the index lattice
    rate: Fraction


def rates(s: State, params: Params, N: int) -> Tuple[RateEntry, ...]:
    """Exact jump rates out of a fully stored configuration.

    Lists all 2 * count formal one-index moves.  Moves that break weak
    monotonicity, or fall off the lattice (index 0, target None), carry
    rate exactly 0 through a vanishing interaction or sigma factor; every
    admissible move carries a strictly positive rate.  Both facts are
    asserted, not assumed.
    """
    if s.capacity != N:
        raise ValueError(f"state capacity {s.capacity} differs from N = {N}")
    if not is_admissible(s):
        raise ValueError(f"state {state_to_str(s)} is not admissible")
    if s.count != N:
        raise ValueError("rates are undefined for configurations with particles at 0")
    c = coords_of(s, params)
    all_x: Tuple[Fraction, ...] = c.xs_plus + c.xs_minus
    t = params.t
    entries: List[RateEntry] = []
    flat_pos = 0
    for side, indices in (("+", s.plus), ("-", s.minus)):
        for i, k in enumerate(indices):
            x = all_x[flat_pos]
            v_up = Fraction(1)
            v_dn = Fraction(1)
            for j, y in enumerate(all_x):
                if j != flat_pos:
                    gap = x - y
                    v_up *= (t * x - y) / gap
                    v_dn *= (x / t - y) / gap
            rate_up = v_up * sigma(params, N, x, 1)
            rate_dn = v_dn * sigma(params, N, x, -1)
            up_indices = indices[:i] + (k + 1,) + indices[i + 1 :]
            target_up = _replace(s, side, up_indices)
            if k - 1 >= 1:
                dn_indices = indices[:i] + (k - 1,) + indices[i + 1 :]
                target_dn: Optional[State] = _replace(s, side, dn_indices)
            else:
                target_dn = None
            for direction, target, rate in (
                ("up", target_up, rate_up),
                ("down", target_dn, rate_dn),
            ):
                blocked = target is None or not is_admissible(target)
                if blocked:
                    if rate != 0:
                        raise AssertionError(
                            f"blocked {direction}-move of {side}{i + 1} from "
                            f"{state_to_str(s)} has nonzero rate {rate}"
                        )
                elif rate <= 0:
                    raise AssertionError(
                        f"admissible {direction}-move of {side}{i + 1} from "
                        f"{state_to_str(s)} has nonpositive rate {rate}"
                    )
                entries.append(RateEntry(side, i + 1, direction, target, rate))
            flat_pos += 1
    return tuple(entries)


def _replace(s: State, side: Side, indices: Tuple[int, ...]) -> State:
    if side == "+":
        return State(indices, s.minus, s.capacity)
    return State(s.plus, indices, s.capacity)


@dataclass
class RateTable:
    """Lazy per-state cache of exact rates and exit totals."""

    params: Params
    N: int
    _entries: Dict[State, Tuple[RateEntry, ...]] = field(default_factory=dict, repr=False)

    def entries(self, s: State) -> Tuple[RateEntry, ...]:
        if s not in self._entries:
            self._entries[s] = rates(s, self.params, self.N)
        return self._entries[s]

    def positive(self, s: State) -> Tuple[RateEntry, ...]:
        return tuple(e for e in self.entries(s) if e.rate > 0)

    def total_exit(self, s: State) -> Fraction:
        return sum((e.rate for e in self.entries(s)), Fraction(0))

    def rate_between(self, src: State, dst: State) -> Fraction:
        """Rate of the unique move src -> dst (0 if no move connects them)."""
        found = [e for e in self.entries(src) if e.target == dst]
        if len(found) > 1:
            raise AssertionError(f"two moves connect {state_to_str(src)} to {state_to_str(dst)}")
        return found[0].rate if found else Fraction(0)


# ---------------------------------------------------------------------------
# Simulation.


@dataclass(frozen=True)
class Trajectory:
    """Event list of an exact-rate jump simulation.

    ``events`` holds (jump time, state entered); ``end_time`` is the time up
    to which the trajectory was observed (the horizon, or the last jump time
    when the run stopped at the truncation frontier or an event cap).
    """

    events: Tuple[Tuple[float, State], ...]
    horizon: float
    end_time: float
    seed: int
    truncated: bool

    @property
    def n_jumps(self) -> int:
        return len(self.events) - 1


def simulate(
    start: State,
    params: Params,
    N: int,
    horizon: float,
    K: int,
    seed: int,
    max_events: Optional[int] = None,
    rate_table: Optional[RateTable] = None,
) -> Trajectory:
    """Event-driven simulation of the jump process started at ``start``.

    Holding times are exponential with the exact total exit rate (converted
    to float only for the draw); the jump choice compares exact rates
    against an exact rational threshold.  The run stops at the horizon, or
    as soon as any index reaches the window edge K (truncation flag), or
    after ``max_events`` jumps.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if start.capacity != N or start.count != N:
        raise ValueError("start state must store all N particles")
    if not is_admissible(start):
        raise ValueError(f"start state {state_to_str(start)} is not admissible")
    if is_frontier(start, K):
        raise ValueError(f"start state {state_to_str(start)} touches the window edge K = {K}")
    rt = rate_table if rate_table is not None else RateTable(params, N)
    rng = random.Random(seed)
    events: List[Tuple[float, State]] = [(0.0, start)]
    now = 0.0
    state = start
    truncated = False
    hit_horizon = False
    while True:
        if is_frontier(state, K):
            truncated = True
            break
        if max_events is not None and len(events) - 1 >= max_events:
            break
        total = rt.total_exit(state)
        if total <= 0:
            raise AssertionError(f"interior state {state_to_str(state)} has no exit rate")
        dt = rng.expovariate(float(total))
        while dt <= 0.0:
            dt = rng.expovariate(float(total))
        if now + dt >= horizon:
            hit_horizon = True
            break
        now += dt
        threshold = Fraction(rng.random()) * total
        acc = Fraction(0)
        chosen = None
        for e in rt.entries(state):
            if e.rate > 0:
                acc += e.rate
                if acc > threshold:
                    chosen = e
                    break
        if chosen is None:  # threshold == total, a measure-zero draw
            chosen = rt.positive(state)[-1]
        state = chosen.target
        events.append((now, state))
    end_time = horizon if hit_horizon else events[-1][0]
    return Trajectory(tuple(events), horizon, end_time, seed, truncated)


def occupation_measure(traj: Trajectory) -> Dict[State, float]:
    """Time-weighted empirical occupation, normalized over the observed span."""
    times: Dict[State, float] = {}
    events = traj.events
    for (t0, s0), (t1, _) in zip(events, events[1:]):
        times[s0] = times.get(s0, 0.0) + (t1 - t0)
    last_time, last_state = events[-1]
    if traj.end_time > last_time:
        times[last_state] = times.get(last_state, 0.0) + (traj.end_time - last_time)
    total = sum(times.values())
    if total <= 0:
        return {events[0][1]: 1.0}
    return {s: v / total for s, v in times.items()}


def tv_distance(p: Mapping[State, float], q: Mapping[State, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


# ---------------------------------------------------------------------------
# Stationary measure on a truncated window.


@dataclass
class MeasureTable:
    """Exact probability weights on the truncated window, with tail data.

    The support is the set of fully stored configurations (no particles at
    0); weights of zero-containing states are exactly 0.  ``tail_bound``
    bounds the mass the untruncated measure places beyond the window: it is
    frontier_mass * sum_{E>=1} (E+1)^(N-1) * outward_ratio^E, doubled for
    safety.  The outward detailed-balance ratio is computed exactly at
    every frontier edge and assumed not to grow past the window.  When that
    ratio reaches 1 (departing a same-index pair carries a factor that
    exceeds 1/q for large q) no geometric certificate exists and
    ``tail_bound`` is None.
    """

    params: Params
    N: int
    K: int
    weights: Dict[State, Fraction]
    method: str  # "detailed_balance" or "global_balance"
    component_masses: Dict[Tuple[int, int], Fraction]
    frontier_mass: Fraction
    outward_ratio: Fraction
    tail_bound: Optional[Fraction]

    def weight(self, s: State) -> Fraction:
        return self.weights.get(s, Fraction(0))

    def expectation(self, f: SymPoly) -> Fraction:
        """Exact <f>_w over the window."""
        if f.N != self.N:
            raise ValueError(f"variable counts differ: {f.N} vs {self.N}")
        pcoeffs = to_power_basis(f)
        d = f.degree()
        total = Fraction(0)
        for s, w in self.weights.items():
            vec = coords_of(s, self.params).as_vector(self.N)
            total += w * evaluate_in_power_basis(pcoeffs, power_values(vec, d))
        return total

    def tolerance_for(self, f: SymPoly) -> Fraction:
        """Certified |<f>_window - <f>_full| allowance from the tail bound."""
        if self.tail_bound is None:
            raise ValueError(
                f"no certified tail bound: outward balance ratio {self.outward_ratio} "
                "is too close to 1"
            )
        return round_up_bound(
            2 * self.tail_bound * sup_abs_bound(f, coordinate_bound(self.params))
        )

    def float_weights(self) -> Dict[State, float]:
        return {s: float(w) for s, w in self.weights.items()}


def _component_detailed_balance(
    states: Sequence[State], rt: RateTable
) -> Tuple[Dict[State, Fraction], bool]:
    """Spanning-tree weights plus edgewise validation on one sign component.

    Returns (unnormalized weights, True iff detailed balance held on every
    in-window edge).  Validating every edge against tree-propagated weights
    is equivalent to checking the Kolmogorov cycle condition on all cycles.
    """
    comp = set(states)
    root = states[0]
    w: Dict[State, Fraction] = {root: Fraction(1)}
    queue = [root]
    while queue:
        x = queue.pop()
        for e in rt.entries(x):
            if e.rate > 0 and e.target in comp and e.target not in w:
                back = rt.rate_between(e.target, x)
                if back <= 0:
                    raise AssertionError(
                        f"one-way edge {state_to_str(x)} -> {state_to_str(e.target)}"
                    )
                w[e.target] = w[x] * e.rate / back
                queue.append(e.target)
    if len(w) != len(states):
        raise ValueError(
            f"interior component of {state_to_str(root)} is disconnected: "
            f"reached {len(w)} of {len(states)} states"
        )
    balanced = True
    for x in states:
        for e in rt.entries(x):
            if e.rate > 0 and e.target in comp:
                if w[x] * e.rate != w[e.target] * rt.rate_between(e.target, x):
                    balanced = False
    return w, balanced


def _component_global_balance(states: Sequence[State], rt: RateTable) -> Dict[State, Fraction]:
    """Exact stationary vector of the window-censored chain on one component."""
    comp = set(states)
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for x in states:
        out_total = Fraction(0)
        for e in rt.entries(x):
            if e.rate > 0 and e.target in comp:
                matrix[index[e.target]][index[x]] += e.rate
                out_total += e.rate
        matrix[index[x]][index[x]] -= out_total
    kernel = _linalg.nullspace(matrix)
    if len(kernel) != 1:
        raise ValueError(f"censored chain has a {len(kernel)}-dimensional stationary space")
    vec = kernel[0]
    signs = {v > 0 for v in vec if v != 0}
    if len(signs) != 1:
        raise ValueError("stationary vector changes sign")
    if not signs.pop():
        vec = [-v for v in vec]
    if any(v <= 0 for v in vec):
        raise ValueError("stationary vector has a zero entry on a connected component")
    return {s: vec[index[s]] for s in states}


_SERIES_CAP = 200


def _tail_series(ratio: Fraction, N: int) -> Optional[Fraction]:
    """Exact upper bound for sum_{E>=1} (E+1)^(N-1) * ratio^E, or None if
    the ratio is too close to 1 for the series to certify anything."""
    if ratio <= 0:
        return Fraction(0)
    growth = Fraction(_SERIES_CAP + 2, _SERIES_CAP + 1) ** (N - 1)
    if ratio * growth >= 1:
        return None
    total = Fraction(0)
    power = Fraction(1)
    for e in range(1, _SERIES_CAP + 1):
        power *= ratio
        term = (e + 1) ** (N - 1) * power
        total += term
    last = (_SERIES_CAP + 1) ** (N - 1) * power
    g = ratio * growth
    return total + last * g / (1 - g)


def stationary_measure(params: Params, N: int, K: int) -> MeasureTable:
    """Exact stationary weights of the window-censored dynamics.

    The particle counts per sign side are conserved, so the fully stored
    states split into N+1 invariant components; each component's weights
    come from detailed balance along a spanning tree, validated on every
    edge (with an exact global-balance nullspace solve as fallback).  The
    component masses are glued by the moment conditions that characterize
    the orthogonality measure: <phi_{(1^k)|N}>_w = 0 for k = 1..N.
    """
    if N < 1 or K < 2:
        raise ValueError(f"need N >= 1 and K >= 2, got N = {N}, K = {K}")
    rt = RateTable(params, N)
    window = enumerate_truncated(N, K)
    full = [s for s in window if s.count == N]
    components: Dict[Tuple[int, int], List[State]] = {}
    for s in full:
        components.setdefault((len(s.plus), len(s.minus)), []).append(s)
    if len(components) != N + 1:
        raise AssertionError(f"expected {N + 1} sign components, found {len(components)}")
    comp_keys = sorted(components, key=lambda key: key[1])
    normalized: Dict[Tuple[int, int], Dict[State, Fraction]] = {}
    method = "detailed_balance"
    for key in comp_keys:
        states = components[key]
        w, balanced = _component_detailed_balance(states, rt)
        if not balanced:
            method = "global_balance"
            w = _component_global_balance(states, rt)
        mass = sum(w.values())
        normalized[key] = {s: v / mass for s, v in w.items()}
    moments = []
    for k in range(1, N + 1):
        phi = big_qjacobi_poly((1,) * k, params, N)
        pcoeffs = to_power_basis(phi)
        d = phi.degree()
        row = []
        for key in comp_keys:
            total = Fraction(0)
            for s, v in normalized[key].items():
                vec = coords_of(s, params).as_vector(N)
                total += v * evaluate_in_power_basis(pcoeffs, power_values(vec, d))
            row.append(total)
        moments.append(row)
    system = [[Fraction(1)] * (N + 1)] + moments
    rhs = [Fraction(1)] + [Fraction(0)] * N
    masses = _linalg.solve(system, rhs)
    for key, mass in zip(comp_keys, masses):
        if mass <= 0:
            raise ValueError(
                f"component {key} received non-positive mass {mass}; "
                "enlarge the truncation window"
            )
    weights: Dict[State, Fraction] = {}
    component_masses: Dict[Tuple[int, int], Fraction] = {}
    for key, mass in zip(comp_keys, masses):
        component_masses[key] = mass
        for s, v in normalized[key].items():
            weights[s] = mass * v
    frontier_mass = sum(
        (w for s, w in weights.items() if is_frontier(s, K)),
        Fraction(0),
    )
    outward = Fraction(0)
    for s, w in weights.items():
        if not is_frontier(s, K):
            continue
        for e in rt.entries(s):
            if e.rate > 0 and e.target is not None and is_frontier(e.target, K + 1):
                back = rates(e.target, params, N)
                back_rate = Fraction(0)
                for be in back:
                    if be.target == s:
                        back_rate = be.rate
                        break
                if back_rate <= 0:
                    raise AssertionError("outward frontier edge has no return rate")
                outward = max(outward, e.rate / back_rate)
    series = _tail_series(outward, N)
    tail_bound = None if series is None else round_up_bound(2 * frontier_mass * series)
    return MeasureTable(
        params=params,
        N=N,
        K=K,
        weights=weights,
        method=method,
        component_masses=component_masses,
        frontier_mass=frontier_mass,
        outward_ratio=outward,
        tail_bound=tail_bound,
    )


def reversibility_check(params: Params, N: int, K: int) -> dict:
    """Exact detailed-balance and global-balance residuals on the window.

    Zero detailed-balance residual on every in-window edge certifies the
    Kolmogorov cycle condition on every cycle; the global-balance residual
    of the censored rate matrix applied to the weights must vanish exactly
    on every state, in particular off the frontier.
    """
    mt = stationary_measure(params, N, K)
    rt = RateTable(params, N)
    max_db = Fraction(0)
    n_edges = 0
    inflow: Dict[State, Fraction] = {s: Fraction(0) for s in mt.weights}
    outflow: Dict[State, Fraction] = {s: Fraction(0) for s in mt.weights}
    for x, wx in mt.weights.items():
        for e in rt.entries(x):
            if e.rate > 0 and e.target in mt.weights:
                n_edges += 1
                residual = abs(wx * e.rate - mt.weight(e.target) * rt.rate_between(e.target, x))
                max_db = max(max_db, residual)
                inflow[e.target] += wx * e.rate
                outflow[x] += wx * e.rate
    max_gb = Fraction(0)
    max_gb_interior = Fraction(0)
    for s in mt.weights:
        residual = abs(inflow[s] - outflow[s])
        max_gb = max(max_gb, residual)
        if not is_frontier(s, K):
            max_gb_interior = max(max_gb_interior, residual)
    status = "pass" if (max_db == 0 and max_gb_interior == 0) else "fail"
    return {
        "check": "reversibility",
        "params": params_dict(params),
        "N": N,
        "K": K,
        "status": status,
        "method": mt.method,
        "edges": n_edges // 2,
        "max_residual": exact_entry(max(max_db, max_gb_interior)),
        "max_detailed_balance_residual": exact_entry(max_db),
        "max_global_balance_residual": exact_entry(max_gb),
        "tolerance": exact_entry(0),
        "seed": None,
    }


# ---------------------------------------------------------------------------
# Orthogonality and norms against the truncated measure.


def orthogonality_check(params: Params, N: int, K: int, max_size: int = 3) -> dict:
    """|<phi_lam phi_mu>_w| against the truncation-tail tolerance, lam != mu."""
    mt = stationary_measure(params, N, K)
    lams = [lam for lam in cone_partitions(max_size, N)]
    worst: Optional[Fraction] = None
    worst_pair = None
    failures = []
    for i, lam in enumerate(lams):
        phi_lam = big_qjacobi_poly(lam, params, N)
        for mu in lams[i + 1 :]:
            product = multiply(phi_lam, big_qjacobi_poly(mu, params, N))
            value = abs(mt.expectation(product))
            tol = mt.tolerance_for(product)
            if value > tol:
                failures.append((lam, mu, value, tol))
            if worst is None or value > worst:
                worst = value
                worst_pair = (lam, mu)
    status = "pass" if not failures else "fail"
    return {
        "check": "orthogonality",
        "params": params_dict(params),
        "N": N,
        "K": K,
        "status": status,
        "pairs": len(lams) * (len(lams) - 1) // 2,
        "max_residual": exact_entry(worst if worst is not None else 0),
        "worst_pair": [list(p) for p in worst_pair] if worst_pair else None,
        "tolerance": exact_entry(mt.tail_bound),
        "tail_assumption": "outward balance ratio checked at the frontier only",
        "seed": None,
    }


def norm_limit_check(
    lam: Partition,
    base: Params,
    N_list: Sequence[int],
    K: int,
    gap_tolerance: Scalar = Fraction(1, 100),
) -> dict:
    """Convergence of <phi^2>_w at shifted parameters to the closed-form h_lam.

    For each N the squared norm is an exact rational; the gap |value/h - 1|
    must shrink along N_list and end below gap_tolerance.
    """
    lam = as_partition(lam)
    gap_tolerance = frac(gap_tolerance)
    h = h_norm(lam, base)
    if h == 0:
        raise ValueError(f"h_{lam} vanishes; gap is undefined")
    rows = []
    gaps: List[Fraction] = []
    for N in N_list:
        shifted = shift_level(base, N)
        mt = stationary_measure(shifted, N, K)
        phi = big_qjacobi_poly(lam, shifted, N)
        square = multiply(phi, phi)
        value = mt.expectation(square)
        gap = abs(value / h - 1)
        gaps.append(gap)
        rows.append(
            {
                "N": N,
                "squared_norm": exact_entry(value),
                "gap": exact_entry(gap),
                "tail_tolerance": exact_entry(round_up_bound(mt.tolerance_for(square) / abs(h))),
            }
        )
    monotone = all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1))
    status = "pass" if monotone and gaps and gaps[-1] < gap_tolerance else "fail"
    return {
        "check": "norm_limit",
        "params": params_dict(base),
        "N": list(N_list),
        "K": K,
        "status": status,
        "lam": list(lam),
        "h": exact_entry(h),
        "rows": rows,
        "monotone": monotone,
        "max_residual": exact_entry(gaps[-1] if gaps else 0),
        "tolerance": exact_entry(gap_tolerance),
        "seed": None,
    }


# ---------------------------------------------------------------------------
# Eigenfunction-basis conversions and the semigroup.


def to_bigqjacobi_basis(f: SymPoly, params: Params, N: int) -> Dict[Partition, Fraction]:
    """Exact coefficients of f in the eigenfunction basis {phi_{lam|N}}."""
    fam = family(params, N)
    work = to_macdonald_basis(f, basis_cache(N, params.q, params.t))
    out: Dict[Partition, Fraction] = {}
    while work:
        lam = max(work, key=partition_sort_key)
        c = work.pop(lam)
        if c == 0:
            continue
        out[lam] = c
        for nu, pc in fam.phi_macdonald_coeffs(lam).items():
            if nu != lam:
                work[nu] = work.get(nu, Fraction(0)) - c * pc
    return out


def from_bigqjacobi_coeffs(
    coeffs: Mapping[Partition, Fraction], params: Params, N: int
) -> SymPoly:
    fam = family(params, N)
    out = zero_poly(N)
    for lam, c in coeffs.items():
        out = add(out, scale(fam.phi(lam), c))
    return out


def to_bigqjacobi_symfunc(f: SymFuncExpansion, base: Params) -> Dict[Partition, Fraction]:
    """Exact coefficients of a symmetric function in the basis {Phi_lam}."""
    if f.basis == "bigqjacobi":
        return dict(f.coeffs)
    if f.basis == "monomial":
        level = max(f.degree(), 1)
        work = to_macdonald_basis(project(f, level), basis_cache(level, base.q, base.t))
    elif f.basis == "macdonald":
        work = {as_partition(lam): frac(c) for lam, c in f.coeffs.items()}
    else:
        raise ValueError(f"unknown basis {f.basis!r}")
    out: Dict[Partition, Fraction] = {}
    while work:
        lam = max(work, key=partition_sort_key)
        c = work.pop(lam)
        if c == 0:
            continue
        out[lam] = c
        for nu, pc in phi_symfunc(lam, base).coeffs.items():
            if nu != lam:
                work[nu] = work.get(nu, Fraction(0)) - c * frac(pc)
    return out


def semigroup_apply(
    f: Union[SymPoly, SymFuncExpansion],
    s: Union[float, Scalar],
    params: Params,
    N: Optional[int],
) -> SymFuncExpansion:
    """Spectral action of the semigroup: multiply each eigenfunction
    coordinate by exp(s * mu).

    The expansion coefficients are exact; only the exponential factors are
    floats.  With N an integer the result is in the level-N eigenfunction
    basis; with N = None it is in the level-free basis {Phi_lam} with the
    stable eigenvalues.
    """
    s_float = float(s)
    if N is None:
        if isinstance(f, SymPoly):
            raise ValueError("level-free semigroup action needs a SymFuncExpansion")
        coeffs = to_bigqjacobi_symfunc(f, params)
        mus = {lam: mu_infinity(lam, params) for lam in coeffs}
    else:
        if isinstance(f, SymFuncExpansion):
            if f.basis == "bigqjacobi":
                coeffs: Dict[Partition, Union[Fraction, float]] = dict(f.coeffs)
            elif f.basis == "monomial":
                coeffs = to_bigqjacobi_basis(project(f, N), params, N)
            else:
                raise ValueError(f"unsupported input basis {f.basis!r} at a finite level")
        else:
            coeffs = to_bigqjacobi_basis(f, params, N)
        mus = {lam: mu_N(lam, params, N) for lam in coeffs}
    out = {
        lam: float(c) * math.exp(s_float * float(mus[lam])) for lam, c in coeffs.items()
    }
    return SymFuncExpansion("bigqjacobi", out)


def generator_via_spectrum(f: SymPoly, params: Params, N: int) -> SymPoly:
    """d/ds at s=0 of the semigroup action, computed exactly mode by mode.

    Equals apply_DN(f) coefficientwise; the equality is the spectral
    consistency invariant.
    """
    coeffs = to_bigqjacobi_basis(f, params, N)
    fam = family(params, N)
    out = zero_poly(N)
    for lam, c in coeffs.items():
        out = add(out, scale(fam.phi(lam), c * mu_N(lam, params, N)))
    return out


def _test_polynomial(N: int, max_size: int = 3) -> SymPoly:
    """Fixed full-support polynomial of the degree cone, for semigroup checks."""
    coeffs = {}
    for i, lam in enumerate(cone_partitions(max_size, N)):
        c = Fraction((i * 7) % 5 - 2, 1 + i % 3)
        if c != 0:
            coeffs[lam] = c
    coeffs[(1,)] = coeffs.get((1,), Fraction(0)) + 1
    return SymPoly(N, coeffs)


def semigroup_composition_check(
    params: Params,
    N: int,
    s_pairs: Sequence[Tuple[float, float]] = ((0.3, 0.7), (1.0, 1.5), (0.1, 2.4)),
    rel_tol: float = 1e-12,
) -> dict:
    """Semigroup laws in the eigenfunction basis: T(s')T(s) = T(s + s'),
    T(0) = identity, and T(s)1 = 1.

    Mode coefficients are compared with relative tolerance rel_tol; the
    identity and constant laws hold exactly mode by mode.
    """
    f = _test_polynomial(N)
    base_coeffs = to_bigqjacobi_basis(f, params, N)
    worst = 0.0
    for s, s_prime in s_pairs:
        direct = semigroup_apply(f, s + s_prime, params, N)
        composed = semigroup_apply(semigroup_apply(f, s, params, N), s_prime, params, N)
        for lam in base_coeffs:
            d = direct.coeffs[lam]
            c = composed.coeffs[lam]
            worst = max(worst, abs(c - d) / max(1.0, abs(d)))
    identity = semigroup_apply(f, 0, params, N)
    identity_exact = all(
        identity.coeffs[lam] == float(c) for lam, c in base_coeffs.items()
    )
    ones = semigroup_apply(one_poly(N), 1.0, params, N)
    conserves = ones.coeffs == {(): 1.0}
    status = "pass" if worst <= rel_tol and identity_exact and conserves else "fail"
    return {
        "check": "semigroup_composition",
        "params": params_dict(params),
        "N": N,
        "K": None,
        "status": status,
        "s_pairs": [list(p) for p in s_pairs],
        "identity_exact": identity_exact,
        "conserves_constants": conserves,
        "max_residual": float_entry(worst),
        "tolerance": float_entry(rel_tol),
        "seed": None,
    }


def spectral_consistency_check(params: Params, N: int, max_size: int = 3) -> dict:
    """generator_via_spectrum == apply_DN on every monomial of the cone, exactly."""
    worst = Fraction(0)
    for lam in cone_partitions(max_size, N):
        f = m_poly(lam, N)
        diff = sub(generator_via_spectrum(f, params, N), apply_DN(f, params, N))
        for c in diff.coeffs.values():
            worst = max(worst, abs(c))
    return {
        "check": "spectral_consistency",
        "params": params_dict(params),
        "N": N,
        "K": None,
        "status": "pass" if worst == 0 else "fail",
        "max_residual": exact_entry(worst),
        "tolerance": exact_entry(0),
        "seed": None,
    }


def _phi_value_table(
    lams: Sequence[Partition], params: Params, N: int, states: Sequence[State]
) -> Dict[Partition, List[float]]:
    table: Dict[Partition, List[float]] = {}
    for lam in lams:
        phi = family(params, N).phi(lam)
        pcoeffs = to_power_basis(phi)
        d = phi.degree()
        values = []
        for s in states:
            vec = coords_of(s, params).as_vector(N)
            values.append(float(evaluate_in_power_basis(pcoeffs, power_values(vec, d))))
        table[lam] = values
    return table


def semigroup_positivity_check(
    params: Params,
    N: int,
    K: int,
    s_values: Sequence[float] = (0.1, 1.0, 10.0),
    seed: int = 0,
    trials: int = 5,
) -> dict:
    """T(s) of squares stays above -tolerance on the whole window.

    Squares of random polynomials are nonnegative everywhere, so any value
    of the semigroup action below the declared tolerance (truncation tail
    plus float slack) fails the check.
    """
    rng = random.Random(seed)
    mt = stationary_measure(params, N, K)
    if mt.tail_bound is None:
        raise ValueError("positivity tolerance needs a certified tail bound; use smaller q")
    states = enumerate_truncated(N, K)
    basis = cone_partitions(2, N)
    worst = 0.0
    tol = 0.0
    for _ in range(trials):
        g = SymPoly(
            N,
            {
                lam: Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                for lam in basis
                if rng.random() < 0.8
            },
        )
        f = multiply(g, g)
        coeffs = to_bigqjacobi_basis(f, params, N)
        table = _phi_value_table(list(coeffs), params, N, states)
        sup_f = sup_abs_bound(f, coordinate_bound(params))
        tol = max(
            tol,
            float(mt.tail_bound * sup_f) + 1e-12 * float(sup_f) * max(1, len(coeffs)),
        )
        for s in s_values:
            factors = {
                lam: math.exp(s * float(mu_N(lam, params, N))) for lam in coeffs
            }
            for idx in range(len(states)):
                value = sum(
                    float(c) * factors[lam] * table[lam][idx] for lam, c in coeffs.items()
                )
                worst = min(worst, value)
    status = "pass" if worst >= -tol else "fail"
    return {
        "check": "semigroup_positivity",
        "params": params_dict(params),
        "N": N,
        "K": K,
        "status": status,
        "s_values": list(s_values),
        "trials": trials,
        "max_residual": float_entry(max(0.0, -worst)),
        "tolerance": float_entry(tol),
        "seed": seed,
    }


def resolvent_approx_check(
    f: SymPoly,
    s: Union[float, Scalar],
    r_list: Sequence[Scalar],
    params: Params,
    N: int,
    K: int = 8,
) -> dict:
    """Yosida-style approximation: exp(s * A_r) with A_r = r A (r - A)^(-1).

    A_r is diagonal in the eigenfunction basis with eigenvalue
    r*mu/(r - mu), so the approximation error is measured exactly per mode
    and reported as a sup distance over the enumerated window.  Distances
    must shrink strictly as r grows.
    """
    r_fracs = [frac(r) for r in r_list]
    if any(r <= 0 for r in r_fracs):
        raise ValueError("resolvent approximation needs r > 0")
    s_float = float(s)
    coeffs = to_bigqjacobi_basis(f, params, N)
    states = enumerate_truncated(N, K)
    table = _phi_value_table(list(coeffs), params, N, states)
    mus = {lam: mu_N(lam, params, N) for lam in coeffs}
    exact_factors = {lam: math.exp(s_float * float(mu)) for lam, mu in mus.items()}

    def sup_distance(factors: Mapping[Partition, float]) -> float:
        worst = 0.0
        for idx in range(len(states)):
            delta = sum(
                float(c) * (factors[lam] - exact_factors[lam]) * table[lam][idx]
                for lam, c in coeffs.items()
            )
            worst = max(worst, abs(delta))
        return worst

    distances = []
    for r in r_fracs:
        factors = {
            lam: math.exp(s_float * float(r * mu / (r - mu))) for lam, mu in mus.items()
        }
        distances.append(sup_distance(factors))
    monotone = all(distances[i] > distances[i + 1] for i in range(len(distances) - 1))
    return {
        "check": "resolvent",
        "params": params_dict(params),
        "N": N,
        "K": K,
        "status": "pass" if monotone else "fail",
        "s": s_float,
        "r_list": [str(r) for r in r_fracs],
        "distances": [float_entry(d) for d in distances],
        "monotone": monotone,
        "max_residual": float_entry(distances[-1] if distances else 0.0),
        "tolerance": float_entry(0.0),
        "seed": None,
    }


# ---------------------------------------------------------------------------
# Positive maximum principle.


def pmp_test(params: Params, N: int, K: int, trials: int, seed: int) -> dict:
    """Randomized positive-maximum-principle test on the truncated window.

    For each random polynomial of degree <= 4 the window minimum is
    certified as a global minimum before asserting: the variation bound B
    for zeroing out beyond-window particles must separate the minimum from
    every zero-containing window state.  Trials whose minimizer touches the
    frontier, or fails certification, are skipped and counted.  At every
    certified fully stored minimizer the jump-rate form of the generator is
    also checked against the interpolated polynomial exactly.
    """
    rng = random.Random(seed)
    states = enumerate_truncated(N, K)
    vectors = [coords_of(s, params).as_vector(N) for s in states]
    x_max = coordinate_bound(params)
    x_cut = truncation_cut(params, K)
    rt = RateTable(params, N)
    basis = cone_partitions(4, N)
    frontier_skipped = 0
    uncertified_skipped = 0
    asserted = 0
    violations = []
    min_asserted: Optional[Fraction] = None
    for _ in range(trials):
        f = SymPoly(
            N,
            {
                lam: Fraction(rng.randint(-12, 12), rng.randint(1, 6))
                for lam in basis
                if rng.random() < 0.7
            },
        )
        pcoeffs = to_power_basis(f)
        d = f.degree()
        values = [evaluate_in_power_basis(pcoeffs, power_values(vec, d)) for vec in vectors]
        m_star = min(values)
        argmins = [i for i, v in enumerate(values) if v == m_star]
        if any(is_frontier(states[i], K) for i in argmins):
            frontier_skipped += 1
            continue
        m_zero = min(v for s, v in zip(states, values) if s.count < N)
        bound = clip_variation_bound(f, x_max, x_cut, N, N)
        if m_zero < m_star + bound:
            uncertified_skipped += 1
            continue
        image = apply_DN(f, params, N)
        icoeffs = to_power_basis(image)
        ideg = image.degree()
        for i in argmins:
            value = evaluate_in_power_basis(icoeffs, power_values(vectors[i], ideg))
            if states[i].count == N:
                jump_form = Fraction(0)
                for e in rt.entries(states[i]):
                    if e.rate > 0:
                        tvec = coords_of(e.target, params).as_vector(N)
                        jump_form += e.rate * (
                            evaluate_in_power_basis(pcoeffs, power_values(tvec, d)) - values[i]
                        )
                if jump_form != value:
                    raise AssertionError(
                        "jump-rate generator disagrees with the interpolated polynomial "
                        f"at {state_to_str(states[i])}"
                    )
            asserted += 1
            min_asserted = value if min_asserted is None else min(min_asserted, value)
            if value < 0:
                violations.append(
                    {
                        "state": state_to_str(states[i]),
                        "value": exact_entry(value),
                    }
                )
    status = "pass" if not violations and asserted > 0 else "fail"
    return {
        "check": "pmp",
        "params": params_dict(params),
        "N": N,
        "K": K,
        "status": status,
        "trials": trials,
        "asserted": asserted,
        "frontier_skipped": frontier_skipped,
        "uncertified_skipped": uncertified_skipped,
        "violations": violations,
        "min_generator_value": exact_entry(min_asserted) if min_asserted is not None else None,
        "max_residual": exact_entry(
            max(((-frac(v["value"]["exact"])) for v in violations), default=Fraction(0))
        ),
        "tolerance": exact_entry(0),
        "seed": seed,
    }


# ---------------------------------------------------------------------------
# Intertwining and uniqueness.


def intertwining_check(lam: Partition, base: Params, N: int) -> bool:
    """Level-N and level-(N+1) renormalized expansions share one coefficient map.

    Both sides are computed at their own shifted parameters; exact equality
    of the renormalized coefficient tables is the identity that transports
    the dynamics across levels.
    """
    lam = as_partition(lam)
    if len(lam) > N:
        raise ValueError(f"partition {lam} has more than N = {N} parts")
    lower = pi_coeffs(lam, shift_level(base, N), N)
    upper = pi_coeffs(lam, shift_level(base, N + 1), N + 1)
    return lower == upper


def functional_uniqueness_check(base: Params, max_size: int) -> dict:
    """Nonsingularity of the moment system pinning the stationary functional.

    A linear functional with <1> = 1 and <Phi_lam> = 0 for 0 < |lam| <=
    max_size is unique on the degree cone iff the transition matrix from
    {Phi_lam} to the Macdonald basis is invertible; it is unitriangular by
    degree, and the exact rank computation confirms it.
    """
    cone = cone_partitions(max_size, max_size)
    index = {lam: i for i, lam in enumerate(cone)}
    n = len(cone)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for j, lam in enumerate(cone):
        for nu, c in phi_symfunc(lam, base).coeffs.items():
            matrix[index[as_partition(nu)]][j] = frac(c)
    try:
        _linalg.invert(matrix)
        nonsingular = True
    except _linalg.LinAlgError:
        nonsingular = False
    return {
        "check": "functional_uniqueness",
        "params": params_dict(base),
        "N": None,
        "K": None,
        "status": "pass" if nonsingular else "fail",
        "dimension": n,
        "max_size": max_size,
        "max_residual": exact_entry(0 if nonsingular else 1),
        "tolerance": exact_entry(0),
        "seed": None,
    }


# ---------------------------------------------------------------------------
# Operator verification suites.


def eigen_check(params: Params, N: int, max_size: int = 4) -> dict:
    """apply_DN(phi) - mu * phi == 0, exactly, over the whole size cone."""
    worst = Fraction(0)
    checked = 0
    for lam in cone_partitions(max_size, N):
        phi = big_qjacobi_poly(lam, params, N)
        residual = sub(apply_DN(phi, params, N), scale(phi, mu_N(lam, params, N)))
        checked += 1
        for c in residual.coeffs.values():
            worst = max(worst, abs(c))
    return {
        "check": "eigen",
        "params": params_dict(params),
        "N": N,
        "K": None,
        "status": "pass" if worst == 0 else "fail",
        "partitions": checked,
        "max_size": max_size,
        "max_residual": exact_entry(worst),
        "tolerance": exact_entry(0),
        "seed": None,
    }


def univariate_consistency_check(params: Params, n_max: int = 6) -> dict:
    """apply_DN at N = 1 against the closed-form monomial action, x^n, n <= n_max."""
    worst = Fraction(0)
    for n in range(n_max + 1):
        f = m_poly((n,) if n else (), 1)
        diff = sub(apply_DN(f, params, 1), apply_D1(f, params))
        for c in diff.coeffs.values():
            worst = max(worst, abs(c))
    return {
        "check": "univariate_consistency",
        "params": params_dict(params),
        "N": 1,
        "K": None,
        "status": "pass" if worst == 0 else "fail",
        "n_max": n_max,
        "max_residual": exact_entry(worst),
        "tolerance": exact_entry(0),
        "seed": None,
    }


def constant_term_oracle(params: Params, N: int) -> Tuple[Fraction, Fraction]:
    """Closed-form constant terms of D_N p_2 and D_N e_2.

    With C = (q t^(N-1)/(a|b|)) (1-q)(1-t^N)/(1-t):
        CT(D_N p_2) = C (1+q)(t^(1-N) q^(-1) - 1)
        CT(D_N e_2) = -C (t^(1-N) - 1)
    """
    q, t, a, b = params.q, params.t, params.a, params.b
    c = (q * t ** (N - 1) / (a * -b)) * (1 - q) * (1 - t**N) / (1 - t)
    ct_p = c * (1 + q) * (t ** (1 - N) / q - 1)
    ct_e = -c * (t ** (1 - N) - 1)
    return ct_p, ct_e


def constant_term_check(params: Params, N_max: int = 5) -> dict:
    """Constant terms of D_N p_2 and D_N e_2 against the closed forms, N <= N_max."""
    worst = Fraction(0)
    for n in range(1, N_max + 1):
        expected_p, expected_e = constant_term_oracle(params, n)
        got_p = apply_DN(p_poly(2, n), params, n).coeff(())
        got_e = apply_DN(e_poly(2, n), params, n).coeff(())
        worst = max(worst, abs(got_p - expected_p), abs(got_e - expected_e))
        if n == 1:
            direct = (1 - params.q) ** 2 * (1 + params.q) / (params.a * -params.b)
            worst = max(worst, abs(got_p - direct))
    return {
        "check": "constant_terms",
        "params": params_dict(params),
        "N": N_max,
        "K": None,
        "status": "pass" if worst == 0 else "fail",
        "max_residual": exact_entry(worst),
        "tolerance": exact_entry(0),
        "seed": None,
    }


# ---------------------------------------------------------------------------
# Simulation vs stationary measure.


def empirical_vs_stationary(
    params: Params,
    N: int,
    K: int,
    min_events: int,
    seed: int,
    tv_tolerance: float = 0.05,
) -> dict:
    """Total-variation distance between pooled simulation occupation and the
    exact stationary measure.

    The sign components never communicate, so each gets its own run
    sequence with an event budget proportional to its exact mass, and the
    empirical mixture uses the same masses.  A truncated run resumes from
    the state it held just before touching the frontier: the frontier entry
    occupies zero time, so the pooled occupation is that of the chain with
    outward edges suppressed, whose stationary law is exactly the measure
    table (an edge subgraph of a reversible chain keeps its weights).
    """
    mt = stationary_measure(params, N, K)
    rt = RateTable(params, N)
    empirical: Dict[State, float] = {}
    total_events = 0
    truncated_runs = 0
    run_seed = seed
    for key, mass in mt.component_masses.items():
        target = max(2000, int(min_events * float(mass)) + 1)
        current = ground_state(N, key[1])
        times: Dict[State, float] = {}
        got = 0
        while got < target:
            traj = simulate(
                current,
                params,
                N,
                horizon=math.inf,
                K=K,
                seed=run_seed,
                max_events=target - got,
                rate_table=rt,
            )
            run_seed += 1
            got += max(traj.n_jumps, 1)
            events = traj.events
            for (t0, s0), (t1, _) in zip(events, events[1:]):
                times[s0] = times.get(s0, 0.0) + (t1 - t0)
            last_time, last_state = events[-1]
            if traj.end_time > last_time:
                times[last_state] = times.get(last_state, 0.0) + (traj.end_time - last_time)
            if traj.truncated:
                truncated_runs += 1
                current = events[-2][1]
            else:
                current = events[-1][1]
        span = sum(times.values())
        total_events += got
        if span <= 0:
            raise AssertionError("component run accumulated no holding time")
        for s, v in times.items():
            empirical[s] = empirical.get(s, 0.0) + float(mass) * (v / span)
    tv = tv_distance(empirical, mt.float_weights())
    status = "pass" if tv <= tv_tolerance else "fail"
    return {
        "check": "simulation_tv",
        "params": params_dict(params),
        "N": N,
        "K": K,
        "status": status,
        "events": total_events,
        "truncated_runs": truncated_runs,
        "tv_distance": float_entry(tv),
        "max_residual": float_entry(tv),
        "tolerance": float_entry(tv_tolerance),
        "tail_bound": exact_entry(mt.tail_bound) if mt.tail_bound is not None else None,
        "measure_method": mt.method,
        "seed": seed,
    }
