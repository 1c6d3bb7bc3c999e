"""Exact multivariate big q-Jacobi eigenfunctions and their jump dynamics.

Everything structural is computed in exact rational arithmetic: the complex
parameter pair enters only through its elementary symmetric combinations,
so polynomials, eigenvalues, norms, jump rates, and stationary weights are
all Fractions.  Floats appear exactly twice, by design: exponential factors
of the semigroup/resolvent action, and random holding-time draws in the
simulator (whose jump choices still compare exact rates).
"""

from .qalgebra import (
    ConjugatePair,
    Params,
    Partition,
    as_partition,
    boxes,
    c_minus,
    c_plus,
    conjugate,
    frac,
    gen_pochhammer,
    gen_pochhammer_conjpair,
    make_params,
    partition_stats,
    partitions_of,
    partitions_up_to,
    shift_level,
)
from .statespace import (
    Coordinates,
    JumpMove,
    State,
    coords_of,
    empty_state,
    enumerate_truncated,
    is_admissible,
    is_frontier,
    jump_targets,
    state_from_str,
    state_to_str,
)
from .symfunc import (
    SymFuncExpansion,
    SymPoly,
    add,
    clip_variation_bound,
    cone_partitions,
    dominates,
    e_poly,
    evaluate,
    m_poly,
    multiply,
    one_poly,
    p_poly,
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
from .macdonald import (
    EigenvalueCollisionError,
    macdonald_eigenvalue,
    macdonald_operator_apply,
    macdonald_poly,
    macdonald_stability_check,
    to_macdonald_basis,
)
from .bigqjacobi import (
    CertifiedBound,
    StabilityError,
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
from .dynamics import (
    MeasureTable,
    RateEntry,
    RateTable,
    Trajectory,
    constant_term_check,
    eigen_check,
    empirical_vs_stationary,
    functional_uniqueness_check,
    generator_via_spectrum,
    ground_state,
    intertwining_check,
    norm_limit_check,
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

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
