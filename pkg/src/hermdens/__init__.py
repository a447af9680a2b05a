"""Exact local-density invariants of hermitian lattices over p-adic rings.

Everything is exact: rational functions in the residue cardinality q live
in QRat, counts are integers, and every closed form ships with at least
one independently computed route (coset enumeration, overlattice sums, or
congruence counting) that the verification suites compare it against.
"""

from .errors import (
    BudgetExceeded,
    DegenerateGram,
    DivisionByZero,
    EmptyStratum,
    HermdensError,
    IndexOutOfRange,
    InvalidCase,
    InvalidInvariants,
    InvalidParity,
    InvalidPrime,
    InvalidProfile,
    NotStabilized,
    ParityMismatch,
    PoleAtPoint,
    PrecisionLoss,
    UnderdeterminedFit,
    UnsupportedKind,
)
from .qexact import QONE, QRat, QVAR, QZERO, qpochhammer, qr_eval
from .padic_model import (
    ExactScalar,
    GramMatrix,
    HermLattice,
    RingModel,
    check_invariants,
    gram_conjugate,
    gram_invariants,
    profile_of,
)
from .lattice_enum import (
    AGGREGATES,
    STRATA,
    OverlatticeItem,
    aggregate_strata,
    coset_mu,
    count_isomorphic_overlattices,
    count_split_summand_overlattices,
    enumerate_strata,
    graded_coset_count,
    integral_overlattice_closure,
    mu_closed,
    mu_recursion_eta,
    overlattices,
    reduced_overlattice,
    split_case12,
    stratum_counts,
    submodules,
    window_norm_count,
)
from .cy_densities import (
    DensityValue,
    beta_combination,
    c_const,
    correction_coeff,
    cy_d,
    cy_d_lambda,
    extend_profile,
    horizontal_ratio,
    kappa,
    pden_lattice,
    pden_primitive_at,
    ppden_moebius,
    self_density,
)
from .fourier import fourier_pden_primitive
from .oracle import CountJob, density, density_poly, herm_count
from .suites import (
    DESCRIPTIONS,
    CaseResult,
    SuiteResult,
    run_suite,
    run_suites,
    suite_names,
)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
