"""lcmlab: desk-scale experiments on dense integer sets whose pairwise
least common multiples are unusually large (equivalently, whose pairwise
gcd defect under the logarithmic measure is small)."""

__version__ = "0.1.0"

from .construction import (
    ConstructionParams,
    IntervalPoint,
    enumerate_members,
    interval_index,
    is_member,
    iterated_log,
    point_at,
)
from .defect import DefectReport, defect_divisor_sum, defect_pairwise, defect_prime_truncated
from .sets import (
    AtMostKAlmost,
    ExactlyKAlmost,
    Explicit,
    LgrReport,
    PrimeFilter,
    Primes,
    SmoothSquarefree,
    TaoConstruction,
    enumerate_set,
    lgr_report,
    logall_report,
)
from .sieve import (
    Factorization,
    SpfTable,
    build_spf,
    euler_phi,
    factorize,
    is_squarefree,
    load_cache,
    mertens_sum,
    primes_in,
    save_cache,
)
from .stats import (
    UpperBoundDiagnostics,
    WeightedSet,
    divisor_probability,
    from_elements,
    materialize,
    omega_expectation,
    prime_profile,
    upper_bound_diagnostics,
)

__all__ = [name for name in dir() if not name.startswith("_")]
