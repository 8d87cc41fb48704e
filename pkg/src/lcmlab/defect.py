"""Three independent routes to the gcd defect E gcd(n, m) - 1.

Pairwise: the O(count^2) double sum of gcd(n,m)/(nm) over the set,
normalized by S^2; the reference oracle, capped by element count.
DivisorSum: the totient-weighted sum of squared divisor probabilities,
sum over d > 1 of phi(d) * P(d|n)^2; exact and linear in the divisor
structure.  PrimeTruncated: the same sum restricted to prime d, a lower
bound for the defect.  Pairwise and DivisorSum must agree to rounding
(the Gauss identity gcd(n,m) = sum of phi(d) over common divisors d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, PairwiseCapError
from .sieve import SpfTable, divisors, euler_phi, factorize
from . import stats
from .stats import WeightedSet, _dense_weights, prime_profile

PAIRWISE_CAP = 20_000


@dataclass
class DefectReport:
    method: str  # "pairwise" | "divisor_sum" | "prime_truncated"
    total: float  # S(x)
    e_gcd: float | None  # None for prime_truncated (lower bound only)
    defect: float
    element_count: int
    conc_offdiag: float | None  # sum_{n<m} 1/lcm(n,m) / S^2; pairwise only
    runtime_note: str | None = None


def defect_pairwise(w: WeightedSet, cap: int = PAIRWISE_CAP) -> DefectReport:
    """Exact double sum over all ordered pairs; also the off-diagonal
    reciprocal-lcm statistic via lcm(n,m) = nm/gcd(n,m)."""
    w.require_nonempty()
    if w.count > cap:
        raise PairwiseCapError(
            f"{w.count} elements exceed the pairwise cap {cap}; use defect_divisor_sum"
        )
    elements = w.elements.tolist()
    weights = w.weights.tolist()
    gcd_terms = []
    lcm_terms = []
    for i, (n, wn) in enumerate(zip(elements, weights)):
        gcd_terms.append(n * wn * wn)  # diagonal: gcd(n,n) = n
        for m, wm in zip(elements[i + 1 :], weights[i + 1 :]):
            g = math.gcd(n, m)
            gcd_terms.append(2.0 * g * wn * wm)
            lcm_terms.append(g * wn * wm)  # 1/lcm = gcd/(nm)
    s2 = w.total * w.total
    e_gcd = math.fsum(gcd_terms) / s2
    conc = math.fsum(lcm_terms) / s2
    return DefectReport(
        method="pairwise",
        total=w.total,
        e_gcd=e_gcd,
        defect=e_gcd - 1.0,
        element_count=w.count,
        conc_offdiag=conc,
    )


def defect_divisor_sum(w: WeightedSet, table: SpfTable) -> DefectReport:
    """Defect as sum over d > 1 of phi(d) * (w_d/S)^2, w_d the weight of
    multiples of d.  Small sets accumulate per element over its divisors;
    large sets use the compiled stride kernel over a dense weight array."""
    w.require_nonempty()
    top = int(w.elements[-1])
    if top > table.limit:
        raise CapacityError(f"elements reach {top}, beyond sieve limit {table.limit}")
    if w.count > stats.DENSE_THRESHOLD:
        from .kernels import divisor_sum_defect as _kernel

        defect = _kernel(_dense_weights(w), table.phi_table(), w.total, top)
        note = "dense stride kernel"
    else:
        acc: dict[int, list] = {}
        for n, weight in zip(w.elements.tolist(), w.weights.tolist()):
            for d in divisors(factorize(n, table)):
                if d > 1:
                    acc.setdefault(d, []).append(weight)
        s = w.total
        defect = math.fsum(
            euler_phi(factorize(d, table)) * (math.fsum(acc[d]) / s) ** 2
            for d in sorted(acc)
        )
        note = None
    return DefectReport(
        method="divisor_sum",
        total=w.total,
        e_gcd=defect + 1.0,
        defect=defect,
        element_count=w.count,
        conc_offdiag=None,
        runtime_note=note,
    )


def defect_prime_truncated(w: WeightedSet, table: SpfTable) -> DefectReport:
    """Lower bound: the divisor sum restricted to prime d."""
    w.require_nonempty()
    primes, sums = prime_profile(w, table)
    s = w.total
    defect = math.fsum((p - 1) * (wp / s) ** 2 for p, wp in zip(primes.tolist(), sums.tolist()))
    return DefectReport(
        method="prime_truncated",
        total=w.total,
        e_gcd=None,
        defect=defect,
        element_count=w.count,
        conc_offdiag=None,
    )
