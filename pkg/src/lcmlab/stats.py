"""Logarithmic-measure statistics over a materialized integer set.

A WeightedSet holds the elements n <= x with weights 1/n and the
compensated total S(x).  Divisor probabilities P(d | n) and the
upper-bound diagnostic chain (sum of prime probabilities, its
Cauchy-Schwarz cap, expected factor count, Jensen quantity) are computed
from the sparse prime profile {(p, P(p|n)) : P > 0}.

Small sets accumulate per element with math.fsum (the exact reference
path); sets above DENSE_THRESHOLD switch to compiled stride sums over a
dense weight array.  Both paths are deterministic and accumulate the
same mathematical sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .construction import iterated_log
from .errors import CapacityError, DomainError, EmptySetError
from .sieve import SpfTable, factorize
from .sets import SetSpec, enumerate_set, spec_label

DENSE_THRESHOLD = 200_000


@dataclass
class WeightedSet:
    """Elements n <= x with logarithmic weights 1/n and their total S(x)."""

    x: float
    elements: np.ndarray
    weights: np.ndarray
    total: float
    label: str

    @property
    def count(self) -> int:
        return len(self.elements)

    def require_nonempty(self) -> None:
        if self.total <= 0.0:
            raise EmptySetError(f"set {self.label!r} at x={self.x} has total weight 0")


def from_elements(elements, x: float, label: str = "explicit") -> WeightedSet:
    arr = np.asarray(sorted(int(v) for v in elements), dtype=np.int64)
    if len(arr) and arr[0] < 1:
        raise DomainError("elements must be positive integers")
    weights = 1.0 / arr if len(arr) else np.zeros(0)
    total = math.fsum(weights)
    return WeightedSet(x=x, elements=arr, weights=weights, total=total, label=label)


def materialize(spec: SetSpec, x: float, table: SpfTable) -> WeightedSet:
    elements = enumerate_set(spec, x, table)
    weights = 1.0 / elements if len(elements) else np.zeros(0)
    total = math.fsum(weights)
    return WeightedSet(x=x, elements=elements, weights=weights, total=total, label=spec_label(spec))


def divisor_probability(w: WeightedSet, d: int) -> float:
    """P(d | n) under the logarithmic measure: weight of multiples of d over S."""
    w.require_nonempty()
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    mask = w.elements % d == 0
    return math.fsum(w.weights[mask]) / w.total


def _dense_weights(w: WeightedSet) -> np.ndarray:
    size = int(w.elements[-1]) + 1
    wt = np.zeros(size, dtype=np.float64)
    wt[w.elements] = w.weights
    return wt


def prime_profile(w: WeightedSet, table: SpfTable) -> tuple[np.ndarray, np.ndarray]:
    """Sparse prime profile: (primes p, raw weight sums w_p) with w_p > 0.

    P(p|n) = w_p / S.  Keys ascend; each w_p accumulates in a fixed order.
    """
    w.require_nonempty()
    top = int(w.elements[-1])
    if top > table.limit:
        raise CapacityError(f"elements reach {top}, beyond sieve limit {table.limit}")
    if w.count > DENSE_THRESHOLD:
        from .kernels import divisor_weight_sums_primes

        primes = table.primes
        n_p = np.searchsorted(primes, top, side="right")
        sums = divisor_weight_sums_primes(_dense_weights(w), primes[:n_p], top)
        keep = sums > 0.0
        return primes[:n_p][keep], sums[keep]
    acc: dict[int, list] = {}
    for n, weight in zip(w.elements.tolist(), w.weights.tolist()):
        for p, _ in factorize(n, table).factors:
            acc.setdefault(p, []).append(weight)
    ps = sorted(acc)
    return (
        np.array(ps, dtype=np.int64),
        np.array([math.fsum(acc[p]) for p in ps], dtype=np.float64),
    )


def _omega_of_elements(w: WeightedSet, table: SpfTable) -> np.ndarray:
    if w.count > DENSE_THRESHOLD:
        return table.omega_table()[w.elements].astype(np.float64)
    return np.array(
        [factorize(n, table).omega for n in w.elements.tolist()], dtype=np.float64
    )


def omega_expectation(w: WeightedSet, table: SpfTable) -> float:
    """E omega(n) = sum of weight(n) * omega(n) / S."""
    w.require_nonempty()
    omegas = _omega_of_elements(w, table)
    if w.count > DENSE_THRESHOLD:
        return float(np.sum(w.weights * omegas)) / w.total
    return math.fsum(w.weights * omegas) / w.total


@dataclass(frozen=True)
class UpperBoundDiagnostics:
    """Observables of the defect-to-density chain at scale x."""

    sum_p: float
    d2: float
    cs_bound: float
    e_omega: float
    jensen_quantity: float
    est3_rhs_exponent: float


def upper_bound_diagnostics(w: WeightedSet, table: SpfTable) -> UpperBoundDiagnostics:
    w.require_nonempty()
    primes, sums = prime_profile(w, table)
    s = w.total
    sum_p = math.fsum(sums) / s
    d2 = math.fsum((p - 1) * (wp / s) ** 2 for p, wp in zip(primes.tolist(), sums.tolist()))
    all_primes = table.primes
    n_p = np.searchsorted(all_primes, w.x, side="right")
    recip = math.fsum(1.0 / (p - 1) for p in all_primes[:n_p].tolist())
    cs_bound = math.sqrt(d2 * recip)
    omegas = _omega_of_elements(w, table)
    log3x = iterated_log(w.x, 3)
    damped = w.weights * np.exp(-omegas * log3x)
    if w.count > DENSE_THRESHOLD:
        e_omega = float(np.sum(w.weights * omegas)) / s
        jensen = float(np.sum(damped)) / s
    else:
        e_omega = math.fsum(w.weights * omegas) / s
        jensen = math.fsum(damped) / s
    est3 = math.sqrt(iterated_log(w.x, 2)) * log3x
    return UpperBoundDiagnostics(
        sum_p=sum_p,
        d2=d2,
        cs_bound=cs_bound,
        e_omega=e_omega,
        jensen_quantity=jensen,
        est3_rhs_exponent=est3,
    )
