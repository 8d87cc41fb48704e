"""Declarative integer-set specifications and their enumerators.

Reference families: the parameterized gcd-defect construction, the
primes, squarefree k-almost-primes over a prime filter, squarefree
smooth numbers, and explicit lists loaded from disk.  Also houses the
logarithmic growth-rate report (sum over products of k distinct primes
versus (1/k!)(sum 1/p)^k) and its unconditional smooth-number analogue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .construction import ConstructionParams, enumerate_members, log_factorial
from .errors import CapacityError, DomainError, ExplicitFileError
from .sieve import SpfTable

__all__ = [
    "PrimeFilter",
    "TaoConstruction",
    "Primes",
    "ExactlyKAlmost",
    "AtMostKAlmost",
    "SmoothSquarefree",
    "Explicit",
    "enumerate_set",
    "spec_label",
    "read_explicit",
    "write_explicit",
    "LgrReport",
    "lgr_report",
    "logall_report",
]


@dataclass(frozen=True)
class PrimeFilter:
    """Primes p with lo < p <= hi (lo defaults to 0, i.e. no lower bound)."""

    hi: float
    lo: float = 0.0

    def select(self, table: SpfTable, x: float | None = None) -> np.ndarray:
        if self.hi > table.limit:
            raise CapacityError(f"prime filter bound {self.hi} exceeds sieve limit {table.limit}")
        primes = table.primes
        i = np.searchsorted(primes, self.lo, side="right")
        hi = self.hi if x is None else min(self.hi, x)
        j = np.searchsorted(primes, hi, side="right")
        return primes[i:j]


@dataclass(frozen=True)
class TaoConstruction:
    params: ConstructionParams


@dataclass(frozen=True)
class Primes:
    pass


@dataclass(frozen=True)
class ExactlyKAlmost:
    primes: PrimeFilter
    k: int


@dataclass(frozen=True)
class AtMostKAlmost:
    primes: PrimeFilter
    k: int


@dataclass(frozen=True)
class SmoothSquarefree:
    primes: PrimeFilter


@dataclass(frozen=True)
class Explicit:
    path: str


SetSpec = TaoConstruction | Primes | ExactlyKAlmost | AtMostKAlmost | SmoothSquarefree | Explicit


def spec_label(spec: SetSpec) -> str:
    if isinstance(spec, TaoConstruction):
        return f"tao(C0={spec.params.c0})"
    if isinstance(spec, Primes):
        return "primes"
    if isinstance(spec, ExactlyKAlmost):
        return f"kalmost:{spec.k}"
    if isinstance(spec, AtMostKAlmost):
        return f"kalmost<=:{spec.k}"
    if isinstance(spec, SmoothSquarefree):
        return "smooth"
    if isinstance(spec, Explicit):
        return f"file:{spec.path}"
    raise DomainError(f"unknown set spec {spec!r}")


def _squarefree_products(primes: list, x: float, k_exact: int | None, k_max: int | None) -> list:
    """DFS over ascending distinct primes with running-product cutoff at x.

    k_exact selects products of exactly that many primes; otherwise up to
    k_max primes (k_max=None means unbounded).  The empty product 1 counts
    as zero primes.
    """
    out = []
    n_primes = len(primes)

    def rec(start, prod, count):
        if (k_exact is None or count == k_exact) and prod <= x:
            out.append(prod)
        if k_exact is not None and count >= k_exact:
            return
        if k_max is not None and count >= k_max:
            return
        for i in range(start, n_primes):
            value = prod * primes[i]
            if value > x:
                break
            rec(i + 1, value, count + 1)

    if x >= 1:
        rec(0, 1, 0)
    return out


def enumerate_set(spec: SetSpec, x: float, table: SpfTable) -> np.ndarray:
    """Elements of the set that are <= x, ascending (int64)."""
    if x > table.limit:
        raise CapacityError(f"x={x} exceeds sieve limit {table.limit}")
    if isinstance(spec, TaoConstruction):
        return enumerate_members(x, spec.params, table)
    if isinstance(spec, Primes):
        primes = table.primes
        return primes[: np.searchsorted(primes, x, side="right")]
    if isinstance(spec, ExactlyKAlmost):
        if spec.k < 0:
            raise DomainError(f"k must be >= 0, got {spec.k}")
        ps = spec.primes.select(table, x).tolist()
        return np.array(sorted(_squarefree_products(ps, x, spec.k, None)), dtype=np.int64)
    if isinstance(spec, AtMostKAlmost):
        if spec.k < 0:
            raise DomainError(f"k must be >= 0, got {spec.k}")
        ps = spec.primes.select(table, x).tolist()
        return np.array(sorted(_squarefree_products(ps, x, None, spec.k)), dtype=np.int64)
    if isinstance(spec, SmoothSquarefree):
        ps = spec.primes.select(table, x).tolist()
        return np.array(sorted(_squarefree_products(ps, x, None, None)), dtype=np.int64)
    if isinstance(spec, Explicit):
        values = read_explicit(spec.path)
        return values[: np.searchsorted(values, x, side="right")]
    raise DomainError(f"unknown set spec {spec!r}")


def read_explicit(path) -> np.ndarray:
    """Explicit set file: one positive integer per line, strictly ascending,
    '#' comments and blank lines allowed."""
    values = []
    prev = 0
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                value = int(line)
            except ValueError:
                raise ExplicitFileError(f"{path}:{lineno}: not an integer: {line!r}") from None
            if value <= 0:
                raise ExplicitFileError(f"{path}:{lineno}: values must be positive, got {value}")
            if value <= prev:
                raise ExplicitFileError(
                    f"{path}:{lineno}: values must be strictly ascending ({value} after {prev})"
                )
            values.append(value)
            prev = value
    return np.array(values, dtype=np.int64)


def write_explicit(path, values, header: str | None = None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for v in values:
            fh.write(f"{int(v)}\n")


@dataclass(frozen=True)
class LgrReport:
    """Growth-rate comparison for products of k distinct primes up to x."""

    sum_exact_k: float
    sum_at_most_k: float
    rhs: float
    margin: float

    def ratio(self) -> float:
        return self.sum_exact_k / self.rhs if self.rhs else math.nan


def lgr_report(primes: PrimeFilter, k: int, x: float, table: SpfTable) -> LgrReport:
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if x > table.limit:
        raise CapacityError(f"x={x} exceeds sieve limit {table.limit}")
    ps = primes.select(table, x).tolist()
    exact = _squarefree_products(ps, x, k, None)
    at_most = _squarefree_products(ps, x, None, k)
    sum_exact = math.fsum(1.0 / n for n in sorted(exact))
    sum_at_most = math.fsum(1.0 / n for n in sorted(at_most))
    prime_sum = math.fsum(1.0 / p for p in ps)
    if k == 0:
        rhs = 1.0
    elif prime_sum <= 0:
        rhs = 0.0
    elif k <= 170:
        rhs = prime_sum**k / math.factorial(k)
    else:
        rhs = math.exp(k * math.log(prime_sum) - log_factorial(k))
    if k == 0:
        margin = 0.0
    elif prime_sum > 0:
        margin = k / prime_sum
    else:
        margin = math.inf
    return LgrReport(sum_exact_k=sum_exact, sum_at_most_k=sum_at_most, rhs=rhs, margin=margin)


def logall_report(primes: PrimeFilter, x: float, table: SpfTable) -> dict:
    """lhs: sum of 1/n over squarefree smooth n <= x; rhs: prod (1 + 1/p)."""
    if x > table.limit:
        raise CapacityError(f"x={x} exceeds sieve limit {table.limit}")
    ps = primes.select(table, x).tolist()
    elements = sorted(_squarefree_products(ps, x, None, None))
    lhs = math.fsum(1.0 / n for n in elements)
    rhs = 1.0
    for p in ps:
        rhs *= 1.0 + 1.0 / p
    return {"lhs": lhs, "rhs_product": rhs}
