"""The parameterized construction of a dense set with small gcd defect.

Interval boundaries live at x_k = exp(exp(k^2/C0^2)) for natural k >= C0.
All boundary comparisons happen in loglog space (compare Log2 n against
k^2/C0^2); ties at floating-point equality resolve to the lower interval,
matching the half-open-left convention (x_k, x_{k+1}].

A member n of the set is squarefree, lies in some interval (x_k, x_{k+1}],
and is either
  (i)  a product of at most k primes, all <= x_k, or
  (ii) a product of at most k primes <= x_k^{eps(n)} times exactly one
       prime in (x_k, x_{k+1}],
with eps(n) = (h(n)/h(x_{k+1}))^{k/C0^2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError, OutOfDomainError
from .sieve import Factorization, SpfTable, factorize, is_squarefree


def iterated_log(x: float, depth: int) -> float:
    """Log x = max(log x, 1), iterated `depth` times (depth 1, 2, or 3)."""
    if x <= 0:
        raise DomainError(f"iterated_log requires x > 0, got {x}")
    if depth not in (1, 2, 3):
        raise DomainError(f"depth must be 1, 2, or 3, got {depth}")
    v = x
    for _ in range(depth):
        v = max(math.log(v), 1.0)
    return v


@lru_cache(maxsize=None)
def log_factorial(k: int) -> float:
    """log k! by exact summation of logs (k up to 10^4)."""
    if k < 0:
        raise DomainError(f"log_factorial requires k >= 0, got {k}")
    if k > 10**4:
        raise DomainError(f"log_factorial supports k <= 10^4, got {k}")
    return math.fsum(math.log(i) for i in range(2, k + 1))


@dataclass(frozen=True)
class ConstructionParams:
    """C0 plus the derived first interval index k_min = ceil(C0)."""

    c0: float

    def __post_init__(self):
        if not self.c0 > 0:
            raise DomainError(f"C0 must be positive, got {self.c0}")

    @property
    def k_min(self) -> int:
        return max(math.ceil(self.c0), 1)

    def loglog_boundary(self, k: float) -> float:
        """L_k = k^2/C0^2 = Log2 x_k; accepts real k >= C0 as a utility."""
        return k * k / (self.c0 * self.c0)

    def log_boundary(self, k: float) -> float:
        """log x_k = exp(L_k)."""
        return math.exp(self.loglog_boundary(k))

    def boundary(self, k: float) -> float:
        """x_k itself; inf once exp(L_k) exceeds float range."""
        lb = self.log_boundary(k)
        return math.exp(lb) if lb < 700.0 else math.inf


@dataclass(frozen=True)
class IntervalPoint:
    """The construction's pointwise data at x: interval index and h, psi, F, eps."""

    x: float
    k: int
    llx: float
    h: float
    psi: float
    logF: float
    eps: float


def interval_index(x: float, params: ConstructionParams) -> int | None:
    """The unique k >= k_min with L_k < Log2 x <= L_{k+1}, or None below domain."""
    if x <= 1:
        raise DomainError(f"interval_index requires x > 1, got {x}")
    llx = iterated_log(x, 2)
    k_min = params.k_min
    if llx <= params.loglog_boundary(k_min):
        return None
    k = max(k_min, int(params.c0 * math.sqrt(llx)))
    while params.loglog_boundary(k) >= llx:
        k -= 1
    while params.loglog_boundary(k + 1) < llx:
        k += 1
    return k


def point_at(x: float, params: ConstructionParams) -> IntervalPoint:
    k = interval_index(x, params)
    if k is None:
        raise OutOfDomainError(
            f"x={x} lies at or below the first boundary x_{params.k_min} of C0={params.c0}"
        )
    llx = iterated_log(x, 2)
    L_k = params.loglog_boundary(k)
    h = llx - L_k + 1.0
    h_top = params.loglog_boundary(k + 1) - L_k + 1.0
    psi = 1.0 + h * h / h_top
    eps = (h / h_top) ** (k / (params.c0 * params.c0))
    logF = math.log(psi) + 2 * k * math.log(k) - 2 * k * math.log(params.c0) - log_factorial(k)
    return IntervalPoint(x=x, k=k, llx=llx, h=h, psi=psi, logF=logF, eps=eps)


def _eps_at(n: float, k: int, params: ConstructionParams) -> float:
    L_k = params.loglog_boundary(k)
    h = iterated_log(n, 2) - L_k + 1.0
    h_top = params.loglog_boundary(k + 1) - L_k + 1.0
    return (h / h_top) ** (k / (params.c0 * params.c0))


def is_member(n: int, f: Factorization, params: ConstructionParams) -> bool:
    """Membership test for the construction; expects f = factorize(n)."""
    if n < 2:
        return False
    if not is_squarefree(f):
        return False
    k = interval_index(n, params)
    if k is None:
        return False
    log_xk = params.log_boundary(k)
    large = [p for p, _ in f.factors if math.log(p) > log_xk]
    if not large:
        return f.omega <= k
    if len(large) != 1 or f.omega - 1 > k:
        return False
    bound = _eps_at(n, k, params) * log_xk
    return all(math.log(q) <= bound for q, _ in f.factors if q != large[0])


def enumerate_members(
    x: float, params: ConstructionParams, table: SpfTable, method: str = "auto"
) -> np.ndarray:
    """All members <= x, ascending.

    method="scan" is the reference path (factorize every n up to x);
    method="dfs" builds members as prime products and is used for large x.
    The two agree element-for-element (enforced by the test suite).
    """
    if x > table.limit:
        raise CapacityError(f"x={x} exceeds sieve limit {table.limit}")
    if method == "auto":
        method = "dfs"
    if method == "scan":
        return _enumerate_scan(x, params, table)
    if method == "dfs":
        return _enumerate_dfs(x, params, table)
    raise DomainError(f"unknown enumeration method {method!r}")


def _enumerate_scan(x, params, table):
    out = [
        n
        for n in range(2, math.floor(x) + 1)
        if is_member(n, factorize(n, table), params)
    ]
    return np.array(out, dtype=np.int64)


def _products_in_range(primes: list, max_count: int, lo: float, hi: float) -> list:
    """Squarefree products of 1..max_count distinct primes, in (lo, hi]."""
    out = []
    n_primes = len(primes)

    def rec(start, prod, count):
        for i in range(start, n_primes):
            value = prod * primes[i]
            if value > hi:
                break
            if value > lo:
                out.append(value)
            if count + 1 < max_count:
                rec(i + 1, value, count + 1)

    if max_count >= 1:
        rec(0, 1, 0)
    return out


def _integer_boundary(k: int, params: ConstructionParams) -> int:
    """Largest integer n >= 1 with Log2 n <= L_k, via the same float path
    as interval_index so scan and DFS agree bit-for-bit at boundaries."""
    L_k = params.loglog_boundary(k)
    if L_k >= math.log(math.log(2**62)):
        return 2**62  # beyond any supported sieve limit; acts as +inf
    n = max(math.floor(params.boundary(k)), 1)
    while iterated_log(n + 1, 2) <= L_k:
        n += 1
    while n >= 2 and iterated_log(n, 2) > L_k:
        n -= 1
    return n


def _enumerate_dfs(x, params, table):
    out: list[int] = []
    primes_all = table.primes
    c0sq = params.c0 * params.c0
    x_floor = math.floor(x)
    k = params.k_min
    n_lo = _integer_boundary(k, params)
    while n_lo < x_floor:
        L_k = params.loglog_boundary(k)
        log_xk = params.log_boundary(k)
        n_next = _integer_boundary(k + 1, params)
        n_hi = min(x_floor, n_next)
        h_top = params.loglog_boundary(k + 1) - L_k + 1.0
        exponent = k / c0sq

        # split primes exactly as is_member does: small iff log p <= log x_k
        i_small = int(np.searchsorted(primes_all, math.exp(log_xk), side="right"))
        while i_small < len(primes_all) and math.log(primes_all[i_small]) <= log_xk:
            i_small += 1
        while i_small > 0 and math.log(primes_all[i_small - 1]) > log_xk:
            i_small -= 1
        small = primes_all[:i_small].tolist()

        # form (i): at most k small primes, product inside the interval
        out.extend(_products_in_range(small, k, n_lo, n_hi))

        # form (ii): one large prime times a small cofactor passing the eps gate
        j_large = int(np.searchsorted(primes_all, n_hi, side="right"))
        large = primes_all[i_small:j_large].tolist()
        n_small = len(small)

        def accept(n, max_q):
            # all small primes q of n must satisfy log q <= eps(n) * log x_k
            h = iterated_log(n, 2) - L_k + 1.0
            eps = (h / h_top) ** exponent
            return math.log(max_q) <= eps * log_xk

        def rec(start, prod, count, p, cap):
            for i in range(start, n_small):
                value = prod * small[i]
                if value > cap:
                    break
                if accept(value * p, small[i]):
                    out.append(value * p)
                if count + 1 < k:
                    rec(i + 1, value, count + 1, p, cap)

        for p in large:
            out.append(p)
            cap = n_hi // p
            if cap >= 2:
                rec(0, 1, 0, p, cap)

        k += 1
        n_lo = n_next
    return np.array(sorted(out), dtype=np.int64)
