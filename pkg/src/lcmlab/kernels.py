"""Compiled accumulation kernels for dense (sieve-scale) weighted sets.

Pure-Python accumulation with math.fsum is the reference path for small
sets; these kernels reproduce the same sums over a dense weight array
(wt[n] = 1/n for members, 0 otherwise) when sets reach millions of
elements.  All loops run single-threaded in a fixed ascending order, so
results are bit-stable across runs.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def phi_sieve(limit: int, primes: np.ndarray) -> np.ndarray:
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in primes:
        for m in range(p, limit + 1, p):
            phi[m] = phi[m] // p * (p - 1)
    return phi


@njit(cache=True)
def omega_sieve(limit: int, primes: np.ndarray) -> np.ndarray:
    omega = np.zeros(limit + 1, dtype=np.uint8)
    for p in primes:
        for m in range(p, limit + 1, p):
            omega[m] += 1
    return omega


@njit(cache=True)
def divisor_weight_sums_primes(wt: np.ndarray, primes: np.ndarray, x: int) -> np.ndarray:
    """w_p = sum of wt[m] over multiples m <= x of each prime p (Kahan)."""
    out = np.zeros(len(primes), dtype=np.float64)
    for i in range(len(primes)):
        p = primes[i]
        if p > x:
            break
        s = 0.0
        carry = 0.0
        for m in range(p, x + 1, p):
            y = wt[m] - carry
            t = s + y
            carry = (t - s) - y
            s = t
        out[i] = s
    return out


@njit(cache=True)
def divisor_sum_defect(wt: np.ndarray, phi: np.ndarray, total: float, x: int) -> float:
    """sum over d > 1 of phi(d) * (w_d / total)^2 with w_d = sum_{d|m<=x} wt[m].

    Inner and outer sums are Kahan-compensated; iteration order is fixed
    ascending d, so the result is bit-stable.
    """
    acc = 0.0
    acc_carry = 0.0
    for d in range(2, x + 1):
        s = 0.0
        carry = 0.0
        for m in range(d, x + 1, d):
            y = wt[m] - carry
            t = s + y
            carry = (t - s) - y
            s = t
        if s != 0.0:
            r = s / total
            y = phi[d] * r * r - acc_carry
            t = acc + y
            acc_carry = (t - acc) - y
            acc = t
    return acc
