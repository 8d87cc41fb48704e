"""Smallest-prime-factor sieve, factorization, and prime partial sums.

Everything downstream (construction membership, k-almost-prime DFS,
divisor statistics) is driven by one flat SPF table: ``spf[n]`` is the
smallest prime factor of ``n`` for ``2 <= n <= limit``, stored as uint32.
The table is immutable after construction and safe for concurrent reads;
derived tables (prime list, phi, omega) are computed lazily and cached.
"""

from __future__ import annotations

import math
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CacheChecksumError,
    CacheFormatError,
    CacheVersionError,
    CapacityError,
    DomainError,
)

DEFAULT_LIMIT = 10**7
HARD_MAX_LIMIT = 10**8

CACHE_MAGIC = b"LCMSPF1\x00"
CACHE_VERSION = 1


@dataclass
class Factorization:
    """Prime factorization with strictly increasing primes.

    n = 1 carries the empty factor list (the empty product shows up
    naturally in "products of at most k primes").
    """

    n: int
    factors: list[tuple[int, int]]

    @property
    def omega(self) -> int:
        return len(self.factors)


@dataclass
class SpfTable:
    """Flat smallest-prime-factor table for 2..limit (spf[0] = spf[1] = 0)."""

    limit: int
    spf: np.ndarray
    _primes: np.ndarray | None = field(default=None, repr=False)
    _recip_primes_cumsum: np.ndarray | None = field(default=None, repr=False)
    _phi: np.ndarray | None = field(default=None, repr=False)
    _omega: np.ndarray | None = field(default=None, repr=False)

    @property
    def primes(self) -> np.ndarray:
        """Ascending array of all primes <= limit (int64)."""
        if self._primes is None:
            idx = np.arange(self.limit + 1, dtype=np.uint32)
            self._primes = np.flatnonzero(self.spf == idx)[1:].astype(np.int64)
            # flatnonzero picks up n = 0 (spf[0] == 0); drop it.
        return self._primes

    def is_prime(self, n: int) -> bool:
        if n < 2:
            return False
        self._check_capacity(n)
        return int(self.spf[n]) == n

    def phi_table(self) -> np.ndarray:
        """phi(n) for all n <= limit (int64), built on first use."""
        if self._phi is None:
            from .kernels import phi_sieve

            self._phi = phi_sieve(self.limit, self.primes)
        return self._phi

    def omega_table(self) -> np.ndarray:
        """omega(n) for all n <= limit (uint8), built on first use."""
        if self._omega is None:
            from .kernels import omega_sieve

            self._omega = omega_sieve(self.limit, self.primes)
        return self._omega

    def checksum(self) -> int:
        """CRC-32 of the spf payload for n = 2..limit, little-endian uint32."""
        payload = self.spf[2:].astype("<u4", copy=False)
        return zlib.crc32(payload.tobytes())

    def _check_capacity(self, n) -> None:
        if n > self.limit:
            raise CapacityError(
                f"{n} exceeds sieve limit {self.limit}; rebuild with a larger limit"
            )


def build_spf(limit: int, allow_large: bool = False) -> SpfTable:
    """Build the SPF table for 2..limit.

    The default ceiling keeps memory near 40 MB; limits up to 10^8
    (~400 MB) require allow_large=True.
    """
    if limit < 2:
        raise CapacityError(f"sieve limit must be >= 2, got {limit}")
    cap = HARD_MAX_LIMIT if allow_large else DEFAULT_LIMIT
    if limit > cap:
        raise CapacityError(
            f"sieve limit {limit} exceeds {'hard maximum' if allow_large else 'default maximum'} {cap}"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            spf[p] = p
            # multiples below p*p already carry a smaller prime factor
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest
    return SpfTable(limit=limit, spf=spf)


def factorize(n: int, table: SpfTable) -> Factorization:
    """Factor n via the SPF table; n = 1 yields the empty factor list."""
    if n < 1:
        raise DomainError(f"cannot factorize {n}; need n >= 1")
    table._check_capacity(n)
    factors: list[tuple[int, int]] = []
    spf = table.spf
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    return Factorization(n=n, factors=factors)


def euler_phi(f: Factorization) -> int:
    """Euler totient from a factorization; phi(1) = 1."""
    result = 1
    for p, e in f.factors:
        result *= p ** (e - 1) * (p - 1)
    return result


def is_squarefree(f: Factorization) -> bool:
    return all(e == 1 for _, e in f.factors)


def divisors(f: Factorization) -> list[int]:
    """All divisors of n, ascending."""
    ds = [1]
    for p, e in f.factors:
        ds = [d * p**j for d in ds for j in range(e + 1)]
    ds.sort()
    return ds


def mertens_sum(y: float, table: SpfTable) -> float:
    """Compensated sum of 1/p over primes p <= y, ascending."""
    if y > table.limit:
        raise CapacityError(f"y={y} exceeds sieve limit {table.limit}")
    primes = table.primes
    hi = np.searchsorted(primes, y, side="right")
    return math.fsum(1.0 / p for p in primes[:hi])


def primes_in(lo: float, hi: float, table: SpfTable) -> np.ndarray:
    """Primes p with lo < p <= hi, ascending (half-open-left interval)."""
    if hi > table.limit:
        raise CapacityError(f"hi={hi} exceeds sieve limit {table.limit}")
    primes = table.primes
    i = np.searchsorted(primes, lo, side="right")
    j = np.searchsorted(primes, hi, side="right")
    return primes[i:j]


def save_cache(table: SpfTable, path) -> None:
    """Write the binary cache: magic, version, limit, spf[2..limit], CRC-32."""
    crc = 0
    with open(path, "wb") as fh:
        header = CACHE_MAGIC + struct.pack("<I", CACHE_VERSION) + struct.pack("<Q", table.limit)
        fh.write(header)
        crc = zlib.crc32(header, crc)
        payload = table.spf[2:].astype("<u4", copy=False).tobytes()
        fh.write(payload)
        crc = zlib.crc32(payload, crc)
        fh.write(struct.pack("<I", crc))


def load_cache(path) -> SpfTable:
    """Read a cache written by save_cache, verifying header and checksum."""
    with open(path, "rb") as fh:
        header = fh.read(20)
        if len(header) < 20 or header[:8] != CACHE_MAGIC:
            raise CacheFormatError(f"{path}: not an lcmlab sieve cache (bad magic)")
        (version,) = struct.unpack("<I", header[8:12])
        if version != CACHE_VERSION:
            raise CacheVersionError(f"{path}: unsupported cache version {version}")
        (limit,) = struct.unpack("<Q", header[12:20])
        expected = 4 * (limit - 1)
        payload = fh.read(expected)
        trailer = fh.read(4)
        if len(payload) != expected or len(trailer) != 4:
            raise CacheChecksumError(f"{path}: truncated cache file")
        crc = zlib.crc32(header)
        crc = zlib.crc32(payload, crc)
        (stored,) = struct.unpack("<I", trailer)
        if crc != stored:
            raise CacheChecksumError(f"{path}: CRC mismatch (stored {stored:#x}, computed {crc:#x})")
    spf = np.zeros(limit + 1, dtype=np.uint32)
    spf[2:] = np.frombuffer(payload, dtype="<u4")
    return SpfTable(limit=int(limit), spf=spf)
