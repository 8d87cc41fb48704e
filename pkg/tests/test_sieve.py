import math
import random
import struct

import numpy as np
import pytest

from lcmlab import (
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
from lcmlab.errors import (
    CacheChecksumError,
    CacheFormatError,
    CacheVersionError,
    CapacityError,
    DomainError,
)
from lcmlab.sieve import divisors


def smallest_factor(n):
    for p in range(2, n + 1):
        if n % p == 0:
            return p
    raise AssertionError


def test_build_spf_small():
    t = build_spf(10)
    expected = {2: 2, 3: 3, 4: 2, 5: 5, 6: 2, 7: 7, 8: 2, 9: 3, 10: 2}
    for n, p in expected.items():
        assert int(t.spf[n]) == p
    t2 = build_spf(2)
    assert int(t2.spf[2]) == 2 and t2.limit == 2


def test_build_spf_limits():
    with pytest.raises(CapacityError):
        build_spf(1)
    with pytest.raises(CapacityError):
        build_spf(10**7 + 1)  # needs allow_large
    with pytest.raises(CapacityError):
        build_spf(10**8 + 1, allow_large=True)


def test_prime_count_1e6(table_1e6):
    # independent oracle: plain boolean Eratosthenes
    limit = 10**6
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    assert int(sieve.sum()) == 78498
    assert len(table_1e6.primes) == 78498
    assert int(np.count_nonzero(table_1e6.spf[2:] == np.arange(2, limit + 1))) == 78498


def test_spf_matches_trial_division(table_1e4):
    for n in range(2, 10**4 + 1):
        assert int(table_1e4.spf[n]) == smallest_factor(n)


def test_factorize_examples(table_1e6):
    assert factorize(60, table_1e6).factors == [(2, 2), (3, 1), (5, 1)]
    assert factorize(97, table_1e6).factors == [(97, 1)]
    big = build_spf(2**20)
    assert factorize(2**20, big).factors == [(2, 20)]
    f1 = factorize(1, table_1e6)
    assert f1.factors == [] and f1.omega == 0


def test_factorize_errors(table_1e4):
    with pytest.raises(DomainError):
        factorize(0, table_1e4)
    with pytest.raises(CapacityError):
        factorize(10**4 + 1, table_1e4)


def test_euler_phi_examples(table_1e4):
    assert euler_phi(factorize(1, table_1e4)) == 1
    for p in (2, 3, 97, 9973):
        assert euler_phi(factorize(p, table_1e4)) == p - 1
    assert euler_phi(factorize(12, table_1e4)) == 4
    assert euler_phi(factorize(12, table_1e4)) == sum(
        1 for r in range(1, 13) if math.gcd(r, 12) == 1
    )


def test_phi_multiplicative(table_1e6):
    rng = random.Random(7)
    seen = 0
    while seen < 10**4:
        a = rng.randint(2, 10**3)
        b = rng.randint(2, 10**3)
        if math.gcd(a, b) != 1:
            continue
        fa, fb, fab = (factorize(m, table_1e6) for m in (a, b, a * b))
        assert euler_phi(fab) == euler_phi(fa) * euler_phi(fb)
        seen += 1


def test_gauss_identity_integer(table_1e4):
    for n in range(1, 10**4 + 1):
        f = factorize(n, table_1e4)
        assert sum(euler_phi(factorize(d, table_1e4)) for d in divisors(f)) == n


def test_is_squarefree(table_1e4):
    assert is_squarefree(factorize(30, table_1e4))
    assert not is_squarefree(factorize(12, table_1e4))
    assert is_squarefree(factorize(1, table_1e4))


def test_divisors(table_1e4):
    assert divisors(factorize(60, table_1e4)) == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]
    assert divisors(factorize(1, table_1e4)) == [1]


def test_mertens_sum(table_1e6):
    assert mertens_sum(1, table_1e6) == 0.0
    assert mertens_sum(2, table_1e6) == 0.5
    assert abs(mertens_sum(10, table_1e6) - 247 / 210) < 1e-15
    values = [mertens_sum(y, table_1e6) for y in (10, 100, 10**4, 10**6)]
    assert values == sorted(values)
    dev = abs(mertens_sum(10**6, table_1e6) - math.log(math.log(10**6)) - 0.2614972128476428)
    assert dev < 0.05
    with pytest.raises(CapacityError):
        mertens_sum(10**6 + 1, table_1e6)


def test_primes_in(table_1e6):
    assert primes_in(15.154, 30, table_1e6).tolist() == [17, 19, 23, 29]
    assert primes_in(7, 7, table_1e6).tolist() == []
    t = build_spf(10**6 + 200)
    got = primes_in(10**6, 10**6 + 100, t).tolist()
    oracle = [
        n
        for n in range(10**6 + 1, 10**6 + 101)
        if all(n % p for p in range(2, math.isqrt(n) + 1))
    ]
    assert got == oracle == [1000003, 1000033, 1000037, 1000039, 1000081, 1000099]


def test_cache_roundtrip(tmp_path):
    table = build_spf(10**4)
    path = tmp_path / "spf.bin"
    save_cache(table, path)
    assert path.stat().st_size == 8 + 4 + 8 + 4 * (10**4 - 1) + 4
    loaded = load_cache(path)
    assert loaded.limit == table.limit
    assert np.array_equal(loaded.spf, table.spf)
    again = tmp_path / "again.bin"
    save_cache(loaded, again)
    assert path.read_bytes() == again.read_bytes()
    assert loaded.checksum() == table.checksum()


def test_cache_corruption(tmp_path):
    table = build_spf(100)
    path = tmp_path / "spf.bin"
    save_cache(table, path)
    raw = path.read_bytes()

    truncated = tmp_path / "trunc.bin"
    truncated.write_bytes(raw[:-10])
    with pytest.raises(CacheChecksumError):
        load_cache(truncated)

    flipped = tmp_path / "flip.bin"
    body = bytearray(raw)
    body[25] ^= 0xFF
    flipped.write_bytes(bytes(body))
    with pytest.raises(CacheChecksumError):
        load_cache(flipped)

    badmagic = tmp_path / "magic.bin"
    badmagic.write_bytes(b"NOTACACH" + raw[8:])
    with pytest.raises(CacheFormatError):
        load_cache(badmagic)

    badver = tmp_path / "ver.bin"
    body = bytearray(raw)
    body[8:12] = struct.pack("<I", 99)
    badver.write_bytes(bytes(body))
    with pytest.raises(CacheVersionError):
        load_cache(badver)


def test_is_prime(table_1e4):
    assert table_1e4.is_prime(2)
    assert table_1e4.is_prime(9973)
    assert not table_1e4.is_prime(1)
    assert not table_1e4.is_prime(9999)


def test_phi_omega_tables(table_1e4):
    phi = table_1e4.phi_table()
    omega = table_1e4.omega_table()
    for n in (1, 2, 12, 30, 9973, 10**4):
        f = factorize(n, table_1e4)
        assert int(phi[n]) == euler_phi(f)
        assert int(omega[n]) == f.omega
