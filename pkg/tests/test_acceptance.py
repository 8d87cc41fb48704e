"""Acceptance suite: one test per numbered criterion, each emitting a
single CRITERION nn PASS/FAIL line (visible with pytest -s or on failure)."""

import math
import time

import numpy as np
import pytest

from lcmlab import (
    ConstructionParams,
    ExactlyKAlmost,
    PrimeFilter,
    Primes,
    TaoConstruction,
    cli,
    defect_divisor_sum,
    defect_pairwise,
    defect_prime_truncated,
    from_elements,
    iterated_log,
    lgr_report,
    logall_report,
    materialize,
    upper_bound_diagnostics,
)
from lcmlab.experiments import (
    RunConfig,
    construction_shape_checks,
    membership_consistency_check,
    random_fixture_sets,
    run_sweep,
)

from conftest import PINS


def report(n, ok, detail):
    print(f"CRITERION {n:02d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {n}: {detail}"


@pytest.fixture(scope="session")
def sweep_c0_5_1e7(table_1e7):
    config = RunConfig(c0=5.0, x_max=10.0**7, sieve_limit=10**7)
    return run_sweep(config, table_1e7)


def test_criterion_01_gauss_identity(table_1e6):
    start = time.perf_counter()
    worst = 0.0
    for elements in random_fixture_sets(seed=1, count=200):
        w = from_elements(elements, x=10**5)
        pw = defect_pairwise(w)
        dv = defect_divisor_sum(w, table_1e6)
        rel = abs(pw.defect - dv.defect) / max(1.0, dv.defect)
        worst = max(worst, rel)
    elapsed = time.perf_counter() - start
    report(
        1,
        worst <= 1e-9 and elapsed < 60.0,
        f"200 random sets, worst |pairwise-divisor| rel = {worst:.3e}, {elapsed:.1f}s",
    )


def test_criterion_02_worked_exact_values(table_1e6):
    start = time.perf_counter()
    w = from_elements([2, 3], x=10)
    pw = defect_pairwise(w)
    dv = defect_divisor_sum(w, table_1e6)
    ok = (
        abs(w.total - 5 / 6) <= 1e-12
        and abs(pw.e_gcd - 42 / 25) <= 1e-12
        and abs(pw.defect - 17 / 25) <= 1e-12
        and abs(dv.e_gcd - 42 / 25) <= 1e-12
        and abs(dv.defect - 17 / 25) <= 1e-12
    )
    elapsed = time.perf_counter() - start
    report(2, ok and elapsed < 1.0, f"S={w.total!r}, e_gcd={pw.e_gcd!r}, {elapsed:.3f}s")


def test_criterion_03_trivial_bound(table_1e6):
    worst = math.inf
    for elements in [[1], [2, 3], [2, 4], [6, 10, 15]] + list(
        random_fixture_sets(seed=2, count=50)
    ):
        e_gcd = defect_pairwise(from_elements(elements, x=10**5)).e_gcd
        worst = min(worst, e_gcd)
    for spec in (Primes(), TaoConstruction(ConstructionParams(5.0))):
        w = materialize(spec, 10**6, table_1e6)
        worst = min(worst, defect_divisor_sum(w, table_1e6).e_gcd)
    report(3, worst >= 1.0 - 1e-12, f"min e_gcd over suite fixtures = {worst!r}")


def test_criterion_04_growth_rate_inequality(table_1e6):
    start = time.perf_counter()
    worst = 0.0
    for bound in (10**3, 10**4, 10**6):
        for k in (0, 1, 2, 3, 5):
            for x in (10**3, 10**6):
                rep = lgr_report(PrimeFilter(hi=float(bound)), k, float(x), table_1e6)
                if rep.rhs > 0:
                    worst = max(worst, rep.sum_exact_k / rep.rhs)
    elapsed = time.perf_counter() - start
    report(
        4,
        worst <= 1.0 + 1e-12 and elapsed < 120.0,
        f"worst normalized ratio = {worst!r} over 30 (bound,k,x) cells, {elapsed:.1f}s",
    )


def test_criterion_05_smooth_sum_inequality(table_1e6):
    ok = True
    for bound in (10**3, 10**4, 10**6):
        for x in (10**3, 10**6):
            rep = logall_report(PrimeFilter(hi=float(bound)), float(x), table_1e6)
            if rep["lhs"] > rep["rhs_product"] * (1.0 + 1e-12):
                ok = False
    eq = logall_report(PrimeFilter(hi=3.0), 100.0, table_1e6)
    exact = eq["lhs"] == 2.0 and eq["rhs_product"] == 2.0
    report(5, ok and exact, f"lhs <= product everywhere; {{2,3}}@100 gives {eq}")


def test_criterion_06_cauchy_and_identity(table_1e6):
    fixtures = [
        from_elements([2, 3], x=10),
        from_elements([5], x=10),
        from_elements([6, 10, 15], x=20),
        materialize(Primes(), 10**6, table_1e6),
        materialize(ExactlyKAlmost(PrimeFilter(hi=10.0**3), 2), 10**6, table_1e6),
        materialize(TaoConstruction(ConstructionParams(5.0)), 10**6, table_1e6),
    ]
    worst_rel = 0.0
    ok = True
    for w in fixtures:
        diag = upper_bound_diagnostics(w, table_1e6)
        if diag.sum_p > diag.cs_bound * (1.0 + 1e-12):
            ok = False
        rel = abs(diag.e_omega - diag.sum_p) / diag.sum_p
        worst_rel = max(worst_rel, rel)
    report(6, ok and worst_rel <= 1e-12, f"worst E_omega/sumP identity rel = {worst_rel:.3e}")


def test_criterion_07_construction_structure(table_1e6):
    ok = True
    details = []
    for c0 in (3.0, 4.0, 5.0):
        check = membership_consistency_check(c0, 10**5, table_1e6)
        ok &= check["passed"]
        details.append(f"C0={c0}: {check.get('count', '?')} members")
        shape = construction_shape_checks(RunConfig(c0=c0, x_max=10.0**5, sieve_limit=10**5))
        ok &= all(c["passed"] for c in shape)
    report(7, ok, "DFS == scan at 1e5 and shape invariants hold; " + ", ".join(details))


def test_criterion_08_log_ratio_band(sweep_c0_5_1e7):
    live = [r for r in sweep_c0_5_1e7 if r.log_ratio is not None]
    band = max(r.log_ratio for r in live) - min(r.log_ratio for r in live)
    pinned = PINS["sweep_c0_5_1e7"]
    ok = (
        band <= math.log(100.0)
        and abs(band - pinned["log_ratio_band"]) <= 1e-9
        and len(sweep_c0_5_1e7) == pinned["rows"]
    )
    report(8, ok, f"log_ratio band = {band!r} (pin {pinned['log_ratio_band']!r}, cap log 100)")


def test_criterion_09_defect_bounded(sweep_c0_5_1e7):
    live = [r for r in sweep_c0_5_1e7 if r.defect_divisor is not None]
    finite = all(math.isfinite(r.defect_divisor) for r in live)
    dmax = max(r.defect_divisor for r in live)
    ordering = all(r.defect_prime_lb <= r.defect_divisor + 1e-12 for r in live)
    pinned = PINS["sweep_c0_5_1e7"]["defect_divisor_max"]
    ok = finite and ordering and abs(dmax - pinned) <= 1e-9
    report(9, ok, f"max defect = {dmax!r} (pin {pinned!r}), prime lower bound <= full everywhere")


def test_criterion_10_reference_set_trends(table_1e7):
    xs = (10**5, 10**6, 10**7)
    prime_vals = []
    for x in xs:
        w = materialize(Primes(), float(x), table_1e7)
        prime_vals.append(defect_divisor_sum(w, table_1e7).defect * iterated_log(x, 2))
    kal_vals = []
    for x in xs:
        w = materialize(ExactlyKAlmost(PrimeFilter(hi=10.0**7), 2), float(x), table_1e7)
        kal_vals.append(w.total * 2.0 / iterated_log(x, 2) ** 2)
    ok = True
    for vals, pins in (
        (prime_vals, PINS["primes_defect_times_log2"]),
        (kal_vals, PINS["kalmost2_norm"]),
    ):
        if max(vals) / min(vals) >= 2.0:
            ok = False
        for x, v in zip(xs, vals):
            if abs(v - pins[str(x)]) > 1e-9 * max(1.0, abs(pins[str(x)])):
                ok = False
    report(
        10,
        ok,
        f"primes defect*Log2x = {prime_vals}, 2-almost norm = {kal_vals} (factor < 2, pinned)",
    )


def test_criterion_11_determinism(tmp_path, monkeypatch):
    monkeypatch.setenv("LCMLAB_CACHE_DIR", str(tmp_path / "cache"))
    args = ["sweep", "--c0", "5", "--x-max", "100000", "--sieve-limit", "100000"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    identical = a.read_bytes() == b.read_bytes()
    report(11, identical, f"two sweep runs byte-identical ({a.stat().st_size} bytes)")
