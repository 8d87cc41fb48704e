"""Sweeps, set comparisons, and the verification suite behind the CLI.

A sweep walks a grid of x values (log-spaced in Log2 x, with forced
samples just below and above each interval boundary, where the
interesting discontinuities live) and emits one row of observables per
point: the construction functions h, psi, log F, the logarithmic sum S
and log S - log F, both defect routes, and the Cauchy-Schwarz chain.
Everything is single-threaded and accumulates in fixed order, so output
bytes are reproducible for a fixed config.
"""

from __future__ import annotations

import json
import math
import random
import zlib
from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__
from .construction import (
    ConstructionParams,
    enumerate_members,
    interval_index,
    iterated_log,
    point_at,
)
from .defect import defect_divisor_sum, defect_pairwise, defect_prime_truncated
from .errors import ConfigError, LcmlabError
from .sets import (
    ExactlyKAlmost,
    PrimeFilter,
    Primes,
    SetSpec,
    TaoConstruction,
    lgr_report,
    logall_report,
    spec_label,
)
from .sieve import SpfTable, factorize, is_squarefree, mertens_sum
from .stats import WeightedSet, from_elements, materialize, upper_bound_diagnostics

SWEEP_CSV_HEADER = (
    "x,k,h,psi,logF,S,logS,log_ratio,defect_divisor,defect_prime_lb,"
    "E_omega,cs_sumP,cs_bound,element_count"
)

COMPARE_CSV_HEADER = "set,x,S,defect_divisor,defect_times_log2,lgr_norm,element_count"

MERTENS_CONSTANT = 0.2614972128476428  # sum 1/p - loglog x limit


@dataclass
class RunConfig:
    c0: float = 5.0
    x_max: float = 1e6
    sieve_limit: int = 10**6
    points_per_interval: int = 8
    grid: list[float] | None = None
    pairwise_cap: int = 20_000
    c_lgr: float = 0.01
    seed: int = 1

    def validate(self) -> None:
        if self.c0 <= 0:
            raise ConfigError(f"C0 must be positive, got {self.c0}")
        if self.x_max > self.sieve_limit:
            raise ConfigError(f"x_max {self.x_max} exceeds sieve limit {self.sieve_limit}")
        if self.x_max < 2:
            raise ConfigError(f"x_max must be >= 2, got {self.x_max}")
        if self.points_per_interval < 1:
            raise ConfigError("points_per_interval must be >= 1")
        if self.pairwise_cap < 1:
            raise ConfigError("pairwise_cap must be >= 1")
        if self.grid is not None and any(g < 2 or g > self.x_max for g in self.grid):
            raise ConfigError("explicit grid points must lie in [2, x_max]")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class SweepRow:
    """One grid point; statistic fields are None when the set is empty."""

    x: float
    k: int | None
    h: float | None = None
    psi: float | None = None
    logF: float | None = None
    S: float | None = None
    logS: float | None = None
    log_ratio: float | None = None
    defect_divisor: float | None = None
    defect_prime_lb: float | None = None
    E_omega: float | None = None
    cs_sumP: float | None = None
    cs_bound: float | None = None
    element_count: int = 0


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def sweep_csv(rows: list[SweepRow]) -> str:
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.x, r.k, r.h, r.psi, r.logF, r.S, r.logS, r.log_ratio,
                    r.defect_divisor, r.defect_prime_lb, r.E_omega,
                    r.cs_sumP, r.cs_bound, r.element_count,
                )
            )
        )
    return "\n".join(lines) + "\n"


def build_grid(config: RunConfig, params: ConstructionParams) -> list[float]:
    """Log2-space grid over (x_{k_min}, x_max] plus perturbed boundary samples."""
    if config.grid is not None:
        return sorted(set(float(g) for g in config.grid))
    points: set[float] = set()
    llx_max = iterated_log(config.x_max, 2)
    k = params.k_min
    while True:
        L_k = params.loglog_boundary(k)
        if L_k >= llx_max:
            break
        x_k = params.boundary(k)
        if x_k >= 2.0:
            points.add(x_k * (1.0 - 1e-6))
            points.add(x_k * (1.0 + 1e-6))
        L_end = min(params.loglog_boundary(k + 1), llx_max)
        for i in range(1, config.points_per_interval + 1):
            L = L_k + (L_end - L_k) * i / config.points_per_interval
            points.add(math.exp(math.exp(L)))
        k += 1
    points.add(float(config.x_max))
    return sorted(p for p in points if 2.0 <= p <= config.x_max)


def run_sweep(config: RunConfig, table: SpfTable) -> list[SweepRow]:
    config.validate()
    params = ConstructionParams(config.c0)
    grid = build_grid(config, params)
    elements = enumerate_members(config.x_max, params, table)
    weights = 1.0 / elements if len(elements) else np.zeros(0)
    rows: list[SweepRow] = []
    chunk_sums: list[float] = []
    prev_idx = 0
    for x in grid:
        idx = int(np.searchsorted(elements, x, side="right"))
        if idx > prev_idx:
            chunk_sums.append(math.fsum(weights[prev_idx:idx]))
            prev_idx = idx
        total = math.fsum(chunk_sums)
        k = interval_index(x, params)
        if idx == 0 or total <= 0.0:
            rows.append(SweepRow(x=x, k=k, element_count=idx))
            continue
        pt = point_at(x, params)
        w = WeightedSet(
            x=x,
            elements=elements[:idx],
            weights=weights[:idx],
            total=total,
            label=f"tao(C0={config.c0})",
        )
        div = defect_divisor_sum(w, table)
        diag = upper_bound_diagnostics(w, table)
        log_s = math.log(total)
        rows.append(
            SweepRow(
                x=x,
                k=pt.k,
                h=pt.h,
                psi=pt.psi,
                logF=pt.logF,
                S=total,
                logS=log_s,
                log_ratio=log_s - pt.logF,
                defect_divisor=div.defect,
                defect_prime_lb=diag.d2,
                E_omega=diag.e_omega,
                cs_sumP=diag.sum_p,
                cs_bound=diag.cs_bound,
                element_count=idx,
            )
        )
    return rows


@dataclass
class CompareRow:
    set_label: str
    x: float
    S: float | None
    defect_divisor: float | None
    defect_times_log2: float | None
    lgr_norm: float | None
    element_count: int


def _lgr_norm_order(spec: SetSpec) -> int | None:
    if isinstance(spec, Primes):
        return 1
    if isinstance(spec, ExactlyKAlmost):
        return spec.k
    return None


def run_compare(specs: list[SetSpec], x_grid: list[float], table: SpfTable) -> list[CompareRow]:
    rows = []
    for spec in specs:
        for x in sorted(x_grid):
            w = materialize(spec, x, table)
            if w.total <= 0.0:
                rows.append(CompareRow(spec_label(spec), x, None, None, None, None, w.count))
                continue
            div = defect_divisor_sum(w, table)
            llx = iterated_log(x, 2)
            k = _lgr_norm_order(spec)
            norm = None
            if k is not None:
                norm = w.total * math.factorial(k) / llx**k
            rows.append(
                CompareRow(
                    set_label=spec_label(spec),
                    x=x,
                    S=w.total,
                    defect_divisor=div.defect,
                    defect_times_log2=div.defect * llx,
                    lgr_norm=norm,
                    element_count=w.count,
                )
            )
    return rows


def compare_csv(rows: list[CompareRow]) -> str:
    lines = [COMPARE_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.set_label, r.x, r.S, r.defect_divisor,
                    r.defect_times_log2, r.lgr_norm, r.element_count,
                )
            )
        )
    return "\n".join(lines) + "\n"


def json_report(config: RunConfig, table: SpfTable, rows, checks=None) -> str:
    payload = {
        "version": __version__,
        "config": config.as_dict(),
        "sieve_checksum": f"{table.checksum():08x}",
        "rows": [asdict(r) for r in rows],
    }
    if checks is not None:
        payload["checks"] = checks
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# verification suite


def _check(name: str, passed: bool, **detail) -> dict:
    return {"name": name, "passed": bool(passed), **detail}


def random_fixture_sets(seed: int, count: int, max_size: int = 200, max_value: int = 10**5):
    """Seeded random element sets for the Gauss cross-validation."""
    rng = random.Random(seed)
    for _ in range(count):
        size = rng.randint(1, max_size)
        yield sorted(rng.sample(range(2, max_value + 1), size))


def gauss_cross_check(table: SpfTable, seed: int, count: int, pairwise_cap: int = 20_000) -> dict:
    """Pairwise vs divisor-sum defect on seeded random sets, plus the
    trivial bound, method ordering, and the exact diagonal lcm identity."""
    worst = 0.0
    max_value = min(10**5, table.limit)
    for elements in random_fixture_sets(seed, count, max_value=max_value):
        w = from_elements(elements, x=max_value)
        pw = defect_pairwise(w, cap=pairwise_cap)
        dv = defect_divisor_sum(w, table)
        pt = defect_prime_truncated(w, table)
        rel = abs(pw.defect - dv.defect) / max(1.0, dv.defect)
        worst = max(worst, rel)
        if pw.e_gcd < 1.0 - 1e-12:
            return _check("gauss_cross_check", False, reason="trivial bound violated", e_gcd=pw.e_gcd)
        if pt.defect > dv.defect + 1e-12:
            return _check(
                "gauss_cross_check", False, reason="prime truncation above full defect",
                prime_lb=pt.defect, divisor=dv.defect,
            )
        # diagonal identity: sum 1/lcm over all pairs = 2*offdiag + sum 1/n
        full_lcm = math.fsum(
            1.0 / math.lcm(n, m) for n in elements for m in elements
        )
        recon = 2.0 * pw.conc_offdiag * w.total**2 + w.total
        if abs(full_lcm - recon) > 1e-9 * max(1.0, full_lcm):
            return _check("gauss_cross_check", False, reason="diagonal lcm identity", delta=full_lcm - recon)
    return _check("gauss_cross_check", True, sets=count, worst_relative_delta=worst)


def membership_consistency_check(c0: float, x: float, table: SpfTable) -> dict:
    """Scan and DFS enumerations agree exactly; members pass structural tests."""
    params = ConstructionParams(c0)
    scan = enumerate_members(x, params, table, method="scan")
    dfs = enumerate_members(x, params, table, method="dfs")
    if len(scan) != len(dfs) or not np.array_equal(scan, dfs):
        return _check(f"membership_consistency_c0_{c0}", False, scan=len(scan), dfs=len(dfs))
    for n in scan.tolist():
        f = factorize(n, table)
        k = interval_index(n, params)
        if not is_squarefree(f) or k is None or f.omega > k + 1:
            return _check(f"membership_consistency_c0_{c0}", False, bad_member=n)
        log_xk = params.log_boundary(k)
        large = [p for p, _ in f.factors if math.log(p) > log_xk]
        if len(large) > 1:
            return _check(f"membership_consistency_c0_{c0}", False, bad_member=n)
        if not large and f.omega > k:
            return _check(f"membership_consistency_c0_{c0}", False, bad_member=n)
    return _check(f"membership_consistency_c0_{c0}", True, x=x, count=len(scan))


def construction_shape_checks(config: RunConfig) -> list[dict]:
    """Boundary limits, psi flatness, eps monotonicity, F near-continuity."""
    params = ConstructionParams(config.c0)
    checks = []
    llx_max = iterated_log(config.x_max, 2)
    ks = []
    k = params.k_min
    while params.loglog_boundary(k) < llx_max:
        ks.append(k)
        k += 1

    ok, worst = True, 0.0
    for k in ks:
        x_right = math.exp(math.exp(params.loglog_boundary(k) + 1e-9))
        pt = point_at(x_right, params)
        if pt.k != k or not (1.0 <= pt.h <= 1.0 + 1e-6):
            ok = False
        worst = max(worst, pt.h - 1.0)
    checks.append(_check("boundary_h_limit", ok, worst_h_minus_1=worst))

    ok, worst = True, 0.0
    for k in ks:
        L_k = params.loglog_boundary(k)
        L_end = min(params.loglog_boundary(k + 1), llx_max)
        for i in range(0, 33):
            L = L_k + (L_end - L_k) * (i + 0.5) / 33
            pt = point_at(math.exp(math.exp(L)), params)
            if pt.h <= math.sqrt(pt.k) / params.c0:
                worst = max(worst, pt.psi)
                if pt.psi >= 1.5 + 1e-9:
                    ok = False
    checks.append(_check("psi_flat", ok, worst_psi_in_flat_zone=worst))

    ok = True
    for k in ks:
        L_k = params.loglog_boundary(k)
        L_end = params.loglog_boundary(k + 1)
        prev = 0.0
        for i in range(1, 17):
            L = L_k + (L_end - L_k) * i / 16
            pt = point_at(math.exp(math.exp(L)), params)
            if pt.eps < prev - 1e-12:
                ok = False
            prev = pt.eps
        if abs(prev - 1.0) > 1e-9:
            ok = False
    checks.append(_check("eps_monotone_to_one", ok))

    ok, worst = True, 0.0
    for k in ks[1:]:
        x_k = params.boundary(k)
        left = point_at(x_k, params)  # boundary itself belongs to the lower interval
        right = point_at(math.exp(math.exp(params.loglog_boundary(k) + 1e-9)), params)
        jump = abs(left.logF - right.logF)
        worst = max(worst, jump)
        if jump > math.log(100.0):
            ok = False
    checks.append(_check("logF_near_continuity", ok, worst_jump=worst))
    return checks


def lgr_checks(config: RunConfig, table: SpfTable) -> list[dict]:
    checks = []
    ok, worst = True, 0.0
    bounds = [b for b in (10**3, 10**4, 10**6) if b <= table.limit]
    xs = [x for x in (10**3, 10**6) if x <= table.limit]
    for bound in bounds:
        for k in (0, 1, 2, 3, 5):
            for x in xs:
                rep = lgr_report(PrimeFilter(hi=bound), k, x, table)
                if rep.rhs > 0:
                    ratio = rep.sum_exact_k / rep.rhs
                    worst = max(worst, ratio)
                    if ratio > 1.0 + 1e-12:
                        ok = False
    checks.append(_check("lgr_upper_inequality", ok, worst_ratio=worst))

    ok = True
    for bound in bounds:
        for x in xs:
            rep = logall_report(PrimeFilter(hi=min(bound, 100)), x, table)
            if rep["lhs"] > rep["rhs_product"] * (1.0 + 1e-12):
                ok = False
    two_three = logall_report(PrimeFilter(hi=3), 100, table)
    exact = two_three["lhs"] == 2.0 and two_three["rhs_product"] == 2.0
    checks.append(_check("logall_inequality", ok and exact, two_three=two_three))
    return checks


def diagnostics_checks(config: RunConfig, table: SpfTable) -> list[dict]:
    checks = []
    fixtures = [
        from_elements([2, 3], x=10, label="{2,3}"),
        materialize(Primes(), min(10**6, table.limit), table),
        materialize(TaoConstruction(ConstructionParams(config.c0)), config.x_max, table),
    ]
    ok, worst_rel = True, 0.0
    est_ok = True
    for w in fixtures:
        if w.total <= 0.0:
            continue
        diag = upper_bound_diagnostics(w, table)
        if diag.sum_p > diag.cs_bound * (1.0 + 1e-12):
            ok = False
        rel = abs(diag.e_omega - diag.sum_p) / max(diag.sum_p, 1e-300)
        worst_rel = max(worst_rel, rel)
        if rel > 1e-12:
            ok = False
        if diag.jensen_quantity < math.exp(-diag.e_omega * iterated_log(w.x, 3)) * (1.0 - 1e-12):
            ok = False
        # empirical version of the density cap: logS against the measured
        # (sumP / Log2^{1/2} x) coefficient, with slack for o(1) terms
        c_emp = diag.sum_p / math.sqrt(iterated_log(w.x, 2))
        if math.log(w.total) > (c_emp + 0.5) * diag.est3_rhs_exponent + 2.0:
            est_ok = False
    checks.append(_check("cauchy_and_omega_identity", ok, worst_identity_rel=worst_rel))
    checks.append(_check("est3_direction", est_ok))
    return checks


def run_verify(config: RunConfig, table: SpfTable, regressions: dict | None = None) -> list[dict]:
    """Full invariant suite; returns one verdict dict per named check."""
    config.validate()
    checks = []

    y = min(10**6, table.limit)
    m = mertens_sum(y, table)
    dev = abs(m - math.log(math.log(y)) - MERTENS_CONSTANT)
    checks.append(_check("mertens_constant", dev < 0.05, sum=m, deviation=dev))

    checks.append(gauss_cross_check(table, config.seed, count=50, pairwise_cap=config.pairwise_cap))

    scan_x = min(10**5, table.limit)
    for c0 in (3.0, 4.0, 5.0):
        checks.append(membership_consistency_check(c0, scan_x, table))

    checks.extend(construction_shape_checks(config))
    checks.extend(lgr_checks(config, table))
    checks.extend(diagnostics_checks(config, table))

    if regressions is not None:
        checks.extend(regression_checks(config, table, regressions))
    return checks


def regression_checks(config: RunConfig, table: SpfTable, regressions: dict) -> list[dict]:
    """Compare against oracle-pinned values whose configs match this run."""
    checks = []
    if not isinstance(regressions, dict) or "pins" not in regressions:
        return [_check("regressions_file", False, reason="missing or malformed regressions data")]
    pins = regressions["pins"]

    if table.limit >= 10**6 and "mertens_sum_1e6" in pins:
        value = mertens_sum(10**6, table)
        pinned = pins["mertens_sum_1e6"]
        checks.append(
            _check("regression_mertens_1e6", abs(value - pinned) <= 1e-12, value=value, pinned=pinned)
        )

    if config.c0 == 5.0 and table.limit >= 10**5 and "tao_c0_5_count_1e5" in pins:
        count = len(enumerate_members(10**5, ConstructionParams(5.0), table))
        pinned = pins["tao_c0_5_count_1e5"]
        checks.append(_check("regression_tao_count_1e5", count == pinned, value=count, pinned=pinned))

    if (
        config.c0 == 5.0
        and config.x_max == 10**7
        and table.limit >= 10**7
        and "sweep_c0_5_1e7" in pins
    ):
        pinned = pins["sweep_c0_5_1e7"]
        rows = run_sweep(config, table)
        live = [r for r in rows if r.log_ratio is not None]
        band = max(r.log_ratio for r in live) - min(r.log_ratio for r in live)
        checks.append(
            _check(
                "regression_sweep_log_ratio_band",
                abs(band - pinned["log_ratio_band"]) <= 1e-9 and band <= math.log(100.0),
                value=band,
                pinned=pinned["log_ratio_band"],
            )
        )
        dmax = max(r.defect_divisor for r in live)
        checks.append(
            _check(
                "regression_sweep_defect_max",
                abs(dmax - pinned["defect_divisor_max"]) <= 1e-9,
                value=dmax,
                pinned=pinned["defect_divisor_max"],
            )
        )
        ordering = all(r.defect_prime_lb <= r.defect_divisor + 1e-12 for r in live)
        checks.append(_check("sweep_defect_ordering", ordering))
    return checks


def load_regressions() -> dict:
    from importlib.resources import files

    path = files("lcmlab.data").joinpath("regressions.json")
    return json.loads(path.read_text())
