"""Sweep the C0=5 construction up to 10^6 and print the observables
that track its density and gcd defect.

log_ratio = log S - log F should stay in a narrow band (the density
tracks the target envelope F), and the defect should stay bounded while
the comparison sets' defects shrink like 1/Log2 x.

Run: python3 demos/density_sweep.py
"""

from lcmlab import build_spf, iterated_log
from lcmlab.experiments import RunConfig, run_compare, run_sweep
from lcmlab.sets import ExactlyKAlmost, PrimeFilter, Primes


def main():
    table = build_spf(10**6)
    config = RunConfig(c0=5.0, x_max=10.0**6, sieve_limit=10**6, points_per_interval=4)
    rows = run_sweep(config, table)
    print("x            k  count     log_ratio   defect     E_omega")
    for r in rows:
        if r.S is None:
            print(f"{r.x:<12.5g} {r.k if r.k is not None else '-':>2}  (empty)")
            continue
        print(
            f"{r.x:<12.5g} {r.k:>2}  {r.element_count:<8d}  {r.log_ratio:+.5f}   "
            f"{r.defect_divisor:.5f}    {r.E_omega:.5f}"
        )
    live = [r.log_ratio for r in rows if r.log_ratio is not None]
    print(f"\nlog_ratio band (max - min): {max(live) - min(live):.5f}")

    print("\ncomparison sets (defect * Log2 x should hover near a constant):")
    specs = [Primes(), ExactlyKAlmost(PrimeFilter(hi=10.0**6), 2)]
    for row in run_compare(specs, [10.0**4, 10.0**5, 10.0**6], table):
        print(
            f"  {row.set_label:10s} x={row.x:<10.4g} S={row.S:.5f}  "
            f"defect*Log2x={row.defect_times_log2:.5f}"
        )


if __name__ == "__main__":
    main()
