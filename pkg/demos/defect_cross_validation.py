"""Cross-validate the three defect algorithms on small sets.

The pairwise double sum, the totient-weighted divisor sum, and its
prime truncation must satisfy: pairwise == divisor sum (to rounding)
and prime truncation <= divisor sum.

Run: python3 demos/defect_cross_validation.py
"""

from lcmlab import (
    PrimeFilter,
    Primes,
    SmoothSquarefree,
    build_spf,
    defect_divisor_sum,
    defect_pairwise,
    defect_prime_truncated,
    from_elements,
    materialize,
)


def show(name, w, table):
    pw = defect_pairwise(w)
    dv = defect_divisor_sum(w, table)
    pt = defect_prime_truncated(w, table)
    gap = abs(pw.defect - dv.defect)
    print(f"{name:28s} n={w.count:5d}  pairwise={pw.defect:.12f}")
    print(f"{'':28s}        divisor ={dv.defect:.12f}  |delta|={gap:.2e}")
    print(f"{'':28s}        prime lb={pt.defect:.12f}  (<= divisor)")


def main():
    table = build_spf(10**5)
    show("{2,3} at x=10", from_elements([2, 3], x=10), table)
    show("{6,10,15} at x=20", from_elements([6, 10, 15], x=20), table)
    show("primes <= 10^4", materialize(Primes(), 10**4, table), table)
    smooth = materialize(SmoothSquarefree(PrimeFilter(hi=50.0)), 10**4, table)
    show("50-smooth squarefree <= 10^4", smooth, table)
    print("\nthe pairwise/divisor agreement is the Gauss identity")
    print("gcd(n,m) = sum of phi(d) over common divisors, made executable.")


if __name__ == "__main__":
    main()
