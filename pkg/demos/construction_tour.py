"""Tour of the interval construction: boundaries, membership, and the
pointwise functions h, psi, F, eps.

Run: python3 demos/construction_tour.py
"""

import math

from lcmlab import (
    ConstructionParams,
    build_spf,
    enumerate_members,
    factorize,
    is_member,
    point_at,
)


def main():
    params = ConstructionParams(3.0)
    table = build_spf(10**5)

    print("interval boundaries x_k = exp(exp(k^2/C0^2)) for C0 = 3:")
    for k in range(3, 8):
        print(f"  k={k}: x_k = {params.boundary(k):.6g}")

    print("\nmembership near the first boundary (x_3 = e^e ~ 15.15):")
    for n in (14, 17, 30, 33, 34, 210):
        member = is_member(n, factorize(n, table), params)
        print(f"  n={n:4d}: {'member' if member else 'not a member'}")

    members = enumerate_members(35, params, table)
    print(f"\nall members up to 35: {members.tolist()}")

    print("\npointwise functions along the k=3 interval:")
    print("  x          h        psi      exp(logF)  eps")
    for frac in (0.05, 0.25, 0.5, 0.75, 1.0):
        L = 1.0 + (16 / 9 - 1.0) * frac
        x = math.exp(math.exp(L))
        pt = point_at(x, params)
        print(
            f"  {x:10.4g} {pt.h:.5f}  {pt.psi:.5f}  {math.exp(pt.logF):.5f}    {pt.eps:.5f}"
        )
    print("\nnote psi stays below 1.5 while h <= sqrt(k)/C0, then bends up;")
    print("eps climbs to exactly 1 at the right endpoint x_{k+1}.")


if __name__ == "__main__":
    main()
