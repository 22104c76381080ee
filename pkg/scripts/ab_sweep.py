"""Sweep AB over (1, 3) and report the curvature of the counterexample family near 0.

For each AB the frame-plane sectional curvatures at the origin are printed
next to the printed matrix diagonal, together with the verdict on a small
ball.  Ric(N, N) = -1/2 for every member of the family.
"""

import argparse

import numpy as np

from contactmetric.blair import ric_reeb_identity
from contactmetric.gallery import CounterexampleParams, counterexample_pair, section4_closed_form, section4_frame, section4_verdict
from contactmetric.local import local_geometry
from contactmetric.riemann import sectional_curvature


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--A", type=float, default=1.0)
    ap.add_argument("--steps", type=int, default=9)
    ap.add_argument("--radius", type=float, default=0.1)
    ap.add_argument("--grid", type=int, default=5)
    args = ap.parse_args()

    print(f"{'AB':>6} {'K12':>9} {'K13':>9} {'K23':>9} {'printed diag':>28} {'Ric(N,N)':>9} {'all<0':>6} {'max K':>10}")
    for ab in np.linspace(1.0, 3.0, args.steps + 2)[1:-1]:
        cp = CounterexampleParams(args.A, float(ab) / args.A)
        pair = counterexample_pair(cp)
        origin = (0.0, 0.0, 0.0)
        mj = local_geometry(pair, origin).mj
        e1, e2, e3 = section4_frame(cp, origin)
        ks = [sectional_curvature(mj, u, v) for u, v in ((e1, e2), (e1, e3), (e2, e3))]
        printed = np.diag(section4_closed_form(cp, origin).m)
        ric = ric_reeb_identity(pair, origin)[0]
        rep = section4_verdict(cp, args.radius, args.grid)
        s = rep.summary
        diag = ", ".join(f"{v:+.4f}" for v in printed)
        print(
            f"{ab:6.3f} {ks[0]:+9.4f} {ks[1]:+9.4f} {ks[2]:+9.4f} {diag:>28} {ric:+9.4f} "
            f"{str(s['all_sectional_negative_everywhere']):>6} {s['max_sectional']:+10.4f}"
        )


if __name__ == "__main__":
    main()
