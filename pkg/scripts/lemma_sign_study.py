"""Compare both sign variants of the principal-frame curvature matrix with direct curvature.

Uses a compatible pair on which N(lambda) and Y(lambda) are nonzero, so the
(1, 2) and (3, 3) entries can tell the variants apart.
"""

import argparse
from pathlib import Path

from contactmetric.blair import lemma_consistency_check
from contactmetric.cli import load_pair_spec
from contactmetric.rng import SplitMix64

DEFAULT = Path(__file__).resolve().parent.parent / "tests" / "data" / "n_lambda_pair.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--input", default=str(DEFAULT))
    ap.add_argument("--points", type=int, default=10)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    pair = load_pair_spec(args.input, {})
    print(f"{'point':>32} {'N(lam)':>10} {'Y(lam)':>10} {'residual':>10} {'alt (1,2)':>10} {'alt (3,3)':>10}")
    for p in pair.sample(SplitMix64(args.seed), args.points):
        r = lemma_consistency_check(pair, p)
        s = r.scalars
        pt = "(" + ", ".join(f"{c:+.3f}" for c in p) + ")"
        print(
            f"{pt:>32} {s.N_lambda:+10.2e} {s.Y_lambda:+10.2e} {r.max_residual:10.1e} "
            f"{r.display_sign_m12_residual:10.1e} {r.display_sign_m33_residual:10.1e}"
        )


if __name__ == "__main__":
    main()
