"""Run the counterexample audit (A=1, B=2, radius 0.25, 9^3 grid) and print the outcome.

With --write-golden the JSON report and per-point CSV are stored under
tests/golden/, which is how the golden files were produced.
"""

import argparse
import io
import json
import time
from pathlib import Path

from contactmetric.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def cli():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--write-golden", action="store_true")
    args = ap.parse_args()

    argv = ["verdict", "-P", "A=1", "-P", "B=2", "--radius", "0.25", "--grid", "9", "--seed", "42"]
    t0 = time.perf_counter()
    code, text = run(argv)
    elapsed = time.perf_counter() - t0
    _, csv_text = run(argv + ["--format", "csv"])
    s = json.loads(text)["summary"]
    print(f"exit code {code}, {elapsed:.2f} s")
    print(s["statement"])
    print("origin frame sectionals (e1^e2, e1^e3, e2^e3):", s["origin_frame_sectional"])
    print("sectional range:", s["min_sectional"], s["max_sectional"])
    print("printed matrix negative definite everywhere:", s["printed_matrix_negative_definite_everywhere"])
    print("direct matrix negative definite everywhere:", s["matrix_negative_definite_everywhere"])
    print("max residual vs printed matrix (stated order):", s["max_residual_section4"])
    print("best matching order:", s["best_matching_ordering"], s["best_ordering_mismatched_entries"])
    if args.write_golden:
        GOLDEN.mkdir(exist_ok=True)
        (GOLDEN / "verdict_A1_B2_r0.25_n9.json").write_text(text)
        (GOLDEN / "verdict_A1_B2_r0.25_n9.csv").write_text(csv_text)
        print("golden files written to", GOLDEN)


if __name__ == "__main__":
    cli()
