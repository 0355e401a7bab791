"""Lift the hand-specified scaled-cube preorder battery to the cube and print the degree ledger."""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from battery import battery  # noqa: E402

from cube_psatz.certificates import verify  # noqa: E402
from cube_psatz.lifting import lift_preorder_to_cube  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true", help="emit one JSON ledger per line")
    args = ap.parse_args()
    for name, params, cert in battery():
        f = cert.expand()
        t = time.perf_counter()
        out, ledger = lift_preorder_to_cube(cert, params, f)
        ok = verify(out, f).passed
        elapsed = time.perf_counter() - t
        if args.json:
            print(json.dumps({"name": name, "passed": ok, "seconds": elapsed, **ledger.to_dict()}))
            continue
        last = ledger.stages[-1]
        print(
            f"{name:<20} n={params.n} q={params.q} k={cert.r:<2} claimed={ledger.claimed:<3} "
            f"degree={last['degree']:<3} summands={last['summands']:<5} {'PASS' if ok else 'FAIL'} {elapsed:.2f}s"
        )


if __name__ == "__main__":
    main()
