"""Print the Richardson tableau for a derivative and its error against a reference.

Example:
    python3 scripts/richardson_convergence.py --fn "exp(x)*sin(y)" --point 0.5,0.25 --dirs "1,0;0,1;1,1"
"""

import argparse
import math

from polcal.cli import parse_coords, parse_dirs
from polcal.derivative import derive_numeric
from polcal.expr import ScalarField


def main():
    ap = argparse.ArgumentParser(description="Richardson tableau for d^n f(q; v_1..v_n)")
    ap.add_argument("--fn", required=True)
    ap.add_argument("--vars", default=None, help="comma-separated variable names")
    ap.add_argument("--point", required=True)
    ap.add_argument("--dirs", required=True)
    ap.add_argument("--levels", type=int, default=5)
    ap.add_argument("--s0", default="1/8")
    ap.add_argument("--reference", type=float, default=None, help="known value, for the error column")
    args = ap.parse_args()

    names = args.vars.split(",") if args.vars else None
    q = parse_coords(args.point)
    f = ScalarField.parse(args.fn, names=names, dim=len(q), lower_polynomials=False)
    est = derive_numeric(f, q, parse_dirs(args.dirs), s0=args.s0, levels=args.levels)
    for s, row in zip(est.steps, est.tableau):
        cells = "  ".join(f"{x: .12e}" for x in row)
        print(f"s={float(s):<10.6g} {cells}")
    print(f"value {est.value:.15g}  error estimate {est.error_estimate:.2e}")
    if args.reference is not None:
        print(f"actual error {abs(est.value - args.reference):.2e}")
    if not math.isfinite(est.value):
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
