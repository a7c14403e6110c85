"""Finite chain rule for f o g, with the subset covers listed term by term.

Example:
    python3 scripts/chain_rule_demo.py --f "x^2*y" --g "s+t^2" --g "s*t" --point 1,2 --dirs "1,0;0,1"
"""

import argparse

from polcal.cli import parse_coords, parse_dirs
from polcal.combinatorics import distinct_subset_covers
from polcal.expr import AffineMap, ScalarField
from polcal.numeric import format_scalar
from polcal.polarization import chain_expand, compose, polarize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f", required=True, help="outer field, variables x,y,z")
    ap.add_argument("--g", action="append", required=True, help="inner component (repeat), variables s,t,u")
    ap.add_argument("--point", required=True)
    ap.add_argument("--dirs", required=True)
    args = ap.parse_args()

    inner_names = ["s", "t", "u"][: len(parse_coords(args.point))]
    g = AffineMap.parse(args.g, names=inner_names).polynomials()
    f = ScalarField.parse(args.f, dim=len(g)).to_polynomial()
    p = parse_coords(args.point)
    us = parse_dirs(args.dirs)

    covers = list(distinct_subset_covers(len(us)))
    print(f"{len(covers)} distinct-subset covers of {{1..{len(us)}}}")
    for c in covers:
        print("  " + " ".join("{" + ",".join(map(str, b)) + "}" for b in c))
    lhs = polarize(compose(f, g), p, us).value
    rhs = chain_expand(f, g, p, us)
    print(f"polarize(f o g) = {format_scalar(lhs)}")
    print(f"chain expansion = {format_scalar(rhs)}")
    return 0 if lhs == rhs else 3


if __name__ == "__main__":
    raise SystemExit(main())
