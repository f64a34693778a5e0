#!/usr/bin/env python3
"""Export |P|^2 torus grids for the two named protocol families.

Writes CSV (and optionally PGM) grids for the length-2 diagonal family,
which depends only on theta_a + theta_b, and the length-6 alternating
family whose transition probability pins the two-case discrimination
curve 4 cos^2(theta_a) cos^2(theta_b) = 1.
"""

import argparse
import os

from mqsp.families import trivial_protocol, xyz_protocol
from mqsp.serialize import grid_from_poly, write_grid_csv, write_grid_pgm


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="grids")
    parser.add_argument("--grid", type=int, default=128)
    parser.add_argument("--pgm", action="store_true", help="also write PGM images")
    args = parser.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    for name, protocol in (("trivial1", trivial_protocol(1)), ("xyz3", xyz_protocol(3))):
        grid = grid_from_poly(protocol.closed_form.P, args.grid)
        csv_path = os.path.join(args.out_dir, "%s.csv" % name)
        write_grid_csv(grid, csv_path)
        print(csv_path)
        if args.pgm:
            pgm_path = os.path.join(args.out_dir, "%s.pgm" % name)
            write_grid_pgm(grid, pgm_path)
            print(pgm_path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
