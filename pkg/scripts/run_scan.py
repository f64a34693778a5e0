#!/usr/bin/env python3
"""Randomized scan of the leading-slice proportionality property.

Samples protocols uniformly (length, bits, phases), checks that the top
coefficient slices of P and Q are proportional in at least one variable,
and prints a summary. A counterexample would disprove the property the
phase read-off relies on; none is expected.
"""

import argparse

from mqsp.readoff import scan_leading_slices


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=6)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    summary = scan_leading_slices(args.n_max, args.trials, args.seed)
    print(
        "trials=%d passes=%d worst_mismatch=%.3e counterexamples=%d"
        % (
            summary.trials,
            summary.passes,
            summary.worst_mismatch,
            len(summary.counterexamples),
        )
    )
    for spec, _report in summary.counterexamples:
        print("counterexample: s=%r phases=%r" % (spec.s, spec.phases))
    return 0 if summary.all_passed else 4


if __name__ == "__main__":
    raise SystemExit(main())
