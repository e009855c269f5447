#!/usr/bin/env python3
"""Probe whether windowed correlation coefficients settle toward one limit.

Computes the first K autocorrelation coefficients of a sign sequence at
several window lengths and reports the largest pairwise deviation between
the longer windows.  A small deviation is evidence (not proof) that the
empirical spectral measures converge along the full sequence of window
lengths rather than only along a subsequence.
"""

import argparse
import sys

from mflab.experiments import sign_window
from mflab.sequences import BoundedSeq
from mflab.spectral import spectral_limit_diagnostic


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--label", default="mobius",
                    choices=["mobius", "liouville", "squarefree"])
    ap.add_argument("--n-grid", type=int, nargs="+",
                    default=[100000, 1000000, 10000000])
    ap.add_argument("--kmax", type=int, default=50)
    ap.add_argument("--tolerance", type=float, default=0.01)
    ap.add_argument("--out", default=None, help="optional CSV of the coefficient rows")
    args = ap.parse_args()

    top = max(args.n_grid)
    signs = sign_window(args.label, top + args.kmax + 1)
    g = BoundedSeq.from_samples(signs, label=args.label, sup_bound=1.0)
    diag = spectral_limit_diagnostic(g, args.n_grid, args.kmax,
                                     tolerance=args.tolerance)
    grid = diag.n_grid
    for i in range(len(grid)):
        for j in range(i + 1, len(grid)):
            print(f"max |sigma_hat at N={grid[i]} - sigma_hat at N={grid[j]}| "
                  f"over k<={args.kmax}: {diag.deviations[i, j]:.6g}")
    print(f"single limit plausible at tolerance {args.tolerance}: "
          f"{diag.single_limit_plausible}")
    if args.out:
        diag.write_csv(args.out)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
