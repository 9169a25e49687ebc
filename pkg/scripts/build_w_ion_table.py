#!/usr/bin/env python3
"""Build and save the single-electron ionization probability table W_ion(s).

W_ion(s) is the probability that a suddenly kicked hydrogenic 1s electron is
ionized, as a function of the scaled kick s = q / Z_eff.  The table is what
the impact-parameter quadrature interpolates in its hot loop.

Usage:
    python scripts/build_w_ion_table.py --out w_ion.csv [--s-max 20]
        [--points 400] [--n-max 20]
"""

import argparse

from molstrip.form_factor import build_ionization_table


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument("--s-max", type=float, default=20.0)
    parser.add_argument("--points", type=int, default=400)
    parser.add_argument("--n-max", type=int, default=20,
                        help="highest bound shell summed explicitly")
    args = parser.parse_args()

    table = build_ionization_table(
        s_max=args.s_max, n_points=args.points, n_max=args.n_max
    )
    table.save_csv(args.out)
    print(f"wrote {args.points} rows to {args.out} "
          f"(W_ion({args.s_max:g}) = {table.w_values[-1]:.6f})")


if __name__ == "__main__":
    main()
