#!/usr/bin/env python3
"""Reproduce the reference level tables and check them numerically.

Prints the algebraic spectra of the three worked parameter sets
(oscillator-like, linear/exponential, trigonometric families), then
cross-checks the single-exponential well and the radial well against
the finite-difference eigensolver.
"""

import argparse

import numpy as np

from sip_effmass import (
    FamilyCoeffs,
    FamilyModel,
    GridSpec,
    MuMap,
    ParamTriple,
    discretize,
    lowest_eigenvalues,
    morse_reduced_compare,
    registry_get,
    spectrum_closed,
    spectrum_sum,
)


def print_table(title, table_sum, table_closed):
    print(f"\n{title}")
    print(f"{'n':>3} {'E (partial sum)':>18} {'E (closed form)':>18}")
    for (n, e_sum), (_, e_closed) in zip(table_sum.levels, table_closed.levels):
        print(f"{n:>3} {e_sum:>18.12g} {e_closed:>18.12g}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m0", type=float, default=0.5, help="constant mass scale")
    parser.add_argument(
        "--alpha", type=float, default=0.1, help="variable-mass shape parameter"
    )
    args = parser.parse_args()

    profile = registry_get("constant", m0=args.m0)
    mumap = MuMap(profile)

    ho = FamilyModel(
        family="ho",
        coeffs=FamilyCoeffs(a=1.0),
        params0=ParamTriple(1.0, 0.0, 0.0),
        profile=profile,
        mumap=mumap,
    )
    print_table("oscillator-like family (a=1, lam0=1)", spectrum_sum(ho, 4), spectrum_closed(ho, 4))

    morse = FamilyModel(
        family="morse",
        coeffs=FamilyCoeffs(a=-1.0, b=1.0),
        params0=ParamTriple(1.0, 2.5, 0.0),
        profile=profile,
        mumap=mumap,
    )
    print_table(
        "linear family (a=-1, b=1, lam0=1, sig0=2.5)",
        spectrum_sum(morse, 3),
        spectrum_closed(morse, 3),
    )

    pt = FamilyModel(
        family="pt_trig",
        coeffs=FamilyCoeffs(a=1.0, b=0.0, c=1.0),
        params0=ParamTriple(2.0, 0.0, 1.0),
        profile=profile,
        mumap=mumap,
    )
    print_table(
        "trigonometric family (a=c=1, lam0=2, rho0=1)",
        spectrum_sum(pt, 2),
        spectrum_closed(pt, 2),
    )

    print("\nsingle-exponential well, eigensolver vs closed gaps (constant mass)")
    grid = GridSpec(-15.0, 5.0, 4001)
    report = morse_reduced_compare(-1.0, 2.5, profile, mumap, grid, 3)
    for n, (gap, alg, flag) in enumerate(
        zip(report["gaps"], report["algebraic_levels"], report["flags"])
    ):
        print(f"  n={n}: numerical {gap:.6f}  algebraic {alg:.6f}  [{flag}]")

    var_profile = registry_get("asinh_mu", m0=args.m0, alpha=args.alpha)
    var_mumap = MuMap(var_profile)
    print("\nsame well over the variable-mass profile")
    report = morse_reduced_compare(-1.0, 2.5, var_profile, var_mumap, grid, 3)
    for n, (gap, alg, flag) in enumerate(
        zip(report["gaps"], report["algebraic_levels"], report["flags"])
    ):
        print(f"  n={n}: numerical {gap:.6f}  algebraic {alg:.6f}  [{flag}]")

    print("\nradial well, eigensolver gaps vs 0.25 (1/(l+1)^2 - 1/(n_r+l+1)^2)")
    rgrid = GridSpec(0.0, 200.0, 4001)
    for l in (0, 1):
        diag, off = discretize(profile, lambda r: -1.0 / r + l * (l + 1) / r**2, rgrid)
        res = lowest_eigenvalues(diag, off, 3, grid=rgrid)
        gaps = res.eigenvalues - res.eigenvalues[0]
        for n_r in (1, 2):
            expected = 0.25 * (1.0 / (l + 1) ** 2 - 1.0 / (n_r + l + 1) ** 2)
            print(
                f"  l={l} n_r={n_r}: numerical {gaps[n_r]:.8f}  expected {expected:.8f}"
            )


if __name__ == "__main__":
    main()
