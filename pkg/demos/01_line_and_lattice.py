#!/usr/bin/env python3
"""Translation flow on the line, under the full line and under the integers.

The delocalised length spectrum of a nonzero group element g is the single
pair {g}: the orbit t -> t closes up to g after exactly time g.  The zeta
function is then a single exponential and extends to the whole sigma plane,
so the comparison against analytic torsion can be read off directly.
"""

import cmath

from equizeta import (
    IntegerLatticeModel,
    LineModel,
    flat_trace_measure,
    fried_residual,
    length_spectrum,
    ruelle_log_closed,
    subgroup_power_check,
    torsion_log,
)

alpha = 1j


def main():
    line = LineModel(alpha=alpha)

    print("== spectrum and orbit data ==")
    for g in (2.0, -0.5, 0.0):
        print(f"  g = {g:+.1f}: spectrum in [-10, 10] -> {length_spectrum(line, g, 10.0)}")

    print("\n== log R(sigma) = e^(alpha g - |g| sigma) / (2|g|) ==")
    for sigma in (0.0, 0.5, 1.0, 2.0):
        ev = ruelle_log_closed(line, 2.0, sigma)
        print(f"  sigma = {sigma:4.1f}: log R = {ev.log_R:+.12f}")

    print("\n== torsion comparison (holds identically here) ==")
    for g in (2.0, -0.5, 1.0):
        rep = fried_residual(line, g)
        print(
            f"  g = {g:+.1f}: log R(0) = {rep.log_R_at_0:+.9f}, "
            f"log T = {rep.log_T:+.9f}, residual = {abs(rep.residual):.1e}"
        )
    print(f"  closed torsion value at g=2: {cmath.exp(torsion_log(line, 2.0)):.9f} = exp(e^(2i)/4)")

    print("\n== restriction from R to Z (unit covolume: exponent 1) ==")
    lattice = IntegerLatticeModel(alpha=alpha)
    for g in (2, -3):
        lhs, rhs, diff = subgroup_power_check(g, alpha, 1.0)
        print(f"  g = {g:+d}: line {lhs:+.12f} vs lattice {rhs:+.12f}, diff = {diff}")

    print("\n== the identity element contributes nothing ==")
    print(f"  atoms for g=0 in window 10: {flat_trace_measure(line, 0.0, 10.0).atoms}")
    print(f"  lattice fried report at g=3: residual {fried_residual(lattice, 3).residual}")


if __name__ == "__main__":
    main()
