#!/usr/bin/env python3
"""The communication strength curve.

For each violation delta, minimize the largest induced channel capacity over
every correlator assignment compatible with that violation: the result is
the number of bits per use that ANY box violating by delta must leak.  Three
independent routes are compared: the cutting-plane solver, the brute-force
grid oracle, and the one-parameter optimal family.
"""
import numpy as np

from signalcap import strength

print("delta   solver      grid        family      gava(m=2)   gava(m=3)")
for delta in np.arange(0.0, 2.0001, 0.25):
    delta = float(delta)
    solver = strength.c_delta(delta).value
    grid = strength.grid_oracle(delta, step=0.05)
    family = strength.optimal_family(delta).value
    print(f"{delta:4.2f}  {solver:10.6f}  {grid:10.6f}  {family:10.6f}"
          f"  {strength.gava_bound(2, delta):10.6f}  {strength.gava_bound(3, delta):10.6f}")

print()
print("== maximal violation, by the analytic route ==")
rep = strength.c2_analytic()
print(f"outside the positive quadrant the best is C(1, 1/2) = {rep.subregion_value:.6f}")
print(f"inside, the capacities equalize at alpha = {rep.alpha_star:.6f}")
print(f"strength at delta = 2: {rep.c2:.6f}")

print()
print("== a CSV of the curve (also: `signalcap curve --m 2 --step 0.1`) ==")
result = strength.curve(2, [0.0, 0.5, 1.0, 1.5, 2.0])
print(result.to_csv())
