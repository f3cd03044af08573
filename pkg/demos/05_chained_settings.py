#!/usr/bin/env python3
"""More measurement settings: the chained generalization.

With m settings per party the monogamy bound is 2m, derived by summing 2m
triple inequalities.  That set of 2m members is unique (verified here by
exhaustive search), swapping signs inside the swappable members yields
4^(m-1) constraint families, and minimizing the max of the 2m-1 channel
capacities over them bounds the m-setting strength from below.
"""
from signalcap import monogamy, strength
from signalcap.boxes import component_names

print("== the unique minimal member set ==")
for m in (2, 3, 4):
    full = monogamy.verify_minimal_set(m)
    short = monogamy.verify_minimal_set(m, 2 * m - 1)
    print(f"m={m}: {full} multiset(s) of size {2*m}, {short} of size {2*m-1}")
print()

print("== the m = 3 base constraint and one swapped variant ==")
base = monogamy.generate_inequality_set(3)
print("components:", component_names(3))
print("base:     ", [int(v) for v in base.summed])
swapped = monogamy.generate_inequality_set(3, (1, 0, 0, 1))
print("swapped:  ", [int(v) for v in swapped.summed])
print(f"{len(monogamy.all_inequality_sets(3))} distinct summed constraints\n")

print("== conjectured lower bounds on the three-setting strength ==")
print("delta   m=3 bound    gava(m=3)")
for delta in (0.5, 1.0, 1.5, 2.0):
    res = strength.chained_polytope_bound(3, delta)
    print(f"{delta:4.2f}  {res.value:10.6f}  {strength.gava_bound(3, delta):10.6f}"
          f"   ({res.label})")
