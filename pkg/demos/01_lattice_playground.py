#!/usr/bin/env python3
"""A walk through the exact lattice kernel.

Everything in ergolab lives on a finite set of atoms with entrywise order and
exact rational entries, so lattice identities can be checked with == instead
of tolerances.  This script plays with the basic operations, components of
the unit, band projections, and the dyadic step ladder.
"""

from fractions import Fraction

import ergolab as E

F = Fraction

print("== vectors and lattice operations ==")
f = E.RieszVector([2, -3, F(1, 2)])
g = E.RieszVector([0, 1, 1])
print("f           =", f)
print("g           =", g)
print("f v g       =", f.sup(g))
print("f ^ g       =", f.inf(g))
print("f+ and f-   =", f.pos_part(), f.neg_part())
print("|f|         =", abs(f))

# The Jordan decomposition is an identity here, not an approximation.
assert f == f.pos_part() - f.neg_part()
assert abs(f) == f.pos_part() + f.neg_part()

print()
print("== components of the unit ==")
e = E.unit(3)
p = E.Component([1, 0, 1])
print("e           =", e)
print("p           =", p, "support", p.support)
print("p ^ (e - p) =", p.inf(p.complement()), " (zero: that is what makes p a component)")
print("is_component((1/2, 0, 0)) ->", E.is_component(E.RieszVector([F(1, 2), 0, 0])))

# Components multiply like events intersect.
q = E.Component([1, 1, 0])
assert p * q == p.inf(q)
print("p * q       =", p * q, " (same as p ^ q)")

print()
print("== band projections pick out level sets ==")
h = E.RieszVector([0, 1, 2])
for alpha in (F(1, 2), F(3, 2), 3):
    print(f"atoms where h < {alpha}:", E.band_projection_component(h, alpha))

print()
print("== the dyadic step ladder ==")
target = E.RieszVector([0, F(1, 3), 1])
print("target      =", target)
for k in (1, 2, 4, 8):
    step = E.freudenthal_approx(target, k)
    vec = step.to_vector()
    gap = max((target - vec).entries)
    print(f"depth {k}: value {vec}  worst gap {gap} (bound {F(1, 2**k)})")

# The ladder climbs: each refinement sits above the previous one.
coarse = E.freudenthal_approx(target, 2).to_vector()
fine = E.freudenthal_approx(target, 3).to_vector()
assert coarse.leq(fine) and fine.leq(target)
print("monotone from below: confirmed")
