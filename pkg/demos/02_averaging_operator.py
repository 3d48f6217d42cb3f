#!/usr/bin/env python3
"""The conditional expectation as a blockwise weighted average.

A partition of the atoms plus strictly positive probability weights determine
the operator completely: on each block it replaces a vector by the block's
weighted mean.  Its range is the block-constant vectors -- the exact analogue
of measurability with respect to a sub-sigma-algebra.
"""

from fractions import Fraction

import ergolab as E

F = Fraction

weights = [F(1, 4), F(1, 4), F(1, 6), F(1, 3)]
partition = [[0, 1], [2, 3]]
T = E.ConditionalExpectation(weights, partition)

print("weights  =", weights)
print("blocks   =", T.blocks)
print()

f = E.RieszVector([1, 3, 6, 0])
print("f        =", f)
print("T f      =", T.apply(f), " (block means: (1/4+3/4)/(1/2) = 2, (1+0)/(1/2) = 2)")

print()
print("== the operator laws, checked on the basis ==")
report = E.verify_axioms(T)
for check in report.checks:
    print(f"  {check.name:28s} {'ok' if check.passed else 'FAILED'}"
          + (f"  [{check.note}]" if check.note else ""))

print()
print("== the averaging property in action ==")
g = T.block_indicator(0)          # a range element: constant on blocks
h = E.RieszVector([5, -1, 2, 2])
print("g        =", g)
print("T(g * h) =", T.apply(g * h))
print("g * T(h) =", g * T.apply(h), " (range factors pull out of the average)")
assert T.apply(g * h) == g * T.apply(h)

print()
print("== range membership is block-constancy ==")
for v in (E.unit(4), E.RieszVector([2, 2, 7, 7]), E.RieszVector([2, 3, 7, 7])):
    print(f"  {str(v):40s} in range: {T.in_range(v)}")

print()
print("== range-valued norms, kept exact as q-th powers ==")
x = E.RieszVector([1, -3, 2, 0])
for q in (1, 2, 3):
    print(f"  q={q}: average of |x|^{q} =", T.norm_power(x, q),
          " display roots:", tuple(round(r, 4) for r in T.norm_root_float(x, q)))
print("  sup profile:", T.norm_inf(x), " (least block-constant dominator of |x|)")

# For a component the q-th powers all coincide with the plain average.
p = E.Component([1, 0, 1, 0])
assert all(T.norm_power(p, q) == T.apply(p) for q in (1, 2, 3, 7))
print("component norms collapse to the average: confirmed")
