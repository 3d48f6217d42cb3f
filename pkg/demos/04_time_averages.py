#!/usr/bin/env python3
"""Cesàro means marching toward their exact limit.

On a finite system the time average of a vector is computable in closed form:
it is the plain average along each cycle of the atom map.  The running Cesàro
means wobble around it with a wrap-around remainder that dies like 1/n, and
the envelope 2 * (longest cycle) * sup|f| / n is a proved bound, so every row
of the table below must sit inside it.
"""

from fractions import Fraction

import ergolab as E

F = Fraction

# One block of five atoms, uniform weights, a single 5-cycle: ergodic.
system = E.CepsSystem.from_parts([F(1, 5)] * 5, [[0, 1, 2, 3, 4]], [1, 2, 3, 4, 0])
f = E.RieszVector([5, 0, 0, 0, 0])

limit = E.birkhoff_limit(system, f)
print("f          =", f)
print("exact limit=", limit, " (cycle average of f)")
print("average of f matches:", system.expectation.apply(f) == limit,
      " (time average == conditional average: ergodic)")
print()

grid = [2 ** k for k in range(11)]
trace = E.cesaro_trace(system, f, grid)

print(f"{'n':>6} {'sup error':>12} {'bound':>12}  inside")
for (n, _), err in zip(trace.values, trace.sup_errors):
    bound = E.cesaro_error_bound(system, f, n)
    print(f"{n:>6} {str(err):>12} {str(bound):>12}  {err <= bound}")

print()
print("== the mean closes exactly at multiples of the cycle length ==")
for n in (5, 10, 25):
    print(f"  n={n:>3}: mean == limit ->", E.cesaro_mean(system, f, n) == limit)

print()
print("== fixed-point laws of the exact limit ==")
g = E.RieszVector([3, -1, F(1, 2), 0, 2])
lg = E.birkhoff_limit(system, g)
print("S(limit) == limit:", system.koopman.apply(lg) == lg)
print("T(limit) == T(g): ", system.expectation.apply(lg) == system.expectation.apply(g))

print()
print("== correlations decouple in the limit on an ergodic system ==")
h = E.RieszVector([1, 0, 2, 0, -1])
corr = E.correlation_limit(system, g, h)
product = system.expectation.apply(g) * system.expectation.apply(h)
print("limit of avg T(g * S^k h) =", corr)
print("T(g) * T(h)               =", product)
assert corr == product

print()
print("== and the empirical oracle agrees within its own bound ==")
value, gap = E.oracle_birkhoff(system, f, n_max=3000)
print("Cesàro mean at n=3000 =", value, " half-index gap =", gap)
assert value == limit  # 3000 is a multiple of 5: the remainder vanishes
