#!/usr/bin/env python3
"""Building systems and watching the compatibility laws hold -- or break.

A system couples the averaging operator with the composition operator of an
atom self-map.  Compatibility (averaging absorbs composition) pins down the
structure exactly: the map must permute atoms, fix each block setwise, and
the weights must be constant along its cycles.  Violate any one of these and
validation points at the failure.
"""

import json
from fractions import Fraction

import ergolab as E

F = Fraction

print("== a valid system: two blocks, swaps inside each ==")
system = E.CepsSystem.from_parts(
    weights=[F(1, 6), F(1, 6), F(1, 3), F(1, 3)],
    partition=[[0, 1], [2, 3]],
    sigma=[1, 0, 3, 2],
)
print(system)
for check in system.report.checks:
    print(f"  {check.name:28s} {'ok' if check.passed else 'FAILED'}")

print()
print("== the laws that make it tick ==")
koop, T = system.koopman, system.expectation
ek = E.basis_vector(4, 2)
print("T(S e2) =", T.apply(koop.apply(ek)), "= T(e2) =", T.apply(ek))
print("range elements are fixed by S:", E.check_range_fixed(system).passed)

print()
print("== three ways to break it ==")

crossing = E.CepsSystem.from_parts([F(1, 4)] * 4, [[0, 1], [2, 3]], [2, 1, 0, 3])
print("sigma crossing blocks:   ",
      [c.name for c in crossing.report.failures], "-> valid:", crossing.is_valid)

collapsing = E.CepsSystem.from_parts([F(1, 2), F(1, 2)], [[0, 1]], [0, 0])
print("sigma not a permutation: ",
      [c.name for c in collapsing.report.failures], "-> valid:", collapsing.is_valid)

lopsided = E.CepsSystem.from_parts([F(1, 3), F(2, 3)], [[0, 1]], [1, 0])
print("weights vary on a cycle: ",
      [c.name for c in lopsided.report.failures], "-> valid:", lopsided.is_valid)

print()
print("== deciders refuse broken systems ==")
try:
    E.decide_definition(crossing)
except E.InvalidSystemError as exc:
    print("decide_definition:", exc)

print()
print("== the JSON wire format ==")
doc = E.system_to_dict(system)
print(json.dumps(doc, indent=2, sort_keys=True))
round_tripped = E.system_from_dict(doc)
assert round_tripped.expectation == system.expectation
assert round_tripped.koopman == system.koopman
print("round trip exact: confirmed")

print()
print("== schema errors point at the offence ==")
doc_bad = E.system_to_dict(system)
doc_bad["weights"][1] = 0.25
try:
    E.system_from_dict(doc_bad)
except E.SchemaError as exc:
    print("float weight rejected:", exc)

print()
print("== the seeded generator only ever emits valid systems ==")
for seed in range(5):
    generated = E.random_system(n=7, blocks=3, seed=seed)
    assert generated.is_valid
    print(f"  seed {seed}: cycles {generated.cycles}")
