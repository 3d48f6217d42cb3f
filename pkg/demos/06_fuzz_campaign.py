#!/usr/bin/env python3
"""A miniature fuzz campaign, library-side.

The CLI command `ergolab fuzz` does this at scale; here the same loop runs in
process so the moving parts are visible: generate seeded valid systems, run
every decision procedure, check norm preservation on random vectors, and
certify the consensus against the brute-force oracle.  Any disagreement would
falsify a theorem, so the expected counters are simply zero.
"""

import math
from collections import Counter

import ergolab as E

ATOMS = 7
SYSTEMS = 150
SEED = 2026

counters = Counter()
for index in range(SYSTEMS):
    seed = SEED * 1_000_003 + index
    blocks = index % min(4, ATOMS) + 1
    system = E.random_system(ATOMS, blocks, seed)
    assert system.is_valid

    report = E.full_report(system)
    if not report.agreement:
        counters["disagreements"] += 1
        continue
    counters["ergodic" if report.ergodic else "non_ergodic"] += 1

    for t in range(3):
        x = E.random_vector(ATOMS, seed * 31 + t)
        if not all(E.check_isometry(system, x, q) for q in (1, 2, 3, math.inf)):
            counters["isometry_failures"] += 1
            break

    if E.oracle_ergodic(system) != report.ergodic:
        counters["oracle_disagreements"] += 1

print(f"campaign over {SYSTEMS} systems on {ATOMS} atoms:")
for key in ("ergodic", "non_ergodic", "disagreements", "isometry_failures",
            "oracle_disagreements"):
    print(f"  {key:22s} {counters[key]}")

assert counters["disagreements"] == 0
assert counters["isometry_failures"] == 0
assert counters["oracle_disagreements"] == 0
print("all agreement counters clean: the equivalences survived the campaign")

# Determinism: the same seed reproduces the same verdicts, system by system.
rerun = Counter()
for index in range(SYSTEMS):
    seed = SEED * 1_000_003 + index
    blocks = index % min(4, ATOMS) + 1
    system = E.random_system(ATOMS, blocks, seed)
    rerun["ergodic" if E.full_report(system).ergodic else "non_ergodic"] += 1
assert rerun["ergodic"] == counters["ergodic"]
print("re-run with the same seed: identical tallies")
