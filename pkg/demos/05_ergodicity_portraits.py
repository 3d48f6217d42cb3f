#!/usr/bin/env python3
"""Nine criteria, one verdict: portraits of an ergodic and a non-ergodic system.

Ergodicity has many faces -- invariant components, absorbing components,
orbit sweep-out, time averages, five flavours of correlation decoupling --
and they are provably equivalent.  The report below runs every decision
procedure; agreement across all of them on every valid system is the point.
"""

from fractions import Fraction

import ergolab as E

F = Fraction


def portrait(title, system, exhaustive=False):
    print(f"== {title} ==")
    print(system)
    print("cycles:", system.cycles, " blocks:", system.expectation.blocks)
    report = E.full_report(system, exhaustive=exhaustive)
    for name, verdict in report.verdicts.items():
        line = f"  {name:26s} {'ergodic' if verdict else 'NOT ergodic'}"
        witness = report.witnesses.get(name)
        if witness is not None:
            if isinstance(witness, tuple):
                line += f"   witness pair f={witness[0]}, g={witness[1]}"
            else:
                line += f"   witness {witness}"
        print(line)
    print("  agreement:", report.agreement, " consensus:", report.ergodic)
    print()
    return report


# A 4-cycle filling its single block: every criterion says ergodic.
rotating = E.CepsSystem.from_parts([F(1, 4)] * 4, [[0, 1, 2, 3]], [1, 2, 3, 0])
portrait("one block, one full cycle", rotating, exhaustive=True)

# Two 2-cycles inside one 4-atom block: the cycle indicators are invariant
# but not block-constant, and every criterion finds its own counterexample.
split = E.CepsSystem.from_parts([F(1, 4)] * 4, [[0, 1, 2, 3]], [1, 0, 3, 2])
report = portrait("one block, two separate cycles", split, exhaustive=True)

# Inspect one witness closely: the first invariant component that the
# averaging operator moves.
witness = report.witnesses["definition"]
print("witness under the maps:")
print("  S p =", split.koopman.apply(witness), " (invariant)")
print("  T p =", split.expectation.apply(witness), " (averaged away: not fixed)")
print()

# Cycles that exactly fill their blocks: ergodic again, with unequal weights.
matched = E.CepsSystem.from_parts(
    [F(1, 8), F(1, 8), F(3, 8), F(3, 8)], [[0, 1], [2, 3]], [1, 0, 3, 2]
)
portrait("cycles matching blocks, lopsided weights", matched)

# The exhaustive scans discharge the component quantifiers literally.
ok_pairs, _ = E.decide_correlation(split, "corr-component-pairs", exhaustive=True)
ok_fast, _ = E.decide_correlation(split, "corr-component-pairs")
print("exhaustive pair scan and fast route agree:", ok_pairs == ok_fast == False)  # noqa: E712

# And the independent oracle certifies the consensus.
for system in (rotating, split, matched):
    assert E.oracle_ergodic(system) == E.full_report(system).ergodic
print("oracle certification: confirmed on all three portraits")
