"""Exhaustive sweep of the small universe: every system shape on up to 4 atoms.

Random campaigns sample; here the structure space is enumerated outright.
For each set partition of the atoms and each block-preserving permutation
(with two weight profiles, uniform and cycle-graded) the full report must
agree with the brute-force oracle and with the structural ground truth that
a valid system is ergodic exactly when its cycle partition coincides with
its block partition.  Non-preserving permutations are swept too: validation
must reject each one, in agreement with the basis law evaluated directly.
"""

import math
from fractions import Fraction
from itertools import permutations, product

import ergolab as E

F = Fraction

MAX_ATOMS = 4


def set_partitions(atoms):
    if not atoms:
        yield []
        return
    head, *rest = atoms
    for sub in set_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[head] + sub[i]] + sub[i + 1:]
        yield [[head]] + sub


def block_preserving_sigmas(partition, n):
    per_block = [permutations(block) for block in partition]
    for images in product(*per_block):
        sigma = [0] * n
        for block, image in zip(partition, images):
            for src, dst in zip(block, image):
                sigma[src] = dst
        yield sigma


def weight_profiles(koop, n):
    cycles = koop.cycles()
    uniform = [F(1, n)] * n
    masses = [0] * n
    for ci, cyc in enumerate(cycles):
        for i in cyc:
            masses[i] = ci + 2  # graded but still constant per cycle
    total = sum(masses)
    graded = [F(m, total) for m in masses]
    return [uniform, graded]


def every_valid_system():
    for n in range(1, MAX_ATOMS + 1):
        for partition in set_partitions(list(range(n))):
            for sigma in block_preserving_sigmas(partition, n):
                koop = E.KoopmanMap(sigma)
                for weights in weight_profiles(koop, n):
                    yield E.CepsSystem(E.ConditionalExpectation(weights, partition), koop)


def test_every_valid_shape_obeys_the_equivalences():
    count = 0
    ergodic_count = 0
    for system in every_valid_system():
        assert system.is_valid, system.report.failures
        report = E.full_report(system, exhaustive=True)
        assert report.agreement, (system, report.verdicts)
        truth = E.oracle_ergodic(system)
        assert report.ergodic == truth
        # structural ground truth: cycles coincide with blocks
        cycles = {frozenset(c) for c in system.cycles}
        blocks = {frozenset(b) for b in system.expectation.blocks}
        assert truth == (cycles == blocks)
        for q in (1, 2, math.inf):
            assert E.check_isometry(system, E.random_vector(system.n, seed=count), q)
        assert E.check_range_fixed(system).passed
        count += 1
        ergodic_count += truth
    # 2 profiles x sum over partitions of prod |B|! = 2 * (1 + 3 + 13 + 73)
    assert count == 180
    assert ergodic_count > 0 and ergodic_count < count


def test_every_non_preserving_permutation_is_rejected():
    for n in range(2, MAX_ATOMS + 1):
        uniform = [F(1, n)] * n
        for partition in set_partitions(list(range(n))):
            exp = E.ConditionalExpectation(uniform, partition)
            preserving = {tuple(s) for s in block_preserving_sigmas(partition, n)}
            for sigma in permutations(range(n)):
                koop = E.KoopmanMap(list(sigma))
                report = E.validate_system(exp, koop)
                # uniform weights are constant on any cycle, so validity is
                # exactly block-preservation, and the basis law must agree
                brute = all(
                    exp.apply(koop.apply(E.basis_vector(n, k))) == exp.apply(E.basis_vector(n, k))
                    for k in range(n)
                )
                assert report.passed == (tuple(sigma) in preserving) == brute
