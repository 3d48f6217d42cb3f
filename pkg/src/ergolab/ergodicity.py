"""Cesàro means, exact time averages, and the ergodicity decision procedures.

Every criterion is decided by a fast route that exploits the cycle structure
of the validated atom map (invariant components are exactly unions of
cycles), and where the criterion quantifies over components, also by an
exhaustive route that discharges the quantifier literally under the
brute-force cap.  On a valid system all verdicts must coincide; a
disagreement would falsify one of the equivalences this library exists to
exercise, so ``full_report`` surfaces it loudly rather than picking a winner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import caps
from .checks import vector_to_json
from .riesz import Component, RieszVector, basis_vector, sup_norm, zero
from .system import CepsSystem

Witness = Union[RieszVector, tuple[RieszVector, RieszVector], None]
Verdict = tuple[bool, "Witness"]

CORRELATION_VARIANTS = (
    "corr-bounded-pairs",        # averaged-product limit, bounded x integrable pairs
    "corr-ideal-pairs",          # the same limit quantified over the ideal of the unit
    "corr-component-pairs",      # pairs of components
    "corr-diagonal",             # diagonal pairs f = g over the ideal
    "corr-diagonal-components",  # diagonal pairs of components
)

CRITERIA = (
    "definition",
    "absorbing",
    "sweep-out",
    "time-average",
) + CORRELATION_VARIANTS


# --- Cesàro means and exact time averages -----------------------------------

def cesaro_mean(system: CepsSystem, f: RieszVector, n: int) -> RieszVector:
    """Average of the first n composition iterates of f, computed incrementally."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("the Cesàro index n must be a positive integer")
    koop = system.koopman
    acc = list(f.entries)
    cur = f
    for _ in range(n - 1):
        cur = koop.apply(cur)
        for i, x in enumerate(cur.entries):
            acc[i] += x
    return RieszVector(x / n for x in acc)


def birkhoff_limit(system: CepsSystem, f: RieszVector) -> RieszVector:
    """Exact order limit of the Cesàro means: the average of f along each cycle."""
    system.require_valid()
    e = f.entries
    out = [Fraction(0)] * system.n
    for cyc in system.cycles:
        v = sum((e[i] for i in cyc), Fraction(0)) / len(cyc)
        for i in cyc:
            out[i] = v
    return RieszVector(out)


@dataclass(frozen=True)
class CesaroTrace:
    """Snapshots of the Cesàro means of one vector along an index grid."""

    f: RieszVector
    values: tuple[tuple[int, RieszVector], ...]
    limit: RieszVector
    sup_errors: tuple[Fraction, ...]


def cesaro_trace(system: CepsSystem, f: RieszVector, ns: Sequence[int]) -> CesaroTrace:
    """One incremental sweep through max(ns) iterates, snapshotting each index."""
    system.require_valid()
    grid = sorted(set(int(n) for n in ns))
    if not grid or grid[0] < 1:
        raise ValueError("the index grid must consist of positive integers")
    koop = system.koopman
    limit = birkhoff_limit(system, f)
    acc = [Fraction(0)] * system.n
    cur = f
    values = []
    k = 0
    for n in grid:
        while k < n:
            for i, x in enumerate(cur.entries):
                acc[i] += x
            cur = koop.apply(cur)
            k += 1
        values.append((n, RieszVector(x / n for x in acc)))
    errors = tuple(sup_norm(v - limit) for _, v in values)
    return CesaroTrace(f, tuple(values), limit, errors)


def cesaro_error_bound(system: CepsSystem, f: RieszVector, n: int) -> Fraction:
    """Worst-case gap between the n-th Cesàro mean and its limit.

    Within one cycle the mean differs from the cycle average only by the
    wrap-around remainder, which yields the 2 * longest_cycle * |f|_sup / n
    envelope asserted by the convergence tables.
    """
    return Fraction(2 * system.longest_cycle) * sup_norm(f) / n


def orbit_join(system: CepsSystem, p: Component) -> Component:
    """Join of all forward images of p under the composition operator.

    Iterates image-and-join until one round adds nothing; the running join
    absorbs preimages from then on, so stabilization is permanent (and
    arrives within one longest cycle).
    """
    system.require_valid()
    join = zero(system.n)
    cur = p
    while True:
        cur = system.koopman.apply(cur)
        grown = join.sup(cur)
        if grown == join:
            return join
        join = grown


# --- Mask scans ---------------------------------------------------------------
#
# Exhaustive scans enumerate bitmask components in lexicographic entry order
# (atom 0 most significant), matching the oracle enumeration.  Denominators
# are cleared once per system so per-component equality tests run in exact
# integer arithmetic; tests certify these against direct rational evaluation
# on small atom counts.


def _lex_masks(n: int):
    for k in range(1 << n):
        yield int(format(k, f"0{n}b")[::-1], 2)


class _ScanData:
    """Denominator-cleared view of one valid system for the mask scans."""

    __slots__ = ("n", "wts", "block_masks", "block_weight", "cycle_lcm", "cycle_of",
                 "cycle_weight", "cycle_factor", "cycles_in_block", "preimage_masks")

    def __init__(self, system: CepsSystem):
        system.require_valid()
        exp = system.expectation
        n = system.n
        den = 1
        for w in exp.weights:
            den = den * w.denominator // math.gcd(den, w.denominator)
        wts = [int(w * den) for w in exp.weights]
        cycles = system.cycles
        lcm = 1
        for c in cycles:
            lcm = lcm * len(c) // math.gcd(lcm, len(c))
        cycle_of = [0] * n
        for ci, c in enumerate(cycles):
            for i in c:
                cycle_of[i] = ci
        self.n = n
        self.wts = wts
        self.block_masks = [sum(1 << i for i in b) for b in exp.blocks]
        self.block_weight = [sum(wts[i] for i in b) for b in exp.blocks]
        self.cycle_lcm = lcm
        self.cycle_of = tuple(cycle_of)
        self.cycle_weight = [wts[c[0]] for c in cycles]
        self.cycle_factor = [wts[c[0]] * (lcm // len(c)) for c in cycles]
        block_of = exp.block_of
        self.cycles_in_block = [[] for _ in exp.blocks]
        for ci, c in enumerate(cycles):
            self.cycles_in_block[block_of[c[0]]].append(ci)
        pre = [0] * n
        for i, j in enumerate(system.koopman.sigma):
            pre[j] |= 1 << i
        self.preimage_masks = pre

    def image_mask(self, mask: int) -> int:
        """Mask of the composition image: bit i set iff sigma(i) is in ``mask``."""
        out = 0
        m = mask
        pre = self.preimage_masks
        while m:
            low = m & -m
            out |= pre[low.bit_length() - 1]
            m ^= low
        return out

    def block_constant(self, mask: int) -> bool:
        """Literal range-membership test: the mask meets each block in nothing or all."""
        for bm in self.block_masks:
            hit = mask & bm
            if hit and hit != bm:
                return False
        return True

    def average_is_zero(self, mask: int) -> bool:
        """Evaluate whether the averaged indicator of ``mask`` is the zero vector.

        The average on a block is the weighted count over the block weight;
        all block numerators are computed and compared with zero.
        """
        wts = self.wts
        for bm in self.block_masks:
            m = mask & bm
            num = 0
            while m:
                low = m & -m
                num += wts[low.bit_length() - 1]
                m ^= low
            if num != 0:
                return False
        return True

    def cycle_counts(self, mask: int) -> list[int]:
        counts = [0] * len(self.cycle_weight)
        m = mask
        cycle_of = self.cycle_of
        while m:
            low = m & -m
            counts[cycle_of[low.bit_length() - 1]] += 1
            m ^= low
        return counts

    def correlation_pair_holds(self, counts_p: list[int], counts_q: list[int]) -> bool:
        """Exact test: averaged-product limit equals the product of the averages.

        Per block, both sides are cleared by the cycle lcm and the squared
        block weight, leaving the integer identity

            W_B * sum_C  w_C (lcm/len C) a_C b_C  ==  lcm * P_B(p) * P_B(q)

        with P_B the weighted support count of the component in the block.
        """
        lcm = self.cycle_lcm
        factor = self.cycle_factor
        weight = self.cycle_weight
        for bi, cyc_ids in enumerate(self.cycles_in_block):
            lhs = 0
            p_tot = 0
            q_tot = 0
            for ci in cyc_ids:
                a = counts_p[ci]
                b = counts_q[ci]
                if a:
                    p_tot += weight[ci] * a
                    if b:
                        lhs += factor[ci] * a * b
                if b:
                    q_tot += weight[ci] * b
            if self.block_weight[bi] * lhs != lcm * p_tot * q_tot:
                return False
        return True


# --- The decision procedures ---------------------------------------------------

def decide_definition(system: CepsSystem) -> Verdict:
    """Invariant vectors are fixed by the averaging operator.

    The minimal invariant components are the cycle indicators of the atom
    map; the system is ergodic iff each is fixed by the average.  Linearity
    plus the component reduction carry the verdict to every invariant vector.
    """
    system.require_valid()
    exp = system.expectation
    for p in system.cycle_indicators():
        if exp.apply(p) != p:
            return False, p
    return True, None


def decide_absorbing(system: CepsSystem, mode: str = "reduction",
                     cap: Optional[int] = None) -> Verdict:
    """Components whose image sticks out nowhere must be range members.

    The hypothesis "the averaged part of the image lying outside p vanishes"
    forces p to be invariant (strict positivity), so the reduction mode scans
    cycle indicators; exhaustive mode evaluates hypothesis and conclusion for
    every component under the cap.
    """
    system.require_valid()
    if mode == "reduction":
        exp = system.expectation
        for p in system.cycle_indicators():
            if not exp.in_range(p):
                return False, p
        return True, None
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    n = system.n
    caps.guard("exhaustive component scan", n, cap)
    data = _ScanData(system)
    for p_mask in _lex_masks(n):
        image = data.image_mask(p_mask)
        outside = image & ~p_mask
        if data.average_is_zero(outside) and not data.block_constant(p_mask):
            return False, Component.from_mask(n, p_mask)
    return True, None


def decide_sweep_out(system: CepsSystem, mode: str = "reduction",
                     cap: Optional[int] = None) -> Verdict:
    """The forward orbit of every component joins up to a range member.

    The join distributes over component joins, so the reduction mode scans
    singletons only; exhaustive mode walks every component under the cap.
    """
    system.require_valid()
    n = system.n
    exp = system.expectation
    if mode == "reduction":
        for i in range(n):
            joined = orbit_join(system, basis_vector(n, i))
            if not exp.in_range(joined):
                return False, basis_vector(n, i)
        return True, None
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    caps.guard("exhaustive component scan", n, cap)
    data = _ScanData(system)
    for p_mask in _lex_masks(n):
        join = 0
        cur = p_mask
        while True:
            cur = data.image_mask(cur)
            grown = join | cur
            if grown == join:
                break
            join = grown
        if not data.block_constant(join):
            return False, Component.from_mask(n, p_mask)
    return True, None


def decide_time_average(system: CepsSystem) -> Verdict:
    """Time averages agree with the conditional averages on the basis."""
    system.require_valid()
    n = system.n
    exp = system.expectation
    for i in range(n):
        ei = basis_vector(n, i)
        if birkhoff_limit(system, ei) != exp.apply(ei):
            return False, ei
    return True, None


# --- Correlation criteria -------------------------------------------------------

def correlation_mean(system: CepsSystem, f: RieszVector, g: RieszVector, n: int) -> RieszVector:
    """Average of the first n averaged products of f with the iterates of g."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("the correlation index n must be a positive integer")
    exp, koop = system.expectation, system.koopman
    acc: RieszVector = zero(system.n)
    cur = g
    for _ in range(n):
        acc = acc + exp.apply(f * cur)
        cur = koop.apply(cur)
    return acc / n


def correlation_limit(system: CepsSystem, f: RieszVector, g: RieszVector) -> RieszVector:
    """Exact limit of the correlation means: the averaged product with the time average."""
    return system.expectation.apply(f * birkhoff_limit(system, g))


def _diagonal_gap_zero(system: CepsSystem, f: RieszVector) -> bool:
    expected = system.expectation.apply(f)
    return correlation_limit(system, f, f) == expected * expected


def decide_correlation(system: CepsSystem, variant: str, exhaustive: bool = False,
                       cap: Optional[int] = None) -> Verdict:
    """Averaged products decouple in the limit: the criterion family.

    Pair variants quantify over all (f, g); bilinearity reduces them to the
    standard basis.  The diagonal variant is a quadratic form, decided on the
    basis plus all pairwise sums (polarization).  Component variants scan
    cycle indicators on the fast route -- any failure shows up on a cycle
    indicator -- and every component (pair) on the exhaustive route.
    """
    system.require_valid()
    if variant not in CORRELATION_VARIANTS:
        raise ValueError(f"unknown correlation variant {variant!r}")
    n = system.n
    exp = system.expectation

    if variant in ("corr-bounded-pairs", "corr-ideal-pairs"):
        es = [basis_vector(n, i) for i in range(n)]
        images = [exp.apply(ei) for ei in es]
        for i in range(n):
            for j in range(n):
                if correlation_limit(system, es[i], es[j]) != images[i] * images[j]:
                    return False, (es[i], es[j])
        return True, None

    if variant == "corr-diagonal":
        for i in range(n):
            ei = basis_vector(n, i)
            if not _diagonal_gap_zero(system, ei):
                return False, (ei, ei)
        for i in range(n):
            for j in range(i + 1, n):
                f = basis_vector(n, i) + basis_vector(n, j)
                if not _diagonal_gap_zero(system, f):
                    return False, (f, f)
        return True, None

    if variant == "corr-component-pairs":
        if not exhaustive:
            indicators = system.cycle_indicators()
            for p in indicators:
                for q in indicators:
                    if correlation_limit(system, p, q) != exp.apply(p) * exp.apply(q):
                        return False, (p, q)
            return True, None
        caps.guard("exhaustive component-pair scan", 2 * n, cap)
        data = _ScanData(system)
        masks = list(_lex_masks(n))
        counts = {m: data.cycle_counts(m) for m in masks}
        for pi, p_mask in enumerate(masks):
            cp = counts[p_mask]
            for q_mask in masks[pi:]:  # the cleared identity is symmetric in (p, q)
                if not data.correlation_pair_holds(cp, counts[q_mask]):
                    return False, (Component.from_mask(n, p_mask), Component.from_mask(n, q_mask))
        return True, None

    # corr-diagonal-components
    if not exhaustive:
        for p in system.cycle_indicators():
            if correlation_limit(system, p, p) != exp.apply(p) * exp.apply(p):
                return False, (p, p)
        return True, None
    caps.guard("exhaustive component scan", n, cap)
    data = _ScanData(system)
    for p_mask in _lex_masks(n):
        cp = data.cycle_counts(p_mask)
        if not data.correlation_pair_holds(cp, cp):
            p = Component.from_mask(n, p_mask)
            return False, (p, p)
    return True, None


# --- Norm preservation -----------------------------------------------------------

def check_isometry(system: CepsSystem, x: RieszVector, q) -> bool:
    """Composition preserves the range-valued q-norms, q a positive integer or inf.

    Finite q compares the exact q-th powers of the norms; q = inf compares
    the blockwise sup profiles.  Runs on unvalidated systems too, where it is
    allowed to fail (that failure is what proves the check has teeth).
    """
    exp = system.expectation
    moved = system.koopman.apply(x)
    if q == math.inf:
        return exp.norm_inf(moved) == exp.norm_inf(x)
    if not isinstance(q, int) or q < 1:
        raise ValueError("q must be a positive integer or math.inf")
    return exp.norm_power(moved, q) == exp.norm_power(x, q)


# --- The aggregate report ---------------------------------------------------------

@dataclass(frozen=True)
class ErgodicityReport:
    """Per-criterion verdicts with counterexample witnesses and the agreement flag."""

    verdicts: dict[str, bool]
    witnesses: dict[str, Witness]
    agreement: bool

    def __post_init__(self):
        for name, verdict in self.verdicts.items():
            if (name in self.witnesses) == verdict:
                raise ValueError(f"criterion {name!r}: witness must be present exactly on failure")
        if self.agreement != (len(set(self.verdicts.values())) == 1):
            raise ValueError("agreement flag must equal 'all verdicts identical'")

    @property
    def ergodic(self) -> bool:
        if not self.agreement:
            raise ValueError("criteria disagree; no consensus verdict exists")
        return next(iter(self.verdicts.values()))

    def to_dict(self) -> dict:
        out: dict = {"verdicts": dict(self.verdicts), "agreement": self.agreement}
        wits = {}
        for name, w in self.witnesses.items():
            if isinstance(w, tuple):
                wits[name] = {"f": vector_to_json(w[0]), "g": vector_to_json(w[1])}
            else:
                wits[name] = vector_to_json(w)
        out["witnesses"] = wits
        if self.agreement:
            out["ergodic"] = self.ergodic
        return out


def full_report(system: CepsSystem, exhaustive: bool = False,
                cap: Optional[int] = None) -> ErgodicityReport:
    """Run every decision procedure and aggregate the verdicts.

    Agreement across all criteria is the executable content of the
    equivalence theorems; ``exhaustive`` switches the component-quantified
    criteria to their literal scans (cap permitting).
    """
    system.require_valid()
    mode = "exhaustive" if exhaustive else "reduction"
    results: dict[str, Verdict] = {
        "definition": decide_definition(system),
        "absorbing": decide_absorbing(system, mode=mode, cap=cap),
        "sweep-out": decide_sweep_out(system, mode=mode, cap=cap),
        "time-average": decide_time_average(system),
    }
    for variant in CORRELATION_VARIANTS:
        use_exhaustive = exhaustive and variant in ("corr-component-pairs", "corr-diagonal-components")
        results[variant] = decide_correlation(system, variant, exhaustive=use_exhaustive, cap=cap)
    verdicts = {name: ok for name, (ok, _) in results.items()}
    witnesses = {name: w for name, (_, w) in results.items() if w is not None}
    agreement = len(set(verdicts.values())) == 1
    return ErgodicityReport(verdicts, witnesses, agreement)
