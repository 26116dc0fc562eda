"""Independent oracles the tests check the library against.

Everything here is computed by a different route than the implementation
under test: exact binomial tail sums for frequency-window probabilities, a
closed-form lattice construction for union/intersection closures, explicit
enumeration for composition counts, and the closed-form chi-square quantile
for two degrees of freedom.  Keeping these in the test tree (and dumb on
purpose) is what makes the dual-route checks meaningful.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import chain, combinations
from math import ceil, comb, floor, log


def binomial_window_probability(
    n: int, p: Fraction, center: Fraction, epsilon: Fraction
) -> Fraction:
    """P(|X/n - center| <= epsilon) for X ~ Binomial(n, p), exactly.

    Sums the binomial terms for k in [ceil((center-eps)*n),
    floor((center+eps)*n)] with incremental integer arithmetic, so it stays
    fast for n around 10^4 while remaining exact.
    """
    p = Fraction(p)
    a, b = p.numerator, p.denominator
    c = b - a
    lo = Fraction(center) - Fraction(epsilon)
    hi = Fraction(center) + Fraction(epsilon)
    kmin = max(0, ceil(lo * n))
    kmax = min(n, floor(hi * n))
    if kmin > kmax:
        return Fraction(0)
    if a == 0:
        return Fraction(1) if kmin == 0 else Fraction(0)
    if c == 0:
        return Fraction(1) if kmax == n else Fraction(0)
    # term_k = C(n,k) a^k c^(n-k); carry a^k c^(kmax-k) and divide by b^n last
    term = comb(n, kmin) * a**kmin * c ** (kmax - kmin)
    total = term
    for k in range(kmin, kmax):
        term = term * (n - k) * a // ((k + 1) * c)
        total += term
    return Fraction(total * c ** (n - kmax), b**n)


def binomial_window_probability_naive(
    n: int, p: Fraction, center: Fraction, epsilon: Fraction
) -> Fraction:
    """Same quantity by direct summation; slow, used to cross-check the fast one."""
    p = Fraction(p)
    total = Fraction(0)
    for k in range(n + 1):
        if abs(Fraction(k, n) - center) <= epsilon:
            total += comb(n, k) * p**k * (1 - p) ** (n - k)
    return total


def closure_by_lattice(
    universe: tuple, generators: list[frozenset]
) -> frozenset[frozenset]:
    """Union/intersection closure via the distributive-lattice normal form.

    Every member of the closure of a finite family is a union of
    intersections of generators; so: take all intersections of non-empty
    generator subsets (plus the full set for the empty intersection), then
    all unions of subsets of those (the empty union giving the empty set).
    """
    full = frozenset(universe)
    gens = [frozenset(g) for g in generators]
    intersections = {full}
    for size in range(1, len(gens) + 1):
        for subset in combinations(gens, size):
            meet = full
            for g in subset:
                meet = meet & g
            intersections.add(meet)
    inter_list = list(intersections)
    closed = {frozenset()}
    for size in range(1, len(inter_list) + 1):
        for subset in combinations(inter_list, size):
            join = frozenset()
            for g in subset:
                join = join | g
            closed.add(join)
    closed.add(full)
    return frozenset(closed)


def closure_by_fixpoint(
    universe: tuple,
    generators: list[frozenset],
    include_complements: bool = False,
) -> frozenset[frozenset]:
    """Plain fixed-point closure; handles the opt-in complement case too."""
    full = frozenset(universe)
    family = {full, frozenset()} | {frozenset(g) for g in generators}
    while True:
        additions = set()
        members = list(family)
        for i, a in enumerate(members):
            for b in members[i:]:
                for candidate in (a | b, a & b):
                    if candidate not in family:
                        additions.add(candidate)
            if include_complements and (full - a) not in family:
                additions.add(full - a)
        if not additions:
            return frozenset(family)
        family |= additions


def enumerate_compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All ways to write ``total`` as an ordered sum of ``parts`` >= 0 terms."""
    if parts == 1:
        return [(total,)]
    result = []
    for first in range(total + 1):
        for rest in enumerate_compositions(total - first, parts - 1):
            result.append((first,) + rest)
    return result


def powerset(iterable):
    items = list(iterable)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def chi_square_quantile_df2(confidence: float) -> float:
    """Exact quantile of the chi-square distribution with 2 degrees of freedom."""
    return -2.0 * log(1.0 - confidence)


def chi_square_statistic(counts: dict, probs: dict, n: int) -> float:
    """Pearson statistic sum (observed - expected)^2 / expected."""
    stat = 0.0
    for label, p in probs.items():
        expected = float(p) * n
        observed = counts.get(label, 0)
        stat += (observed - expected) ** 2 / expected
    return stat
