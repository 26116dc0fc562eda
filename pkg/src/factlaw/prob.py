"""Finite probability spaces with exact rational arithmetic.

Everything here is finite and exact: universes are finite tuples of labels,
event algebras are explicit families of subsets validated for closure, and
measures assign :class:`fractions.Fraction` weights to atoms.  Floats only
appear at the very edge, as estimates of meta-probabilities obtained by
repeating frequency experiments.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping, Protocol, Sequence

from .seeding import derive_seed

Label = Hashable


class ForeignElement(KeyError):
    """An event mentions an element outside the measure's universe."""


class UnknownLabel(KeyError):
    """A label was requested that the sampler's universe does not contain."""


class NotReached(RuntimeError):
    """The doubling search hit its cap before meeting the target confidence."""


def _as_fraction(value: Any) -> Fraction:
    """Coerce ints, strings and exact floats to Fraction without surprises."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(*value.as_integer_ratio())
    raise TypeError(f"cannot interpret {value!r} as an exact probability")


@dataclass(frozen=True)
class Universe:
    """A finite, duplicate-free tuple of outcome labels."""

    elements: tuple[Label, ...]

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        if not elements:
            raise ValueError("universe must be non-empty")
        if len(set(elements)) != len(elements):
            raise ValueError("universe has duplicate elements")
        object.__setattr__(self, "elements", elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, element: object) -> bool:
        return element in set(self.elements)


@dataclass(frozen=True)
class EventAlgebra:
    """A family of events over a universe, closed under union and intersection.

    The family always contains the full universe and the empty event.
    Closure (and membership of every event in the powerset) is validated at
    construction; universes here are small, so the quadratic check is cheap.
    """

    universe: Universe
    events: frozenset[frozenset]

    def __post_init__(self) -> None:
        events = frozenset(frozenset(e) for e in self.events)
        object.__setattr__(self, "events", events)
        full = frozenset(self.universe.elements)
        if full not in events or frozenset() not in events:
            raise ValueError("algebra must contain the universe and the empty event")
        for event in events:
            if not event <= full:
                raise ValueError(f"event {sorted(event, key=repr)} leaves the universe")
        for a in events:
            for b in events:
                if a | b not in events or a & b not in events:
                    raise ValueError("algebra is not closed under union/intersection")

    def __len__(self) -> int:
        return len(self.events)

    def __contains__(self, event: object) -> bool:
        return frozenset(event) in self.events  # type: ignore[arg-type]


def generate_algebra(
    universe: Universe,
    generators: Iterable[Iterable[Label]] = (),
    *,
    include_complements: bool = False,
) -> EventAlgebra:
    """Close ``generators`` under union and intersection over ``universe``.

    The result always contains the full universe and the empty event.
    Complement closure is opt-in: with ``include_complements`` the closure
    also absorbs set differences from the full universe.
    """
    full = frozenset(universe.elements)
    events: set[frozenset] = {full, frozenset()}
    for gen in generators:
        event = frozenset(gen)
        if not event <= full:
            raise ForeignElement(
                f"generator {sorted(event, key=repr)} leaves the universe"
            )
        events.add(event)
    changed = True
    while changed:
        changed = False
        current = list(events)
        for i, a in enumerate(current):
            for b in current[i:]:
                for candidate in (a | b, a & b):
                    if candidate not in events:
                        events.add(candidate)
                        changed = True
        if include_complements:
            for a in list(events):
                candidate = full - a
                if candidate not in events:
                    events.add(candidate)
                    changed = True
    return EventAlgebra(universe, frozenset(events))


@dataclass(frozen=True)
class Measure:
    """Exact atom weights over a universe.

    The constructor only coerces weights to :class:`Fraction`; whether the
    weights actually form a probability law (range and normalization) is the
    job of :func:`validate_measure`, so that broken measures can be built on
    purpose and reported on.
    """

    atom_probs: Mapping[Label, Fraction]

    def __post_init__(self) -> None:
        coerced = {k: _as_fraction(v) for k, v in self.atom_probs.items()}
        if not coerced:
            raise ValueError("measure needs at least one atom")
        object.__setattr__(self, "atom_probs", coerced)

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(self.atom_probs)

    @property
    def total(self) -> Fraction:
        return sum(self.atom_probs.values(), Fraction(0))

    def __getitem__(self, label: Label) -> Fraction:
        try:
            return self.atom_probs[label]
        except KeyError:
            raise ForeignElement(label) from None

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.atom_probs.items(), key=lambda kv: repr(kv[0]))))

    def to_doc(self) -> dict:
        from .serialize import fraction_to_str

        return {
            str(label): fraction_to_str(p)
            for label, p in self.atom_probs.items()
        }


def event_probability(measure: Measure, event: Iterable[Label]) -> Fraction:
    """Exact probability of ``event`` as the sum of its atom weights."""
    total = Fraction(0)
    for element in frozenset(event):
        total += measure[element]
    return total


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the measure axioms checked over a concrete algebra."""

    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_doc(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def validate_measure(measure: Measure, algebra: EventAlgebra) -> ValidationReport:
    """Check the probability axioms for ``measure`` over ``algebra``.

    Four checks are reported: value range, normalization over the universe,
    subadditivity ``p(A or B) <= p(A) + p(B)`` for every ordered pair of
    events, and the sharper rule that equality holds exactly for disjoint
    pairs.  The equality-iff-disjoint check is decidable only when every
    atom has strictly positive weight; with zero-weight atoms present it is
    recorded as skipped (passed, with a note) rather than guessed at.
    """
    checks: list[CheckResult] = []

    missing = [e for e in algebra.universe if e not in measure.atom_probs]
    extra = [e for e in measure.labels if e not in set(algebra.universe.elements)]
    aligned = not missing and not extra
    checks.append(
        CheckResult(
            "universe_match",
            aligned,
            "" if aligned else f"missing={missing!r} extra={extra!r}",
        )
    )

    bad_range = {
        k: p for k, p in measure.atom_probs.items() if p < 0 or p > 1
    }
    checks.append(
        CheckResult(
            "range",
            not bad_range,
            "" if not bad_range else f"out of [0,1]: {bad_range!r}",
        )
    )

    total = measure.total
    checks.append(
        CheckResult(
            "norm",
            total == 1,
            "" if total == 1 else f"atoms sum to {total}",
        )
    )

    if not aligned:
        checks.append(
            CheckResult("subadditivity", False, "skipped: universe mismatch")
        )
        checks.append(
            CheckResult("equality_iff_disjoint", False, "skipped: universe mismatch")
        )
        return ValidationReport(tuple(checks))

    sub_ok = True
    sub_detail = ""
    iff_ok = True
    iff_detail = ""
    all_positive = all(p > 0 for p in measure.atom_probs.values())
    events = sorted(algebra.events, key=lambda e: (len(e), sorted(e, key=repr)))
    for a in events:
        pa = event_probability(measure, a)
        for b in events:
            pb = event_probability(measure, b)
            pu = event_probability(measure, a | b)
            if pu > pa + pb:
                sub_ok = False
                sub_detail = (
                    f"p(A|B)={pu} > {pa + pb} for A={sorted(a, key=repr)}"
                    f" B={sorted(b, key=repr)}"
                )
            if all_positive:
                disjoint = not (a & b)
                if (pu == pa + pb) != disjoint:
                    iff_ok = False
                    iff_detail = (
                        f"equality/disjointness mismatch for A={sorted(a, key=repr)}"
                        f" B={sorted(b, key=repr)}"
                    )
    checks.append(CheckResult("subadditivity", sub_ok, sub_detail))
    if all_positive:
        checks.append(CheckResult("equality_iff_disjoint", iff_ok, iff_detail))
    else:
        checks.append(
            CheckResult(
                "equality_iff_disjoint",
                True,
                "skipped: zero-weight atoms make the criterion undecidable",
            )
        )
    return ValidationReport(tuple(checks))


# --- long-run frequency machinery ------------------------------------------


class LabelSampler(Protocol):
    """What the frequency experiments need from a random phenomenon."""

    @property
    def universe(self) -> Universe: ...

    def sample(self, n: int, seed: int | None = None) -> list: ...


def _window_success(
    sampler: LabelSampler,
    label: Label,
    target: Fraction,
    epsilon: Fraction,
    n_draws: int,
    seed: int,
) -> bool:
    """One repetition: does the relative frequency land within the window?"""
    draws = sampler.sample(n_draws, seed=seed)
    count = sum(1 for d in draws if d == label)
    return abs(Fraction(count, n_draws) - target) <= epsilon


def _window_success_batch(args) -> int:
    sampler, label, target, epsilon, n_draws, seeds = args
    return sum(
        1
        for seed in seeds
        if _window_success(sampler, label, target, epsilon, n_draws, seed)
    )


def meta_probability(
    sampler: LabelSampler,
    label: Label,
    target: Fraction | float | str,
    epsilon: Fraction | float | str,
    n_draws: int,
    repetitions: int,
    seed: int,
    *,
    jobs: int = 1,
) -> float:
    """Estimate how often an N-draw relative frequency hugs its target.

    Runs ``repetitions`` independent frequency experiments of ``n_draws``
    draws each and returns the proportion whose relative frequency of
    ``label`` lies within ``epsilon`` of ``target``.  Each repetition r uses
    the child seed ``derive_seed(seed, r)``, so the estimate is independent
    of execution order and can be fanned out over ``jobs`` processes.
    """
    if label not in sampler.universe:
        raise UnknownLabel(label)
    if n_draws < 1 or repetitions < 1:
        raise ValueError("n_draws and repetitions must be positive")
    target_f = _as_fraction(target)
    epsilon_f = _as_fraction(epsilon)
    if epsilon_f <= 0:
        raise ValueError("epsilon must be positive")
    seeds = [derive_seed(seed, r) for r in range(repetitions)]
    if jobs <= 1 or repetitions < 2:
        hits = sum(
            1
            for s in seeds
            if _window_success(sampler, label, target_f, epsilon_f, n_draws, s)
        )
        return hits / repetitions
    jobs = min(jobs, repetitions)
    chunks = [seeds[i::jobs] for i in range(jobs)]
    payload = [
        (sampler, label, target_f, epsilon_f, n_draws, chunk) for chunk in chunks
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        hits = sum(pool.map(_window_success_batch, payload))
    return hits / repetitions


def find_N0(
    sampler: LabelSampler,
    label: Label,
    target: Fraction | float | str,
    epsilon: Fraction | float | str,
    delta: float,
    repetitions: int,
    seed: int,
    *,
    start: int = 16,
    cap: int = 2**20,
    jobs: int = 1,
) -> int:
    """Smallest tested draw count whose window meta-probability reaches 1 - delta.

    Doubles ``n_draws`` starting from ``start``; every rung of the ladder
    gets its own derived seed.  Raises :class:`NotReached` (carrying the cap
    and the last estimate) if the cap is exceeded.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie strictly between 0 and 1")
    if start < 1 or cap < start:
        raise ValueError("need 1 <= start <= cap")
    n_draws = start
    step = 0
    last = 0.0
    while n_draws <= cap:
        last = meta_probability(
            sampler,
            label,
            target,
            epsilon,
            n_draws,
            repetitions,
            derive_seed(seed, f"rung{step}"),
            jobs=jobs,
        )
        if last >= 1 - delta:
            return n_draws
        n_draws *= 2
        step += 1
    raise NotReached(
        f"no draw count up to {cap} reached confidence {1 - delta}"
        f" (last estimate {last})"
    )


# --- statistical structures -------------------------------------------------


def count_statistical_structures(n_draws: int, n_labels: int) -> int:
    """Number of count vectors (compositions of ``n_draws`` into ``n_labels`` parts)."""
    if n_draws < 0:
        raise ValueError("n_draws must be >= 0")
    if n_labels < 1:
        raise ValueError("n_labels must be >= 1")
    return math.comb(n_draws + n_labels - 1, n_labels - 1)


def composition_rank(counts: Sequence[int]) -> int:
    """Lexicographic rank of a count vector among all with the same total.

    Vectors are ordered lexicographically on their entries; the rank is
    0-based.  rank((0,...,total)) == 0 only when the first entries sort
    lowest; concretely (0, n) ranks before (1, n-1).
    """
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    total = sum(counts)
    rank = 0
    remaining = total
    parts = len(counts)
    for i, c in enumerate(counts[:-1]):
        slots = parts - i - 1
        for v in range(c):
            rank += math.comb(remaining - v + slots - 1, slots - 1)
        remaining -= c
    return rank


@dataclass(frozen=True)
class SequenceStatistics:
    """Counts of an observed label sequence plus its structure index.

    ``structure_index`` identifies which of the possible count vectors this
    sequence realized (the lexicographic rank among all compositions of the
    draw total into one part per universe label).
    """

    n_trials: int
    counts: Mapping[Label, int]
    structure_index: int

    def __post_init__(self) -> None:
        counts = dict(self.counts)
        object.__setattr__(self, "counts", counts)
        if any(c < 0 for c in counts.values()):
            raise ValueError("counts must be non-negative")
        if sum(counts.values()) != self.n_trials:
            raise ValueError("counts must sum to n_trials")

    @classmethod
    def from_sequence(
        cls, draws: Sequence[Label], universe: Universe
    ) -> "SequenceStatistics":
        counts = {label: 0 for label in universe}
        for d in draws:
            if d not in counts:
                raise ForeignElement(d)
            counts[d] += 1
        vector = [counts[label] for label in universe]
        return cls(len(draws), counts, composition_rank(vector))

    def relative_frequency(self, label: Label) -> Fraction:
        if label not in self.counts:
            raise ForeignElement(label)
        if self.n_trials == 0:
            raise ValueError("no trials recorded")
        return Fraction(self.counts[label], self.n_trials)
