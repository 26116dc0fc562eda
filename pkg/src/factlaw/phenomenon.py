"""Random phenomena as seeded samplers, and the draw-with-replacement game.

Probabilisation turns an integrated painting into a random phenomenon: draw
a tile uniformly at random, put it back, and emit only its approximate
colour label — coordinates and colour-form stay silent.  Long draw runs
produce frequency tables whose relative frequencies approach the exact
per-label ratios of the painting; those ratios, packaged with an event
algebra, form the painting's factual probability space.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Iterator, Mapping

from .painting import Painting, label_histogram, painting_digest
from .prob import (
    EventAlgebra,
    Measure,
    Universe,
    generate_algebra,
    validate_measure,
)
from .serialize import fraction_to_str


class UniverseMismatch(Exception):
    """A frequency table and a law disagree about the label set."""


@dataclass(frozen=True)
class RandomPhenomenon:
    """A reproducible sampling procedure paired with its outcome universe.

    The sampler draws universe elements with replacement according to the
    integer ``weights`` (one per universe element, in universe order), via a
    deterministic stream derived from ``seed``.  Instances are plain frozen
    values, safe to pickle and to fan out across worker processes.
    """

    procedure_id: str
    universe: Universe
    weights: tuple[int, ...]
    seed: int = 0
    provenance: str = "none"

    def __post_init__(self) -> None:
        weights = tuple(int(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != len(self.universe):
            raise ValueError("need exactly one weight per universe element")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be non-negative")
        if sum(weights) == 0:
            raise ValueError("total weight must be positive")

    def _cumulative(self) -> tuple[list[int], int]:
        cum: list[int] = []
        total = 0
        for w in self.weights:
            total += w
            cum.append(total)
        return cum, total

    def stream(self, seed: int | None = None) -> Iterator:
        """Endless label stream; an explicit ``seed`` overrides the stored one."""
        rng = random.Random(self.seed if seed is None else seed)
        cum, total = self._cumulative()
        labels = self.universe.elements
        while True:
            yield labels[bisect_right(cum, rng.random() * total)]

    def sample(self, n: int, seed: int | None = None) -> list:
        """The first ``n`` draws of the stream, as a list."""
        if n < 0:
            raise ValueError("n must be >= 0")
        rng = random.Random(self.seed if seed is None else seed)
        cum, total = self._cumulative()
        labels = self.universe.elements
        rnd = rng.random
        return [labels[bisect_right(cum, rnd() * total)] for _ in range(n)]

    def with_seed(self, seed: int) -> "RandomPhenomenon":
        return replace(self, seed=seed)

    def underlying_law(self) -> Measure:
        """The exact distribution the sampler realizes (not an estimate)."""
        total = sum(self.weights)
        return Measure(
            {
                label: Fraction(w, total)
                for label, w in zip(self.universe.elements, self.weights)
            }
        )


@dataclass(frozen=True)
class FrequencyTable:
    """Counts from a finite draw run; optionally the per-draw history."""

    n_draws: int
    counts: Mapping[Any, int]
    history: tuple | None = None

    def __post_init__(self) -> None:
        counts = dict(self.counts)
        object.__setattr__(self, "counts", counts)
        if any(c < 0 for c in counts.values()):
            raise ValueError("counts must be non-negative")
        if sum(counts.values()) != self.n_draws:
            raise ValueError("counts must sum to n_draws")
        if self.history is not None:
            history = tuple(self.history)
            object.__setattr__(self, "history", history)
            if len(history) != self.n_draws:
                raise ValueError("history length must equal n_draws")

    def relative_frequency(self, label) -> Fraction:
        if label not in self.counts:
            raise UniverseMismatch(f"label {label!r} not tracked by this table")
        if self.n_draws == 0:
            return Fraction(0)
        return Fraction(self.counts[label], self.n_draws)

    def merged(self, other: "FrequencyTable") -> "FrequencyTable":
        """Additive, order-independent combination; histories are dropped."""
        if set(self.counts) != set(other.counts):
            raise UniverseMismatch("tables track different label sets")
        combined = {
            label: self.counts[label] + other.counts[label] for label in self.counts
        }
        return FrequencyTable(self.n_draws + other.n_draws, combined)


def probabilise_painting(painting: Painting, seed: int = 0) -> RandomPhenomenon:
    """Turn a painting into the draw-with-replacement label phenomenon.

    The universe is the label set 1..q; each draw picks a uniformly random
    tile and emits only its approximate-colour label, which makes the label
    weights exactly the painting's per-label tile counts.
    """
    histogram = label_histogram(painting)
    universe = Universe(tuple(range(1, painting.palette_q + 1)))
    weights = tuple(histogram[j] for j in universe.elements)
    return RandomPhenomenon(
        procedure_id="uniform-tile-draw",
        universe=universe,
        weights=weights,
        seed=seed,
        provenance=f"painting:{painting_digest(painting)}",
    )


def run_frequency_experiment(
    phenomenon: RandomPhenomenon,
    n_draws: int,
    *,
    seed: int | None = None,
    keep_history: bool = False,
) -> FrequencyTable:
    """Run ``n_draws`` draws and tabulate counts for every universe label."""
    if n_draws < 0:
        raise ValueError("n_draws must be >= 0")
    draws = phenomenon.sample(n_draws, seed=seed)
    counts = {label: 0 for label in phenomenon.universe}
    for d in draws:
        counts[d] += 1
    return FrequencyTable(
        n_draws, counts, history=tuple(draws) if keep_history else None
    )


@dataclass(frozen=True)
class FactualSpace:
    """A concrete probability space read off an integrated object by counting."""

    universe: Universe
    algebra: EventAlgebra
    law: Measure

    def __post_init__(self) -> None:
        report = validate_measure(self.law, self.algebra)
        if not report.passed:
            failed = [c.name for c in report.checks if not c.passed]
            raise ValueError(f"law fails measure validation: {failed}")


def factual_space_from_painting(
    painting: Painting,
    algebra_generators=None,
) -> FactualSpace:
    """The painting's factual probability space: law = tile counts / total.

    The algebra is generated from ``algebra_generators`` (default: all
    singleton label events) by union/intersection closure.
    """
    histogram = label_histogram(painting)
    total = painting.width * painting.height
    universe = Universe(tuple(range(1, painting.palette_q + 1)))
    if algebra_generators is None:
        algebra_generators = [{j} for j in universe.elements]
    algebra = generate_algebra(universe, algebra_generators)
    law = Measure({j: Fraction(histogram[j], total) for j in universe.elements})
    return FactualSpace(universe, algebra, law)


@dataclass(frozen=True)
class DivergenceReport:
    """Distances between an empirical frequency table and an exact law."""

    sup_distance: Fraction
    total_variation: Fraction
    per_label: Mapping[Any, Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_label", dict(self.per_label))

    def to_doc(self) -> dict[str, Any]:
        return {
            "sup_distance": fraction_to_str(self.sup_distance),
            "sup_distance_decimal": float(self.sup_distance),
            "total_variation": fraction_to_str(self.total_variation),
            "total_variation_decimal": float(self.total_variation),
            "per_label": {
                str(label): fraction_to_str(d) for label, d in self.per_label.items()
            },
        }


def compare_law(table: FrequencyTable, law: Measure) -> DivergenceReport:
    """Per-label |frequency - probability| gaps, their sup, and total variation.

    No thresholding happens here; callers decide what distance is close
    enough.  Raises :class:`UniverseMismatch` when the label sets differ.
    """
    if set(table.counts) != set(law.atom_probs):
        raise UniverseMismatch(
            f"table labels {sorted(table.counts, key=repr)} vs law labels"
            f" {sorted(law.atom_probs, key=repr)}"
        )
    per_label = {
        label: abs(table.relative_frequency(label) - law[label])
        for label in table.counts
    }
    sup = max(per_label.values())
    tv = sum(per_label.values(), Fraction(0)) / 2
    return DivergenceReport(sup, tv, per_label)
