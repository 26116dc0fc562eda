"""Semantic integration: recover a factual law from complexified events.

The forward direction (probabilisation) hides an integrated form behind a
stream of label draws.  This module walks the inverse direction: each draw
is *complexified* — enriched with a globally registered complexification
index and four edge signatures — and the stream of complexified events is
assembled, replica by replica, with the border-matching engine of the
puzzle module.  Once enough replicas complete, per-label counting on a
completed replica yields the law exactly, as rationals, with no appeal to
limits: the time ordering of the stream leaves no trace in the result.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping

from .painting import (
    BOUNDARY,
    Painting,
    PaintingSpec,
    check_edge_coherence,
    generate_painting,
    label_histogram,
)
from .phenomenon import (
    DivergenceReport,
    FrequencyTable,
    RandomPhenomenon,
    compare_law,
    run_frequency_experiment,
)
from .prob import Measure, Universe
from .puzzle import Board, BorderAssembler, Piece
from .seeding import derive_seed
from .serialize import fraction_to_str, sha256_of_doc


class BudgetExhausted(RuntimeError):
    """max_events was consumed before enough replicas completed."""


class InconsistentReplicas(RuntimeError):
    """Completed replicas disagree on counts — the stream is corrupt."""


class AmbiguityExhausted(RuntimeError):
    """Signature clashes exceeded the ambiguity budget of this run."""


@dataclass(frozen=True)
class ComplexifiedEvent:
    """A label event enriched until puzzle assembly becomes possible.

    ``label_r`` is the basin label the realization reached;
    ``complexification_r_prime`` is the globally registered index that keeps
    same-label events apart; ``edge_sigs`` carry the co-bordity structure.
    ``extra_values`` may record further observed aspect values; it is inert
    here.
    """

    label_r: int
    complexification_r_prime: int
    edge_sigs: tuple[str, str, str, str]
    extra_values: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        sigs = tuple(self.edge_sigs)
        if len(sigs) != 4:
            raise ValueError("edge_sigs must have exactly four entries (N, E, S, W)")
        object.__setattr__(self, "edge_sigs", sigs)
        object.__setattr__(
            self, "extra_values", tuple(tuple(pair) for pair in self.extra_values)
        )
        if self.label_r < 1 or self.complexification_r_prime < 1:
            raise ValueError("labels and complexification indices start at 1")


@dataclass(frozen=True)
class FormCell:
    coords: tuple[int, int]
    label_r: int
    r_prime: int
    edge_sigs: tuple[str, str, str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        object.__setattr__(self, "edge_sigs", tuple(self.edge_sigs))


@dataclass(frozen=True)
class HiddenForm:
    """The integrated form the integrator never sees directly.

    A painting-shaped grid whose cells carry (label, complexification index,
    edge signatures).  Within the cloud of any one label, every
    complexification index is distinct; the index space ``s_prime`` must be
    at least ten times the largest label count, which operationalizes
    "complexification indices are drawn from a vastly larger space".
    """

    width: int
    height: int
    s_prime: int
    cells: tuple[FormCell, ...]

    def __post_init__(self) -> None:
        cells = tuple(
            sorted(self.cells, key=lambda c: (c.coords[1], c.coords[0]))
        )
        object.__setattr__(self, "cells", cells)
        expected = [
            (x, y)
            for y in range(1, self.height + 1)
            for x in range(1, self.width + 1)
        ]
        if [c.coords for c in cells] != expected:
            raise ValueError("cells must cover each grid position exactly once")
        labels = sorted({c.label_r for c in cells})
        if labels != list(range(1, labels[-1] + 1)):
            raise ValueError("labels must be exactly 1..s with every value present")
        counts = self.label_counts
        if self.s_prime < 10 * max(counts.values()):
            raise ValueError(
                "s_prime must be at least 10 x the largest label count"
            )
        per_label: dict[int, set[int]] = {}
        for c in cells:
            if not 1 <= c.r_prime <= self.s_prime:
                raise ValueError(f"r_prime {c.r_prime} outside 1..{self.s_prime}")
            seen = per_label.setdefault(c.label_r, set())
            if c.r_prime in seen:
                raise ValueError(
                    f"complexification index {c.r_prime} repeats within"
                    f" label {c.label_r}'s cloud"
                )
            seen.add(c.r_prime)
        check_edge_coherence(
            self.width, self.height, lambda x, y: self.cell_at(x, y).edge_sigs
        )

    def cell_at(self, x: int, y: int) -> FormCell:
        return self.cells[(y - 1) * self.width + (x - 1)]

    @property
    def label_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for c in self.cells:
            counts[c.label_r] = counts.get(c.label_r, 0) + 1
        return counts

    def normalized_histogram(self) -> dict[int, Fraction]:
        """The exact law a correct integration must recover."""
        total = self.width * self.height
        return {r: Fraction(n, total) for r, n in sorted(self.label_counts.items())}

    def event_at(self, x: int, y: int) -> ComplexifiedEvent:
        cell = self.cell_at(x, y)
        return ComplexifiedEvent(cell.label_r, cell.r_prime, cell.edge_sigs)

    def to_doc(self) -> dict[str, Any]:
        return {
            "width": self.width,
            "height": self.height,
            "s_prime": self.s_prime,
            "cells": [
                {
                    "x": c.coords[0],
                    "y": c.coords[1],
                    "label": c.label_r,
                    "rp": c.r_prime,
                    "edges": {
                        "n": c.edge_sigs[0],
                        "e": c.edge_sigs[1],
                        "s": c.edge_sigs[2],
                        "w": c.edge_sigs[3],
                    },
                }
                for c in self.cells
            ],
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "HiddenForm":
        cells = tuple(
            FormCell(
                (int(e["x"]), int(e["y"])),
                int(e["label"]),
                int(e["rp"]),
                (
                    e["edges"]["n"],
                    e["edges"]["e"],
                    e["edges"]["s"],
                    e["edges"]["w"],
                ),
            )
            for e in doc["cells"]
        )
        return cls(int(doc["width"]), int(doc["height"]), int(doc["s_prime"]), cells)


def form_digest(form: HiddenForm) -> str:
    return sha256_of_doc(form.to_doc())[:12]


def hidden_form_from_painting(
    painting: Painting, s_prime: int | None = None, seed: int = 0
) -> HiddenForm:
    """Assign complexification indices to a painting's tiles.

    Indices are sampled without replacement within each label cloud from
    1..s_prime, so the within-cloud uniqueness invariant holds by
    construction.  ``s_prime`` defaults to the guardrail minimum, ten times
    the largest label count.
    """
    histogram = label_histogram(painting)
    minimum = 10 * max(histogram.values())
    if s_prime is None:
        s_prime = minimum
    if s_prime < minimum:
        raise ValueError(f"s_prime must be at least {minimum}")
    rng = random.Random(derive_seed(seed, "complexification"))
    index_pool = {
        j: rng.sample(range(1, s_prime + 1), k=histogram[j]) for j in histogram
    }
    used = {j: iter(pool) for j, pool in index_pool.items()}
    cells = tuple(
        FormCell(t.coords, t.approx_colour, next(used[t.approx_colour]), t.edge_sigs)
        for t in painting.tiles
    )
    return HiddenForm(painting.width, painting.height, s_prime, cells)


def generate_hidden_form(
    spec: PaintingSpec, s_prime: int | None = None
) -> HiddenForm:
    painting = generate_painting(spec)
    return hidden_form_from_painting(
        painting, s_prime=s_prime, seed=derive_seed(spec.seed, "form")
    )


# --- the phenomenon side ----------------------------------------------------


def complexified_phenomenon(form: HiddenForm, seed: int = 0) -> Iterator[ComplexifiedEvent]:
    """Endless stream: pick a uniformly random cell, emit its event, coords stripped."""
    rng = random.Random(seed)
    cells = form.cells
    while True:
        cell = cells[rng.randrange(len(cells))]
        yield ComplexifiedEvent(cell.label_r, cell.r_prime, cell.edge_sigs)


def label_projection(form: HiddenForm, seed: int = 0) -> RandomPhenomenon:
    """The bare-label shadow of the complexified stream, as a phenomenon."""
    counts = form.label_counts
    universe = Universe(tuple(sorted(counts)))
    return RandomPhenomenon(
        procedure_id="uniform-cell-draw",
        universe=universe,
        weights=tuple(counts[r] for r in universe.elements),
        seed=seed,
        provenance=f"hidden_form:{form_digest(form)}",
    )


# --- the integration side ---------------------------------------------------


@dataclass(frozen=True)
class IntegrationConfig:
    max_events: int = 1_000_000
    confirmation_replicas: int = 3
    ambiguity_budget: int = 0

    def __post_init__(self) -> None:
        if self.confirmation_replicas < 1:
            raise ValueError("need at least one confirmation replica")
        if self.max_events < 1:
            raise ValueError("max_events must be positive")
        if self.ambiguity_budget < 0:
            raise ValueError("ambiguity_budget must be >= 0")


@dataclass
class IntegrationState:
    """Mutable working state of one integration run.

    Wraps the puzzle module's border assembler: nascent replicas are its
    open patches, completed replicas its closed boards.  Feeding an event
    attaches it to the oldest replica that wants one of its signatures,
    opens a fresh replica otherwise, and lets bridging events merge
    replicas.  Events whose signatures clash (possible only for streams
    that violate unique matching) consume the ambiguity budget.
    """

    config: IntegrationConfig = field(default_factory=IntegrationConfig)
    events_consumed: int = 0
    ambiguity_spent: int = 0

    def __post_init__(self) -> None:
        self._assembler = BorderAssembler(strict=False)

    def feed(self, event: ComplexifiedEvent) -> None:
        self.events_consumed += 1
        piece = Piece(event, event.edge_sigs)
        assembler = self._assembler
        for patch_id, pos, _ in assembler.candidate_slots(piece):
            if assembler.place_at(piece, patch_id, pos, self.events_consumed):
                return
            self.ambiguity_spent += 1
            if self.ambiguity_spent > self.config.ambiguity_budget:
                raise AmbiguityExhausted(
                    f"{self.ambiguity_spent} signature clashes exceed the"
                    f" budget of {self.config.ambiguity_budget}"
                )
        assembler.place_new_patch(piece, self.events_consumed)

    @property
    def completed_count(self) -> int:
        return len(self._assembler.completed)

    @property
    def nascent_count(self) -> int:
        return len(self._assembler.patches)

    def completed_boards(self) -> list[tuple[Board, int]]:
        return self._assembler.completed_boards()

    @property
    def completion_log(self) -> list[tuple[int, int]]:
        return [
            (index, draw_index)
            for index, (_, draw_index) in enumerate(self._assembler.completed)
        ]


@dataclass(frozen=True)
class IntegrationResult:
    """Counts and the recovered law, read off completed replicas.

    ``n_phi_total`` is the tile count of a completed replica;
    ``per_pair_counts`` counts each realized (label, complexification
    index) pair; ``per_label_complexified`` counts complexified events per
    label; ``per_label`` counts bare labels after the complexification
    index is dropped; ``total_labels`` is their grand total.  The law is
    ``per_label / total_labels`` as exact rationals.
    """

    n_phi_total: int
    per_pair_counts: Mapping[tuple[int, int], int]
    per_label_complexified: Mapping[int, int]
    per_label: Mapping[int, int]
    total_labels: int
    law: Measure
    replicas_used_for_confirmation: int
    events_consumed: int
    completion_log: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_pair_counts", dict(self.per_pair_counts))
        object.__setattr__(
            self, "per_label_complexified", dict(self.per_label_complexified)
        )
        object.__setattr__(self, "per_label", dict(self.per_label))
        if sum(self.per_label.values()) != self.total_labels:
            raise ValueError("per-label counts must sum to total_labels")
        if self.total_labels != self.n_phi_total:
            raise ValueError(
                "every cell carries exactly one label, so totals must agree"
            )

    def to_doc(self) -> dict[str, Any]:
        return {
            "n_phi_total": self.n_phi_total,
            "per_label": {str(r): n for r, n in sorted(self.per_label.items())},
            "per_label_complexified": {
                str(r): n for r, n in sorted(self.per_label_complexified.items())
            },
            "pair_count": len(self.per_pair_counts),
            "total_labels": self.total_labels,
            "law": {
                str(r): fraction_to_str(p)
                for r, p in sorted(self.law.atom_probs.items())
            },
            "law_decimal": {
                str(r): float(p) for r, p in sorted(self.law.atom_probs.items())
            },
            "replicas_used_for_confirmation": self.replicas_used_for_confirmation,
            "events_consumed": self.events_consumed,
            "completion_log": [list(entry) for entry in self.completion_log],
        }


def _board_counts(board: Board) -> tuple[int, dict[tuple[int, int], int], dict[int, int]]:
    pair_counts: dict[tuple[int, int], int] = {}
    label_counts: dict[int, int] = {}
    for piece in board.cells.values():
        event: ComplexifiedEvent = piece.payload
        pair = (event.label_r, event.complexification_r_prime)
        pair_counts[pair] = pair_counts.get(pair, 0) + 1
        label_counts[event.label_r] = label_counts.get(event.label_r, 0) + 1
    return len(board.cells), pair_counts, label_counts


def integrate(
    stream: Iterable[ComplexifiedEvent],
    config: IntegrationConfig | None = None,
) -> IntegrationResult:
    """Assemble the stream until enough replicas complete; count out the law.

    Consumes events until ``config.confirmation_replicas`` replicas are
    complete (raising :class:`BudgetExhausted` if ``max_events`` arrives
    first).  The first completed replica supplies the counts; the remaining
    confirmation replicas must agree exactly, else
    :class:`InconsistentReplicas`.  The result is exact: no frequencies,
    no limits, just counting on the reconstructed form.
    """
    if config is None:
        config = IntegrationConfig()
    state = IntegrationState(config)
    needed = config.confirmation_replicas
    for event in stream:
        if state.events_consumed >= config.max_events:
            raise BudgetExhausted(
                f"{config.max_events} events consumed,"
                f" {state.completed_count} of {needed} replicas complete"
            )
        state.feed(event)
        if state.completed_count >= needed:
            break
    if state.completed_count < needed:
        raise BudgetExhausted(
            f"stream ended with {state.completed_count} of {needed}"
            " replicas complete"
        )
    finished = state.completed_boards()[:needed]
    reference, _ = finished[0]
    n_total, pair_counts, label_counts = _board_counts(reference)
    for board, _ in finished[1:]:
        other = _board_counts(board)
        if other != (n_total, pair_counts, label_counts):
            raise InconsistentReplicas(
                "confirmation replicas disagree on counts"
            )
    total_labels = sum(label_counts.values())
    law = Measure(
        {r: Fraction(n, total_labels) for r, n in sorted(label_counts.items())}
    )
    return IntegrationResult(
        n_phi_total=n_total,
        per_pair_counts=pair_counts,
        per_label_complexified=dict(sorted(label_counts.items())),
        per_label=dict(sorted(label_counts.items())),
        total_labels=total_labels,
        law=law,
        replicas_used_for_confirmation=needed,
        events_consumed=state.events_consumed,
        completion_log=tuple(state.completion_log[:needed]),
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Integrated law vs an independent frequency run on the label shadow."""

    law: Measure
    frequency_table: FrequencyTable
    divergence: DivergenceReport
    events_consumed: int

    @property
    def sup_distance(self) -> Fraction:
        return self.divergence.sup_distance

    def to_doc(self) -> dict[str, Any]:
        return {
            "law": {
                str(r): fraction_to_str(p)
                for r, p in sorted(self.law.atom_probs.items())
            },
            "frequencies": {
                str(r): self.frequency_table.counts[r]
                for r in sorted(self.frequency_table.counts)
            },
            "n_draws": self.frequency_table.n_draws,
            "events_consumed": self.events_consumed,
            "divergence": self.divergence.to_doc(),
        }


def end_to_end_check(
    form: HiddenForm,
    n_freq: int,
    seed: int = 0,
    config: IntegrationConfig | None = None,
) -> ComparisonReport:
    """Integrate the law, then test it against an independent frequency run.

    The two runs use seeds derived from ``seed`` with distinct tags, so the
    frequency experiment shares no randomness with the integration stream.
    """
    result = integrate(
        complexified_phenomenon(form, derive_seed(seed, "integration")), config
    )
    projection = label_projection(form, derive_seed(seed, "frequencies"))
    table = run_frequency_experiment(projection, n_freq)
    divergence = compare_law(table, result.law)
    return ComparisonReport(result.law, table, divergence, result.events_consumed)
