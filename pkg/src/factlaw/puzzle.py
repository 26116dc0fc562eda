"""The three reconstruction games: by location, by borders, multi-replica.

Fragments are drawn one at a time from a shuffled pool and placed on boards.
In the location game every fragment carries its coordinates, so placement is
certain.  In the border game coordinates are filtered out and only edge
signatures guide assembly: a drawn fragment attaches where an open slot
demands its signature, else it opens a new nascent board; bridging fragments
trigger rigid-translation merges of partial boards.  With several replicas
of the painting mixed into one pool, boards grow intermingled and complete
only near the end of the stream.

The border-matching engine (:class:`BorderAssembler`) is shared with the
semantic-integration module, which feeds it complexified events instead of
tile descriptions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from .painting import (
    ASPECT_EDGES,
    BOUNDARY,
    Painting,
    describe_tile,
)
from .seeding import derive_seed
from .views import Description

N, E, S, W = 0, 1, 2, 3
_DELTAS = ((0, 1), (1, 0), (0, -1), (-1, 0))
_OPPOSITE = (S, W, N, E)


class DuplicateCoordinates(Exception):
    """Two located fragments claim the same cell — corrupted pool."""


class UnsolvablePool(Exception):
    """Backtracking exhausted its trial budget without a full assembly."""


class InconsistentSignatures(Exception):
    """The pool cannot come from one painting: signatures contradict."""


@dataclass(frozen=True)
class Piece:
    """A placeable fragment: an opaque payload plus optional (N,E,S,W) edges."""

    payload: Any
    edges: tuple[str, str, str, str] | None = None


@dataclass(frozen=True)
class Board:
    """A finished or frozen arrangement of pieces on integer grid cells."""

    cells: dict[tuple[int, int], Piece]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", dict(self.cells))
        if not self.cells:
            raise ValueError("a board holds at least one piece")

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        xs = [x for x, _ in self.cells]
        ys = [y for _, y in self.cells]
        return min(xs), max(xs), min(ys), max(ys)

    @property
    def width(self) -> int:
        x0, x1, _, _ = self.bbox
        return x1 - x0 + 1

    @property
    def height(self) -> int:
        _, _, y0, y1 = self.bbox
        return y1 - y0 + 1

    def is_full_rectangle(self) -> bool:
        return len(self.cells) == self.width * self.height

    def canonical(self) -> "Board":
        """Translate so the minimum occupied cell sits at (1, 1)."""
        x0, _, y0, _ = self.bbox
        if (x0, y0) == (1, 1):
            return self
        return Board({(x - x0 + 1, y - y0 + 1): p for (x, y), p in self.cells.items()})

    def validate_edges(self) -> None:
        """Full post-hoc scan: every adjacent pair shares equal signatures."""
        for (x, y), piece in self.cells.items():
            if piece.edges is None:
                continue
            for d in (N, E):
                dx, dy = _DELTAS[d]
                neighbour = self.cells.get((x + dx, y + dy))
                if neighbour is None or neighbour.edges is None:
                    continue
                mine = piece.edges[d]
                theirs = neighbour.edges[_OPPOSITE[d]]
                if mine != theirs or mine == BOUNDARY:
                    raise InconsistentSignatures(
                        f"seam mismatch at {(x, y)} side {d}: {mine!r} vs {theirs!r}"
                    )

    def payload_grid(self) -> list[list[Any]]:
        """Payloads row by row from the top, for easy eyeballing."""
        x0, x1, y0, y1 = self.bbox
        return [
            [self.cells[(x, y)].payload if (x, y) in self.cells else None
             for x in range(x0, x1 + 1)]
            for y in range(y1, y0 - 1, -1)
        ]


@dataclass(frozen=True)
class AssemblyReport:
    """What an assembly run did: counts, interleaving, finished boards.

    ``completion_order`` lists ``(board_index, draw_index)`` pairs in the
    order boards closed; ``board_index`` indexes into ``boards`` and
    ``draw_index`` is 1-based into the draw stream.
    """

    placements: int
    trials: int
    completed_replicas: int
    completion_order: tuple[tuple[int, int], ...]
    boards: tuple[Board, ...]

    def __post_init__(self) -> None:
        if self.placements > self.trials:
            raise ValueError("placements cannot exceed trials")
        if self.completed_replicas != len(self.completion_order):
            raise ValueError("completion log disagrees with completed count")

    def to_doc(self) -> dict[str, Any]:
        return {
            "placements": self.placements,
            "trials": self.trials,
            "completed_replicas": self.completed_replicas,
            "completion_order": [list(entry) for entry in self.completion_order],
            "board_sizes": [
                {"width": b.width, "height": b.height, "pieces": len(b.cells)}
                for b in self.boards
            ],
        }


@dataclass
class FragmentPool:
    """The ballot box for the no-replacement games.

    Fragments are shuffled once by ``seed``; :meth:`draw` hands them out
    without replacement.  For pools built from a painting the fragment count
    starts at ``replicas * width * height``.
    """

    fragments: list[Description]
    replica_count: int = 1
    mode: str = "border"  # "location" | "border"
    seed: int = 0
    _cursor: int = field(default=0, repr=False)

    def __post_init__(self) -> None:
        if self.replica_count < 1:
            raise ValueError("replica_count must be at least 1")
        if self.mode not in ("location", "border"):
            raise ValueError(f"unknown pool mode {self.mode!r}")
        order = list(self.fragments)
        random.Random(derive_seed(self.seed, "draw-order")).shuffle(order)
        self.fragments = order

    @classmethod
    def from_painting(
        cls, painting: Painting, mode: str, replicas: int = 1, seed: int = 0
    ) -> "FragmentPool":
        selector = {"location": "location", "border": "colour_form"}[mode]
        fragments = [
            describe_tile(painting, tile.coords, selector)
            for _ in range(replicas)
            for tile in painting.tiles
        ]
        return cls(fragments, replica_count=replicas, mode=mode, seed=seed)

    def __len__(self) -> int:
        return len(self.fragments) - self._cursor

    def draw(self) -> Description:
        if self._cursor >= len(self.fragments):
            raise IndexError("pool is empty")
        fragment = self.fragments[self._cursor]
        self._cursor += 1
        return fragment

    def draw_all(self) -> list[Description]:
        remaining = self.fragments[self._cursor:]
        self._cursor = len(self.fragments)
        return remaining


def _edges_of(fragment: Description) -> tuple[str, str, str, str]:
    try:
        return tuple(fragment.points[a] for a in ASPECT_EDGES)  # type: ignore[return-value]
    except KeyError:
        raise ValueError("fragment carries no edge signatures") from None


class _Patch:
    """One nascent board during assembly (mutable working state)."""

    __slots__ = ("patch_id", "cells", "req_count", "bbox")

    def __init__(self, patch_id: int):
        self.patch_id = patch_id
        self.cells: dict[tuple[int, int], Piece] = {}
        self.req_count = 0
        self.bbox: tuple[int, int, int, int] | None = None

    def grow_bbox(self, pos: tuple[int, int]) -> None:
        x, y = pos
        if self.bbox is None:
            self.bbox = (x, x, y, y)
        else:
            x0, x1, y0, y1 = self.bbox
            self.bbox = (min(x0, x), max(x1, x), min(y0, y), max(y1, y))

    def is_complete(self) -> bool:
        if self.req_count != 0 or self.bbox is None:
            return False
        x0, x1, y0, y1 = self.bbox
        return len(self.cells) == (x1 - x0 + 1) * (y1 - y0 + 1)

    def clone(self) -> "_Patch":
        other = _Patch(self.patch_id)
        other.cells = dict(self.cells)
        other.req_count = self.req_count
        other.bbox = self.bbox
        return other


class BorderAssembler:
    """Greedy border-matching assembly with merge-on-bridge.

    Maintains an index from (required side, signature) to open slots.  A new
    piece attaches to the oldest matching slot, else opens a new patch.
    After a placement, any open requirement of *another* patch that the
    piece could satisfy triggers a rigid-translation merge of that patch
    (overlapping merges are skipped: overlapping cells are fungible
    duplicates belonging to different replicas).

    With ``strict=True`` a signature contradiction raises
    :class:`InconsistentSignatures`; with ``strict=False`` the offending
    placement or merge is refused instead, which the backtracking solver
    uses to explore alternatives.
    """

    def __init__(self, strict: bool = True):
        self.strict = strict
        self.patches: dict[int, _Patch] = {}
        self.req_index: dict[tuple[int, str], set[tuple[int, tuple[int, int]]]] = {}
        self.completed: list[tuple[_Patch, int]] = []
        self.placements = 0
        self.next_patch_id = 0

    # -- bookkeeping ---------------------------------------------------------

    def _add_requirements(self, patch: _Patch, pos: tuple[int, int], piece: Piece) -> None:
        assert piece.edges is not None
        x, y = pos
        for d in (N, E, S, W):
            sig = piece.edges[d]
            if sig == BOUNDARY:
                continue
            dx, dy = _DELTAS[d]
            target = (x + dx, y + dy)
            if target in patch.cells:
                continue
            self.req_index.setdefault((_OPPOSITE[d], sig), set()).add(
                (patch.patch_id, target)
            )
            patch.req_count += 1

    def _remove_requirements_at(self, patch: _Patch, pos: tuple[int, int]) -> None:
        x, y = pos
        for d in (N, E, S, W):
            dx, dy = _DELTAS[d]
            neighbour = patch.cells.get((x + dx, y + dy))
            if neighbour is None or neighbour.edges is None:
                continue
            sig = neighbour.edges[_OPPOSITE[d]]
            if sig == BOUNDARY:
                continue
            key = (d, sig)
            slots = self.req_index.get(key)
            if slots and (patch.patch_id, pos) in slots:
                slots.discard((patch.patch_id, pos))
                if not slots:
                    del self.req_index[key]
                patch.req_count -= 1

    def _drop_patch_requirements(self, patch: _Patch) -> None:
        for pos, piece in patch.cells.items():
            assert piece.edges is not None
            x, y = pos
            for d in (N, E, S, W):
                sig = piece.edges[d]
                if sig == BOUNDARY:
                    continue
                dx, dy = _DELTAS[d]
                target = (x + dx, y + dy)
                if target in patch.cells:
                    continue
                key = (_OPPOSITE[d], sig)
                slots = self.req_index.get(key)
                if slots:
                    slots.discard((patch.patch_id, target))
                    if not slots:
                        del self.req_index[key]
        patch.req_count = 0

    def _fits(self, patch: _Patch, pos: tuple[int, int], piece: Piece) -> bool:
        assert piece.edges is not None
        x, y = pos
        for d in (N, E, S, W):
            dx, dy = _DELTAS[d]
            neighbour = patch.cells.get((x + dx, y + dy))
            if neighbour is None:
                continue
            mine = piece.edges[d]
            theirs = neighbour.edges[_OPPOSITE[d]]  # type: ignore[index]
            if mine != theirs or mine == BOUNDARY:
                return False
        return True

    # -- placement and merging ----------------------------------------------

    def _raw_place(self, patch: _Patch, pos: tuple[int, int], piece: Piece) -> bool:
        """Place with full-fit validation; no completion check, no bridging."""
        if pos in patch.cells:
            return False
        if not self._fits(patch, pos, piece):
            if self.strict:
                raise InconsistentSignatures(
                    f"piece does not fit its matched slot at {pos}"
                )
            return False
        patch.cells[pos] = piece
        patch.grow_bbox(pos)
        self._remove_requirements_at(patch, pos)
        self._add_requirements(patch, pos, piece)
        return True

    def _try_merge(
        self, host: _Patch, guest: _Patch, offset: tuple[int, int]
    ) -> list[tuple[int, int]] | None:
        """Move ``guest`` into ``host`` shifted by ``offset``; None if refused.

        Refused when any shifted cell overlaps the host (fungible duplicate
        content from another replica) or, in non-strict mode, when a seam
        between the two patches would mismatch.
        """
        ox, oy = offset
        shifted = {
            (x + ox, y + oy): piece for (x, y), piece in guest.cells.items()
        }
        if any(pos in host.cells for pos in shifted):
            return None
        for (x, y), piece in shifted.items():
            assert piece.edges is not None
            for d in (N, E, S, W):
                dx, dy = _DELTAS[d]
                target = (x + dx, y + dy)
                if target in shifted:
                    continue  # internal seams of the guest are already valid
                neighbour = host.cells.get(target)
                if neighbour is None:
                    continue
                mine = piece.edges[d]
                theirs = neighbour.edges[_OPPOSITE[d]]  # type: ignore[index]
                if mine != theirs or mine == BOUNDARY:
                    if self.strict:
                        raise InconsistentSignatures(
                            f"merge seam mismatch at {target}: {mine!r} vs {theirs!r}"
                        )
                    return None
        self._drop_patch_requirements(guest)
        del self.patches[guest.patch_id]
        placed = []
        for pos in sorted(shifted):
            ok = self._raw_place(host, pos, shifted[pos])
            assert ok, "pre-validated merge cell failed to place"
            placed.append(pos)
        return placed

    def _bridge_from(self, patch: _Patch, seeds: list[tuple[int, int]]) -> None:
        """Cascade merges triggered by newly occupied cells of ``patch``."""
        queue = list(seeds)
        while queue:
            pos = queue.pop(0)
            piece = patch.cells[pos]
            assert piece.edges is not None
            x, y = pos
            for d in (N, E, S, W):
                sig = piece.edges[d]
                if sig == BOUNDARY:
                    continue
                dx, dy = _DELTAS[d]
                if (x + dx, y + dy) in patch.cells:
                    continue
                # Another patch with an open slot demanding edge[d] == sig
                # can be aligned so that this piece fills that slot.
                while True:
                    slots = self.req_index.get((d, sig), set())
                    foreign = sorted(
                        s for s in slots if s[0] != patch.patch_id
                    )
                    merged = False
                    for patch_id, slot_pos in foreign:
                        guest = self.patches[patch_id]
                        offset = (x - slot_pos[0], y - slot_pos[1])
                        placed = self._try_merge(patch, guest, offset)
                        if placed is not None:
                            queue.extend(placed)
                            merged = True
                            break
                    if not merged:
                        break

    def _check_completion(self, patch: _Patch, draw_index: int) -> None:
        if patch.is_complete():
            del self.patches[patch.patch_id]
            self.completed.append((patch, draw_index))

    # -- public API ----------------------------------------------------------

    def candidate_slots(self, piece: Piece) -> list[tuple[int, tuple[int, int], int]]:
        """Open slots this piece could fill: (patch_id, pos, side) sorted oldest-first."""
        assert piece.edges is not None
        found = set()
        for d in (N, E, S, W):
            sig = piece.edges[d]
            if sig == BOUNDARY:
                continue
            for patch_id, pos in self.req_index.get((d, sig), ()):
                found.add((patch_id, pos, d))
        return sorted(found)

    def place_at(self, piece: Piece, patch_id: int, pos: tuple[int, int],
                 draw_index: int) -> bool:
        patch = self.patches[patch_id]
        if not self._raw_place(patch, pos, piece):
            return False
        self.placements += 1
        self._bridge_from(patch, [pos])
        self._check_completion(patch, draw_index)
        return True

    def place_new_patch(self, piece: Piece, draw_index: int) -> None:
        patch = _Patch(self.next_patch_id)
        self.next_patch_id += 1
        self.patches[patch.patch_id] = patch
        ok = self._raw_place(patch, (0, 0), piece)
        assert ok, "placing on an empty patch cannot fail"
        self.placements += 1
        self._check_completion(patch, draw_index)

    def add(self, piece: Piece, draw_index: int) -> None:
        """Greedy step: attach to the oldest matching open slot, else seed anew."""
        candidates = self.candidate_slots(piece)
        if candidates:
            patch_id, pos, _ = candidates[0]
            if self.place_at(piece, patch_id, pos, draw_index):
                return
            if self.strict:  # place_at raises first in strict mode
                raise InconsistentSignatures("matched slot refused the piece")
        self.place_new_patch(piece, draw_index)

    def all_complete(self) -> bool:
        return not self.patches

    def completed_boards(self) -> list[tuple[Board, int]]:
        """Canonicalized finished boards with their completing draw index."""
        return [
            (Board(patch.cells).canonical(), draw_index)
            for patch, draw_index in self.completed
        ]

    def clone(self) -> "BorderAssembler":
        other = BorderAssembler(self.strict)
        other.patches = {pid: p.clone() for pid, p in self.patches.items()}
        other.req_index = {k: set(v) for k, v in self.req_index.items()}
        other.completed = list(self.completed)
        other.placements = self.placements
        other.next_patch_id = self.next_patch_id
        return other


# --- the games --------------------------------------------------------------


def solve_by_location(pool: FragmentPool) -> AssemblyReport:
    """Place located fragments with certainty: one slot per fragment.

    Every fragment lands directly on its coordinates, so placements equal
    trials and no search happens.  Two fragments claiming one cell mean the
    pool is corrupt (:class:`DuplicateCoordinates`).
    """
    if pool.replica_count != 1:
        raise ValueError("the location game is a single-replica game")
    cells: dict[tuple[int, int], Piece] = {}
    count = 0
    while len(pool):
        fragment = pool.draw()
        coords = fragment.grid_coords
        if coords is None:
            raise ValueError("fragment carries no coordinates")
        pos = (coords[0], coords[1])
        if pos in cells:
            raise DuplicateCoordinates(pos)
        cells[pos] = Piece(fragment, None)
        count += 1
    board = Board(cells).canonical()
    complete = board.is_full_rectangle()
    return AssemblyReport(
        placements=count,
        trials=count,
        completed_replicas=1 if complete else 0,
        completion_order=((0, count),) if complete else (),
        boards=(board,),
    )


def _signature_side_counts(fragments: Sequence[Description]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for fragment in fragments:
        for sig in _edges_of(fragment):
            if sig != BOUNDARY:
                counts[sig] = counts.get(sig, 0) + 1
    return counts


def solve_by_borders(
    pool: FragmentPool, *, trial_budget: int | None = None
) -> AssemblyReport:
    """Assemble fragments by edge-signature attraction alone.

    When every signature occurs on at most ``2 * replica_count`` fragment
    sides, signatures behave uniquely and a greedy pass suffices; otherwise
    the pool is ambiguous and a budget-bounded depth-first search over
    candidate slots runs instead.  Raises :class:`InconsistentSignatures`
    for pools no single painting can explain and :class:`UnsolvablePool`
    when the search budget runs out.
    """
    draws = pool.draw_all()
    if not draws:
        raise ValueError("empty pool")
    for fragment in draws:
        if fragment.grid_coords is not None:
            raise ValueError("border-game fragments must not carry coordinates")
    side_counts = _signature_side_counts(draws)
    unique = all(c <= 2 * pool.replica_count for c in side_counts.values())
    if unique:
        return _solve_greedy(draws)
    return _solve_backtracking(draws, trial_budget)


def _solve_greedy(draws: Sequence[Description]) -> AssemblyReport:
    assembler = BorderAssembler(strict=True)
    for i, fragment in enumerate(draws):
        assembler.add(Piece(fragment, _edges_of(fragment)), draw_index=i + 1)
    if not assembler.all_complete():
        raise InconsistentSignatures("pool exhausted with incomplete boards")
    return _report_from(assembler, trials=assembler.placements)


def _report_from(assembler: BorderAssembler, trials: int) -> AssemblyReport:
    finished = assembler.completed_boards()
    boards = tuple(board for board, _ in finished)
    order = tuple(
        (index, draw_index) for index, (_, draw_index) in enumerate(finished)
    )
    return AssemblyReport(
        placements=assembler.placements,
        trials=trials,
        completed_replicas=len(boards),
        completion_order=order,
        boards=boards,
    )


def _solve_backtracking(
    draws: Sequence[Description], trial_budget: int | None
) -> AssemblyReport:
    budget = trial_budget if trial_budget is not None else 100_000
    pieces = [Piece(f, _edges_of(f)) for f in draws]
    trials = 0

    def dfs(index: int, assembler: BorderAssembler) -> BorderAssembler | None:
        nonlocal trials
        if index == len(pieces):
            return assembler if assembler.all_complete() else None
        piece = pieces[index]
        for candidate in assembler.candidate_slots(piece):
            trials += 1
            if trials > budget:
                raise UnsolvablePool(f"trial budget {budget} exhausted")
            attempt = assembler.clone()
            patch_id, pos, _ = candidate
            if not attempt.place_at(piece, patch_id, pos, index + 1):
                continue
            solved = dfs(index + 1, attempt)
            if solved is not None:
                return solved
        trials += 1
        if trials > budget:
            raise UnsolvablePool(f"trial budget {budget} exhausted")
        attempt = assembler.clone()
        attempt.place_new_patch(piece, index + 1)
        return dfs(index + 1, attempt)

    solved = dfs(0, BorderAssembler(strict=False))
    if solved is None:
        raise UnsolvablePool("no consistent assembly found")
    return _report_from(solved, trials=trials)
