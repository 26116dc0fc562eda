"""Parcelled paintings: integrated tile grids that seed every game.

A painting is a width x height grid of square tiles.  Each tile carries an
opaque colour-form id, an approximate-colour label j in 1..q, and four edge
signatures (N, E, S, W).  Interior signatures match pairwise across shared
edges; the grid perimeter carries the literal boundary marker.  The painting
is the ground truth that the puzzle, probability and integration games
afterwards see only through restricted views.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from .seeding import derive_seed
from .serialize import sha256_of_doc
from .views import AspectView, Description, View, UnknownAspect

BOUNDARY = "B"

UNIQUE_EDGES = "unique-interior-edges"
AMBIGUOUS_EDGES = "ambiguous-allowed"

ASPECT_COLOUR_FORM = "colour_form"
ASPECT_APPROX_COLOUR = "approx_colour"
ASPECT_EDGES = ("edge_n", "edge_e", "edge_s", "edge_w")

GENERATOR_ID = "tile-extraction"


class InfeasibleSpec(ValueError):
    """The requested painting cannot exist (bad counts or degenerate grid)."""


class OutOfGrid(KeyError):
    """Coordinates fall outside the painting grid."""


def label_value(label: int) -> str:
    """Encode an approximate-colour label as an opaque aspect value id."""
    return f"j{label}"


def label_from_value(value: str) -> int:
    if not value.startswith("j"):
        raise ValueError(f"not an approximate-colour value id: {value!r}")
    return int(value[1:])


@dataclass(frozen=True)
class Tile:
    """One square of the painting."""

    coords: tuple[int, int]
    colour_form_id: str
    approx_colour: int
    edge_sigs: tuple[str, str, str, str]  # N, E, S, W

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        sigs = tuple(self.edge_sigs)
        if len(sigs) != 4:
            raise ValueError("edge_sigs must have exactly four entries (N, E, S, W)")
        object.__setattr__(self, "edge_sigs", sigs)
        if self.approx_colour < 1:
            raise ValueError("approx_colour labels start at 1")


@dataclass(frozen=True)
class PaintingSpec:
    """Recipe for generating a painting."""

    width: int
    height: int
    q: int
    label_counts: Mapping[int, int]
    uniqueness_mode: str = UNIQUE_EDGES
    seed: int = 0

    def __post_init__(self) -> None:
        counts = {int(k): int(v) for k, v in self.label_counts.items()}
        object.__setattr__(self, "label_counts", counts)
        cells = self.width * self.height
        if self.width < 1 or self.height < 1:
            raise InfeasibleSpec("grid extents must be positive")
        if not self.q < cells:
            raise InfeasibleSpec(
                f"need q < width*height, got q={self.q} on {cells} cells"
            )
        if self.q < 1:
            raise InfeasibleSpec("q must be at least 1")
        if sorted(counts) != list(range(1, self.q + 1)):
            raise InfeasibleSpec(
                f"label_counts keys must be exactly 1..{self.q}, got {sorted(counts)}"
            )
        if any(c < 1 for c in counts.values()):
            raise InfeasibleSpec("every label needs at least one tile")
        if sum(counts.values()) != cells:
            raise InfeasibleSpec(
                f"label counts sum to {sum(counts.values())}, grid has {cells} cells"
            )
        if self.uniqueness_mode not in (UNIQUE_EDGES, AMBIGUOUS_EDGES):
            raise InfeasibleSpec(f"unknown uniqueness_mode {self.uniqueness_mode!r}")

    def to_doc(self) -> dict[str, Any]:
        return {
            "width": self.width,
            "height": self.height,
            "q": self.q,
            "label_counts": {str(k): v for k, v in sorted(self.label_counts.items())},
            "uniqueness_mode": self.uniqueness_mode,
            "seed": self.seed,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "PaintingSpec":
        return cls(
            width=int(doc["width"]),
            height=int(doc["height"]),
            q=int(doc["q"]),
            label_counts={int(k): int(v) for k, v in doc["label_counts"].items()},
            uniqueness_mode=doc.get("uniqueness_mode", UNIQUE_EDGES),
            seed=int(doc.get("seed", 0)),
        )


def check_edge_coherence(
    width: int,
    height: int,
    edges_at: Callable[[int, int], tuple[str, str, str, str]],
) -> None:
    """Verify pairwise interior matches and boundary markers on a full grid.

    ``edges_at(x, y)`` must return the (N, E, S, W) signatures of the cell.
    Shared by paintings and hidden forms, which carry the same grid shape.
    Raises ``ValueError`` on the first violation.
    """
    for y in range(1, height + 1):
        for x in range(1, width + 1):
            n, e, s, w = edges_at(x, y)
            if (y == height) != (n == BOUNDARY):
                raise ValueError(f"bad north boundary marker at {(x, y)}")
            if (x == width) != (e == BOUNDARY):
                raise ValueError(f"bad east boundary marker at {(x, y)}")
            if (y == 1) != (s == BOUNDARY):
                raise ValueError(f"bad south boundary marker at {(x, y)}")
            if (x == 1) != (w == BOUNDARY):
                raise ValueError(f"bad west boundary marker at {(x, y)}")
            if x < width:
                east_w = edges_at(x + 1, y)[3]
                if e != east_w:
                    raise ValueError(
                        f"edge mismatch between {(x, y)} E={e!r} and"
                        f" {(x + 1, y)} W={east_w!r}"
                    )
            if y < height:
                north_s = edges_at(x, y + 1)[2]
                if n != north_s:
                    raise ValueError(
                        f"edge mismatch between {(x, y)} N={n!r} and"
                        f" {(x, y + 1)} S={north_s!r}"
                    )


@dataclass(frozen=True)
class Painting:
    """An integrated grid of tiles; immutable once constructed.

    ``tiles`` is stored row-major from the bottom-left origin (1, 1):
    index ``(y - 1) * width + (x - 1)``.
    """

    width: int
    height: int
    palette_q: int
    tiles: tuple[Tile, ...]

    def __post_init__(self) -> None:
        tiles = tuple(
            sorted(self.tiles, key=lambda t: (t.coords[1], t.coords[0]))
        )
        object.__setattr__(self, "tiles", tiles)
        cells = self.width * self.height
        if len(tiles) != cells:
            raise ValueError(f"expected {cells} tiles, got {len(tiles)}")
        expected = [
            (x, y)
            for y in range(1, self.height + 1)
            for x in range(1, self.width + 1)
        ]
        if [t.coords for t in tiles] != expected:
            raise ValueError("tiles do not cover each grid cell exactly once")
        if not self.palette_q < cells:
            raise ValueError("palette must be strictly smaller than the grid")
        labels = {t.approx_colour for t in tiles}
        if not labels <= set(range(1, self.palette_q + 1)):
            raise ValueError("tile labels leave the palette 1..q")
        if labels != set(range(1, self.palette_q + 1)):
            raise ValueError("every palette label must appear on some tile")
        forms = [t.colour_form_id for t in tiles]
        if len(set(forms)) != len(forms):
            raise ValueError("colour_form_ids must be distinct")
        check_edge_coherence(
            self.width, self.height, lambda x, y: self.tile_at((x, y)).edge_sigs
        )

    def tile_at(self, coords: tuple[int, int]) -> Tile:
        x, y = coords
        if not (1 <= x <= self.width and 1 <= y <= self.height):
            raise OutOfGrid(coords)
        return self.tiles[(y - 1) * self.width + (x - 1)]

    def __iter__(self):
        return iter(self.tiles)


def generate_painting(spec: PaintingSpec) -> Painting:
    """Deterministically generate a painting satisfying ``spec``.

    Label placement is uniform-random over cells subject to the exact
    multiplicities.  Interior edge signatures are synthesized so that in
    unique mode every signature id marks exactly one shared edge grid-wide,
    while ambiguous mode draws signatures from a deliberately small alphabet
    so repeats occur.
    """
    w, h, q = spec.width, spec.height, spec.q
    rng = random.Random(derive_seed(spec.seed, "painting"))

    cells = [(x, y) for y in range(1, h + 1) for x in range(1, w + 1)]
    labels = [j for j in range(1, q + 1) for _ in range(spec.label_counts[j])]
    rng.shuffle(labels)
    form_ids = [f"cf_{i:04d}" for i in range(len(cells))]
    rng.shuffle(form_ids)

    # Interior edges: horizontal seams first (E/W pairs), then vertical
    # seams (N/S pairs), in row-major order.
    seams: list[tuple[tuple[int, int], tuple[int, int]]] = []
    for y in range(1, h + 1):
        for x in range(1, w):
            seams.append(((x, y), (x + 1, y)))
    for y in range(1, h):
        for x in range(1, w + 1):
            seams.append(((x, y), (x, y + 1)))

    if spec.uniqueness_mode == UNIQUE_EDGES:
        ids = list(range(len(seams)))
        rng.shuffle(ids)
        sig_of = {seam: f"s{ids[i]:05d}" for i, seam in enumerate(seams)}
    else:
        alphabet = max(2, len(seams) // 3)
        sig_of = {seam: f"a{rng.randrange(alphabet):03d}" for seam in seams}

    def seam_sig(a: tuple[int, int], b: tuple[int, int]) -> str:
        return sig_of[(a, b) if (a, b) in sig_of else (b, a)]

    tiles = []
    for i, (x, y) in enumerate(cells):
        n = seam_sig((x, y), (x, y + 1)) if y < h else BOUNDARY
        e = seam_sig((x, y), (x + 1, y)) if x < w else BOUNDARY
        s = seam_sig((x, y - 1), (x, y)) if y > 1 else BOUNDARY
        west = seam_sig((x - 1, y), (x, y)) if x > 1 else BOUNDARY
        tiles.append(Tile((x, y), form_ids[i], labels[i], (n, e, s, west)))
    return Painting(w, h, q, tuple(tiles))


def label_histogram(painting: Painting) -> dict[int, int]:
    """Per-label tile counts; always sums to width x height."""
    counts = {j: 0 for j in range(1, painting.palette_q + 1)}
    for tile in painting.tiles:
        counts[tile.approx_colour] += 1
    return counts


def interior_signature_multiset(painting: Painting) -> dict[str, int]:
    """How many tile-sides carry each interior signature (2 each when unique)."""
    counts: dict[str, int] = {}
    for tile in painting.tiles:
        for sig in tile.edge_sigs:
            if sig != BOUNDARY:
                counts[sig] = counts.get(sig, 0) + 1
    return counts


# --- views and descriptions -------------------------------------------------


def source_description(painting: Painting, coords: tuple[int, int]) -> Description:
    """The fully qualified description of one tile: every aspect plus coords."""
    tile = painting.tile_at(coords)
    points = {
        ASPECT_COLOUR_FORM: tile.colour_form_id,
        ASPECT_APPROX_COLOUR: label_value(tile.approx_colour),
    }
    for aspect_id, sig in zip(ASPECT_EDGES, tile.edge_sigs):
        points[aspect_id] = sig
    return Description(GENERATOR_ID, tile.colour_form_id, points, tile.coords)


def colour_form_view(painting: Painting) -> View:
    """The view seeing colour-form identity and edge signatures, no frame."""
    forms = tuple(sorted(t.colour_form_id for t in painting.tiles))
    sigs = tuple(sorted(interior_signature_multiset(painting))) + (BOUNDARY,)
    aspects = [AspectView(ASPECT_COLOUR_FORM, forms)]
    aspects += [AspectView(aspect_id, sigs) for aspect_id in ASPECT_EDGES]
    return View(tuple(aspects))


def approx_colour_view(painting: Painting) -> View:
    """The simplifying view seeing only the approximate-colour label."""
    values = tuple(label_value(j) for j in range(1, painting.palette_q + 1))
    return View((AspectView(ASPECT_APPROX_COLOUR, values),))


def source_view(painting: Painting) -> View:
    """Every aspect the painting can answer, plus the spatial grid frame."""
    rich = colour_form_view(painting)
    label_aspect = approx_colour_view(painting).aspects[0]
    return View(
        rich.aspects + (label_aspect,),
        has_grid_frame=True,
        grid_dims=(painting.width, painting.height),
    )


def describe_tile(
    painting: Painting, coords: tuple[int, int], view_selector: str
) -> Description:
    """Describe the tile at ``coords`` through one of the three game views.

    ``location`` keeps the grid coordinates and nothing else; ``colour_form``
    keeps the colour-form id and edge signatures with coordinates stripped;
    ``approx_colour`` keeps only the bare label value.
    """
    tile = painting.tile_at(coords)
    if view_selector == "location":
        return Description(GENERATOR_ID, tile.colour_form_id, {}, tile.coords)
    if view_selector == "colour_form":
        points = {ASPECT_COLOUR_FORM: tile.colour_form_id}
        for aspect_id, sig in zip(ASPECT_EDGES, tile.edge_sigs):
            points[aspect_id] = sig
        return Description(GENERATOR_ID, tile.colour_form_id, points)
    if view_selector == "approx_colour":
        return Description(
            GENERATOR_ID,
            tile.colour_form_id,
            {ASPECT_APPROX_COLOUR: label_value(tile.approx_colour)},
        )
    raise UnknownAspect(view_selector)


# --- JSON round trip --------------------------------------------------------


def painting_to_doc(painting: Painting) -> dict[str, Any]:
    return {
        "width": painting.width,
        "height": painting.height,
        "q": painting.palette_q,
        "tiles": [
            {
                "x": t.coords[0],
                "y": t.coords[1],
                "label": t.approx_colour,
                "form": t.colour_form_id,
                "edges": {
                    "n": t.edge_sigs[0],
                    "e": t.edge_sigs[1],
                    "s": t.edge_sigs[2],
                    "w": t.edge_sigs[3],
                },
            }
            for t in painting.tiles
        ],
    }


def painting_from_doc(doc: Mapping[str, Any]) -> Painting:
    tiles = tuple(
        Tile(
            (int(entry["x"]), int(entry["y"])),
            entry["form"],
            int(entry["label"]),
            (
                entry["edges"]["n"],
                entry["edges"]["e"],
                entry["edges"]["s"],
                entry["edges"]["w"],
            ),
        )
        for entry in doc["tiles"]
    )
    return Painting(int(doc["width"]), int(doc["height"]), int(doc["q"]), tiles)


def painting_digest(painting: Painting) -> str:
    """Stable content digest used as the painting's identity in provenance."""
    return sha256_of_doc(painting_to_doc(painting))[:12]
