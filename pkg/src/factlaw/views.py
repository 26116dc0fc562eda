"""Finite qualification views and relativized descriptions.

A *view* is a finite semantic filter: a bundle of aspects, each carrying a
finite set of admissible values, optionally completed by a grid frame that
locates entities in space.  A *description* is what an examination through a
view yields for one entity produced by one generator: a point cloud mapping
aspect ids to value ids, plus grid coordinates when a frame is present.

Views are blind to everything they do not contain.  Applying a view to an
entity keeps exactly those aspect/value pairs the view can express; if the
entity answers no aspect at all, the pairing generator/entity/view has no
mutual existence and :class:`NoMutualExistence` is raised.  A grid frame on
its own does not establish mutual existence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping


class NoMutualExistence(Exception):
    """The examined entity answers no aspect of the view."""


class EmptyKeepSet(ValueError):
    """A view restriction would retain no aspects."""


class UnknownAspect(KeyError):
    """An aspect id was requested that the view does not contain."""


@dataclass(frozen=True)
class AspectView:
    """One semantic axis: an aspect id and its finite, ordered value set."""

    aspect_id: str
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.aspect_id:
            raise ValueError("aspect_id must be non-empty")
        values = tuple(self.values)
        if not values:
            raise ValueError(f"aspect {self.aspect_id!r} needs at least one value")
        if len(set(values)) != len(values):
            raise ValueError(f"aspect {self.aspect_id!r} has duplicate values")
        object.__setattr__(self, "values", values)

    @property
    def width(self) -> int:
        """Number of admissible values on this axis."""
        return len(self.values)

    def admits(self, value: str) -> bool:
        return value in self.values


@dataclass(frozen=True)
class View:
    """A finite bundle of aspects, optionally with a spatial grid frame."""

    aspects: tuple[AspectView, ...]
    has_grid_frame: bool = False
    grid_dims: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        # Aspects form a set; store them sorted by id so equal views compare
        # equal regardless of construction order.
        aspects = tuple(sorted(self.aspects, key=lambda a: a.aspect_id))
        if not aspects:
            raise ValueError("a view needs at least one aspect")
        ids = [a.aspect_id for a in aspects]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate aspect ids in view")
        object.__setattr__(self, "aspects", aspects)
        if self.has_grid_frame:
            if self.grid_dims is None:
                raise ValueError("a grid frame needs grid_dims")
            dims = tuple(self.grid_dims)
            if len(dims) not in (2, 3) or any(d < 1 for d in dims):
                raise ValueError(f"bad grid_dims {dims!r}")
            object.__setattr__(self, "grid_dims", dims)
        elif self.grid_dims is not None:
            raise ValueError("grid_dims given without a grid frame")

    @property
    def aspect_ids(self) -> tuple[str, ...]:
        return tuple(a.aspect_id for a in self.aspects)

    def aspect(self, aspect_id: str) -> AspectView:
        for a in self.aspects:
            if a.aspect_id == aspect_id:
                return a
        raise UnknownAspect(aspect_id)

    def __contains__(self, aspect_id: object) -> bool:
        return any(a.aspect_id == aspect_id for a in self.aspects)


@dataclass(frozen=True)
class Description:
    """The outcome of examining one entity of one generator through a view.

    ``points`` maps aspect ids to the value each aspect yielded; aspects the
    entity did not answer are simply absent.  ``grid_coords`` is set only
    when the producing view carried a grid frame.
    """

    generator_id: str
    entity_id: str
    points: Mapping[str, str]
    grid_coords: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not self.generator_id or not self.entity_id:
            raise ValueError("generator_id and entity_id must be non-empty")
        object.__setattr__(self, "points", dict(self.points))
        if self.grid_coords is not None:
            object.__setattr__(self, "grid_coords", tuple(int(c) for c in self.grid_coords))

    def value(self, aspect_id: str) -> str:
        try:
            return self.points[aspect_id]
        except KeyError:
            raise UnknownAspect(aspect_id) from None

    def __hash__(self) -> int:
        return hash(
            (
                self.generator_id,
                self.entity_id,
                tuple(sorted(self.points.items())),
                self.grid_coords,
            )
        )


@dataclass(frozen=True)
class EpistemicReferential:
    """The pairing (generator of entities, view) every description is relative to."""

    generator_id: str
    view: View

    def __post_init__(self) -> None:
        if not self.generator_id:
            raise ValueError("generator_id must be non-empty")


def apply_view(view: View, entity: Description) -> Description:
    """Re-examine ``entity`` through ``view``, keeping only what it can express.

    An aspect answers when the entity carries it *and* the carried value is
    among the view's admissible values; anything else is invisible to the
    filter.  Grid coordinates survive only if ``view`` has a grid frame.
    Raises :class:`NoMutualExistence` when no aspect answers: coordinates
    alone never establish mutual existence.
    """
    kept: dict[str, str] = {}
    for aspect in view.aspects:
        value = entity.points.get(aspect.aspect_id)
        if value is not None and aspect.admits(value):
            kept[aspect.aspect_id] = value
    if not kept:
        raise NoMutualExistence(
            f"entity {entity.entity_id!r} answers no aspect of the view"
        )
    coords = entity.grid_coords if view.has_grid_frame else None
    return Description(entity.generator_id, entity.entity_id, kept, coords)


def restrict_view(
    view: View, keep: Iterable[str], *, keep_grid_frame: bool = False
) -> View:
    """Return the sub-view of ``view`` retaining exactly the aspects in ``keep``.

    Aspect order is inherited from ``view``.  The grid frame is dropped
    unless ``keep_grid_frame`` is set (and ``view`` actually has one).
    Raises :class:`EmptyKeepSet` for an empty keep set and
    :class:`UnknownAspect` for ids the view does not contain.
    """
    keep_set = set(keep)
    if not keep_set:
        raise EmptyKeepSet("view restriction must keep at least one aspect")
    known = set(view.aspect_ids)
    missing = keep_set - known
    if missing:
        raise UnknownAspect(sorted(missing)[0])
    aspects = tuple(a for a in view.aspects if a.aspect_id in keep_set)
    if keep_grid_frame and view.has_grid_frame:
        return View(aspects, has_grid_frame=True, grid_dims=view.grid_dims)
    return View(aspects)


# --- JSON round trips -------------------------------------------------------
#
# Aspect lists are sorted by aspect id on the way out so that two equal views
# always produce byte-identical documents.


def view_to_doc(view: View) -> dict[str, Any]:
    return {
        "aspects": [
            {"aspect_id": a.aspect_id, "values": list(a.values)}
            for a in sorted(view.aspects, key=lambda a: a.aspect_id)
        ],
        "has_grid_frame": view.has_grid_frame,
        "grid_dims": list(view.grid_dims) if view.grid_dims is not None else None,
    }


def view_from_doc(doc: Mapping[str, Any]) -> View:
    aspects = tuple(
        AspectView(entry["aspect_id"], tuple(entry["values"]))
        for entry in doc["aspects"]
    )
    dims = doc.get("grid_dims")
    return View(
        aspects,
        has_grid_frame=bool(doc.get("has_grid_frame", False)),
        grid_dims=tuple(dims) if dims is not None else None,
    )


def description_to_doc(desc: Description) -> dict[str, Any]:
    return {
        "generator_id": desc.generator_id,
        "entity_id": desc.entity_id,
        "points": dict(sorted(desc.points.items())),
        "grid_coords": list(desc.grid_coords) if desc.grid_coords is not None else None,
    }


def description_from_doc(doc: Mapping[str, Any]) -> Description:
    coords = doc.get("grid_coords")
    return Description(
        doc["generator_id"],
        doc["entity_id"],
        dict(doc["points"]),
        tuple(coords) if coords is not None else None,
    )
