"""Constraint-graph data model: entities, scalar constraints, counting, JSON I/O.

A graph holds geometric entities (points, lines, circles) as vertices and
binary scalar constraints as edges.  Every constraint consumes exactly one
degree of freedom.  Duplicate edges are allowed; they surface later as
over-constraint evidence rather than being rejected at build time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable

from .errors import (
    BadValueError,
    DuplicateIdError,
    KindMismatchError,
    ParseError,
    SelfLoopError,
    TooSmallError,
    UnknownEndpointError,
)


class EntityKind(Enum):
    """Kind of geometric entity, determining its degrees of freedom."""

    POINT = "point"
    LINE = "line"
    CIRCLE_FIXED_RADIUS = "circle_fixed_radius"
    CIRCLE_FREE_RADIUS = "circle_free_radius"

    @property
    def is_circle(self) -> bool:
        return self in (EntityKind.CIRCLE_FIXED_RADIUS, EntityKind.CIRCLE_FREE_RADIUS)


_DOF = {
    EntityKind.POINT: 2,
    EntityKind.LINE: 2,
    EntityKind.CIRCLE_FIXED_RADIUS: 2,
    EntityKind.CIRCLE_FREE_RADIUS: 3,
}


def dof(kind: EntityKind) -> int:
    """Degrees of freedom of an entity kind (2, except 3 for a free-radius circle)."""
    return _DOF[kind]


@dataclass(frozen=True)
class Entity:
    """A named geometric entity.  ``radius`` is set iff the kind fixes it."""

    id: str
    kind: EntityKind
    radius: float | None = None


def point(entity_id: str) -> Entity:
    return Entity(entity_id, EntityKind.POINT)


def line(entity_id: str) -> Entity:
    return Entity(entity_id, EntityKind.LINE)


def fixed_circle(entity_id: str, radius: float) -> Entity:
    return Entity(entity_id, EntityKind.CIRCLE_FIXED_RADIUS, radius=radius)


def free_circle(entity_id: str) -> Entity:
    return Entity(entity_id, EntityKind.CIRCLE_FREE_RADIUS)


class ConstraintKind(Enum):
    DISTANCE = "distance"
    POINT_LINE_DISTANCE = "point_line_distance"
    INCIDENCE = "incidence"
    ANGLE = "angle"
    TANGENCY = "tangency"


# Admissible unordered endpoint kind pairs, by base shape (point/line/circle).
_ADMISSIBLE: dict[ConstraintKind, tuple[frozenset[str], ...]] = {
    ConstraintKind.DISTANCE: (frozenset({"point"}),),
    ConstraintKind.POINT_LINE_DISTANCE: (frozenset({"point", "line"}),),
    ConstraintKind.INCIDENCE: (frozenset({"point", "line"}), frozenset({"point", "circle"})),
    ConstraintKind.ANGLE: (frozenset({"line"}),),
    ConstraintKind.TANGENCY: (frozenset({"line", "circle"}), frozenset({"circle"})),
}

_VALUED = {
    ConstraintKind.DISTANCE,
    ConstraintKind.POINT_LINE_DISTANCE,
    ConstraintKind.ANGLE,
}


def _base_shape(kind: EntityKind) -> str:
    if kind.is_circle:
        return "circle"
    return kind.value


@dataclass(frozen=True)
class Constraint:
    """One scalar equation between two distinct entities."""

    kind: ConstraintKind
    between: tuple[str, str]
    value: float | None = None


def distance(a: str, b: str, value: float) -> Constraint:
    return Constraint(ConstraintKind.DISTANCE, (a, b), value)


def point_line_distance(p: str, l: str, value: float) -> Constraint:
    return Constraint(ConstraintKind.POINT_LINE_DISTANCE, (p, l), value)


def incidence(a: str, b: str) -> Constraint:
    return Constraint(ConstraintKind.INCIDENCE, (a, b))


def angle(a: str, b: str, value: float) -> Constraint:
    return Constraint(ConstraintKind.ANGLE, (a, b), value)


def tangency(a: str, b: str) -> Constraint:
    return Constraint(ConstraintKind.TANGENCY, (a, b))


@dataclass(frozen=True)
class ConstraintGraph:
    """An immutable constraint graph.  Build through :func:`build_graph`."""

    entities: tuple[Entity, ...]
    constraints: tuple[Constraint, ...]

    @cached_property
    def _entity_map(self) -> dict[str, Entity]:
        return {e.id: e for e in self.entities}

    @property
    def n(self) -> int:
        return len(self.entities)

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def entity_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.entities)

    def entity(self, entity_id: str) -> Entity:
        try:
            return self._entity_map[entity_id]
        except KeyError:
            raise UnknownEndpointError(f"no entity with id {entity_id!r}") from None

    def kind_of(self, entity_id: str) -> EntityKind:
        return self.entity(entity_id).kind

    def dof_total(self) -> int:
        return sum(dof(e.kind) for e in self.entities)


def build_graph(entities: Iterable[Entity], constraints: Iterable[Constraint]) -> ConstraintGraph:
    """Validate and assemble a :class:`ConstraintGraph`.

    Raises DuplicateIdError, UnknownEndpointError, SelfLoopError,
    KindMismatchError or BadValueError on malformed input.  Duplicate
    constraints are accepted (multigraph).
    """
    ents = tuple(entities)
    cons = tuple(constraints)

    seen: set[str] = set()
    for ent in ents:
        if not ent.id or not isinstance(ent.id, str):
            raise BadValueError(f"entity id must be a nonempty string, got {ent.id!r}")
        if ent.id in seen:
            raise DuplicateIdError(f"duplicate entity id {ent.id!r}")
        seen.add(ent.id)
        if ent.kind is EntityKind.CIRCLE_FIXED_RADIUS:
            if ent.radius is None:
                raise BadValueError(f"circle {ent.id!r} has a fixed radius but no radius value")
            if not math.isfinite(ent.radius) or ent.radius <= 0:
                raise BadValueError(f"circle {ent.id!r} radius must be finite and > 0")
        elif ent.radius is not None:
            raise BadValueError(f"entity {ent.id!r} of kind {ent.kind.value} cannot carry a radius")

    by_id = {e.id: e for e in ents}
    for con in cons:
        a, b = con.between
        for end in (a, b):
            if end not in by_id:
                raise UnknownEndpointError(f"constraint endpoint {end!r} is not an entity")
        if a == b:
            raise SelfLoopError(f"constraint joins {a!r} to itself")
        shapes = frozenset({_base_shape(by_id[a].kind), _base_shape(by_id[b].kind)})
        if shapes not in _ADMISSIBLE[con.kind]:
            raise KindMismatchError(
                f"{con.kind.value} not admissible between {by_id[a].kind.value} and {by_id[b].kind.value}"
            )
        if con.kind in _VALUED:
            if con.value is None:
                raise BadValueError(f"{con.kind.value} constraint between {a!r},{b!r} needs a value")
            if not math.isfinite(con.value):
                raise BadValueError(f"{con.kind.value} value must be finite")
            if con.kind is ConstraintKind.DISTANCE and con.value <= 0:
                raise BadValueError(f"distance {a!r},{b!r} must be > 0, got {con.value}")
            if con.kind is ConstraintKind.POINT_LINE_DISTANCE and con.value < 0:
                raise BadValueError(f"point-line distance {a!r},{b!r} must be >= 0")
            if con.kind is ConstraintKind.ANGLE and not 0 < con.value < math.pi:
                raise BadValueError(f"angle {a!r},{b!r} must lie in (0, pi), got {con.value}")
        elif con.value is not None:
            raise BadValueError(f"{con.kind.value} constraint carries no value")

    return ConstraintGraph(ents, cons)


def induced_subgraph(g: ConstraintGraph, ids: Iterable[str]) -> ConstraintGraph:
    """Subgraph on ``ids`` keeping exactly the constraints with both ends inside."""
    keep = set(ids)
    for entity_id in keep:
        if entity_id not in g._entity_map:
            raise UnknownEndpointError(f"no entity with id {entity_id!r}")
    ents = tuple(e for e in g.entities if e.id in keep)
    cons = tuple(c for c in g.constraints if c.between[0] in keep and c.between[1] in keep)
    return ConstraintGraph(ents, cons)


def deficiency(g: ConstraintGraph) -> int:
    """Missing-constraint count: sum of entity DOF minus 3, minus the edge count.

    Zero suggests a structurally exact count, positive means constraints are
    missing, negative means they are in excess somewhere.
    """
    if g.n < 2:
        raise TooSmallError("deficiency needs at least two entities")
    return g.dof_total() - 3 - g.m


# ------------------------------------------------------------------- JSON I/O


def _entity_to_dict(e: Entity) -> dict:
    if e.kind is EntityKind.POINT:
        return {"id": e.id, "kind": "point"}
    if e.kind is EntityKind.LINE:
        return {"id": e.id, "kind": "line"}
    out: dict = {"id": e.id, "kind": "circle", "radius_known": e.kind is EntityKind.CIRCLE_FIXED_RADIUS}
    if e.radius is not None:
        out["radius"] = e.radius
    return out


def _constraint_to_dict(c: Constraint) -> dict:
    out: dict = {"kind": c.kind.value, "between": list(c.between)}
    if c.value is not None:
        out["value"] = c.value
    return out


def graph_to_dict(g: ConstraintGraph) -> dict:
    return {
        "entities": [_entity_to_dict(e) for e in g.entities],
        "constraints": [_constraint_to_dict(c) for c in g.constraints],
    }


def serialize(g: ConstraintGraph) -> str:
    """Canonical JSON text; insertion order and full float precision preserved."""
    return json.dumps(graph_to_dict(g), indent=2)


def _entity_from_dict(raw: object) -> Entity:
    if not isinstance(raw, dict):
        raise ParseError(f"entity must be an object, got {type(raw).__name__}")
    entity_id = raw.get("id")
    if not isinstance(entity_id, str) or not entity_id:
        raise ParseError(f"entity id must be a nonempty string, got {entity_id!r}")
    kind = raw.get("kind")
    if kind == "point":
        return Entity(entity_id, EntityKind.POINT)
    if kind == "line":
        return Entity(entity_id, EntityKind.LINE)
    if kind == "circle":
        known = raw.get("radius_known")
        if not isinstance(known, bool):
            raise ParseError(f"circle {entity_id!r} needs a boolean radius_known")
        radius = raw.get("radius")
        if radius is not None and not isinstance(radius, (int, float)):
            raise ParseError(f"circle {entity_id!r} radius must be a number")
        ek = EntityKind.CIRCLE_FIXED_RADIUS if known else EntityKind.CIRCLE_FREE_RADIUS
        return Entity(entity_id, ek, radius=float(radius) if radius is not None else None)
    raise ParseError(f"unknown entity kind {kind!r}")


_KIND_BY_NAME = {k.value: k for k in ConstraintKind}


def _constraint_from_dict(raw: object) -> Constraint:
    if not isinstance(raw, dict):
        raise ParseError(f"constraint must be an object, got {type(raw).__name__}")
    kind_name = raw.get("kind")
    if kind_name not in _KIND_BY_NAME:
        raise ParseError(f"unknown constraint kind {kind_name!r}")
    between = raw.get("between")
    if (
        not isinstance(between, list)
        or len(between) != 2
        or not all(isinstance(x, str) for x in between)
    ):
        raise ParseError(f"constraint 'between' must list two entity ids, got {between!r}")
    value = raw.get("value")
    if value is not None and not isinstance(value, (int, float)):
        raise ParseError(f"constraint value must be a number, got {value!r}")
    return Constraint(_KIND_BY_NAME[kind_name], (between[0], between[1]),
                      float(value) if value is not None else None)


def graph_from_dict(doc: object) -> ConstraintGraph:
    if not isinstance(doc, dict):
        raise ParseError("graph document must be a JSON object")
    raw_entities = doc.get("entities")
    raw_constraints = doc.get("constraints")
    if not isinstance(raw_entities, list) or not isinstance(raw_constraints, list):
        raise ParseError("graph document needs 'entities' and 'constraints' arrays")
    entities = [_entity_from_dict(e) for e in raw_entities]
    constraints = [_constraint_from_dict(c) for c in raw_constraints]
    return build_graph(entities, constraints)


def parse(text: str) -> ConstraintGraph:
    """Inverse of :func:`serialize`.  Raises ParseError on malformed documents,
    then any of the build_graph errors on semantic problems."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return graph_from_dict(doc)
