"""Vertex-addition construction of minimally rigid graphs, plus named fixtures.

Two growth operations are supported: attaching a new vertex by two edges, and
splitting an existing edge while attaching by three.  Starting from a single
edge, these generate exactly the minimally rigid point-distance graphs, which
also gives a randomized generator and a backtracking reduction search.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Union

from .errors import (
    BadValueError,
    DuplicateIdError,
    KindMismatchError,
    MissingEdgeError,
    UnknownFixtureError,
)
from .graph import (
    ConstraintGraph,
    ConstraintKind,
    EntityKind,
    angle,
    build_graph,
    distance,
    fixed_circle,
    free_circle,
    incidence,
    line,
    point,
    tangency,
)
from .rigidity import _pebble_run

PLACEHOLDER_DISTANCE = 1.0


@dataclass(frozen=True)
class H1:
    """Attach ``new`` to two existing vertices."""

    new: str
    attach: tuple[str, str]


@dataclass(frozen=True)
class H2:
    """Attach ``new`` to both ends of ``split_edge`` plus ``third``, deleting
    the split edge."""

    new: str
    split_edge: tuple[str, str]
    third: str


HennebergStep = Union[H1, H2]


@dataclass(frozen=True)
class HennebergSequence:
    """A base edge plus steps that replay, in order, to a target graph."""

    base_edge: tuple[str, str]
    steps: tuple[HennebergStep, ...]


def _require_points(g: ConstraintGraph) -> None:
    for e in g.entities:
        if e.kind is not EntityKind.POINT:
            raise KindMismatchError(f"entity {e.id!r} is not a point")
    for c in g.constraints:
        if c.kind is not ConstraintKind.DISTANCE:
            raise KindMismatchError(f"constraint {c.between} is not a distance")


def extend_h1(g: ConstraintGraph, new_id: str, u: str, w: str) -> ConstraintGraph:
    """Add ``new_id`` joined to ``u`` and ``w`` by placeholder distances."""
    _require_points(g)
    if new_id in g.entity_ids:
        raise DuplicateIdError(f"entity id {new_id!r} already present")
    g.entity(u)
    g.entity(w)
    if u == w:
        raise BadValueError("attachment vertices must be distinct")
    return build_graph(
        list(g.entities) + [point(new_id)],
        list(g.constraints)
        + [distance(new_id, u, PLACEHOLDER_DISTANCE), distance(new_id, w, PLACEHOLDER_DISTANCE)],
    )


def extend_h2(g: ConstraintGraph, new_id: str, split_edge: tuple[str, str], z: str) -> ConstraintGraph:
    """Split the edge (u, w): delete it and join ``new_id`` to u, w and ``z``."""
    _require_points(g)
    u, w = split_edge
    if new_id in g.entity_ids:
        raise DuplicateIdError(f"entity id {new_id!r} already present")
    for v in (u, w, z):
        g.entity(v)
    if z in (u, w):
        raise BadValueError("third attachment vertex must differ from the split edge")
    remaining = list(g.constraints)
    for i, c in enumerate(remaining):
        if c.kind is ConstraintKind.DISTANCE and frozenset(c.between) == frozenset((u, w)):
            del remaining[i]
            break
    else:
        raise MissingEdgeError(f"no distance edge between {u!r} and {w!r}")
    remaining += [
        distance(new_id, u, PLACEHOLDER_DISTANCE),
        distance(new_id, w, PLACEHOLDER_DISTANCE),
        distance(new_id, z, PLACEHOLDER_DISTANCE),
    ]
    return build_graph(list(g.entities) + [point(new_id)], remaining)


def random_laman(n: int, seed: int, p_h2: float = 0.3) -> ConstraintGraph:
    """Random minimally rigid point graph on ``n`` vertices.

    Deterministic for a fixed (n, seed, p_h2) triple.  Edge-split steps are
    chosen with probability ``p_h2`` once three vertices exist.
    """
    if n < 2:
        raise BadValueError(f"need at least 2 vertices, got {n}")
    if not 0.0 <= p_h2 <= 1.0:
        raise BadValueError(f"p_h2 must lie in [0, 1], got {p_h2}")
    rng = random.Random(seed)
    vertices = [f"p{i}" for i in range(1, n + 1)]
    edges: list[tuple[str, str]] = [(vertices[0], vertices[1])]
    for i in range(2, n):
        v = vertices[i]
        existing = vertices[:i]
        if i >= 3 and rng.random() < p_h2:
            u, w = edges[rng.randrange(len(edges))]
            z = rng.choice([x for x in existing if x not in (u, w)])
            edges.remove((u, w))
            edges += [(v, u), (v, w), (v, z)]
        else:
            u, w = rng.sample(existing, 2)
            edges += [(v, u), (v, w)]
    return build_graph(
        [point(v) for v in vertices],
        [distance(a, b, PLACEHOLDER_DISTANCE) for a, b in edges],
    )


def _edge_multiset(edges: list[frozenset[str]]) -> dict[frozenset[str], int]:
    counts: dict[frozenset[str], int] = {}
    for e in edges:
        counts[e] = counts.get(e, 0) + 1
    return counts


def _is_laman_raw(vertices: list[str], edges: list[frozenset[str]]) -> bool:
    if len(edges) != 2 * len(vertices) - 3:
        return False
    pairs = [tuple(sorted(e)) for e in edges]
    state, _, leftover = _pebble_run(vertices, {v: 2 for v in vertices}, pairs)
    return state == "ok" and leftover == 0


def reduction_sequence(g: ConstraintGraph) -> HennebergSequence | None:
    """Search for a vertex-addition history of a point-distance graph.

    Returns a base edge and construction-order steps whose replay reproduces
    the vertex set and edge multiset exactly, or None when the graph is not
    minimally rigid.  The search removes degree-2 vertices directly and
    degree-3 vertices by re-inserting one non-edge among their neighbours,
    backtracking on dead ends.
    """
    _require_points(g)
    if not _is_laman_raw(
        sorted(g.entity_ids), [frozenset(c.between) for c in g.constraints]
    ):
        return None

    vertices = sorted(g.entity_ids)
    edges = [frozenset(c.between) for c in g.constraints]

    def search(verts: list[str], eds: list[frozenset[str]]) -> HennebergSequence | None:
        if len(verts) == 2:
            a, b = sorted(verts)
            return HennebergSequence((a, b), ())
        degrees: dict[str, int] = {v: 0 for v in verts}
        for e in eds:
            for v in e:
                degrees[v] += 1
        for v in sorted(verts):
            if degrees[v] != 2:
                continue
            incident = [e for e in eds if v in e]
            nbrs = sorted({x for e in incident for x in e if x != v})
            if len(nbrs) != 2:
                continue  # doubled edge, cannot be minimally rigid
            rest = [e for e in eds if v not in e]
            sub = search([x for x in verts if x != v], rest)
            if sub is not None:
                return HennebergSequence(sub.base_edge, sub.steps + (H1(v, (nbrs[0], nbrs[1])),))
        counts = _edge_multiset(eds)
        for v in sorted(verts):
            if degrees[v] != 3:
                continue
            nbrs = sorted({x for e in eds if v in e for x in e if x != v})
            if len(nbrs) != 3:
                continue
            rest = [e for e in eds if v not in e]
            others = [x for x in verts if x != v]
            for a, b in ((nbrs[0], nbrs[1]), (nbrs[0], nbrs[2]), (nbrs[1], nbrs[2])):
                candidate = frozenset((a, b))
                if counts.get(candidate, 0) > 0:
                    continue
                trial = rest + [candidate]
                if not _is_laman_raw(others, trial):
                    continue
                sub = search(others, trial)
                if sub is not None:
                    third = next(x for x in nbrs if x not in (a, b))
                    return HennebergSequence(sub.base_edge, sub.steps + (H2(v, (a, b), third),))
        return None

    return search(vertices, edges)


def replay_sequence(seq: HennebergSequence) -> ConstraintGraph:
    """Rebuild a graph from a base edge by applying the recorded steps."""
    a, b = seq.base_edge
    g = build_graph([point(a), point(b)], [distance(a, b, PLACEHOLDER_DISTANCE)])
    for step in seq.steps:
        if isinstance(step, H1):
            g = extend_h1(g, step.new, *step.attach)
        else:
            g = extend_h2(g, step.new, step.split_edge, step.third)
    return g


# -------------------------------------------------------------------- fixtures


def _triangle() -> ConstraintGraph:
    return build_graph(
        [point("A"), point("B"), point("C")],
        [distance("A", "B", 1.0), distance("B", "C", 1.0), distance("C", "A", 1.0)],
    )


def _k4() -> ConstraintGraph:
    ids = ["A", "B", "C", "D"]
    cons = [
        distance(a, b, 1.0) for i, a in enumerate(ids) for b in ids[i + 1 :]
    ]
    return build_graph([point(v) for v in ids], cons)


def _path3() -> ConstraintGraph:
    return build_graph(
        [point("A"), point("B"), point("C")],
        [distance("A", "B", 1.0), distance("B", "C", 1.0)],
    )


def _moser_spindle() -> ConstraintGraph:
    # Two unit rhombi sharing the apex O, tips C and F joined by a unit edge.
    ids = ["O", "A", "B", "C", "D", "E", "F"]
    pairs = [
        ("O", "A"), ("O", "B"), ("A", "B"), ("A", "C"), ("B", "C"),
        ("O", "D"), ("O", "E"), ("D", "E"), ("D", "F"), ("E", "F"),
        ("C", "F"),
    ]
    return build_graph([point(v) for v in ids], [distance(a, b, 1.0) for a, b in pairs])


def _three_prism() -> ConstraintGraph:
    ids = ["A", "B", "C", "D", "E", "F"]
    pairs = [
        ("A", "B"), ("B", "C"), ("C", "A"),
        ("D", "E"), ("E", "F"), ("F", "D"),
        ("A", "D"), ("B", "E"), ("C", "F"),
    ]
    return build_graph([point(v) for v in ids], [distance(a, b, 1.0) for a, b in pairs])


def _k33() -> ConstraintGraph:
    left, right = ["A", "B", "C"], ["D", "E", "F"]
    return build_graph(
        [point(v) for v in left + right],
        [distance(a, b, 1.0) for a in left for b in right],
    )


def _three_angle_triangle() -> ConstraintGraph:
    third = math.pi / 3.0
    return build_graph(
        [line("L1"), line("L2"), line("L3")],
        [angle("L1", "L2", third), angle("L2", "L3", third), angle("L3", "L1", third)],
    )


def _degenerate_triangle() -> ConstraintGraph:
    return build_graph(
        [point("A"), point("B"), point("C")],
        [distance("A", "B", 1.0), distance("B", "C", 1.0), distance("C", "A", 2.0)],
    )


def _quad_angle() -> ConstraintGraph:
    # Quadrilateral ABCD by four side lengths plus the angle between the
    # carrier lines of AD and BC.
    entities = [point("A"), point("B"), point("C"), point("D"), line("LAD"), line("LBC")]
    cons = [
        incidence("A", "LAD"),
        incidence("D", "LAD"),
        incidence("B", "LBC"),
        incidence("C", "LBC"),
        distance("A", "B", 1.0),
        distance("B", "C", 1.0),
        distance("C", "D", 1.0),
        distance("D", "A", 2.0),
        angle("LAD", "LBC", math.pi / 3.0),
    ]
    return build_graph(entities, cons)


def _quad_angle_aux() -> ConstraintGraph:
    # Same quadrilateral with the auxiliary point E: AE runs parallel to CB
    # with |AE| = |CB| and |EC| = |AB|, which restores decomposability.
    entities = [point("A"), point("B"), point("C"), point("D"), point("E"),
                line("LAD"), line("LAE")]
    cons = [
        incidence("A", "LAD"),
        incidence("D", "LAD"),
        incidence("A", "LAE"),
        incidence("E", "LAE"),
        distance("D", "A", 2.0),
        distance("A", "E", 1.0),
        distance("E", "C", 1.0),
        distance("C", "D", 1.0),
        distance("C", "B", 1.0),
        distance("A", "B", 1.0),
        angle("LAD", "LAE", math.pi / 3.0),
    ]
    return build_graph(entities, cons)


def _cramer_castillon() -> ConstraintGraph:
    # Triangle MNP inscribed in a fixed-radius circle, each side through one
    # of the pinned points A, B, C; the circle centre is tied down through O.
    entities = [
        point("O"), point("A"), point("B"), point("C"),
        point("M"), point("N"), point("P"),
        fixed_circle("G", 2.0),
        line("LMN"), line("LNP"), line("LPM"),
    ]
    cons = [
        distance("A", "B", 1.0),
        distance("B", "C", 1.0),
        distance("O", "A", 1.0),
        distance("O", "B", 1.0),
        distance("O", "M", 2.0),
        distance("O", "N", 2.0),
        distance("O", "P", 2.0),
        incidence("M", "G"),
        incidence("N", "G"),
        incidence("P", "G"),
        incidence("M", "LMN"),
        incidence("N", "LMN"),
        incidence("N", "LNP"),
        incidence("P", "LNP"),
        incidence("P", "LPM"),
        incidence("M", "LPM"),
        incidence("C", "LMN"),
        incidence("A", "LNP"),
        incidence("B", "LPM"),
    ]
    return build_graph(entities, cons)


def _malfatti() -> ConstraintGraph:
    # Three mutually tangent free-radius circles, each tangent to two sides
    # of a triangle given by its three angles.
    third = math.pi / 3.0
    entities = [line("L1"), line("L2"), line("L3"),
                free_circle("K1"), free_circle("K2"), free_circle("K3")]
    cons = [
        angle("L1", "L2", third),
        angle("L2", "L3", third),
        angle("L3", "L1", third),
        tangency("K1", "L1"),
        tangency("K1", "L2"),
        tangency("K2", "L2"),
        tangency("K2", "L3"),
        tangency("K3", "L3"),
        tangency("K3", "L1"),
        tangency("K1", "K2"),
        tangency("K2", "K3"),
        tangency("K3", "K1"),
    ]
    return build_graph(entities, cons)


_FIXTURES: dict[str, Callable[[], ConstraintGraph]] = {
    "triangle": _triangle,
    "k4": _k4,
    "path3": _path3,
    "moser-spindle": _moser_spindle,
    "three-prism": _three_prism,
    "k33": _k33,
    "three-angle-triangle": _three_angle_triangle,
    "degenerate-triangle": _degenerate_triangle,
    "quad-angle": _quad_angle,
    "quad-angle-aux": _quad_angle_aux,
    "cramer-castillon": _cramer_castillon,
    "malfatti": _malfatti,
}


def fixture_names() -> tuple[str, ...]:
    return tuple(sorted(_FIXTURES))


def fixture(name: str) -> ConstraintGraph:
    """Return a named graph from the fixture catalog."""
    try:
        builder = _FIXTURES[name]
    except KeyError:
        known = ", ".join(fixture_names())
        raise UnknownFixtureError(f"unknown fixture {name!r} (known: {known})") from None
    return builder()
