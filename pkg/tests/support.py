"""Shared helpers: independent recounts, embedding sampling, congruence checks."""

from __future__ import annotations

import math
import random
from itertools import combinations

from gcs2d import (
    Constraint,
    ConstraintGraph,
    ConstraintKind,
    EntityKind,
    GcsError,
    LineRep,
    Placement,
    Point2,
    alignment_motions,
    build_graph,
    distance,
    dof,
    fixed_circle,
    free_circle,
    incidence,
    line,
    lines_close,
    line_through_points,
    point,
    point_line_distance,
    unsigned_line_angle,
)
from gcs2d.graph import angle as angle_constraint


def triangle_graph(ab: float, ac: float, bc: float) -> ConstraintGraph:
    """Triangle with base AB; C sits on circle(A, ac) and circle(B, bc)."""
    return build_graph(
        [point("A"), point("B"), point("C")],
        [distance("A", "B", ab), distance("A", "C", ac), distance("B", "C", bc)],
    )


def subset_violates(g: ConstraintGraph, witness: frozenset[str]) -> bool:
    """Independent recount: induced edges exceed the DOF budget of the set."""
    m_sub = sum(1 for c in g.constraints if set(c.between) <= witness)
    cap = sum(dof(g.kind_of(v)) for v in witness) - 3
    return m_sub > cap


def brute_force_min_witness(g: ConstraintGraph) -> frozenset[str] | None:
    """Smallest violating subset by direct enumeration (oracle for tests)."""
    ids = sorted(g.entity_ids)
    for size in range(2, len(ids) + 1):
        for subset in combinations(ids, size):
            if subset_violates(g, frozenset(subset)):
                return frozenset(subset)
    return None


def random_mixed_graph(rng: random.Random) -> ConstraintGraph:
    """Arbitrary valid graph over points, lines and circles (for round trips)."""
    entities = []
    for i in range(rng.randint(2, 6)):
        entities.append(point(f"P{i}"))
    for i in range(rng.randint(0, 3)):
        entities.append(line(f"L{i}"))
    for i in range(rng.randint(0, 2)):
        if rng.random() < 0.5:
            entities.append(fixed_circle(f"C{i}", rng.uniform(0.5, 3.0)))
        else:
            entities.append(free_circle(f"C{i}"))
    by_kind = {"point": [], "line": [], "circle": []}
    for e in entities:
        key = "circle" if e.kind.is_circle else e.kind.value
        by_kind[key].append(e.id)

    constraints: list[Constraint] = []
    for _ in range(rng.randint(0, 8)):
        choice = rng.random()
        points_, lines_, circles = by_kind["point"], by_kind["line"], by_kind["circle"]
        if choice < 0.4 and len(points_) >= 2:
            a, b = rng.sample(points_, 2)
            constraints.append(distance(a, b, rng.uniform(0.1, 5.0)))
        elif choice < 0.55 and points_ and lines_:
            constraints.append(point_line_distance(rng.choice(points_), rng.choice(lines_),
                                                   rng.uniform(0.0, 2.0)))
        elif choice < 0.7 and points_ and lines_:
            constraints.append(incidence(rng.choice(points_), rng.choice(lines_)))
        elif choice < 0.8 and points_ and circles:
            constraints.append(incidence(rng.choice(points_), rng.choice(circles)))
        elif choice < 0.9 and len(lines_) >= 2:
            a, b = rng.sample(lines_, 2)
            constraints.append(angle_constraint(a, b, rng.uniform(0.1, math.pi - 0.1)))
        elif len(circles) >= 2:
            a, b = rng.sample(circles, 2)
            constraints.append(Constraint(ConstraintKind.TANGENCY, (a, b)))
    return build_graph(entities, constraints)


def sample_embedding(g: ConstraintGraph, rng: random.Random) -> dict[str, Placement]:
    """Generic placements: random points; lines through their incident points.

    Only point and line entities are supported, which covers the fixtures the
    forward-simulation oracle runs on.  Resamples until the configuration is
    comfortably non-degenerate.
    """
    point_ids = [e.id for e in g.entities if e.kind is EntityKind.POINT]
    line_ids = [e.id for e in g.entities if e.kind is EntityKind.LINE]
    assert len(point_ids) + len(line_ids) == g.n, "sampling supports points and lines only"

    incident: dict[str, list[str]] = {l: [] for l in line_ids}
    for c in g.constraints:
        if c.kind is ConstraintKind.INCIDENCE:
            a, b = c.between
            p, l = (a, b) if g.kind_of(a) is EntityKind.POINT else (b, a)
            if l in incident:
                incident[l].append(p)

    for _ in range(200):
        placements: dict[str, Placement] = {
            p: Point2(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)) for p in point_ids
        }
        if any(
            placements[a].distance_to(placements[b]) < 0.4
            for a, b in combinations(point_ids, 2)
        ):
            continue
        ok = True
        for l in line_ids:
            anchors = incident[l]
            if len(anchors) >= 2:
                placements[l] = line_through_points(placements[anchors[0]], placements[anchors[1]])
            elif len(anchors) == 1:
                base = placements[anchors[0]]
                other = Point2(base.x + math.cos(rng.uniform(0, math.pi)),
                               base.y + math.sin(rng.uniform(0, math.pi)))
                placements[l] = line_through_points(base, other)
            else:
                placements[l] = LineRep(rng.uniform(0, math.pi), rng.uniform(-2, 2))
        for la, lb in combinations(line_ids, 2):
            if unsigned_line_angle(placements[la], placements[lb]) < 0.2:
                ok = False
        if ok:
            return placements
    raise AssertionError("could not sample a generic embedding")


def measured_graph(g: ConstraintGraph, placements: dict[str, Placement]) -> ConstraintGraph:
    """Same structure as ``g`` with values measured from the placements."""
    new_constraints = []
    for c in g.constraints:
        a, b = c.between
        if c.kind is ConstraintKind.DISTANCE:
            value = placements[a].distance_to(placements[b])
        elif c.kind is ConstraintKind.ANGLE:
            value = unsigned_line_angle(placements[a], placements[b])
        elif c.kind is ConstraintKind.POINT_LINE_DISTANCE:
            p, l = (a, b) if isinstance(placements[a], Point2) else (b, a)
            value = placements[l].distance_to_point(placements[p])
        else:
            new_constraints.append(c)
            continue
        new_constraints.append(Constraint(c.kind, c.between, value))
    return build_graph(g.entities, new_constraints)


def placements_close(a: Placement, b: Placement, tol: float) -> bool:
    if isinstance(a, Point2) and isinstance(b, Point2):
        return a.close_to(b, tol)
    if isinstance(a, LineRep) and isinstance(b, LineRep):
        return lines_close(a, b, tol)
    return (
        a.center.close_to(b.center, tol) and abs(a.r - b.r) <= tol  # type: ignore[union-attr]
    )


def solution_matches_sample(
    g: ConstraintGraph,
    base_pair: tuple[str, str],
    sample: dict[str, Placement],
    solutions,
    tol: float = 1e-7,
) -> bool:
    """True when some enumerated solution equals the sample up to a motion
    aligning the base pair."""
    src = (sample[base_pair[0]], sample[base_pair[1]])
    for _, sol in solutions:
        dst = (sol.placements[base_pair[0]], sol.placements[base_pair[1]])
        try:
            motions = alignment_motions(src, dst, tol)
        except GcsError:
            continue
        for motion in motions:
            moved = {name: motion.apply(p) for name, p in sample.items()}
            if all(placements_close(moved[name], sol.placements[name], tol) for name in moved):
                return True
    return False
