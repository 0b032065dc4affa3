"""Numeric execution of construction plans: branch enumeration and residuals.

The executor fixes the gauge through the plan's base constraint (first entity
at the origin, second along the positive x axis, or the line equal to the x
axis for incidence-style bases).  Each subsequent step resolves to line and
circle intersections; steps with two or more roots consume one entry of the
branch selector.  Roots are ordered by angle around their centroid and then
lexicographically by coordinates, so selectors are stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .decompose import AlignCluster, Plan, PlaceByTwoLoci, TriangleMerge
from .errors import (
    BadBranchError,
    CoincidentError,
    CoincidentPointsError,
    EmptyIntersectionError,
    GcsError,
    LengthMismatchError,
    MissingPlacementError,
    ParallelError,
    ParseError,
    UnderDeterminedError,
    UnsupportedStepError,
    VerificationError,
)
from .geometry import (
    CircleRep,
    LineRep,
    Placement,
    Point2,
    alignment_motions,
    fold_angle,
    intersect_circle_circle,
    intersect_line_circle,
    intersect_line_line,
    line_through_point_angle,
    line_through_points,
    lines_close,
    unsigned_line_angle,
)
from .graph import Constraint, ConstraintGraph, ConstraintKind, EntityKind

DEFAULT_TOL = 1e-9

X_AXIS = LineRep(math.pi / 2.0, 0.0)


@dataclass(frozen=True)
class Solution:
    """Placements for every entity, plus the branch choices that produced
    them and the indices of steps that hit a tangent (double) root."""

    placements: dict[str, Placement]
    branches: tuple[int, ...]
    degenerate_steps: tuple[int, ...] = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.degenerate_steps)


@dataclass(frozen=True)
class ResidualReport:
    """Signed residual (measured minus specified) per constraint."""

    residuals: tuple[float, ...]
    max_abs: float
    tol: float
    passed: bool


# ------------------------------------------------------------ base placements


def base_placements(g: ConstraintGraph, constraint_index: int) -> dict[str, Placement]:
    """Canonical gauge-fixing placement for one seed constraint."""
    c = g.constraints[constraint_index]
    a, b = c.between
    ka, kb = g.kind_of(a), g.kind_of(b)

    if c.kind is ConstraintKind.DISTANCE:
        return {a: Point2(0.0, 0.0), b: Point2(c.value, 0.0)}

    if c.kind is ConstraintKind.ANGLE:
        return {a: X_AXIS, b: LineRep(math.pi / 2.0 + c.value, 0.0)}

    if c.kind is ConstraintKind.INCIDENCE:
        p, other, other_kind = (a, b, kb) if ka is EntityKind.POINT else (b, a, ka)
        if other_kind is EntityKind.LINE:
            return {p: Point2(0.0, 0.0), other: X_AXIS}
        if other_kind is EntityKind.CIRCLE_FIXED_RADIUS:
            r = g.entity(other).radius
            return {p: Point2(0.0, 0.0), other: CircleRep(Point2(r, 0.0), r)}
        raise UnderDeterminedError(other, "a free-radius circle cannot anchor a base placement")

    if c.kind is ConstraintKind.POINT_LINE_DISTANCE:
        p, l = (a, b) if ka is EntityKind.POINT else (b, a)
        return {l: X_AXIS, p: Point2(0.0, c.value)}

    # Tangency base: canonical external tangency along the x axis.
    for name, kind in ((a, ka), (b, kb)):
        if kind is EntityKind.CIRCLE_FREE_RADIUS:
            raise UnderDeterminedError(name, "a free-radius circle cannot anchor a base placement")
    if ka is EntityKind.LINE or kb is EntityKind.LINE:
        l, k = (a, b) if ka is EntityKind.LINE else (b, a)
        r = g.entity(k).radius
        return {l: X_AXIS, k: CircleRep(Point2(0.0, r), r)}
    r1, r2 = g.entity(a).radius, g.entity(b).radius
    return {a: CircleRep(Point2(0.0, 0.0), r1), b: CircleRep(Point2(r1 + r2, 0.0), r2)}


# ------------------------------------------------------------- step resolution


def _placed(placements: Mapping[str, Placement], entity_id: str) -> Placement:
    try:
        return placements[entity_id]
    except KeyError:
        raise MissingPlacementError(f"entity {entity_id!r} has no placement yet") from None


def _other_endpoint(c: Constraint, target: str) -> str:
    a, b = c.between
    if target == a:
        return b
    if target == b:
        return a
    raise UnsupportedStepError(f"constraint {c.between} does not touch {target!r}")


def _order_points(points: list[Point2]) -> list[Point2]:
    if len(points) < 2:
        return points
    cx = sum(p.x for p in points) / len(points)
    cy = sum(p.y for p in points) / len(points)

    def key(p: Point2) -> tuple[float, float, float]:
        return (math.atan2(p.y - cy, p.x - cx) % (2.0 * math.pi), p.x, p.y)

    return sorted(points, key=key)


def _point_loci(
    c: Constraint, target: str, placements: Mapping[str, Placement]
) -> list[Placement]:
    anchor = _placed(placements, _other_endpoint(c, target))
    if c.kind is ConstraintKind.DISTANCE:
        if not isinstance(anchor, Point2):
            raise UnsupportedStepError("distance locus needs a placed point anchor")
        return [CircleRep(anchor, c.value)]
    if c.kind is ConstraintKind.INCIDENCE:
        if isinstance(anchor, (LineRep, CircleRep)):
            return [anchor]
        raise UnsupportedStepError("incidence locus needs a placed line or circle")
    if c.kind is ConstraintKind.POINT_LINE_DISTANCE:
        if not isinstance(anchor, LineRep):
            raise UnsupportedStepError("offset locus needs a placed line anchor")
        if c.value == 0.0:
            return [anchor]
        return [LineRep(anchor.theta, anchor.c + c.value), LineRep(anchor.theta, anchor.c - c.value)]
    raise UnsupportedStepError(f"no point locus for a {c.kind.value} constraint")


def _intersect_loci(a: Placement, b: Placement) -> tuple[list[Point2], bool, bool]:
    """Intersect two loci; returns (points, tangent, coincident)."""
    try:
        if isinstance(a, LineRep) and isinstance(b, LineRep):
            return [intersect_line_line(a, b)], False, False
        if isinstance(a, LineRep) and isinstance(b, CircleRep):
            hit = intersect_line_circle(a, b)
            return list(hit.points), hit.tangent, False
        if isinstance(a, CircleRep) and isinstance(b, LineRep):
            hit = intersect_line_circle(b, a)
            return list(hit.points), hit.tangent, False
        if isinstance(a, CircleRep) and isinstance(b, CircleRep):
            hit = intersect_circle_circle(a, b)
            return list(hit.points), hit.tangent, False
    except ParallelError:
        assert isinstance(a, LineRep) and isinstance(b, LineRep)
        return [], False, lines_close(a, b)
    except EmptyIntersectionError:
        return [], False, False
    except CoincidentError:
        return [], False, True
    raise UnsupportedStepError("loci must be lines or circles")


def _place_point(
    step: PlaceByTwoLoci, placements: Mapping[str, Placement], g: ConstraintGraph
) -> tuple[list[dict[str, Placement]], bool]:
    group_a = _point_loci(g.constraints[step.constraints[0]], step.target, placements)
    group_b = _point_loci(g.constraints[step.constraints[1]], step.target, placements)
    points: list[Point2] = []
    tangent = False
    coincident = False
    for la in group_a:
        for lb in group_b:
            pts, tan, coin = _intersect_loci(la, lb)
            tangent = tangent or tan
            coincident = coincident or coin
            for p in pts:
                if not any(p.close_to(q) for q in points):
                    points.append(p)
    if not points:
        if coincident:
            raise UnderDeterminedError(step.target, "coincident loci leave the target free")
        raise EmptyIntersectionError(f"no locus intersection places {step.target!r}")
    ordered = _order_points(points)
    return [{step.target: p} for p in ordered], tangent


def _place_line(
    step: PlaceByTwoLoci, placements: Mapping[str, Placement], g: ConstraintGraph
) -> tuple[list[dict[str, Placement]], bool]:
    anchors: list[tuple[str, Placement, float | None]] = []
    for idx in step.constraints:
        c = g.constraints[idx]
        anchor = _placed(placements, _other_endpoint(c, step.target))
        if c.kind is ConstraintKind.INCIDENCE and isinstance(anchor, Point2):
            anchors.append(("point", anchor, None))
        elif c.kind is ConstraintKind.ANGLE and isinstance(anchor, LineRep):
            anchors.append(("angle", anchor, c.value))
        else:
            raise UnsupportedStepError(
                f"cannot place line {step.target!r} from a {c.kind.value} constraint"
            )
    anchors.sort(key=lambda item: item[0] != "point")
    tags = tuple(tag for tag, _, _ in anchors)
    if tags == ("point", "point"):
        p, q = anchors[0][1], anchors[1][1]
        try:
            result = line_through_points(p, q)
        except CoincidentPointsError:
            raise UnderDeterminedError(step.target, "both incident points coincide") from None
        return [{step.target: result}], False
    if tags == ("point", "angle"):
        p = anchors[0][1]
        ref, alpha = anchors[1][1], anchors[1][2]
        first = line_through_point_angle(p, ref, alpha, branch=0)
        second = line_through_point_angle(p, ref, alpha, branch=1)
        lines = [first] if lines_close(first, second) else [first, second]
        lines.sort(key=lambda l: (l.theta, l.c))
        return [{step.target: l} for l in lines], False
    # Two angle constraints fix the direction twice but never the offset.
    raise UnderDeterminedError(step.target, "angles fix the direction but not the offset")


def _triangle_options(
    step: TriangleMerge, placements: Mapping[str, Placement], g: ConstraintGraph
) -> tuple[list[dict[str, Placement]], bool]:
    """Place the one unplaced shared point from two virtual-distance circles.

    The contributing clusters may admit several internal conformations with
    different virtual distances, so the options run over every candidate
    distance pair and every intersection root; infeasible combinations are
    simply absent."""
    p0, p1, p2 = step.points
    missing = [p for p in step.points if p not in placements]
    if not missing:
        return [{}], False
    if missing != [p2]:
        raise UnsupportedStepError(
            "triangle merge expects exactly the third shared point unplaced"
        )
    anchor1 = _as_point(placements, p0)
    anchor2 = _as_point(placements, p1)
    options: list[dict[str, Placement]] = []
    tangent = False
    failure: GcsError | None = None
    for d12 in step.alternatives[1]:  # |p1 p2| candidates
        for d20 in step.alternatives[2]:  # |p2 p0| candidates
            if d12 <= 1e-9 or d20 <= 1e-9:
                continue
            try:
                hit = intersect_circle_circle(
                    CircleRep(anchor1, d20), CircleRep(anchor2, d12)
                )
            except (EmptyIntersectionError, CoincidentError) as exc:
                failure = failure or exc
                continue
            tangent = tangent or hit.tangent
            for p in _order_points(list(hit.points)):
                if not any(p.close_to(existing[p2]) for existing in options):
                    options.append({p2: p})
    if not options:
        raise failure or EmptyIntersectionError(
            f"no virtual-distance circles intersect to place {p2!r}"
        )
    return options, tangent


def _as_point(placements: Mapping[str, Placement], entity_id: str) -> Point2:
    placement = _placed(placements, entity_id)
    if not isinstance(placement, Point2):
        raise UnsupportedStepError(f"entity {entity_id!r} is not placed as a point")
    return placement


def _align_options(
    step: AlignCluster, placements: Mapping[str, Placement], g: ConstraintGraph
) -> tuple[list[dict[str, Placement]], bool]:
    """Glue a locally solved cluster onto its placed shared pair.

    Runs over the cluster's conformations and, per conformation, the motions
    mapping the local pair onto the placed pair; conformations whose pair
    geometry cannot match are skipped."""
    dst = (
        _placed(placements, step.shared[0]),
        _placed(placements, step.shared[1]),
    )
    outcomes: list[dict[str, Placement]] = []
    failure: GcsError | None = None
    for frozen in step.conformers:
        local = dict(frozen)
        unplaced = [e for e in local if e not in placements]
        if not unplaced:
            return [{}], False
        try:
            motions = alignment_motions((local[step.shared[0]], local[step.shared[1]]), dst)
        except (LengthMismatchError, CoincidentPointsError) as exc:
            failure = failure or exc
            continue
        for motion in motions:
            outcomes.append({e: motion.apply(local[e]) for e in unplaced})
    if not outcomes:
        raise failure or LengthMismatchError("no conformation aligns with the placed pair")
    return outcomes, False


def _options_for_step(
    step, placements: Mapping[str, Placement], g: ConstraintGraph
) -> tuple[list[dict[str, Placement]], bool]:
    if isinstance(step, PlaceByTwoLoci):
        kind = g.kind_of(step.target)
        if kind is EntityKind.POINT:
            return _place_point(step, placements, g)
        if kind is EntityKind.LINE:
            return _place_line(step, placements, g)
        raise UnsupportedStepError(f"cannot place a {kind.value} by two loci")
    if isinstance(step, TriangleMerge):
        return _triangle_options(step, placements, g)
    if isinstance(step, AlignCluster):
        return _align_options(step, placements, g)
    raise UnsupportedStepError(f"unknown plan step {type(step).__name__}")


# ------------------------------------------------------------------- execution


def execute(plan: Plan, g: ConstraintGraph, branches: Sequence[int] = ()) -> Solution:
    """Run a plan under one branch assignment.

    Selector entries pair up, in order, with the steps that expose two or more
    roots; missing entries default to 0.  Raises BadBranchError for an entry
    out of range or a selector longer than the number of branching steps.
    """
    selector = list(branches)
    placements = dict(base_placements(g, plan.base_constraint))
    chosen: list[int] = []
    degenerate: list[int] = []
    cursor = 0
    for i, step in enumerate(plan.steps):
        options, tangent = _options_for_step(step, placements, g)
        if tangent:
            degenerate.append(i)
        pick = 0
        if len(options) > 1:
            if cursor < len(selector):
                pick = selector[cursor]
            if not 0 <= pick < len(options):
                raise BadBranchError(
                    f"branch {pick} out of range for step {i} with {len(options)} roots"
                )
            cursor += 1
            chosen.append(pick)
        placements.update(options[pick])
    if cursor < len(selector):
        raise BadBranchError(
            f"selector has {len(selector)} entries but only {cursor} steps branch"
        )
    return Solution(placements, tuple(chosen), tuple(degenerate))


def _search(
    plan: Plan,
    g: ConstraintGraph,
    limit: int,
    tol: float | None,
) -> list[Solution]:
    """Depth-first branch enumeration, pruning failed prefixes.

    With ``tol`` set, only solutions whose residual check passes are kept.
    Raises the first recorded failure when nothing survives.
    """
    if limit < 1:
        raise BadBranchError(f"limit must be >= 1, got {limit}")
    results: list[Solution] = []
    first_error: list[GcsError] = []

    base = base_placements(g, plan.base_constraint)

    def note(exc: GcsError) -> None:
        if not first_error:
            first_error.append(exc)

    def dfs(i: int, placements: dict[str, Placement], chosen: list[int], degen: list[int]) -> None:
        if len(results) >= limit:
            return
        if i == len(plan.steps):
            sol = Solution(dict(placements), tuple(chosen), tuple(degen))
            if tol is not None:
                report = verify(g, sol, tol)
                if not report.passed:
                    note(VerificationError(f"residual {report.max_abs} exceeds {tol}"))
                    return
            results.append(sol)
            return
        try:
            options, tangent = _options_for_step(plan.steps[i], placements, g)
        except GcsError as exc:
            note(exc)
            return
        multi = len(options) > 1
        next_degen = degen + [i] if tangent else degen
        for b, outcome in enumerate(options):
            if len(results) >= limit:
                return
            merged = dict(placements)
            merged.update(outcome)
            dfs(i + 1, merged, chosen + [b] if multi else chosen, next_degen)

    dfs(0, dict(base), [], [])
    if not results:
        raise first_error[0] if first_error else VerificationError("no branch produced a solution")
    return results


def enumerate_solutions(
    plan: Plan, g: ConstraintGraph, limit: int = 16, tol: float = DEFAULT_TOL
) -> list[tuple[tuple[int, ...], Solution]]:
    """All verifying solutions (up to ``limit``) in deterministic branch order."""
    return [(sol.branches, sol) for sol in _search(plan, g, limit, tol)]


def local_solutions(
    plan: Plan, g: ConstraintGraph, owned: frozenset[int] | set[int], limit: int = 64
) -> list[dict[str, Placement]]:
    """Congruence-distinct local solutions of a cluster, for recombination.

    Every branch assignment satisfying the cluster's own constraints is
    collected, then deduplicated up to isometry (by a rounded pairwise
    invariant signature, since alignment later supplies the motion and the
    reflection anyway).  Non-degenerate conformations come first.
    """
    candidates = _search(plan, g, limit, tol=None)
    valid = [
        s for s in candidates
        if _max_residual(g, s.placements, owned) <= DEFAULT_TOL
    ]
    if not valid:
        raise VerificationError("no branch satisfies the cluster constraints")
    ordered = [s for s in valid if _is_generic(s.placements)]
    ordered += [s for s in valid if not _is_generic(s.placements)]
    conformers: list[dict[str, Placement]] = []
    signatures: set[tuple] = set()
    for sol in ordered:
        signature = _congruence_signature(sol.placements)
        if signature not in signatures:
            signatures.add(signature)
            conformers.append(dict(sol.placements))
    return conformers


def _congruence_signature(placements: Mapping[str, Placement]) -> tuple:
    """Isometry-invariant fingerprint: rounded pairwise measurements."""
    values: list[float] = []
    items = sorted(placements.items())
    for i, (_, a) in enumerate(items):
        if isinstance(a, CircleRep):
            values.append(a.r)
        for _, b in items[i + 1 :]:
            values.append(_pairwise_invariant(a, b))
    return tuple(round(v, 7) for v in values)


def _pairwise_invariant(a: Placement, b: Placement) -> float:
    if isinstance(a, Point2) and isinstance(b, Point2):
        return a.distance_to(b)
    if isinstance(a, LineRep) and isinstance(b, LineRep):
        return unsigned_line_angle(a, b)
    if isinstance(a, LineRep) and isinstance(b, (Point2, CircleRep)):
        return a.distance_to_point(b if isinstance(b, Point2) else b.center)
    if isinstance(b, LineRep):
        return b.distance_to_point(a if isinstance(a, Point2) else a.center)
    ca = a if isinstance(a, Point2) else a.center
    cb = b if isinstance(b, Point2) else b.center
    return ca.distance_to(cb)


def _is_generic(placements: Mapping[str, Placement]) -> bool:
    items = list(placements.items())
    for i, (_, a) in enumerate(items):
        for _, b in items[i + 1 :]:
            if isinstance(a, Point2) and isinstance(b, Point2) and a.close_to(b):
                return False
            if isinstance(a, LineRep) and isinstance(b, LineRep) and lines_close(a, b):
                return False
            if (
                isinstance(a, CircleRep)
                and isinstance(b, CircleRep)
                and a.center.close_to(b.center)
                and abs(a.r - b.r) <= 1e-9
            ):
                return False
    return True


# ------------------------------------------------------------------ residuals


def _constraint_residual(c: Constraint, placements: Mapping[str, Placement]) -> float:
    a = _placed(placements, c.between[0])
    b = _placed(placements, c.between[1])
    if c.kind is ConstraintKind.DISTANCE:
        return a.distance_to(b) - c.value
    if c.kind is ConstraintKind.ANGLE:
        return unsigned_line_angle(a, b) - fold_angle(c.value)
    if c.kind is ConstraintKind.POINT_LINE_DISTANCE:
        p, l = (a, b) if isinstance(a, Point2) else (b, a)
        return l.distance_to_point(p) - c.value
    if c.kind is ConstraintKind.INCIDENCE:
        p, locus = (a, b) if isinstance(a, Point2) else (b, a)
        if isinstance(locus, LineRep):
            return locus.signed_offset(p)
        return locus.center.distance_to(p) - locus.r
    # Tangency: signed distance to the nearest tangency configuration.
    if isinstance(a, LineRep) or isinstance(b, LineRep):
        l, k = (a, b) if isinstance(a, LineRep) else (b, a)
        return l.distance_to_point(k.center) - k.r
    d = a.center.distance_to(b.center)
    external = d - (a.r + b.r)
    internal = d - abs(a.r - b.r)
    return external if abs(external) <= abs(internal) else internal


def _max_residual(
    g: ConstraintGraph, placements: Mapping[str, Placement], indices
) -> float:
    worst = 0.0
    for i in sorted(indices):
        worst = max(worst, abs(_constraint_residual(g.constraints[i], placements)))
    return worst


def verify(g: ConstraintGraph, s: Solution, tol: float = DEFAULT_TOL) -> ResidualReport:
    """Measure every constraint against a solution's placements."""
    residuals = tuple(_constraint_residual(c, s.placements) for c in g.constraints)
    max_abs = max((abs(r) for r in residuals), default=0.0)
    return ResidualReport(residuals, max_abs, tol, max_abs <= tol)


# ------------------------------------------------------------------- JSON I/O


def placement_to_dict(p: Placement) -> dict:
    if isinstance(p, Point2):
        return {"point": [p.x, p.y]}
    if isinstance(p, LineRep):
        return {"line": {"theta": p.theta, "c": p.c}}
    return {"circle": {"center": [p.center.x, p.center.y], "r": p.r}}


def placement_from_dict(raw: object) -> Placement:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise ParseError(f"placement must be a one-key object, got {raw!r}")
    if "point" in raw:
        coords = raw["point"]
        if not (isinstance(coords, list) and len(coords) == 2):
            raise ParseError(f"point placement needs [x, y], got {coords!r}")
        return Point2(float(coords[0]), float(coords[1]))
    if "line" in raw:
        body = raw["line"]
        if not isinstance(body, dict) or "theta" not in body or "c" not in body:
            raise ParseError(f"line placement needs theta and c, got {body!r}")
        return LineRep(float(body["theta"]), float(body["c"]))
    if "circle" in raw:
        body = raw["circle"]
        try:
            cx, cy = body["center"]
            return CircleRep(Point2(float(cx), float(cy)), float(body["r"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"circle placement needs center and r, got {body!r}") from exc
    raise ParseError(f"unknown placement shape {sorted(raw)!r}")


def solution_to_dict(s: Solution) -> dict:
    return {
        "placements": {name: placement_to_dict(p) for name, p in s.placements.items()},
        "branches": list(s.branches),
        "degenerate_steps": list(s.degenerate_steps),
    }


def solution_from_dict(doc: object) -> Solution:
    if not isinstance(doc, dict) or not isinstance(doc.get("placements"), dict):
        raise ParseError("solution document needs a 'placements' object")
    placements = {
        str(name): placement_from_dict(raw) for name, raw in doc["placements"].items()
    }
    branches = tuple(int(b) for b in doc.get("branches", ()))
    degenerate = tuple(int(i) for i in doc.get("degenerate_steps", ()))
    return Solution(placements, branches, degenerate)
