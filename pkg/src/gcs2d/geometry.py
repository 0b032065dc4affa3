"""Ruler-and-compass primitives: the three intersection cases plus rigid motions.

Lines use the normal form {p : p . (cos t, sin t) = c} with t in [0, pi).
Two tolerance tiers apply throughout: EPS (1e-9) separates tangent, empty and
transversal configurations, while returned points satisfy their defining
equations to roughly 1e-12 relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import (
    BadValueError,
    CoincidentError,
    CoincidentPointsError,
    EmptyIntersectionError,
    LengthMismatchError,
    ParallelError,
)

EPS = 1e-9


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def close_to(self, other: "Point2", tol: float = EPS) -> bool:
        return self.distance_to(other) <= tol


@dataclass(frozen=True)
class LineRep:
    """Line in normal form; theta is folded into [0, pi) on construction."""

    theta: float
    c: float

    def __post_init__(self):
        t, c = self.theta, self.c
        k = math.floor(t / math.pi)
        t -= k * math.pi
        if t >= math.pi:  # guard against rounding at the fold boundary
            t -= math.pi
            k += 1
        if k % 2:
            c = -c
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "c", c)

    @property
    def normal(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))

    @property
    def direction(self) -> tuple[float, float]:
        return (-math.sin(self.theta), math.cos(self.theta))

    def signed_offset(self, p: Point2) -> float:
        nx, ny = self.normal
        return nx * p.x + ny * p.y - self.c

    def distance_to_point(self, p: Point2) -> float:
        return abs(self.signed_offset(p))

    def foot_of(self, p: Point2) -> Point2:
        s = self.signed_offset(p)
        nx, ny = self.normal
        return Point2(p.x - s * nx, p.y - s * ny)


@dataclass(frozen=True)
class CircleRep:
    center: Point2
    r: float

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r <= 0:
            raise BadValueError(f"circle radius must be finite and > 0, got {self.r}")


Placement = Union[Point2, LineRep, CircleRep]


@dataclass(frozen=True)
class Motion:
    """Isometry applied as reflection (across the x axis, if set), then
    rotation, then translation."""

    reflect: bool
    rotation: float
    translation: tuple[float, float]

    def apply_point(self, p: Point2) -> Point2:
        x, y = p.x, p.y
        if self.reflect:
            y = -y
        cos_r, sin_r = math.cos(self.rotation), math.sin(self.rotation)
        tx, ty = self.translation
        return Point2(cos_r * x - sin_r * y + tx, sin_r * x + cos_r * y + ty)

    def apply_line(self, l: LineRep) -> LineRep:
        nx, ny = l.normal
        if self.reflect:
            ny = -ny
        cos_r, sin_r = math.cos(self.rotation), math.sin(self.rotation)
        mx = cos_r * nx - sin_r * ny
        my = sin_r * nx + cos_r * ny
        tx, ty = self.translation
        c = l.c + tx * mx + ty * my
        return LineRep(math.atan2(my, mx), c)

    def apply_circle(self, k: CircleRep) -> CircleRep:
        return CircleRep(self.apply_point(k.center), k.r)

    def apply(self, placement: Placement) -> Placement:
        if isinstance(placement, Point2):
            return self.apply_point(placement)
        if isinstance(placement, LineRep):
            return self.apply_line(placement)
        return self.apply_circle(placement)


IDENTITY_MOTION = Motion(reflect=False, rotation=0.0, translation=(0.0, 0.0))


@dataclass(frozen=True)
class Intersection:
    """Result of a quadratic intersection; ``tangent`` marks a double root."""

    points: tuple[Point2, ...]
    tangent: bool = False


def unsigned_line_angle(l1: LineRep, l2: LineRep) -> float:
    """Unsigned angle between two lines, folded into [0, pi/2]."""
    d = abs(l1.theta - l2.theta)
    return min(d, math.pi - d)


def fold_angle(alpha: float) -> float:
    """Fold any angle to the unsigned line-angle convention in [0, pi/2]."""
    a = math.fmod(alpha, math.pi)
    if a < 0:
        a += math.pi
    return min(a, math.pi - a)


def lines_close(l1: LineRep, l2: LineRep, tol: float = EPS) -> bool:
    """True when the two normal forms describe the same line within ``tol``."""
    d = abs(l1.theta - l2.theta)
    if d <= tol:
        return abs(l1.c - l2.c) <= tol
    if math.pi - d <= tol:  # normals nearly opposite across the fold
        return abs(l1.c + l2.c) <= tol
    return False


def intersect_line_line(l1: LineRep, l2: LineRep, eps: float = EPS) -> Point2:
    """Unique intersection of two non-parallel lines.

    Raises ParallelError when |sin(t1 - t2)| <= eps (coincident included).
    """
    det = math.sin(l2.theta - l1.theta)
    if abs(det) <= eps:
        raise ParallelError("lines are parallel within tolerance")
    n1x, n1y = l1.normal
    n2x, n2y = l2.normal
    x = (l1.c * n2y - l2.c * n1y) / det
    y = (l2.c * n1x - l1.c * n2x) / det
    return Point2(x, y)


def intersect_line_circle(l: LineRep, k: CircleRep, eps: float = EPS) -> Intersection:
    """One (tangent) or two points common to a line and a circle."""
    s = l.signed_offset(k.center)
    gap = abs(s) - k.r
    foot = Point2(k.center.x - s * l.normal[0], k.center.y - s * l.normal[1])
    if abs(gap) <= eps:
        return Intersection((foot,), tangent=True)
    if gap > 0:
        raise EmptyIntersectionError("line misses the circle")
    h = math.sqrt(k.r * k.r - s * s)
    dx, dy = l.direction
    return Intersection(
        (Point2(foot.x + h * dx, foot.y + h * dy), Point2(foot.x - h * dx, foot.y - h * dy))
    )


def intersect_circle_circle(k1: CircleRep, k2: CircleRep, eps: float = EPS) -> Intersection:
    """One (tangent) or two points common to two circles.

    Raises CoincidentError for identical circles and EmptyIntersectionError
    for disjoint or nested ones.
    """
    d = k1.center.distance_to(k2.center)
    if d <= eps:
        if abs(k1.r - k2.r) <= eps:
            raise CoincidentError("circles coincide")
        raise EmptyIntersectionError("concentric circles with different radii")
    outer = d - (k1.r + k2.r)
    inner = d - abs(k1.r - k2.r)
    tangent = abs(outer) <= eps or abs(inner) <= eps
    if not tangent and (outer > 0 or inner < 0):
        raise EmptyIntersectionError("circles do not intersect")
    a = (d * d + k1.r * k1.r - k2.r * k2.r) / (2.0 * d)
    ux = (k2.center.x - k1.center.x) / d
    uy = (k2.center.y - k1.center.y) / d
    base = Point2(k1.center.x + a * ux, k1.center.y + a * uy)
    if tangent:
        return Intersection((base,), tangent=True)
    h = math.sqrt(max(k1.r * k1.r - a * a, 0.0))
    return Intersection(
        (Point2(base.x - h * uy, base.y + h * ux), Point2(base.x + h * uy, base.y - h * ux))
    )


def line_through_points(p: Point2, q: Point2, eps: float = EPS) -> LineRep:
    """The line through two distinct points."""
    if p.distance_to(q) <= eps:
        raise CoincidentPointsError("cannot draw a line through coincident points")
    dx, dy = q.x - p.x, q.y - p.y
    theta = math.atan2(dx, -dy)  # normal is the direction rotated by -90 degrees
    l = LineRep(theta, 0.0)
    nx, ny = l.normal
    return LineRep(l.theta, nx * p.x + ny * p.y)


def line_through_point_angle(p: Point2, ref: LineRep, alpha: float, branch: int = 0) -> LineRep:
    """Line through ``p`` meeting ``ref`` at unsigned angle ``alpha``.

    ``branch`` 0 rotates the reference direction by +alpha, 1 by -alpha.
    """
    if not 0 < alpha < math.pi:
        raise BadValueError(f"angle must lie in (0, pi), got {alpha}")
    if branch not in (0, 1):
        raise BadValueError(f"branch must be 0 or 1, got {branch}")
    theta = ref.theta + alpha if branch == 0 else ref.theta - alpha
    l = LineRep(theta, 0.0)
    nx, ny = l.normal
    return LineRep(l.theta, nx * p.x + ny * p.y)


def rigid_align(
    src: tuple[Point2, Point2],
    dst: tuple[Point2, Point2],
    reflect: bool = False,
    rel_tol: float = 1e-9,
) -> Motion:
    """Motion mapping src[0] -> dst[0] and src[1] -> dst[1].

    The two segments must have equal length within ``rel_tol`` relative to the
    destination length; orientation is flipped iff ``reflect``.
    """
    s1, s2 = src
    d1, d2 = dst
    ls = s1.distance_to(s2)
    ld = d1.distance_to(d2)
    if ls <= EPS or ld <= EPS:
        raise CoincidentPointsError("alignment needs two distinct points on each side")
    if abs(ls - ld) > rel_tol * max(1.0, ld):
        raise LengthMismatchError(f"segment lengths differ: {ls} vs {ld}")
    sx, sy = s1.x, s1.y
    vx, vy = s2.x - s1.x, s2.y - s1.y
    if reflect:
        sy, vy = -sy, -vy
    rotation = math.atan2(d2.y - d1.y, d2.x - d1.x) - math.atan2(vy, vx)
    cos_r, sin_r = math.cos(rotation), math.sin(rotation)
    tx = d1.x - (cos_r * sx - sin_r * sy)
    ty = d1.y - (sin_r * sx + cos_r * sy)
    return Motion(reflect=reflect, rotation=rotation, translation=(tx, ty))


def alignment_motions(
    src: tuple[Placement, Placement],
    dst: tuple[Placement, Placement],
    tol: float = EPS,
) -> list[Motion]:
    """All isometries mapping the source pair onto the destination pair.

    Supports (point, point) pairs, which admit a direct and a reflected
    motion, and (point, line) pairs, which admit two motions generically and
    four when the point lies on the line.  Candidates come back in a fixed
    order (direct motions before reflected ones).
    """
    if isinstance(src[0], Point2) and isinstance(src[1], Point2):
        if not (isinstance(dst[0], Point2) and isinstance(dst[1], Point2)):
            raise LengthMismatchError("pair kinds differ between source and destination")
        return [rigid_align(src, dst, reflect=False), rigid_align(src, dst, reflect=True)]

    # Normalise to (point, line) order on both sides.
    def split(pair):
        a, b = pair
        if isinstance(a, Point2) and isinstance(b, LineRep):
            return a, b
        if isinstance(a, LineRep) and isinstance(b, Point2):
            return b, a
        raise LengthMismatchError("alignment supports (point,point) and (point,line) pairs only")

    ps, ls = split(src)
    pd, ld = split(dst)
    offs, offd = abs(ls.signed_offset(ps)), abs(ld.signed_offset(pd))
    if abs(offs - offd) > max(tol, 1e-9 * max(1.0, offd)):
        raise LengthMismatchError(f"point-line distances differ: {offs} vs {offd}")

    candidates: list[Motion] = []
    for reflect in (False, True):
        theta_s = -ls.theta if reflect else ls.theta
        for phi in (ld.theta - theta_s, ld.theta - theta_s + math.pi):
            cos_r, sin_r = math.cos(phi), math.sin(phi)
            px, py = ps.x, (-ps.y if reflect else ps.y)
            tx = pd.x - (cos_r * px - sin_r * py)
            ty = pd.y - (sin_r * px + cos_r * py)
            motion = Motion(reflect=reflect, rotation=phi, translation=(tx, ty))
            if lines_close(motion.apply_line(ls), ld, max(tol, 1e-7)):
                candidates.append(motion)
    if not candidates:
        raise LengthMismatchError("no motion maps the source pair onto the destination pair")
    return candidates


def apply_motion(motion: Motion, placements: Mapping[str, Placement]) -> dict[str, Placement]:
    """Apply one motion to every placement in a solution fragment."""
    return {name: motion.apply(p) for name, p in placements.items()}
