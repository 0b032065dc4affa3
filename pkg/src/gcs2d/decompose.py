"""Bottom-up cluster decomposition, reducibility classes, and plan extraction.

Every constraint edge seeds a two-entity cluster.  Two rewrite rules then run
to a fixpoint under a deterministic ordering: a pair rule merges two clusters
sharing at least two entities, and a triangle rule merges three clusters that
pairwise share exactly one two-DOF entity each (three distinct entities in
total).  The triangle rule is restricted to two-DOF shared entities because a
shared free-radius circle would weld clusters into a non-rigid aggregate.

From a fully reduced graph a construction plan is extracted: the merge tree is
replayed with a preference for sequential placements (any still-unplaced
entity holding two constraints into the placed set), falling back to
recombination of independently solved clusters through virtual distances and
rigid alignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Union

from .errors import NotReducibleError, TooSmallError, UnsupportedStepError
from .geometry import Placement, Point2
from .graph import ConstraintGraph, EntityKind, dof
from .rigidity import Verdict, diagnose_pebble


# ------------------------------------------------------------------- clusters


@dataclass(frozen=True)
class Seed:
    constraint: int


@dataclass(frozen=True)
class MergeR1:
    parents: tuple[int, int, int]
    shared: tuple[str, str, str]


@dataclass(frozen=True)
class MergeR2:
    parents: tuple[int, int]
    shared: tuple[str, ...]


Provenance = Union[Seed, MergeR1, MergeR2]


@dataclass(frozen=True)
class Cluster:
    """A solvable sub-assembly: entity ids plus the constraints it owns."""

    id: int
    entity_ids: frozenset[str]
    owned_constraints: frozenset[int]
    provenance: Provenance

    @property
    def is_seed(self) -> bool:
        return isinstance(self.provenance, Seed)


@dataclass(frozen=True)
class MergeRecord:
    rule: str  # "R1" or "R2"
    new_cluster: int
    parents: tuple[int, ...]
    shared: tuple[str, ...]


class ReducibilityClass(Enum):
    FULLY_REDUCIBLE = "fully_reducible"
    PARTIALLY_REDUCIBLE = "partially_reducible"
    IRREDUCIBLE = "irreducible"


@dataclass(frozen=True)
class DecompositionResult:
    final_clusters: tuple[Cluster, ...]
    merge_log: tuple[MergeRecord, ...]
    reducibility: ReducibilityClass
    nontrivial_cluster_count: int
    all_clusters: tuple[Cluster, ...]


def seed_clusters(g: ConstraintGraph) -> list[Cluster]:
    """One elementary cluster per constraint: its two endpoints plus the edge."""
    return [
        Cluster(i, frozenset(c.between), frozenset({i}), Seed(i))
        for i, c in enumerate(g.constraints)
    ]


def _next_id(clusters: list[Cluster]) -> int:
    return max((c.id for c in clusters), default=-1) + 1


def merge_step(
    g: ConstraintGraph, clusters: list[Cluster]
) -> tuple[MergeRecord, list[Cluster]] | None:
    """Apply the first applicable merge rule, or return None at the fixpoint.

    The pair rule runs before the triangle rule; within each rule candidates
    are tried in lexicographic order of their sorted cluster ids, which makes
    the whole rewrite deterministic.
    """
    ordered = sorted(clusters, key=lambda c: c.id)
    fresh = _next_id(clusters)

    for a, b in combinations(ordered, 2):
        shared = a.entity_ids & b.entity_ids
        if len(shared) >= 2:
            merged = Cluster(
                fresh,
                a.entity_ids | b.entity_ids,
                a.owned_constraints | b.owned_constraints,
                MergeR2((a.id, b.id), tuple(sorted(shared))),
            )
            record = MergeRecord("R2", fresh, (a.id, b.id), tuple(sorted(shared)))
            rest = [c for c in ordered if c.id not in (a.id, b.id)]
            return record, rest + [merged]

    for a, b, c in combinations(ordered, 3):
        sab = a.entity_ids & b.entity_ids
        sbc = b.entity_ids & c.entity_ids
        sca = c.entity_ids & a.entity_ids
        if not (len(sab) == len(sbc) == len(sca) == 1):
            continue
        (x,), (y,), (z,) = sab, sbc, sca
        if len({x, y, z}) != 3:
            continue
        if any(dof(g.kind_of(v)) != 2 for v in (x, y, z)):
            continue  # a 3-DOF hinge entity would leave the union non-rigid
        merged = Cluster(
            fresh,
            a.entity_ids | b.entity_ids | c.entity_ids,
            a.owned_constraints | b.owned_constraints | c.owned_constraints,
            MergeR1((a.id, b.id, c.id), (x, y, z)),
        )
        record = MergeRecord("R1", fresh, (a.id, b.id, c.id), (x, y, z))
        rest = [k for k in ordered if k.id not in (a.id, b.id, c.id)]
        return record, rest + [merged]

    return None


def decompose(g: ConstraintGraph) -> DecompositionResult:
    """Run the merge rules to a fixpoint and classify the outcome."""
    if g.n < 2:
        raise TooSmallError(f"decomposition needs at least 2 entities, got {g.n}")
    clusters = seed_clusters(g)
    everything = list(clusters)
    log: list[MergeRecord] = []
    while True:
        step = merge_step(g, clusters)
        if step is None:
            break
        record, clusters = step
        everything.append(clusters[-1])
        log.append(record)

    final = tuple(sorted(clusters, key=lambda c: c.id))
    nontrivial = sum(1 for c in final if not c.is_seed)
    all_ids = set(g.entity_ids)
    if len(final) == 1 and final[0].entity_ids == all_ids:
        klass = ReducibilityClass.FULLY_REDUCIBLE
    elif not log and len(final) > 1:
        klass = ReducibilityClass.IRREDUCIBLE
    else:
        klass = ReducibilityClass.PARTIALLY_REDUCIBLE
    return DecompositionResult(final, tuple(log), klass, nontrivial, tuple(everything))


def classify(g: ConstraintGraph) -> ReducibilityClass:
    """Reducibility class of a graph (projection of :func:`decompose`)."""
    return decompose(g).reducibility


# ------------------------------------------------------------------ plan model


@dataclass(frozen=True)
class PlaceByTwoLoci:
    """Place ``target`` at an intersection of the loci induced by two
    constraints whose other endpoints are already placed."""

    target: str
    constraints: tuple[int, int]


Conformer = tuple[tuple[str, Placement], ...]


@dataclass(frozen=True)
class TriangleMerge:
    """Pin down three shared points through their pairwise virtual distances.

    ``distances`` holds the canonical (d01, d12, d20) for ``points``
    (p0, p1, p2); p0 and p1 belong to the already-placed base cluster.
    ``alternatives`` lists, per pair, every distance value the contributing
    cluster's internal conformations admit; the executor branches over them.
    """

    points: tuple[str, str, str]
    distances: tuple[float, float, float]
    alternatives: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]


@dataclass(frozen=True)
class AlignCluster:
    """Map a cluster solved in its own frame onto the shared pair.

    ``conformers`` holds one placement set per congruence-distinct local
    solution; the branch selector picks the conformation and the gluing side
    (conformers whose shared-pair geometry cannot match the placed pair are
    skipped at run time).
    """

    cluster: int
    shared: tuple[str, str]
    conformers: tuple[Conformer, ...]

    def local_placements(self) -> dict[str, Placement]:
        return dict(self.conformers[0])


PlanStep = Union[PlaceByTwoLoci, TriangleMerge, AlignCluster]


@dataclass(frozen=True)
class Plan:
    """Base seed placement plus ordered construction steps."""

    base_cluster: int
    base_constraint: int
    steps: tuple[PlanStep, ...]


def extract_plan(result: DecompositionResult, g: ConstraintGraph) -> Plan:
    """Turn a full decomposition into an executable construction plan.

    Requires a fully reducible, structurally well-constrained graph.  Each
    merge node is replayed: if every entity introduced by the merge can be
    placed sequentially from two constraints into the already-placed set, the
    node becomes PlaceByTwoLoci steps; otherwise the non-base clusters are
    solved in their own frames (every congruence-distinct conformation is
    kept) and recombined through a TriangleMerge over virtual distances plus
    rigid alignments.
    """
    from . import solve as _solve  # deferred: plan extraction replays sub-plans

    if result.reducibility is not ReducibilityClass.FULLY_REDUCIBLE:
        raise NotReducibleError(f"graph is {result.reducibility.value}")
    if diagnose_pebble(g).verdict is not Verdict.WELL_CONSTRAINED:
        raise NotReducibleError("plan extraction needs a well-constrained graph")

    by_id = {c.id: c for c in result.all_clusters}
    plans: dict[int, Plan] = {}
    locals_: dict[int, list[dict[str, Placement]]] = {}

    def local_conformers(cid: int) -> list[dict[str, Placement]]:
        if cid in locals_:
            return locals_[cid]
        cluster = by_id[cid]
        if cluster.is_seed:
            conformers = [_solve.base_placements(g, cluster.provenance.constraint)]
        else:
            conformers = _solve.local_solutions(plan_cluster(cid), g, cluster.owned_constraints)
        locals_[cid] = conformers
        return conformers

    def the_shared(a: Cluster, b: Cluster) -> str:
        (only,) = a.entity_ids & b.entity_ids
        return only

    def plan_cluster(cid: int) -> Plan:
        if cid in plans:
            return plans[cid]
        cluster = by_id[cid]
        if cluster.is_seed:
            plan = Plan(cid, cluster.provenance.constraint, ())
            plans[cid] = plan
            return plan

        children = [by_id[p] for p in cluster.provenance.parents]
        base_child = sorted(children, key=lambda c: (-len(c.entity_ids), c.id))[0]
        base_plan = plan_cluster(base_child.id)
        pool = sorted(cluster.owned_constraints - base_child.owned_constraints)

        # Sequential extension: place entities one at a time from two
        # constraints whose other endpoints are already placed.
        placed = set(base_child.entity_ids)
        used: set[int] = set()
        seq: list[PlanStep] = []
        while placed != set(cluster.entity_ids):
            for target in sorted(set(cluster.entity_ids) - placed):
                ready = [
                    i
                    for i in pool
                    if i not in used
                    and target in g.constraints[i].between
                    and next(e for e in g.constraints[i].between if e != target) in placed
                ]
                if len(ready) >= 2:
                    seq.append(PlaceByTwoLoci(target, (ready[0], ready[1])))
                    used.update(ready[:2])
                    placed.add(target)
                    break
            else:
                break
        if placed == set(cluster.entity_ids):
            plan = Plan(base_plan.base_cluster, base_plan.base_constraint,
                        base_plan.steps + tuple(seq))
            plans[cid] = plan
            return plan

        # Recombination of independently solved clusters.
        placed = set(base_child.entity_ids)
        steps: list[PlanStep] = []
        if isinstance(cluster.provenance, MergeR2):
            other = next(c for c in children if c.id != base_child.id)
            steps.append(_align_step(g, other, base_child.entity_ids & other.entity_ids,
                                     local_conformers(other.id)))
        else:
            others = sorted((c for c in children if c.id != base_child.id), key=lambda c: c.id)
            first, second = others
            u = the_shared(base_child, first)
            v = the_shared(base_child, second)
            w = the_shared(first, second)
            for shared_entity in (u, v, w):
                if g.kind_of(shared_entity) is not EntityKind.POINT:
                    raise UnsupportedStepError(
                        f"triangle recombination needs shared points, got "
                        f"{g.kind_of(shared_entity).value} {shared_entity!r}"
                    )
            base_conformers = local_conformers(base_child.id)
            first_conformers = local_conformers(first.id)
            second_conformers = local_conformers(second.id)
            alt_uv = _pair_distances(base_conformers, u, v)
            alt_vw = _pair_distances(second_conformers, v, w)
            alt_wu = _pair_distances(first_conformers, w, u)
            steps.append(
                TriangleMerge(
                    (u, v, w),
                    (alt_uv[0], alt_vw[0], alt_wu[0]),
                    (alt_uv, alt_vw, alt_wu),
                )
            )
            placed.add(w)
            for child, pair, conformers in (
                (first, (u, w), first_conformers),
                (second, (v, w), second_conformers),
            ):
                if child.entity_ids <= placed:
                    continue
                steps.append(_align_step(g, child, set(pair), conformers))
                placed |= child.entity_ids

        plan = Plan(base_plan.base_cluster, base_plan.base_constraint,
                    base_plan.steps + tuple(steps))
        plans[cid] = plan
        return plan

    root = result.final_clusters[0]
    return plan_cluster(root.id)


def _point(placements: dict[str, Placement], entity_id: str) -> Point2:
    placement = placements[entity_id]
    assert isinstance(placement, Point2)
    return placement


def _pair_distances(
    conformers: list[dict[str, Placement]], a: str, b: str
) -> tuple[float, ...]:
    """Distinct |ab| values across conformations, in conformer order."""
    values: list[float] = []
    for conformer in conformers:
        d = _point(conformer, a).distance_to(_point(conformer, b))
        if not any(abs(d - seen) <= 1e-9 for seen in values):
            values.append(d)
    return tuple(values)


def _align_step(
    g: ConstraintGraph,
    cluster: Cluster,
    shared: set[str],
    conformers: list[dict[str, Placement]],
) -> AlignCluster:
    def rank(entity_id: str) -> tuple[int, str]:
        return (0 if g.kind_of(entity_id) is EntityKind.POINT else 1, entity_id)

    ordered = sorted(shared, key=rank)
    first, second = ordered[0], ordered[1]
    kinds = (g.kind_of(first), g.kind_of(second))
    if kinds[0] is not EntityKind.POINT or kinds[1] not in (EntityKind.POINT, EntityKind.LINE):
        raise UnsupportedStepError(
            f"alignment over shared pair of kinds "
            f"({kinds[0].value}, {kinds[1].value}) is not supported"
        )
    frozen = tuple(tuple(sorted(c.items())) for c in conformers)
    return AlignCluster(cluster.id, (first, second), frozen)


# --------------------------------------------------------------- JSON mirrors


def cluster_to_dict(c: Cluster) -> dict:
    out: dict = {
        "id": c.id,
        "entities": sorted(c.entity_ids),
        "constraints": sorted(c.owned_constraints),
        "seed": c.is_seed,
    }
    return out


def decomposition_to_dict(result: DecompositionResult) -> dict:
    return {
        "class": result.reducibility.value,
        "nontrivial_cluster_count": result.nontrivial_cluster_count,
        "final_clusters": [cluster_to_dict(c) for c in result.final_clusters],
        "merge_log": [
            {
                "rule": r.rule,
                "new_cluster": r.new_cluster,
                "parents": list(r.parents),
                "shared": list(r.shared),
            }
            for r in result.merge_log
        ],
    }


def plan_to_dict(plan: Plan, g: ConstraintGraph) -> dict:
    from . import solve as _solve

    steps: list[dict] = []
    for step in plan.steps:
        if isinstance(step, PlaceByTwoLoci):
            steps.append(
                {"type": "place_by_two_loci", "target": step.target,
                 "constraints": list(step.constraints)}
            )
        elif isinstance(step, TriangleMerge):
            steps.append(
                {"type": "triangle_merge", "points": list(step.points),
                 "distances": list(step.distances),
                 "distance_alternatives": [list(a) for a in step.alternatives]}
            )
        else:
            steps.append(
                {
                    "type": "align_cluster",
                    "cluster": step.cluster,
                    "shared": list(step.shared),
                    "conformers": [
                        {name: _solve.placement_to_dict(p) for name, p in conformer}
                        for conformer in step.conformers
                    ],
                }
            )
    return {
        "base": {
            "cluster": plan.base_cluster,
            "constraint": plan.base_constraint,
            "between": list(g.constraints[plan.base_constraint].between),
        },
        "steps": steps,
    }
