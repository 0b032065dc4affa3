"""2D geometric constraint graphs: structural rigidity diagnosis, minimally
rigid graph generation, bottom-up cluster decomposition, and numeric
ruler-and-compass construction with branch enumeration."""

from .decompose import (
    AlignCluster,
    Cluster,
    DecompositionResult,
    MergeRecord,
    Plan,
    PlaceByTwoLoci,
    ReducibilityClass,
    TriangleMerge,
    classify,
    decompose,
    extract_plan,
    merge_step,
    seed_clusters,
)
from .errors import (
    BadBranchError,
    BadValueError,
    CoincidentError,
    CoincidentPointsError,
    DuplicateIdError,
    EmptyIntersectionError,
    GcsError,
    KindMismatchError,
    LengthMismatchError,
    MissingEdgeError,
    MissingPlacementError,
    NotReducibleError,
    ParallelError,
    ParseError,
    SelfLoopError,
    TooSmallError,
    UnderDeterminedError,
    UnknownEndpointError,
    UnknownFixtureError,
    UnsupportedStepError,
    VerificationError,
)
from .geometry import (
    CircleRep,
    Intersection,
    LineRep,
    Motion,
    Placement,
    Point2,
    alignment_motions,
    apply_motion,
    fold_angle,
    intersect_circle_circle,
    intersect_line_circle,
    intersect_line_line,
    line_through_point_angle,
    line_through_points,
    lines_close,
    rigid_align,
    unsigned_line_angle,
)
from .graph import (
    Constraint,
    ConstraintGraph,
    ConstraintKind,
    Entity,
    EntityKind,
    angle,
    build_graph,
    deficiency,
    distance,
    dof,
    fixed_circle,
    free_circle,
    incidence,
    induced_subgraph,
    line,
    parse,
    point,
    point_line_distance,
    serialize,
    tangency,
)
from .henneberg import (
    H1,
    H2,
    HennebergSequence,
    extend_h1,
    extend_h2,
    fixture,
    fixture_names,
    random_laman,
    reduction_sequence,
    replay_sequence,
)
from .render import to_dot, to_svg
from .rigidity import (
    Diagnosis,
    Verdict,
    diagnose_counting,
    diagnose_pebble,
    is_laman,
    overconstrained_witness,
)
from .solve import (
    ResidualReport,
    Solution,
    enumerate_solutions,
    execute,
    solution_from_dict,
    solution_to_dict,
    verify,
)

__version__ = "0.1.0"
