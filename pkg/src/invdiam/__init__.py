"""Exact and constructive toolkit for bounded-set inversion distances of
oriented graphs: an exhaustive Cayley-BFS oracle, plan-emitting procedures
matching the proven upper bounds, machine-checkable lower-bound
certificates, and generators for the tight families."""

from .core import (
    EdgeMask,
    HostMismatchError,
    InversionPlan,
    LabelledGraph,
    Orientation,
    PlanCheck,
    apply_plan,
    build_graph,
    disagreement,
    inversion_mask,
    verify_plan,
)
from .oracle import (
    BudgetExceeded,
    GeneratorSet,
    OracleResult,
    converse_number,
    diameter,
    distance,
    generator_masks,
    oracle_profile,
)
from .decompositions import (
    ExtractedSet,
    Good5Witness,
    PathDecomposition,
    StrongColouring,
    degeneracy_ordering,
    find_good5,
    find_induced_matching,
    greedy_triangle_packing,
    kotzig_p3,
    min_triangle_transversal,
    strong_edge_colouring,
    tree4_decomposition,
    tree_extract_set,
)
from .procedures import (
    PlannerReport,
    PlanningError,
    best_plan,
    compose_subgraph_then_induced,
    conv_plan_tree,
    lift_conv_to_id,
    plan_connected3,
    plan_degenerate,
    plan_planar_general,
    plan_planar_small,
    plan_procedure1,
    plan_uppergen,
    planner_reports,
)
from .bounds import (
    LowerBoundReport,
    WeightCertificate,
    audit_spider5_plan,
    check_weight_certificate,
    lb_odd_degree,
    lb_tree5_spider,
    lb_uniform,
    lower_bound,
    verify_weight_certificate,
)
from .families import generate
from .corpus import CorpusSpec, RunReport, run_corpus

__version__ = "0.1.0"
