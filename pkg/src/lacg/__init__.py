"""Locally accelerated conditional gradients over polytopes.

Couples an away-step conditional-gradient sequence with a restarted
accelerated sequence that projects onto the convex hull of the active set,
so convergence is never worse than the CG baseline and becomes accelerated
once the active set captures the optimal face. Ships the linear
minimization oracles, simplex projection machinery, baselines, and a
benchmark harness with CSV telemetry.
"""

from .accel import (
    AccState,
    WarmupState,
    acc_step,
    accel_wolfe_gap,
    contraction_parameter,
    min_restart_period,
    warmup_iteration,
)
from .cg import ActiveSet, CGStepReport, afw_iteration, fw_step, pfw_iteration, step_size, wolfe_gap_at
from .coupling import LacgConfig, LacgState, cull_active_set, lacg_iteration, run_lacg
from .harness import (
    ALGORITHMS,
    GENERATORS,
    Instance,
    build_instance,
    compare,
    compute_reference,
    dump_instance,
    load_instance,
    run_active_set_cg,
    run_fw,
    run_muagd_fixed,
    run_warmup,
    solve,
)
from .objectives import (
    QuadraticObjective,
    generate_sparse_gram_quadratic,
    generate_spectrum_quadratic,
)
from .polytopes import Birkhoff, L1Ball, LayeredDAG, Simplex, Vertex, layered_flow_graph
from .projection import (
    HullSolution,
    HullSubproblem,
    VertexHull,
    project_simplex,
    solve_hull_subproblem,
    solve_hull_subproblem_simplex_fastpath,
)
from .trace import RunResult, TraceRow

__all__ = [
    "AccState",
    "ActiveSet",
    "ALGORITHMS",
    "Birkhoff",
    "CGStepReport",
    "GENERATORS",
    "HullSolution",
    "HullSubproblem",
    "Instance",
    "L1Ball",
    "LacgConfig",
    "LacgState",
    "LayeredDAG",
    "QuadraticObjective",
    "RunResult",
    "Simplex",
    "TraceRow",
    "Vertex",
    "VertexHull",
    "WarmupState",
    "acc_step",
    "accel_wolfe_gap",
    "afw_iteration",
    "build_instance",
    "compare",
    "compute_reference",
    "contraction_parameter",
    "cull_active_set",
    "dump_instance",
    "fw_step",
    "generate_sparse_gram_quadratic",
    "generate_spectrum_quadratic",
    "lacg_iteration",
    "layered_flow_graph",
    "load_instance",
    "min_restart_period",
    "pfw_iteration",
    "project_simplex",
    "run_active_set_cg",
    "run_fw",
    "run_lacg",
    "run_muagd_fixed",
    "run_warmup",
    "solve",
    "solve_hull_subproblem",
    "solve_hull_subproblem_simplex_fastpath",
    "step_size",
    "warmup_iteration",
    "wolfe_gap_at",
]
