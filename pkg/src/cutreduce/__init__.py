"""cutreduce: shrink MaxCut/QUBO instances by iterated vertex-cut
reweighting, evaluate the results with single-layer QAOA."""

from .cutset import CutPartition, choose_cut, min_vertex_cut, neighborhood_cut, split_components
from .decompose import (
    DecompConfig,
    DecompositionTrace,
    IterationRecord,
    decompose,
    lift_solution,
    reduction_bound_check,
    replay_states,
    trace_from_json,
    trace_to_json,
)
from .errors import (
    CutReduceError,
    GenerationError,
    InputError,
    LiftError,
    NoCutError,
    NotACutError,
    ResourceError,
)
from .generate import generate_regular
from .graphs import WeightedGraph, induced_subgraph, read_graph, write_graph
from .qaoa import (
    ExpectationBreakdown,
    QaoaParams,
    SolveReport,
    expectation_p1,
    optimize_params,
    report,
    sample,
    statevector,
)
from .qubo import (
    IsingInstance,
    QuboInstance,
    RestrictedInstance,
    Restriction,
    evaluate,
    evaluate_all,
    induced_instance,
    ising_to_qubo,
    maxcut_to_qubo,
    qubo_to_ising,
    read_qubo,
    restrict,
    write_qubo,
)
from .reweight import (
    MODE_CUTFORM,
    MODE_PRODUCT,
    ReweightResult,
    apply_reweight,
    build_rows,
    reweight,
    solve_exact,
    solve_lp,
)
from .subsolver import (
    BackendChoice,
    SubproblemTable,
    TableRow,
    build_table,
    exact_optimum,
    qaoa_heuristic_value,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
