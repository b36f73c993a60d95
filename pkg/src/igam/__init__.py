"""Core-periphery network toolkit.

Generates influencer-guided attachment networks and their variants, fits
the hierarchy model to edge lists, builds almost-dominating sets by greedy
coverage and by prestige, and benchmarks against three logistic
core-periphery baselines.
"""

from .graph import (
    Graph,
    GraphError,
    MalformedInputError,
    DisconnectedGraphError,
    UnsupportedOperationError,
    InvalidCutError,
    from_edge_list,
    parse_edge_list,
    read_edge_list,
    write_edge_list,
    giant_component,
    diameter,
    count_triangles,
    count_two_paths,
    gcc,
    paper_ratio,
    conductance,
)
from .models import (
    IgamParams,
    Igam2Params,
    DeltaIgamParams,
    HeightAssignment,
    ModelError,
    full_tree_node_count,
    sample_igam,
    sample_igam2,
    sample_directed_igam,
    sample_continuous_heights,
    sample_continuous_igam,
)
from .domination import (
    NodeRanking,
    DominationCurve,
    CoverageNotReached,
    dominated_count,
    greedy_max_coverage,
    prestige_ranking,
    ranking_from_scores,
    domination_curve,
    ads_exponent,
    parity_regression,
    brute_force_min_dominating_set,
)
from .fitting import (
    FitResult,
    FanoutRejected,
    FitFailedError,
    sample_degrees,
    assign_heights,
    level_regression,
    c_from_slope,
    log_likelihood_exact,
    log_likelihood_approx,
    fit,
    swap_refinement,
)
from .logistic import (
    CorenessScores,
    RankScores,
    ConvergenceError,
    SingularKernelError,
    logistic_cp_prob,
    logistic_jb_prob,
    logistic_th_prob,
    fit_logistic_cp,
    fit_logistic_jb,
    th_rank_scores,
)
from .estimators import (
    as_graph,
    IgamHierarchyEstimator,
    LogisticCorePeriphery,
    SpatialLogisticCorePeriphery,
    NonlinearCorenessRanker,
)
from .datasets import (
    DatasetSpec,
    DatasetMismatchWarning,
    EmptyGraphError,
    REGISTRY,
    preprocess,
    load_dataset,
    core_labels_report,
)

__version__ = "0.1.0"
