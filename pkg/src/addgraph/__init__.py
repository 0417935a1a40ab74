"""Random graph ensembles with the additive degree kernel."""

from ._backend import BACKEND
from .analytic import (
    AnalyticPrediction,
    predict,
    predict_clustering_of_k,
    predict_expected_degree,
    predict_expected_triangles_at,
    predict_knn,
    predict_knn_sum,
    predict_mean_clustering,
    predict_r,
    predict_r_from_sums,
)
from .degseq import (
    DegreeSequence,
    PowerLawParams,
    from_list,
    read_sequence,
    regular_sequence,
    sample_poisson,
    sample_power_law,
    write_sequence,
)
from .ensemble import (
    DegreeSpectrum,
    EnsembleSummary,
    fit_linear,
    fit_power_slope,
    merge_summaries,
    run_ensemble,
)
from .errors import (
    IncompatibleSummaries,
    InfeasiblePair,
    InsufficientData,
    InvalidParams,
    NoEligibleVertices,
    ParameterMismatch,
    SequenceParseError,
)
from .generator import Graph, expected_edge_total, generate, read_edgelist, write_edgelist
from .kernel import (
    Additive,
    ChungLu,
    ClampPolicy,
    ClampReport,
    Constant,
    kernel_for_sequence,
    pair_prob,
    validate_feasibility,
)
from .metrics import VertexMetrics, assortativity, mean_clustering, vertex_metrics

__version__ = "0.1.0"
