"""polarscope: quantify user polarization from community-tagged interaction logs.

The pipeline: ingest a log of user-source interactions for a two-community
debate, reduce each user to interpretable factors (opinion lean plus one
attention-spread factor per community), sharpen them with a contrast
transform, cluster with weighted k-means under index-driven model selection,
and, over sliding time windows, classify frames into structural types and
segment the debate's history into periods.
"""

from .errors import (
    DataError,
    DegenerateAnalysisError,
    PolarscopeError,
    UsageError,
)
from .ingest import (
    SCHEMA_VERSION,
    CommunitySpec,
    Dataset,
    DebateConfig,
    InteractionKind,
    InteractionRecord,
    LoadReport,
    active_users,
    filter_by_range,
    format_timestamp,
    load_config,
    load_dataset,
    parse_timespan,
    parse_timestamp,
    save_config,
    save_dataset,
)
from .factors import (
    FeatureVector,
    PolarizationVector,
    factor_vector,
    factor_vectors,
    feature_matrix,
    featurize,
    normalized_entropy,
    opinion_factor,
    source_factor,
    transform,
)
from .clustering import (
    ClusterModel,
    ClusterParams,
    HyperGrid,
    TuneResult,
    adjusted_rand_index,
    davies_bouldin,
    default_grid,
    kmeans,
    select_k,
    silhouette,
    tune_hyperparams,
)
from .timeline import (
    FrameAnalysis,
    Timeframe,
    analyze_frame,
    analyze_frames,
    make_frames,
)
from .periods import (
    BehavioralLabel,
    ConvergenceTrend,
    FlowMatrix,
    LabelThresholds,
    Period,
    PeriodType,
    classify_analyses,
    classify_frame,
    convergence_trend,
    flow_matrix,
    label_clusters,
    sankey_payload,
    segment_periods,
)
from .synth import (
    Archetype,
    GroundTruth,
    MixMorph,
    Reassign,
    Scenario,
    SourceProfile,
    generate,
    generate_scenario,
    load_scenario,
    preset,
    preset_names,
    scenario_from_dict,
    scenario_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "SCHEMA_VERSION",
    "__version__",
    # errors
    "PolarscopeError",
    "UsageError",
    "DataError",
    "DegenerateAnalysisError",
    # ingest
    "InteractionKind",
    "InteractionRecord",
    "CommunitySpec",
    "DebateConfig",
    "LoadReport",
    "Dataset",
    "load_config",
    "save_config",
    "load_dataset",
    "save_dataset",
    "parse_timestamp",
    "parse_timespan",
    "format_timestamp",
    "filter_by_range",
    "active_users",
    # factors
    "normalized_entropy",
    "opinion_factor",
    "source_factor",
    "transform",
    "featurize",
    "feature_matrix",
    "factor_vector",
    "factor_vectors",
    "PolarizationVector",
    "FeatureVector",
    # clustering
    "ClusterParams",
    "ClusterModel",
    "kmeans",
    "select_k",
    "silhouette",
    "davies_bouldin",
    "HyperGrid",
    "TuneResult",
    "default_grid",
    "tune_hyperparams",
    "adjusted_rand_index",
    # timeline
    "Timeframe",
    "make_frames",
    "FrameAnalysis",
    "analyze_frame",
    "analyze_frames",
    # periods
    "BehavioralLabel",
    "PeriodType",
    "LabelThresholds",
    "label_clusters",
    "classify_frame",
    "classify_analyses",
    "Period",
    "segment_periods",
    "FlowMatrix",
    "flow_matrix",
    "ConvergenceTrend",
    "convergence_trend",
    "sankey_payload",
    # synth
    "SourceProfile",
    "Archetype",
    "MixMorph",
    "Reassign",
    "Scenario",
    "GroundTruth",
    "generate",
    "generate_scenario",
    "preset",
    "preset_names",
    "scenario_from_dict",
    "scenario_to_dict",
]
