"""Weather-category forecasting from pollutant readings with incremental K-means."""

from .clustering import (
    Assignment,
    Centroid,
    ClusterModel,
    DistanceMetric,
    FitResult,
    InitStrategy,
    assign_point,
    distance,
    init_centroids,
    lloyd_fit,
    update_centroids,
)
from .evaluation import EvaluationReport, GroundTruth, accuracy, evaluate
from .incremental import (
    InsertionLog,
    InsertionMode,
    compare_with_refit,
    incremental_insert,
    insert_stream,
)
from .ingestion import (
    AttributeSchema,
    DataFormatError,
    Dataset,
    PollutantRecord,
    generate_synthetic,
    parse_arff,
    parse_csv,
    resolve_missing,
    write_csv,
)
from .kernels import BACKEND
from .labeling import Forecast, WeatherCategory, forecast, label_clusters, label_pooled_clusters

__version__ = "0.1.0"
