from .features import (extract_features, feature_name, feature_names,
                       log_feature_grid, validate_feature_grid)
from .sampling import (GFL_INTERVALS, GFM_INTERVALS, OP_RANGES, SamplingSpec,
                       sample_operating_point, sample_parameters)
from .dataset import (Dataset, GenerationReport, Sample, generate_dataset,
                      read_dataset, write_dataset)

__all__ = [
    "extract_features", "feature_name", "feature_names", "log_feature_grid",
    "validate_feature_grid",
    "GFL_INTERVALS", "GFM_INTERVALS", "OP_RANGES", "SamplingSpec",
    "sample_operating_point", "sample_parameters",
    "Dataset", "GenerationReport", "Sample", "generate_dataset",
    "read_dataset", "write_dataset",
]
