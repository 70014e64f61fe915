"""Linear-probing benchmark harness for music structure analysis.

Trains a single linear layer on pre-extracted audio-encoder features to
predict section boundaries and seven section-function classes, post-
processes with peak picking, and scores with the four standard structure
metrics under deterministic k-fold cross-validation.
"""

from .annotations import (
    CLASS_NAMES,
    FrameTargets,
    FunctionClass,
    SegmentAnnotation,
    boundaries_of,
    map_label,
    parse_annotation,
    rasterize,
    serialize_annotation,
)
from .errors import FormatError, ParseError, ValidationError
from .featurestore import (
    FeatureMatrix,
    SynthConfig,
    read_features,
    read_features_file,
    synth_track,
    write_features,
    write_features_file,
)
from .harness import ExperimentConfig, Manifest, TrackEntry, make_folds, report, run_cv
from .metrics import PRF, TrackScores, boundary_f, evaluate_track, frame_accuracy, pairwise_f
from .pooling import PoolingSpec, adaptive_avg_pool, sliding_pool
from .postprocess import LabeledSegmentation, PeakPickParams, assign_functions, peak_pick
from .probe import (
    OptState,
    ProbeModel,
    TrainConfig,
    adamw_step,
    forward,
    infer_track,
    loss_and_grad,
    lr_at,
    train,
)

__version__ = "0.1.0"
