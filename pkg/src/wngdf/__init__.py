"""WNG/DF trade-off beamformers for uniform linear arrays."""
__version__ = "0.1.0"

from ._backend import NAME as backend
from .beamformer import BeamformerSpec, BeamformerWeights, build, build_stack, mvdr_solve
from .errors import ConfigError, InvalidSplit, SingularMatrix, Unachievable, WngDfError
from .geometry import ArrayGeometry, FrequencyGrid, phase_ratio, split_ckp, split_kp, steering_vector
from .metrics import BroadbandScore, MetricCurve, broadband, df_narrowband, evaluate, wng_narrowband
from .noise import (
    NoiseCorrelation,
    field_rsd,
    field_tunable,
    gamma_isotropic,
    gamma_segment,
)

__all__ = [
    "ArrayGeometry",
    "BeamformerSpec",
    "BeamformerWeights",
    "BroadbandScore",
    "ConfigError",
    "FrequencyGrid",
    "InvalidSplit",
    "MetricCurve",
    "NoiseCorrelation",
    "SingularMatrix",
    "Unachievable",
    "WngDfError",
    "backend",
    "broadband",
    "build",
    "build_stack",
    "df_narrowband",
    "evaluate",
    "field_rsd",
    "field_tunable",
    "gamma_isotropic",
    "gamma_segment",
    "mvdr_solve",
    "phase_ratio",
    "split_ckp",
    "split_kp",
    "steering_vector",
    "wng_narrowband",
]
