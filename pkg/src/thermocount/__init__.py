"""Room occupancy estimation from overhead thermal frame sequences.

The pipeline segments each sampled frame, differences it against the
previous one, labels the changed regions, filters them by area, and
smooths the per-frame counts through a short history window. Parameters
are found by a per-axis bisection search against a labeled sequence.
"""

from .calibration import CalibrationReport, ParamSpace, configure, default_space, evaluate_params
from .errors import FormatError, ParameterError, ThermoCountError
from .frames import SequenceManifest, ThermalFrame, load_sequence, read_frame, sample_frames, write_frame
from .metrics import accuracy, aggregate, confidence
from .params import Params, load_params, save_params
from .pipeline import EstimateRecord, init_session, run_session, step
from .synth import Scene, load_scene, render, save_scene

__version__ = "0.1.0"

__all__ = [
    "CalibrationReport",
    "EstimateRecord",
    "FormatError",
    "ParamSpace",
    "ParameterError",
    "Params",
    "Scene",
    "SequenceManifest",
    "ThermalFrame",
    "ThermoCountError",
    "accuracy",
    "aggregate",
    "confidence",
    "configure",
    "default_space",
    "evaluate_params",
    "init_session",
    "load_params",
    "load_scene",
    "load_sequence",
    "read_frame",
    "render",
    "run_session",
    "sample_frames",
    "save_params",
    "save_scene",
    "step",
    "write_frame",
    "__version__",
]
