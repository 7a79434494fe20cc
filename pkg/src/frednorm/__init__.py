"""Frequency-domain stability weighting for non-stationary forecasting."""
from .backbone import LinearBackbone, init_backbone, predict
from .data import SynthSpec, load_csv, make_windows, synthesize
from .frednormer import (FredNormerParams, LowPass, RandomSelect, StabilityWeighting,
                         apply_filter, backward, diff1, forward, init_params)
from .norm import denormalize, normalize
from .pipeline import Config, ForecastModel, evaluate, fit, train
from .spectral import Spectrum, amplitudes, dft, idft_real
from .stability import (AmplitudeAccumulator, StabilityMeasure, accumulate, finalize,
                        load_measure, measure_windows, save_measure, stable_subset)
from .theory import verify_lemma1, verify_problem1, verify_theorem1

__version__ = "0.1.0"
