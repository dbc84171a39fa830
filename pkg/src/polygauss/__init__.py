"""Polynomial-projection preprocessing of noisy records and Gaussianity testing
of the resulting approximation-error process."""

from ._kernels import NUMBA_ENABLED
from .errors import (
    ConfigError,
    DegenerateDataError,
    DegenerateGridError,
    DimensionError,
    InsufficientFramesError,
    InvalidCovarianceError,
    LagError,
    OrderRangeError,
    PolygaussError,
    UndefinedSnrError,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    FamilyResult,
    derive_stream,
    emit_report,
    run_experiment,
)
from .gaussianity import (
    BicoherenceGrid,
    BispectrumEstimate,
    Ensemble,
    GaussianityReport,
    Histogram,
    bicoherence,
    bispectrum_direct,
    chi2_survival,
    excess_kurtosis,
    gaussianity_report,
    hinich_test,
    histogram,
    power_spectrum,
    principal_domain,
    segment_record,
    third_cumulant,
)
from .noise import (
    NOISE_FAMILIES,
    NoiseSpec,
    RngStream,
    SignalSpec,
    draw_noise,
    make_observation,
    noise_sigma,
    scale_to_snr,
    synth_signal,
)
from .ortho import (
    OrderSelection,
    PolynomialBasis,
    ProjectionOperator,
    SampleGrid,
    Sequence,
    build_basis,
    error_covariance,
    projection_operator,
    select_order,
    transform,
)

__version__ = "0.1.0"
