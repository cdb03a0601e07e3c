"""Noise and entanglement model of a self-phase-locked two-mode OPO below threshold."""

from splopo.gaussian import (
    QUADRATURE_ORDER,
    CovarianceMatrix,
    EntanglementReport,
    InvalidStateError,
    ModeTransform,
    apply_mode_transform,
    duan_delta_from_covariance,
    duan_inseparability,
    entanglement_report,
    eof_symmetric,
    log_negativity,
    max_log_negativity,
    pt_symplectic_eigenvalue,
    reid_epr_product,
    rotate_to_plusminus,
    symplectic_eigenvalues,
)
from splopo.opo import (
    NoiseEllipse,
    OpoParams,
    closed_form_covariance,
    diff_mode_spectra,
    output_covariance,
    single_mode_spectrum,
    sum_mode_spectra,
    tilt_angle,
)
from splopo.detection import (
    DetectionChain,
    MeasurementRecord,
    analyze,
    apply_loss_to_covariance,
    correct_electronic_noise,
    db_to_linear,
    linear_to_db,
)
from splopo.optimize import (
    nonlocal_phase_matrix,
    optimize_numeric,
    relative_phase_transform,
    standardize,
    waveplate_settings,
)

__all__ = [
    "QUADRATURE_ORDER",
    "CovarianceMatrix",
    "EntanglementReport",
    "InvalidStateError",
    "ModeTransform",
    "NoiseEllipse",
    "OpoParams",
    "DetectionChain",
    "MeasurementRecord",
    "analyze",
    "apply_loss_to_covariance",
    "apply_mode_transform",
    "closed_form_covariance",
    "correct_electronic_noise",
    "db_to_linear",
    "diff_mode_spectra",
    "duan_delta_from_covariance",
    "duan_inseparability",
    "entanglement_report",
    "eof_symmetric",
    "linear_to_db",
    "log_negativity",
    "max_log_negativity",
    "nonlocal_phase_matrix",
    "optimize_numeric",
    "output_covariance",
    "pt_symplectic_eigenvalue",
    "reid_epr_product",
    "relative_phase_transform",
    "rotate_to_plusminus",
    "single_mode_spectrum",
    "standardize",
    "sum_mode_spectra",
    "symplectic_eigenvalues",
    "tilt_angle",
    "waveplate_settings",
]

__version__ = "0.1.0"
