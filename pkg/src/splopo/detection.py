"""Detection modelling and analysis of measured squeezing records.

A measured record consists of the two joint-quadrature noise levels (both in
dB relative to shot noise), the common single-mode noise level, and the
parameters of the detection chain.  The analysis reconstructs the symmetric
two-mode covariance implied by the record and evaluates the package's
entanglement diagnostics on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from splopo.gaussian import (
    CovarianceMatrix,
    EntanglementReport,
    entanglement_report,
)


def db_to_linear(db: float) -> float:
    """Noise power relative to shot noise from a dB reading."""
    return 10.0 ** (db / 10.0)


def linear_to_db(v: float) -> float:
    """dB relative to shot noise from a linear variance."""
    if v <= 0.0:
        raise ValueError("variance must be positive")
    return 10.0 * math.log10(v)


def overall_efficiency(
    quantum_efficiency: float, visibility: float, propagation: float
) -> float:
    """Total homodyne efficiency: eta_q * visibility^2 * propagation."""
    return quantum_efficiency * visibility * visibility * propagation


def apply_efficiency(variance: float, eta: float) -> float:
    """Beam-splitter loss acting on a single variance: eta*v + (1 - eta)."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("efficiency must lie in (0, 1]")
    return eta * variance + (1.0 - eta)


def apply_loss_to_covariance(gamma: CovarianceMatrix, eta: float) -> CovarianceMatrix:
    """Equal beam-splitter loss on both modes: eta*Gamma + (1 - eta)*I."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("efficiency must lie in (0, 1]")
    return CovarianceMatrix(
        eta * gamma.matrix + (1.0 - eta) * np.eye(4), gamma.label_a, gamma.label_b
    )


def correct_electronic_noise(measured_db: float, dark_db: float) -> float:
    """Remove the electronic (dark) noise floor from a measured level.

    Both arguments and the result are in dB relative to shot noise; the
    correction itself is done on linear noise powers,
    ``v = (v_meas - v_dark) / (1 - v_dark)``.  The dark level must sit below
    shot noise and below the measured level.
    """
    v_meas = db_to_linear(measured_db)
    v_dark = db_to_linear(dark_db)
    if v_dark >= 1.0:
        raise ValueError("electronic noise at or above shot noise cannot be corrected")
    if v_meas <= v_dark:
        raise ValueError("measured level at or below the electronic noise floor")
    return linear_to_db((v_meas - v_dark) / (1.0 - v_dark))


@dataclass(frozen=True)
class DetectionChain:
    """Efficiency budget of one homodyne detection chain.

    ``electronic_noise_db`` is the dark-noise level relative to shot noise;
    it is optional because well-designed chains bury it far below the
    squeezing and it can be skipped.
    """

    quantum_efficiency: float = 1.0
    visibility: float = 1.0
    propagation: float = 1.0
    electronic_noise_db: float | None = None

    def __post_init__(self) -> None:
        for name in ("quantum_efficiency", "visibility", "propagation"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name}={value} must lie in (0, 1]")
        if self.electronic_noise_db is not None and self.electronic_noise_db >= 0.0:
            raise ValueError("electronic noise must sit below shot noise (negative dB)")

    @property
    def overall(self) -> float:
        return overall_efficiency(
            self.quantum_efficiency, self.visibility, self.propagation
        )

    def expected_level_db(self, source_db: float) -> float:
        """Noise level this chain would report for a given source level."""
        detected = apply_efficiency(db_to_linear(source_db), self.overall)
        if self.electronic_noise_db is not None:
            detected += db_to_linear(self.electronic_noise_db)
        return linear_to_db(detected)


_RECORD_KEYS = {
    "squeezed_plus_db",
    "squeezed_minus_db",
    "individual_noise_db",
    "quantum_efficiency",
    "visibility",
    "propagation",
    "electronic_noise_db",
}


@dataclass(frozen=True)
class MeasurementRecord:
    """One measured squeezing record and its detection chain.

    ``squeezed_plus_db`` / ``squeezed_minus_db`` are the two joint-quadrature
    noise levels (negative when squeezed), ``individual_noise_db`` the common
    single-mode level (positive, the modes are individually noisy).
    """

    squeezed_plus_db: float
    squeezed_minus_db: float
    individual_noise_db: float
    chain: DetectionChain = DetectionChain()

    def __post_init__(self) -> None:
        if self.individual_noise_db < 0.0:
            raise ValueError(
                "individual mode level below shot noise is inconsistent "
                "with joint squeezing"
            )

    @classmethod
    def from_dict(cls, payload: dict) -> "MeasurementRecord":
        unknown = set(payload) - _RECORD_KEYS
        if unknown:
            raise ValueError(f"unknown record keys: {sorted(unknown)}")
        missing = {"squeezed_plus_db", "squeezed_minus_db", "individual_noise_db"} - set(
            payload
        )
        if missing:
            raise ValueError(f"record missing required keys: {sorted(missing)}")
        chain = DetectionChain(
            quantum_efficiency=float(payload.get("quantum_efficiency", 1.0)),
            visibility=float(payload.get("visibility", 1.0)),
            propagation=float(payload.get("propagation", 1.0)),
            electronic_noise_db=(
                float(payload["electronic_noise_db"])
                if payload.get("electronic_noise_db") is not None
                else None
            ),
        )
        return cls(
            squeezed_plus_db=float(payload["squeezed_plus_db"]),
            squeezed_minus_db=float(payload["squeezed_minus_db"]),
            individual_noise_db=float(payload["individual_noise_db"]),
            chain=chain,
        )

    def corrected_variances_db(self) -> tuple[float, float, float]:
        """Record levels with the electronic-noise floor removed (dB).

        The individual-mode level sits far above the dark noise, so only the
        two squeezed levels change appreciably.  Without a dark level the
        record is returned unchanged.
        """
        dark = self.chain.electronic_noise_db
        if dark is None:
            return (
                self.squeezed_plus_db,
                self.squeezed_minus_db,
                self.individual_noise_db,
            )
        return (
            correct_electronic_noise(self.squeezed_plus_db, dark),
            correct_electronic_noise(self.squeezed_minus_db, dark),
            correct_electronic_noise(self.individual_noise_db, dark),
        )


def symmetric_state_covariance(
    individual_db: float, squeezed_plus_db: float, squeezed_minus_db: float
) -> CovarianceMatrix:
    """Covariance of a symmetric two-mode state from three noise levels.

    Both reduced states are ``V * I`` with ``V`` the individual-mode noise;
    the intermodal block is fixed by the two joint variances
    ``v(+) = <(Y1 + Y2)^2>/2`` and ``v(-) = <(X1 - X2)^2>/2``:
    the X correlation is ``V - v(-)`` and the Y correlation ``v(+) - V``.
    """
    big_v = db_to_linear(individual_db)
    v_plus = db_to_linear(squeezed_plus_db)
    v_minus = db_to_linear(squeezed_minus_db)
    cross = np.diag([big_v - v_minus, v_plus - big_v])
    m = np.block([[big_v * np.eye(2), cross], [cross.T, big_v * np.eye(2)]])
    return CovarianceMatrix(m)


def analyze(record: MeasurementRecord) -> EntanglementReport:
    """Entanglement diagnostics of the state a record describes.

    The record levels are first cleaned of electronic noise, then assembled
    into the symmetric-state covariance.  No loss correction is applied: the
    result characterises the state actually arriving at the detectors.
    """
    plus_db, minus_db, individual_db = record.corrected_variances_db()
    gamma = symmetric_state_covariance(individual_db, plus_db, minus_db)
    return entanglement_report(gamma)
