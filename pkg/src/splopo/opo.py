"""Output noise spectra of a self-phase-locked two-mode OPO below threshold.

The cavity holds two orthogonally polarised signal modes coupled by a small
intracavity birefringent element; the device runs below threshold on the
frequency-degenerate locked solution.  Everything here is expressed in the
dimensionless parameters

* ``sigma``   -- pump amplitude relative to threshold, ``0 <= sigma < 1``,
* ``coupling``-- normalised polarisation coupling ``c = 2 rho / kappa'``,
* ``omega``   -- analysis frequency in units of the total cavity decay rate,
* ``kappa``   -- output-coupler decay rate,
* ``kappa_prime`` -- total cavity decay rate (output coupler plus internal
  losses); only the escape ratio ``kappa / kappa_prime`` enters the spectra.

Two independent evaluation paths are provided: :func:`output_covariance`
solves the intracavity linear response system directly (the reference path),
while :func:`closed_form_covariance` assembles the same matrix from the
analytic single-quadrature spectra.  They agree to ~1e-10 and are tested
against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from splopo.gaussian import CovarianceMatrix, rotate_to_plusminus

# Pump amplitudes this close to threshold make the p+ variance overflow any
# sensible dynamic range; treat them as out of the model's validity domain.
SIGMA_CAP = 1.0 - 1e-9


@dataclass(frozen=True)
class OpoParams:
    """Operating point of the oscillator.

    ``rho`` (the physical coupling rate) may be supplied alongside
    ``coupling``; consistency ``coupling == 2 rho / kappa_prime`` is then
    enforced.  Use :meth:`from_rho` to derive ``coupling`` instead.
    """

    sigma: float
    coupling: float = 0.0
    omega: float = 0.0
    kappa: float = 0.025
    kappa_prime: float = 0.025
    rho: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.sigma <= SIGMA_CAP:
            raise ValueError(f"sigma={self.sigma} outside [0, {SIGMA_CAP}]")
        if self.coupling < 0.0:
            raise ValueError("coupling must be non-negative")
        if self.omega < 0.0:
            raise ValueError("analysis frequency must be non-negative")
        if not 0.0 < self.kappa <= self.kappa_prime:
            raise ValueError("need 0 < kappa <= kappa_prime")
        if self.rho is not None:
            implied = 2.0 * self.rho / self.kappa_prime
            if abs(self.coupling - implied) > 1e-12:
                raise ValueError(
                    f"coupling={self.coupling} inconsistent with "
                    f"2*rho/kappa_prime={implied}"
                )

    @classmethod
    def from_rho(
        cls,
        sigma: float,
        rho: float,
        omega: float = 0.0,
        kappa: float = 0.025,
        kappa_prime: float = 0.025,
    ) -> "OpoParams":
        return cls(sigma, 2.0 * rho / kappa_prime, omega, kappa, kappa_prime, rho)

    @property
    def loss_ratio(self) -> float:
        """Escape efficiency ``kappa / kappa_prime`` of the output coupler."""
        return self.kappa / self.kappa_prime

    def at_omega(self, omega: float) -> "OpoParams":
        return OpoParams(self.sigma, self.coupling, omega, self.kappa, self.kappa_prime, self.rho)


# ---------------------------------------------------------------------------
# reference path: linear response of the intracavity field
# ---------------------------------------------------------------------------


def _response_spectrum(params: OpoParams) -> np.ndarray:
    """Output spectral covariance from the intracavity linear response.

    Solves the fluctuation system for the quadratures ``(p1, p2, q1, q2)``
    driven by the output-coupler and loss-port vacua, applies the
    input-output relation at the coupler, and returns the 4x4 spectral
    matrix reordered to ``(XA, YA, XB, YB)``.
    """
    sigma, c, omega, k = params.sigma, params.coupling, params.omega, params.loss_ratio
    d = 1.0 + 2.0j * omega
    system = np.array(
        [
            [d, -sigma, c, -c],
            [-sigma, d, -c, c],
            [-c, c, d, sigma],
            [c, -c, sigma, d],
        ],
        dtype=complex,
    )
    inv = np.linalg.inv(system)
    transfer = np.hstack([2.0 * k * inv - np.eye(4), 2.0 * math.sqrt(k * (1.0 - k)) * inv])
    spectrum = transfer @ transfer.conj().T
    residual = float(np.abs(spectrum.imag).max())
    if residual > 1e-9:
        raise RuntimeError(f"non-real output spectrum (imaginary residual {residual:.3e})")
    order = [0, 2, 1, 3]  # (p1, p2, q1, q2) -> (p1, q1, p2, q2)
    return spectrum.real[np.ix_(order, order)]


def output_covariance(params: OpoParams) -> CovarianceMatrix:
    """Spectral covariance of the two output modes, reference evaluation."""
    return CovarianceMatrix(_response_spectrum(params))


# ---------------------------------------------------------------------------
# analytic path: closed-form quadrature spectra
# ---------------------------------------------------------------------------


class SumModeSpectra(NamedTuple):
    s_q_sum: float
    s_p_sum: float


class DiffModeSpectra(NamedTuple):
    s_p_diff: float
    s_q_diff: float
    cross: float


def _den(params: OpoParams) -> float:
    sigma, c, omega = params.sigma, params.coupling, params.omega
    inner = 4.0 * omega * omega - 4.0 * c * c + sigma * sigma - 1.0
    return 16.0 * omega * omega + inner * inner


def sum_mode_spectra(params: OpoParams) -> SumModeSpectra:
    """Noise of the +45 superposition mode: (squeezed q, antisqueezed p).

    Both components are independent of the polarisation coupling.
    """
    sigma, omega, k = params.sigma, params.omega, params.loss_ratio
    s_q = 1.0 - 4.0 * sigma * k / (4.0 * omega * omega + (sigma + 1.0) ** 2)
    s_p = 1.0 + 4.0 * sigma * k / (4.0 * omega * omega + (sigma - 1.0) ** 2)
    return SumModeSpectra(s_q_sum=s_q, s_p_sum=s_p)


def diff_mode_spectra(params: OpoParams) -> DiffModeSpectra:
    """Noise of the -45 superposition mode, including the p/q cross term.

    The cross term is the ``sin(2 phi)`` coefficient of the noise ellipse;
    it vanishes with the coupling and is what tilts the squeezing off the
    canonical quadratures.
    """
    sigma, c, omega, k = params.sigma, params.coupling, params.omega, params.loss_ratio
    den = _den(params)
    s_p = 1.0 - 4.0 * sigma * (4.0 * omega * omega - 4.0 * c * c + (sigma - 1.0) ** 2) * k / den
    s_q = 1.0 + 4.0 * sigma * (4.0 * omega * omega - 4.0 * c * c + (sigma + 1.0) ** 2) * k / den
    alpha = -8.0 * sigma * c * k / den
    return DiffModeSpectra(s_p_diff=s_p, s_q_diff=s_q, cross=2.0 * alpha)


def single_mode_components(params: OpoParams) -> tuple[float, float, float]:
    """(s_p, s_q, cross) of either individual polarisation mode."""
    sigma, c, omega, k = params.sigma, params.coupling, params.omega, params.loss_ratio
    den = _den(params)
    w2 = 4.0 * omega * omega
    s_p = 1.0 + 8.0 * sigma * k * (
        sigma * ((sigma - 1.0) ** 2 + w2)
        - c * c * (w2 - 4.0 * (1.0 + c * c) + (sigma + 1.0) ** 2)
    ) / ((w2 + (sigma - 1.0) ** 2) * den)
    s_q = 1.0 + 8.0 * sigma * k * (
        sigma * ((sigma + 1.0) ** 2 + w2)
        + c * c * (w2 - 4.0 * (1.0 + c * c) + (sigma - 1.0) ** 2)
    ) / ((w2 + (sigma + 1.0) ** 2) * den)
    alpha = -8.0 * sigma * c * k / den
    return (s_p, s_q, alpha)


# ---------------------------------------------------------------------------
# noise ellipses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseEllipse:
    """Quadrature noise ellipse ``S(phi) = s_p cos^2 + s_q sin^2 + cross sin2phi``.

    Equivalently the quadratic form ``[[s_p, cross], [cross, s_q]]`` evaluated
    on the unit vector at angle ``phi`` from the p axis.  ``theta`` is the
    principal-axis angle folded into ``(-pi/4, pi/4]``.
    """

    s_p: float
    s_q: float
    cross: float = 0.0

    def __post_init__(self) -> None:
        if self.s_p <= 0.0 or self.s_q <= 0.0:
            raise ValueError("axis variances must be positive")
        if self.s_p * self.s_q - self.cross * self.cross <= 0.0:
            raise ValueError("cross term too large: ellipse degenerates")

    @classmethod
    def from_components(cls, components: tuple[float, float, float]) -> "NoiseEllipse":
        s_p, s_q, cross = components
        return cls(s_p, s_q, cross)

    def variance(self, phi: float) -> float:
        c, s = math.cos(phi), math.sin(phi)
        return self.s_p * c * c + self.s_q * s * s + self.cross * math.sin(2.0 * phi)

    def matrix(self) -> np.ndarray:
        return np.array([[self.s_p, self.cross], [self.cross, self.s_q]])

    @property
    def theta(self) -> float:
        """Principal-axis angle folded into (-pi/4, pi/4]."""
        if self.cross == 0.0 and self.s_p == self.s_q:
            return 0.0
        t = 0.5 * math.atan2(2.0 * self.cross, self.s_p - self.s_q)
        if t > math.pi / 4.0:
            t -= math.pi / 2.0
        elif t <= -math.pi / 4.0:
            t += math.pi / 2.0
        return t

    def min_variance(self) -> float:
        mean = 0.5 * (self.s_p + self.s_q)
        radius = math.hypot(0.5 * (self.s_p - self.s_q), self.cross)
        return mean - radius

    def max_variance(self) -> float:
        mean = 0.5 * (self.s_p + self.s_q)
        radius = math.hypot(0.5 * (self.s_p - self.s_q), self.cross)
        return mean + radius

    def minor_axis_angle(self) -> float:
        """Angle of the minimum-variance axis, continuous branch in [0, pi)."""
        values, vectors = np.linalg.eigh(self.matrix())
        v = vectors[:, int(np.argmin(values))]
        return math.atan2(v[1], v[0]) % math.pi


def single_mode_spectrum(params: OpoParams) -> NoiseEllipse:
    """Noise ellipse of one individual polarisation mode."""
    return NoiseEllipse.from_components(single_mode_components(params))


def tilt_angle(params: OpoParams) -> float:
    """Rotation angle of the squeezing ellipses off the canonical quadratures.

    Continuous in the coupling: 0 at zero coupling, growing towards pi/2 as
    the coupling dominates.  Equals the minor-axis angle of the -45 mode's
    noise ellipse on the branch [0, pi/2) for non-negative coupling.
    """
    sigma, c, omega = params.sigma, params.coupling, params.omega
    return 0.5 * math.atan2(
        4.0 * c, 4.0 * omega * omega - 4.0 * c * c + sigma * sigma + 1.0
    )


# ---------------------------------------------------------------------------
# closed-form covariance assembly
# ---------------------------------------------------------------------------


def closed_form_covariance(params: OpoParams) -> CovarianceMatrix:
    """Covariance of (A1, A2) assembled from the analytic spectra.

    Built block-diagonally in the +/- superposition basis (where the state
    factorises) and rotated back to the individual modes.
    """
    s_q_sum, s_p_sum = sum_mode_spectra(params)
    s_p_diff, s_q_diff, cross = diff_mode_spectra(params)
    pm = np.zeros((4, 4))
    pm[0, 0] = s_p_sum
    pm[1, 1] = s_q_sum
    pm[2:, 2:] = [[s_p_diff, cross], [cross, s_q_diff]]
    gamma_pm = CovarianceMatrix(pm, "A+", "A-")
    return rotate_to_plusminus(gamma_pm)


def plusminus_covariance(params: OpoParams) -> CovarianceMatrix:
    """Covariance in the +/- superposition basis (block diagonal)."""
    return rotate_to_plusminus(closed_form_covariance(params))
