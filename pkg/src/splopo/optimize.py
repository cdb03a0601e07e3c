"""Entanglement optimisation by local phase shifts and its waveplate realisation.

Below threshold the two output modes are entangled but, with polarisation
coupling present, the squeezing ellipses are tilted and the plain
Einstein-Podolsky-Rosen correlations are degraded.  A relative phase shift
between the superposition modes re-aligns the ellipses and restores the full
negativity allowed by passive operations.  This module computes that phase,
applies it, optimises it numerically without model knowledge, and translates
it into half/quarter-wave plate settings.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.optimize import minimize_scalar

from splopo.gaussian import (
    CovarianceMatrix,
    ModeTransform,
    apply_mode_transform,
    log_negativity,
)
from splopo.opo import OpoParams, tilt_angle


def nonlocal_phase_matrix(theta: float) -> ModeTransform:
    """Symmetric phase redistribution between the two polarisation modes.

    In the individual-mode basis the matrix is
    ``[[cos(theta/2), i sin(theta/2)], [i sin(theta/2), cos(theta/2)]]``;
    in the superposition basis it phases the two modes by ``+theta/2`` and
    ``-theta/2`` respectively.
    """
    c = math.cos(theta / 2.0)
    s = 1j * math.sin(theta / 2.0)
    return ModeTransform(np.array([[c, s], [s, c]]))


def relative_phase_transform(theta: float) -> ModeTransform:
    """Phase the -45 superposition mode alone by ``-theta``.

    Equals :func:`nonlocal_phase_matrix` composed with the common phase
    ``exp(-i theta / 2)``; common phases rotate both ellipses together and
    change no entanglement measure.
    """
    phase = cmath.exp(-1j * theta / 2.0)
    return ModeTransform(phase * nonlocal_phase_matrix(theta).matrix)


def _is_standard(gamma: CovarianceMatrix, tol: float = 1e-9) -> bool:
    """Standard form: -45 block diagonal with the squeezed axis on p."""
    scale = max(1.0, float(np.abs(gamma.matrix).max()))
    minus = _minus_block(gamma)
    return abs(minus[0, 1]) <= tol * scale and minus[0, 0] <= minus[1, 1] + tol * scale


def _minus_block(gamma: CovarianceMatrix) -> np.ndarray:
    """2x2 covariance of the -45 superposition mode."""
    m = gamma.matrix
    return 0.5 * (m[:2, :2] + m[2:, 2:] - m[:2, 2:] - m[2:, :2])


def standardize(
    gamma: CovarianceMatrix, params: OpoParams
) -> tuple[CovarianceMatrix, float]:
    """Undo the coupling-induced ellipse tilt with a local phase shift.

    Returns the standardised covariance together with the phase applied.  A
    state that is already standard (no residual tilt) is returned as-is with
    a zero angle, which makes the operation idempotent.  After the shift the
    -45 noise ellipse is axis-aligned and the negativity reaches the passive
    optimum for states produced by this model.
    """
    if _is_standard(gamma):
        return gamma, 0.0
    theta = tilt_angle(params)
    out = apply_mode_transform(gamma, relative_phase_transform(theta))
    minus = _minus_block(out)
    scale = max(1.0, float(np.abs(out.matrix).max()))
    if abs(minus[0, 1]) > 1e-6 * scale:
        raise RuntimeError(
            f"standardisation failed: residual tilt {minus[0, 1]:.3e} "
            "(covariance does not match the operating point)"
        )
    return out, theta


def optimize_numeric(gamma: CovarianceMatrix) -> tuple[float, float]:
    """Best relative-phase angle by direct search, no model knowledge.

    Scans the negativity of the phase-shifted state over a 1024-point grid
    on (-pi, pi] and polishes the best candidate with a bounded scalar
    minimiser.  Returns ``(theta, negativity)``; the landscape is
    pi-periodic, so the returned angle is one representative optimum.
    """

    def negated(theta: float) -> float:
        shifted = apply_mode_transform(gamma, nonlocal_phase_matrix(theta))
        return -log_negativity(shifted)

    grid = np.linspace(-math.pi, math.pi, 1024, endpoint=False) + math.pi / 1024.0
    values = np.array([negated(t) for t in grid])
    i = int(np.argmin(values))
    step = grid[1] - grid[0]
    res = minimize_scalar(
        negated,
        bounds=(grid[i] - step, grid[i] + step),
        method="bounded",
        options={"xatol": 1e-10},
    )
    theta, best = float(grid[i]), float(values[i])
    if res.success and res.fun < best:
        theta, best = float(res.x), float(res.fun)
    return theta, -best


# ---------------------------------------------------------------------------
# waveplate realisation
# ---------------------------------------------------------------------------


def half_wave_jones(angle: float) -> np.ndarray:
    """Jones matrix of a half-wave plate with fast axis at ``angle``."""
    c, s = math.cos(2.0 * angle), math.sin(2.0 * angle)
    return np.array([[c, s], [s, -c]], dtype=complex)


def quarter_wave_jones(angle: float) -> np.ndarray:
    """Jones matrix of a quarter-wave plate with fast axis at ``angle``.

    Convention: the slow axis is retarded by ``i`` and an overall phase is
    chosen so the fast-axis eigenvalue is 1.
    """
    c, s = math.cos(angle), math.sin(angle)
    return np.array(
        [
            [c * c + 1j * s * s, s * c * (1.0 - 1j)],
            [s * c * (1.0 - 1j), s * s + 1j * c * c],
        ]
    )


def waveplate_transform(half_angle: float, quarter_angle: float) -> ModeTransform:
    """Mode transform of a quarter-wave plate following a half-wave plate."""
    return ModeTransform(quarter_wave_jones(quarter_angle) @ half_wave_jones(half_angle))


def waveplate_settings(theta: float) -> tuple[float, float]:
    """Half/quarter-wave plate angles realising the ``theta`` phase shift.

    The pair ``(theta/4, theta/2)`` makes the plate cascade equal to the
    relative-phase operation up to per-mode phases before and after the
    plates (which are set by path lengths, not by the plates, and change no
    noise spectrum).  The residual after matching those phases is checked;
    failure indicates a convention bug, not a physical limitation.
    """
    half, quarter = theta / 4.0, theta / 2.0
    jones = waveplate_transform(half, quarter).matrix
    target = nonlocal_phase_matrix(theta).matrix
    residual = _phase_matched_residual(jones, target)
    if residual > 1e-9:
        raise RuntimeError(
            f"waveplate settings do not realise the phase shift "
            f"(residual {residual:.3e})"
        )
    return half, quarter


def _phase_matched_residual(jones: np.ndarray, target: np.ndarray) -> float:
    """Distance between two unitaries modulo per-mode phases on both sides.

    Solves ``jones = D2 @ target @ D1`` for diagonal phase matrices ``D1``,
    ``D2`` using the entry arguments, then reports the remaining maximum
    entry difference.  Entries of ``target`` equal to zero are excluded from
    the phase fit and compared by magnitude only.
    """

    def arg_or_none(z: complex) -> float | None:
        return cmath.phase(z) if abs(z) > 1e-12 else None

    # jones[i, j] = exp(i u_i) * target[i, j] * exp(i v_j); fix u_0 = 0.
    angles = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            tij = arg_or_none(target[i, j])
            angles[i][j] = None if tij is None else cmath.phase(jones[i, j]) - tij
    u0 = 0.0
    v = [None, None]
    u1 = None
    for j in range(2):
        if angles[0][j] is not None:
            v[j] = angles[0][j] - u0
    for j in range(2):
        if angles[1][j] is not None and v[j] is not None:
            u1 = angles[1][j] - v[j]
            break
    if u1 is None:
        u1 = 0.0
    for j in range(2):
        if v[j] is None:
            v[j] = angles[1][j] - u1 if angles[1][j] is not None else 0.0
    d2 = np.diag([cmath.exp(1j * u0), cmath.exp(1j * u1)])
    d1 = np.diag([cmath.exp(1j * v[0]), cmath.exp(1j * v[1])])
    return float(np.abs(jones - d2 @ target @ d1).max())
