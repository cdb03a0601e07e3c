"""Two-mode Gaussian state toolkit: covariance matrices and entanglement measures.

Conventions used throughout the package:

* quadrature ordering ``(X_A, Y_A, X_B, Y_B)``,
* vacuum (shot-noise) variance normalised to 1, so the vacuum covariance
  is the 4x4 identity,
* noise levels in decibels are ``10 * log10(V)``.

All covariance matrices are spectral covariance matrices at a fixed analysis
frequency; they behave exactly like ordinary Gaussian covariance matrices for
the entanglement measures implemented here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

QUADRATURE_ORDER = ("XA", "YA", "XB", "YB")

# (A1, A2) -> (A+, A-) quadrature rotation; symmetric orthogonal, hence an
# involution.  A+/- = (A1 +/- A2)/sqrt(2) applied to both quadratures.
_PLUSMINUS = np.array(
    [
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, -1.0],
    ]
) / math.sqrt(2.0)


class InvalidStateError(ValueError):
    """A covariance matrix (or derived quantity) fails the physicality gate."""


def _sig9(x: float) -> float:
    """Round through a 9-significant-digit decimal representation."""
    return float(f"{x:.9g}")


# ---------------------------------------------------------------------------
# covariance container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric, physical 4x4 covariance matrix of a two-mode Gaussian state.

    The input matrix is symmetrised once at construction; afterwards the
    stored array is read-only and exactly symmetric.  Construction fails with
    :class:`InvalidStateError` when the matrix is not (numerically) positive
    definite or when a symplectic eigenvalue drops below the vacuum floor.
    """

    matrix: np.ndarray
    label_a: str = "A1"
    label_b: str = "A2"

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise InvalidStateError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("covariance entries must be finite")
        m = 0.5 * (m + m.T)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        self._validate()

    def _validate(self) -> None:
        m = self.matrix
        if not np.array_equal(m, m.T):  # exact, on the stored entries
            raise InvalidStateError("covariance must be symmetric")
        scale = max(1.0, float(np.abs(m).max()))
        eigs = np.linalg.eigvalsh(m)
        if eigs[0] <= -1e-12 * scale:
            raise InvalidStateError(
                f"covariance not positive definite (min eigenvalue {eigs[0]:.3e})"
            )
        # Physicality: both symplectic eigenvalues at or above the vacuum
        # floor.  The tolerance widens with the matrix norm: for a pure state
        # squeezed by a factor s the small covariance eigenvalues are only
        # known to eps*s absolute, which re-enters the unit symplectic
        # eigenvalue as a relative error of the same size.
        nu_min = min(symplectic_eigenvalues(self))
        if nu_min < 1.0 - max(1e-9, scale * 1e-11):
            raise InvalidStateError(
                f"unphysical covariance: min symplectic eigenvalue {nu_min:.9g} < 1"
            )

    # -- block access -------------------------------------------------------

    @property
    def block_a(self) -> np.ndarray:
        """2x2 reduced covariance of mode A."""
        return self.matrix[:2, :2]

    @property
    def block_b(self) -> np.ndarray:
        """2x2 reduced covariance of mode B."""
        return self.matrix[2:, 2:]

    @property
    def cross_block(self) -> np.ndarray:
        """2x2 intermodal correlation block (rows: mode A quadratures)."""
        return self.matrix[:2, 2:]

    @property
    def labels(self) -> tuple[str, str]:
        return (self.label_a, self.label_b)

    # -- constructors -------------------------------------------------------

    @classmethod
    def vacuum(cls, label_a: str = "A1", label_b: str = "A2") -> "CovarianceMatrix":
        return cls(np.eye(4), label_a, label_b)

    @classmethod
    def from_json_dict(cls, payload: dict) -> "CovarianceMatrix":
        ordering = tuple(payload.get("ordering", ()))
        if ordering != QUADRATURE_ORDER:
            raise ValueError(
                f"unsupported quadrature ordering {ordering!r}; "
                f"expected {QUADRATURE_ORDER}"
            )
        labels = payload.get("labels", ["A1", "A2"])
        if len(labels) != 2:
            raise ValueError("labels must name exactly two modes")
        return cls(np.array(payload["matrix"], dtype=float), str(labels[0]), str(labels[1]))

    # -- serialisation ------------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON payload with reals rounded to 9 significant digits."""
        return {
            "ordering": list(QUADRATURE_ORDER),
            "labels": [self.label_a, self.label_b],
            "matrix": [[_sig9(v) for v in row] for row in self.matrix],
        }

    def with_labels(self, label_a: str, label_b: str) -> "CovarianceMatrix":
        return CovarianceMatrix(self.matrix, label_a, label_b)


# ---------------------------------------------------------------------------
# mode transforms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModeTransform:
    """A 2x2 complex unitary acting jointly on the two mode operators.

    The induced action on quadratures is the real 4x4 matrix built from
    2x2 blocks ``[[Re u_ij, -Im u_ij], [Im u_ij, Re u_ij]]``; it is
    symplectic and orthogonal, so congruence with it preserves physicality.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        u = np.array(self.matrix, dtype=complex)
        if u.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
        defect = np.abs(u @ u.conj().T - np.eye(2)).max()
        if defect > 1e-12:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        u.flags.writeable = False
        object.__setattr__(self, "matrix", u)

    def quadrature_matrix(self) -> np.ndarray:
        s = np.zeros((4, 4))
        for i in range(2):
            for j in range(2):
                re = self.matrix[i, j].real
                im = self.matrix[i, j].imag
                s[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = [[re, -im], [im, re]]
        return s

    def compose(self, other: "ModeTransform") -> "ModeTransform":
        """Transform equal to applying ``other`` first, then ``self``."""
        return ModeTransform(self.matrix @ other.matrix)


def apply_mode_transform(gamma: CovarianceMatrix, u: ModeTransform) -> CovarianceMatrix:
    """Congruence of the covariance with the quadrature action of ``u``."""
    s = u.quadrature_matrix()
    return CovarianceMatrix(s @ gamma.matrix @ s.T, gamma.label_a, gamma.label_b)


def rotate_to_plusminus(gamma: CovarianceMatrix) -> CovarianceMatrix:
    """Re-express the state in the +/-45 degree superposition modes.

    The map is an involution: applying it twice returns the original matrix.
    Labels toggle between ("A1", "A2") and ("A+", "A-"); other label pairs
    are passed through unchanged.
    """
    rotated = _PLUSMINUS @ gamma.matrix @ _PLUSMINUS.T
    labels = {("A1", "A2"): ("A+", "A-"), ("A+", "A-"): ("A1", "A2")}
    la, lb = labels.get(gamma.labels, gamma.labels)
    return CovarianceMatrix(rotated, la, lb)


# ---------------------------------------------------------------------------
# symplectic spectra
# ---------------------------------------------------------------------------


def _block_determinants(gamma: CovarianceMatrix) -> tuple[float, float, float, float]:
    det_a = float(np.linalg.det(gamma.block_a))
    det_b = float(np.linalg.det(gamma.block_b))
    det_c = float(np.linalg.det(gamma.cross_block))
    det_g = float(np.linalg.det(gamma.matrix))
    return det_a, det_b, det_c, det_g


_SYMPLECTIC_FORM = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
_PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


def _symplectic_spectrum(m: np.ndarray) -> tuple[float, float]:
    """Symplectic spectrum of a positive matrix, in ascending order.

    Computed as the positive spectrum of the Hermitian matrix
    ``i L^T Omega L`` with ``m = L L^T``, which keeps the error at the
    machine-epsilon-times-norm level.  The block-determinant shortcut loses
    half the digits to cancellation for nearly pure states.
    """
    w, v = np.linalg.eigh(m)
    floor = max(float(np.abs(w).max()), 1.0) * 1e-15
    root = v * np.sqrt(np.clip(w, floor, None))
    herm = 1j * root.T @ _SYMPLECTIC_FORM @ root
    nus = np.linalg.eigvalsh(herm)  # ascending (-nu+, -nu-, nu-, nu+)
    return (float(nus[2]), float(nus[3]))


def symplectic_eigenvalues(gamma: CovarianceMatrix) -> tuple[float, float]:
    """Ordinary symplectic spectrum (nu_minus, nu_plus)."""
    return _symplectic_spectrum(gamma.matrix)


def pt_symplectic_eigenvalue(gamma: CovarianceMatrix) -> float:
    """Smallest symplectic eigenvalue of the partially transposed state.

    Partial transposition flips the sign of one quadrature of mode B (and of
    the intermodal determinant, which the consistency gate below checks).
    Values below 1 witness entanglement.
    """
    det_a, det_b, det_c, det_g = _block_determinants(gamma)
    d = det_a + det_b - 2.0 * det_c
    disc = d * d - 4.0 * det_g
    if disc < -1e-9:
        raise InvalidStateError(f"negative discriminant {disc:.3e} in symplectic solve")
    pt = _PARTIAL_TRANSPOSE @ gamma.matrix @ _PARTIAL_TRANSPOSE
    xi = _symplectic_spectrum(pt)[0]
    if xi <= 0.0:
        raise InvalidStateError(f"non-positive partial-transpose eigenvalue {xi:.3e}")
    return xi


def log_negativity(gamma: CovarianceMatrix) -> float:
    """Logarithmic negativity in ebits, clamped at zero for separable states."""
    return max(0.0, -math.log2(pt_symplectic_eigenvalue(gamma)))


def max_log_negativity(gamma: CovarianceMatrix) -> float:
    """Upper bound on the negativity reachable with passive optics.

    Equals ``-log2(l1 * l2) / 2`` with ``l1, l2`` the two smallest ordinary
    eigenvalues of the covariance, clamped at zero.
    """
    eigs = np.linalg.eigvalsh(gamma.matrix)
    product = float(eigs[0] * eigs[1])
    if product <= 0.0:
        raise InvalidStateError("covariance has a non-positive eigenvalue pair")
    return max(0.0, -math.log2(product) / 2.0)


# ---------------------------------------------------------------------------
# separability criteria
# ---------------------------------------------------------------------------


def duan_inseparability(v_plus: float, v_minus: float) -> float:
    """Half sum of the two squeezed joint variances; below 1 is inseparable."""
    if v_plus <= 0.0 or v_minus <= 0.0:
        raise ValueError("joint variances must be positive")
    return 0.5 * (v_plus + v_minus)


def conditional_variance(v1: float, v2: float, cov: float) -> float:
    """Variance of quadrature 1 after a linear estimate from quadrature 2."""
    if v2 <= 0.0:
        raise ValueError("conditioning variance must be positive")
    out = v1 - cov * cov / v2
    if out < -1e-9:
        raise InvalidStateError(f"conditional variance {out:.3e} < 0; inconsistent inputs")
    return max(out, 0.0)


def _joint_rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    r = np.array([[c, -s], [s, c]])
    out = np.zeros((4, 4))
    out[:2, :2] = r
    out[2:, 2:] = r
    return out


def _refine_minimum(fun, grid: np.ndarray, values: np.ndarray, xatol: float) -> float:
    """Bounded local refinement around the best grid point."""
    i = int(np.argmin(values))
    step = grid[1] - grid[0]
    res = minimize_scalar(
        fun,
        bounds=(grid[i] - step, grid[i] + step),
        method="bounded",
        options={"xatol": xatol},
    )
    best = float(values[i])
    if res.success and res.fun < best:
        best = float(res.fun)
    return best


def reid_epr_product(gamma: CovarianceMatrix) -> float:
    """Product of the two conditional variances, minimised over the joint
    quadrature angle.

    Both modes are rotated by the same angle phi; X is the rotated quadrature
    and Y its conjugate.  A 720-point scan over [0, pi) seeds a bounded local
    refinement (1e-8 rad).  Values below 1 demonstrate EPR correlations.
    """
    m = gamma.matrix

    def product(phi: float) -> float:
        r = _joint_rotation(phi)
        g = r @ m @ r.T
        vx = conditional_variance(g[0, 0], g[2, 2], g[0, 2])
        vy = conditional_variance(g[1, 1], g[3, 3], g[1, 3])
        return vx * vy

    grid = np.linspace(0.0, math.pi, 720, endpoint=False)
    values = np.array([product(p) for p in grid])
    return _refine_minimum(product, grid, values, xatol=1e-8)


def duan_delta_from_covariance(gamma: CovarianceMatrix) -> float:
    """Half sum of conjugate-paired joint variances, minimised over the
    joint quadrature angle.

    The +45 mode is always evaluated a quarter turn from the -45 mode so the
    pair stays a valid inseparability witness.  For a state whose joint
    squeezing sits on the standard quadratures this reduces to the plain
    half-sum of the two squeezed variances.
    """
    pm = rotate_to_plusminus(gamma).matrix
    plus, minus = pm[:2, :2], pm[2:, 2:]

    def ellipse(block: np.ndarray, phi: float) -> float:
        c, s = math.cos(phi), math.sin(phi)
        return block[0, 0] * c * c + block[1, 1] * s * s + block[0, 1] * math.sin(2 * phi)

    def half_sum(phi: float) -> float:
        return 0.5 * (ellipse(plus, phi + math.pi / 2.0) + ellipse(minus, phi))

    grid = np.linspace(0.0, math.pi, 360, endpoint=False)
    values = np.array([half_sum(p) for p in grid])
    return _refine_minimum(half_sum, grid, values, xatol=1e-8)


# ---------------------------------------------------------------------------
# entanglement of formation (symmetric states)
# ---------------------------------------------------------------------------


def eof_symmetric(delta: float) -> float:
    """Entanglement of formation of a symmetric state from its Duan sum.

    Defined for ``delta > 0``.  Above the separability boundary (delta > 1)
    the state carries no formation entanglement; a warning is emitted and 0
    is returned.
    """
    if delta <= 0.0:
        raise ValueError("duan sum must be positive")
    if delta > 1.0:
        warnings.warn(
            f"duan sum {delta:.6g} > 1: state is not inseparable, EOF set to 0",
            stacklevel=2,
        )
        return 0.0
    root = math.sqrt(delta)
    c_plus = (1.0 / root + root) ** 2 / 4.0
    c_minus = (1.0 / root - root) ** 2 / 4.0
    out = c_plus * math.log2(c_plus)
    if c_minus > 0.0:
        out -= c_minus * math.log2(c_minus)
    return out


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EntanglementReport:
    """Bundle of the entanglement diagnostics for one state.

    ``eof`` is only defined for symmetric states and is ``None`` otherwise.
    """

    xi: float
    log_negativity: float
    max_log_negativity: float
    duan_delta: float
    reid_product: float
    eof: float | None = None

    def __post_init__(self) -> None:
        if self.xi <= 0.0:
            raise InvalidStateError("xi must be positive")
        if self.log_negativity < 0.0 or self.max_log_negativity < 0.0:
            raise InvalidStateError("negativities are clamped at zero")
        if self.max_log_negativity < self.log_negativity - 1e-9:
            raise InvalidStateError("passive bound below the achieved negativity")

    def to_json_dict(self) -> dict:
        out = {
            "xi": _sig9(self.xi),
            "log_negativity": _sig9(self.log_negativity),
            "max_log_negativity": _sig9(self.max_log_negativity),
            "duan_delta": _sig9(self.duan_delta),
            "reid_product": _sig9(self.reid_product),
        }
        out["eof"] = _sig9(self.eof) if self.eof is not None else None
        return out


def entanglement_report(gamma: CovarianceMatrix) -> EntanglementReport:
    """Evaluate every diagnostic this package knows on one covariance."""
    scale = max(1.0, float(np.abs(gamma.matrix).max()))
    symmetric = bool(np.allclose(gamma.block_a, gamma.block_b, atol=1e-8 * scale))
    delta = duan_delta_from_covariance(gamma)
    eof = eof_symmetric(delta) if symmetric and delta <= 1.0 else None
    if symmetric and delta > 1.0:
        eof = 0.0
    return EntanglementReport(
        xi=pt_symplectic_eigenvalue(gamma),
        log_negativity=log_negativity(gamma),
        max_log_negativity=max_log_negativity(gamma),
        duan_delta=delta,
        reid_product=reid_epr_product(gamma),
        eof=eof,
    )
