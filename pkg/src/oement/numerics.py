"""
Small dense complex linear algebra and polynomial root finding.

Everything here works on 4x4 or 6x6 inputs, so clarity wins over speed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, SingularMatrixError

PIVOT_TOL = 1e-14
ROOT_RESIDUAL_TOL = 1e-8
MAX_ITER = 10_000
_EPS = np.finfo(float).eps


def invert(a) -> np.ndarray:
    """Invert a square matrix by Gauss-Jordan elimination with scaled partial pivoting.

    Parameters
    ----------
    a : array_like
        Square complex (or real) matrix.

    Returns
    -------
    np.ndarray
        The complex inverse.

    Raises
    ------
    SingularMatrixError
        If a pivot is smaller than ``PIVOT_TOL`` times the scale of its row.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    n = a.shape[0]
    scale = np.max(np.abs(a), axis=1)
    if np.any(scale == 0.0):
        raise SingularMatrixError("matrix has an all-zero row")
    aug = np.hstack([a, np.eye(n, dtype=complex)])

    for col in range(n):
        ratios = np.abs(aug[col:, col]) / scale[col:]
        piv = col + int(np.argmax(ratios))
        if ratios[piv - col] < PIVOT_TOL:
            raise SingularMatrixError(
                f"pivot {abs(aug[piv, col]):.3e} in column {col} below tolerance"
            )
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
            scale[[col, piv]] = scale[[piv, col]]
        aug[col] /= aug[col, col]
        others = np.arange(n) != col
        aug[others] -= np.outer(aug[others, col], aug[col])
    return aug[:, n:]


def characteristic_polynomial(m) -> np.ndarray:
    """Coefficients of det(lambda I - m), highest power first (monic).

    Uses the Faddeev-LeVerrier recursion, which needs only matrix products.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    aux = np.zeros_like(m)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        aux = m @ aux + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(m @ aux) / k
    return coeffs


@dataclass(frozen=True)
class QuarticRoots:
    roots: np.ndarray
    residuals: np.ndarray


def _polyval(coeffs, z):
    out = np.zeros_like(z, dtype=complex)
    for c in coeffs:
        out = out * z + c
    return out


def quartic_roots(c4, c3, c2, c1, c0) -> QuarticRoots:
    """All four roots of ``c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0``.

    Durand-Kerner simultaneous iteration followed by Newton polishing.
    Every root is checked against ``|p(x)| <= 1e-8 * max|c_i|``; failure to
    converge raises instead of returning a poor answer.
    """
    coeffs = np.array([c4, c3, c2, c1, c0], dtype=complex)
    if coeffs[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("coefficients must be finite")
    monic = coeffs / coeffs[0]
    deriv = monic[:-1] * np.arange(4, 0, -1)

    # Cauchy bound sets the radius of the initial guesses.
    radius = 1.0 + np.max(np.abs(monic[1:]))
    z = radius * (0.4 + 0.9j) ** np.arange(4)
    for _ in range(MAX_ITER):
        diffs = z[:, None] - z[None, :]
        np.fill_diagonal(diffs, 1.0)
        step = _polyval(monic, z) / np.prod(diffs, axis=1)
        z = z - step
        small_step = np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(z))
        # |p(z)| at the level of rounding error in evaluating p: cannot improve.
        at_noise = np.abs(_polyval(monic, z)) <= 8 * _EPS * _polyval(np.abs(monic), np.abs(z)).real
        if np.all(small_step | at_noise):
            break
    else:
        raise ConvergenceError("Durand-Kerner iteration did not converge")

    for _ in range(3):
        d = _polyval(deriv, z)
        ok = np.abs(d) > 0
        z = np.where(ok, z - _polyval(monic, z) / np.where(ok, d, 1.0), z)

    residuals = np.abs(_polyval(coeffs, z))
    tol = ROOT_RESIDUAL_TOL * np.max(np.abs(coeffs))
    if np.any(residuals > tol) or not np.all(np.isfinite(z)):
        raise ConvergenceError(f"root residuals {residuals} exceed {tol:.1e}")
    order = np.lexsort((z.imag, z.real))
    return QuarticRoots(roots=z[order], residuals=residuals[order])
