"""
Second moments of the filtered output modes.

Quadratures are X = (o + o^dagger)/sqrt(2), P = (o - o^dagger)/(sqrt(2) i), so
the vacuum variance is 1/2. The 6x6 covariance is ordered
(X_a, P_a, X_c, P_c, X_d, P_d).

Each discrete output mode is represented by T evaluated at the bin centre.
The filter width never enters because the filtered input correlations are
delta-normalised.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnphysicalCovarianceError, UnstableOperatingPoint
from .model import SystemParams
from .scattering import transmission
from .stability import is_stable_rh

PAIRS = {"ac": (0, 1), "ad": (0, 2), "cd": (1, 2)}
OUTPUT_ROWS = (0, 2, 3)  # rows of T for the a^dagger, c, d outputs
STRUCTURE_TOL = 1e-8
PHYSICAL_TOL = 1e-9

_OMEGA2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class CovarianceMatrix:
    matrix: np.ndarray
    omega: float
    n_th: float


@dataclass(frozen=True)
class ReducedCovariance:
    matrix: np.ndarray
    pair: str


@dataclass(frozen=True)
class StandardFormCov:
    matrix: np.ndarray
    pair: str
    angles: tuple[float, float]


def output_coefficients(t: np.ndarray, n_th: float) -> np.ndarray:
    """3x3 Hermitian matrix of v_ab = (1/2) sum_k w_k T_ik T_jk^* over outputs (a, c, d).

    Weights w_k are 1 for the vacuum cavity inputs and 2 n_th + 1 for the
    thermal mechanical input.
    """
    weights = np.array([1.0, 2 * n_th + 1, 1.0, 1.0])
    rows = np.asarray(t)[list(OUTPUT_ROWS)]
    return 0.5 * (rows * weights) @ rows.conj().T


def _squeeze_block(v: complex) -> np.ndarray:
    # correlations between a^dagger and an annihilation-type output
    return np.array([[v.real, -v.imag], [-v.imag, -v.real]])


def _hopping_block(w: complex) -> np.ndarray:
    # correlations between two annihilation-type outputs: w = <{c, d^dagger}>/2
    return np.array([[w.real, -w.imag], [w.imag, w.real]])


def assemble_covariance(v: np.ndarray) -> np.ndarray:
    out = np.zeros((6, 6))
    for k in range(3):
        out[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = v[k, k].real * np.eye(2)
    for (i, j), block in (
        ((0, 1), _squeeze_block(v[0, 1])),
        ((0, 2), _squeeze_block(v[0, 2])),
        ((1, 2), _hopping_block(v[1, 2])),
    ):
        out[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = block
        out[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] = block.T
    return out


def output_covariance(p: SystemParams, omega_n: float = 0.0) -> CovarianceMatrix:
    """Stationary covariance of the outputs at frequency ``omega_n``.

    Raises UnstableOperatingPoint when the system has no steady state.
    """
    verdict = is_stable_rh(p)
    if not verdict.stable:
        raise UnstableOperatingPoint(f"unstable operating point: {verdict.failing}")
    t = transmission(p, omega_n).matrix
    v = output_coefficients(t, p.n_th)
    return CovarianceMatrix(matrix=assemble_covariance(v), omega=float(omega_n), n_th=p.n_th)


def reduce_pair(cov, pair: str) -> ReducedCovariance:
    if pair not in PAIRS:
        raise ValueError(f"pair must be one of {sorted(PAIRS)}, got {pair!r}")
    m = np.asarray(getattr(cov, "matrix", cov))
    i, j = PAIRS[pair]
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    return ReducedCovariance(matrix=m[np.ix_(idx, idx)].copy(), pair=pair)


def standard_form(r: ReducedCovariance) -> StandardFormCov:
    """Bring the correlation block to diagonal form by local phase rotations.

    The diagonal blocks must be multiples of the identity, which makes them
    invariant under the rotations. The correlation block becomes
    diag(s1, sign(det C) s2) with s1 >= s2 >= 0. For the two-mode-squeezing
    type this is diag(|v|, -|v|).
    """
    m = np.asarray(r.matrix, dtype=float)
    a, c, b = m[:2, :2], m[:2, 2:], m[2:, 2:]
    for name, block in (("first", a), ("second", b)):
        if np.max(np.abs(block - 0.5 * np.trace(block) * np.eye(2))) > STRUCTURE_TOL * max(1.0, abs(np.trace(block))):
            raise ValueError(f"{name} diagonal block is not proportional to the identity")
    if np.max(np.abs(m - m.T)) > STRUCTURE_TOL * max(1.0, np.max(np.abs(m))):
        raise ValueError("covariance is not symmetric")

    u, s, wt = np.linalg.svd(c)
    w = wt.T
    flip = np.diag([1.0, -1.0])
    if np.linalg.det(u) < 0:
        u = u @ flip
        s = s * np.array([1.0, -1.0])
    if np.linalg.det(w) < 0:
        w = w @ flip
        s = s * np.array([1.0, -1.0])
    theta_1 = float(np.arctan2(u[1, 0], u[0, 0]))
    theta_2 = float(np.arctan2(w[1, 0], w[0, 0]))
    out = m.copy()
    out[:2, 2:] = np.diag(s)
    out[2:, :2] = np.diag(s)
    return StandardFormCov(matrix=out, pair=r.pair, angles=(theta_1, theta_2))


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), _OMEGA2)


def symplectic_eigenvalues(m) -> np.ndarray:
    """Symplectic spectrum (ascending) of a 2n x 2n covariance matrix."""
    m = np.asarray(getattr(m, "matrix", m), dtype=float)
    n = m.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ m)))
    return ev[::2]


def rounding_allowance(m) -> float:
    """Rounding floor of the smallest symplectic eigenvalue, eps * max|V|^2.

    Nearly pure, strongly squeezed states have condition number ~ |V|^2 for
    that eigenvalue, so double-precision entries alone can push it below 1/2.
    """
    m = np.asarray(getattr(m, "matrix", m), dtype=float)
    return float(np.finfo(float).eps * np.max(np.abs(m)) ** 2)


def is_physical(m, tol: float = PHYSICAL_TOL) -> bool:
    """Uncertainty principle: every symplectic eigenvalue >= 1/2 - tol - rounding_allowance."""
    m = np.asarray(getattr(m, "matrix", m), dtype=float)
    if np.max(np.abs(m - m.T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
        return False
    return bool(np.all(symplectic_eigenvalues(m) >= 0.5 - tol - rounding_allowance(m)))


def require_physical(m, tol: float = PHYSICAL_TOL) -> None:
    if not is_physical(m, tol):
        raise UnphysicalCovarianceError(
            f"symplectic eigenvalues {symplectic_eigenvalues(m)} below the vacuum value 1/2"
        )
