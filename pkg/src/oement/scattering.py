"""
Input-output scattering: T(omega) = I - i sqrt(K) (omega I - i M)^{-1} sqrt(K).

Rows/columns follow the (a^dagger, b, c, d) order, so T maps input operators
to output operators and ``T[i, j]`` is the amplitude of input ``j`` in output
``i``. Because a^dagger is mixed with annihilation operators, T preserves the
indefinite form ``SIGMA = diag(-1, 1, 1, 1)`` instead of being unitary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditionError, UnstableOperatingPoint
from .model import SystemParams, cooperativity, damping_matrix, dynamic_matrix
from .numerics import invert

SIGMA = np.diag([-1.0, 1.0, 1.0, 1.0])
CONDITION_TOL = 1e-9


@dataclass(frozen=True)
class TransmissionMatrix:
    matrix: np.ndarray
    omega: float
    params: SystemParams

    def __getitem__(self, idx):
        return self.matrix[idx]

    def probabilities(self) -> np.ndarray:
        """|T_ij|^2 for all entries."""
        return np.abs(self.matrix) ** 2


def scattering_matrix(m: np.ndarray, sqrt_k: np.ndarray, omega: float) -> np.ndarray:
    """T(omega) for an arbitrary drift matrix ``m`` and damping ``sqrt_k``."""
    n = m.shape[0]
    resolvent = invert(omega * np.eye(n) - 1j * m)
    return np.eye(n) - 1j * sqrt_k @ resolvent @ sqrt_k


def transmission(p: SystemParams, omega: float = 0.0) -> TransmissionMatrix:
    t = scattering_matrix(dynamic_matrix(p), damping_matrix(p), omega)
    return TransmissionMatrix(matrix=t, omega=float(omega), params=p)


def quasi_unitarity_defect(t) -> float:
    """max |T SIGMA T^dagger - SIGMA|."""
    t = np.asarray(getattr(t, "matrix", t))
    return float(np.max(np.abs(t @ SIGMA @ t.conj().T - SIGMA)))


def _close(value, target, name):
    if abs(value - target) > CONDITION_TOL * max(1.0, abs(target)):
        raise ConditionError(f"{name}: expected {target!r}, got {value!r}")


def check_sweet_spot(p: SystemParams, branch: str) -> None:
    """Raise ConditionError naming the first operating condition that fails."""
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    _close(p.g_x, math.sqrt(p.kappa_c * p.kappa_d) / 2, "g_x = sqrt(kappa_c kappa_d)/2")
    if branch == "plus":
        _close(p.phi, math.pi / 2, "phi = pi/2")
        _close(p.g_d_mag, 2 * p.g_c * p.g_x / p.kappa_c, "|G_d| = 2 G_c G_x / kappa_c")
    else:
        _close(p.phi, -math.pi / 2, "phi = -pi/2")
        _close(p.g_d_mag, p.g_c * p.kappa_d / (2 * p.g_x), "|G_d| = G_c kappa_d / (2 G_x)")


def closed_form(p: SystemParams, branch: str = "plus") -> TransmissionMatrix:
    """Zero-frequency transmission matrix at a sweet spot, written with Gamma_a, Gamma_c, gamma_m.

    Raises ConditionError if ``p`` is not at the requested sweet spot.
    """
    check_sweet_spot(p, branch)
    ga, gc, gm = cooperativity(p, "a"), cooperativity(p, "c"), p.gamma_m
    den = gc - ga + gm
    if den == 0:
        raise UnstableOperatingPoint("Gamma_c - Gamma_a + gamma_m = 0")
    r_ac, r_am, r_cm = math.sqrt(ga * gc), math.sqrt(ga * gm), math.sqrt(gc * gm)
    t11 = -(gc + ga + gm) / den
    t22 = (gc - ga - gm) / den
    out = -1j * (gc + ga - gm) / den
    if branch == "plus":
        t = [
            [t11, -2j * r_am / den, 0, 2j * r_ac / den],
            [2j * r_am / den, t22, 0, 2 * r_cm / den],
            [2 * r_ac / den, 2j * r_cm / den, 0, out],
            [0, 0, 1j, 0],
        ]
    else:
        t = [
            [t11, -2j * r_am / den, -2 * r_ac / den, 0],
            [2j * r_am / den, t22, 2j * r_cm / den, 0],
            [0, 0, 0, 1j],
            [-2j * r_ac / den, 2 * r_cm / den, out, 0],
        ]
    return TransmissionMatrix(matrix=np.array(t, dtype=complex), omega=0.0, params=p)


def bogoliubov(p: SystemParams, branch: str = "plus") -> tuple[float, float]:
    """Lossless (gamma_m -> 0) Bogoliubov coefficients (u, v) of the entangled output pair.

    u = (Gamma_c + Gamma_a)/(Gamma_c - Gamma_a), v = 2 sqrt(Gamma_a Gamma_c)/(Gamma_c - Gamma_a),
    so that u^2 - v^2 = 1. The two branches differ only by phases.
    """
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    ga, gc = cooperativity(p, "a"), cooperativity(p, "c")
    if ga >= gc:
        raise UnstableOperatingPoint(f"Gamma_a = {ga:g} >= Gamma_c = {gc:g}")
    return (gc + ga) / (gc - ga), 2 * math.sqrt(ga * gc) / (gc - ga)


def denominator_term(p: SystemParams, omega: float) -> complex:
    """Frequency-dependent denominator A(omega) shared by the T(omega) entries.

    Uses w_alpha = omega + i kappa_alpha/2 and w_m = omega + i gamma_m/2. The
    expression omits the loop term proportional to cos(phi), so it equals
    det(omega I - i M) only at phi = +-pi/2.
    """
    wa = omega + 0.5j * p.kappa_a
    wm = omega + 0.5j * p.gamma_m
    wc = omega + 0.5j * p.kappa_c
    wd = omega + 0.5j * p.kappa_d
    return (
        wa * wm * wc * wd
        - wa * (wm * p.g_x**2 + wd * p.g_c**2 + wc * p.g_d_mag**2)
        + p.g_a**2 * (wc * wd - p.g_x**2)
    )


def halfwidth_estimate(p: SystemParams) -> float:
    """Order-of-magnitude spectral halfwidth, min over cavities of kappa and nonzero Gamma."""
    rates = [p.kappa_a, p.kappa_c, p.kappa_d]
    rates += [g for g in (cooperativity(p, m) for m in "acd") if g > 0]
    return min(rates)
