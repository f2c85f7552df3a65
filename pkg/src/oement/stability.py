"""
Stability of an operating point.

Two independent routes:

* ``is_stable_rh`` uses closed-form characteristic coefficients and
  Routh-Hurwitz sign conditions.
* ``is_stable_eig`` builds det(lambda I - M) numerically from M and finds its
  roots.

The closed-form coefficients s3..s0 are the real parts of the characteristic
polynomial. The b-c-d coupling loop adds imaginary terms proportional to
cos(phi) to s1 and s0, which vanish only at phi = +-pi/2. When they are
present, the Hurwitz test runs on p(lambda) * conj(p)(lambda). That product
has real coefficients, and its roots are the roots of p together with their
conjugates, so the real parts are unchanged.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import SystemParams, cooperativity, dynamic_matrix
from .numerics import characteristic_polynomial, quartic_roots

EIG_MARGIN = 1e-9
REAL_TOL = 1e-10


@dataclass(frozen=True)
class CharCoeffs:
    s3: float
    s2: float
    s1: float
    s0: float
    s1_imag: float = 0.0
    s0_imag: float = 0.0

    @property
    def is_real(self) -> bool:
        scale = max(abs(self.s3), abs(self.s2), abs(self.s1), abs(self.s0), 1e-300)
        return max(abs(self.s1_imag), abs(self.s0_imag)) <= REAL_TOL * scale

    def polynomial(self) -> np.ndarray:
        """Complex coefficients [1, s3, s2, s1, s0], highest power first."""
        return np.array(
            [1.0, self.s3, self.s2, self.s1 + 1j * self.s1_imag, self.s0 + 1j * self.s0_imag]
        )


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    failing: str | None = None
    max_real: float | None = None


def char_coeffs(p: SystemParams) -> CharCoeffs:
    ka, kc, kd, gm = p.kappa_a, p.kappa_c, p.kappa_d, p.gamma_m
    ga2, gc2, gd2, gx2 = p.g_a**2, p.g_c**2, p.g_d_mag**2, p.g_x**2
    s3 = (ka + kc + kd + gm) / 2
    s2 = (ka * kc + ka * kd + kc * kd + gm * (ka + kc + kd)) / 4 + gx2 + gc2 + gd2 - ga2
    s1 = (
        (gm * (ka * kc + ka * kd + kc * kd) + ka * kc * kd) / 8
        + (ka + gm) * gx2 / 2
        + (ka + kd) * gc2 / 2
        + (ka + kc) * gd2 / 2
        - (kc + kd) * ga2 / 2
    )
    s0 = (
        ka * gm * kc * kd / 16
        + ka * gm * gx2 / 4
        + ka * kd * gc2 / 4
        + ka * kc * gd2 / 4
        - kc * kd * ga2 / 4
        - ga2 * gx2
    )
    loop = p.g_c * p.g_d_mag * p.g_x * math.cos(p.phi)
    return CharCoeffs(s3, s2, s1, s0, s1_imag=-2 * loop, s0_imag=-ka * loop)


def routh_first_column(coeffs) -> np.ndarray:
    """First column of the Routh array of a real polynomial (highest power first).

    A zero entry makes the rest undefined; it is returned as 0 and the
    remaining entries are NaN.
    """
    c = np.asarray(coeffs, dtype=float)
    n = len(c) - 1
    width = n // 2 + 1
    rows = [np.zeros(width), np.zeros(width)]
    rows[0][: len(c[0::2])] = c[0::2]
    rows[1][: len(c[1::2])] = c[1::2]
    col = [rows[0][0], rows[1][0]]
    for _ in range(n - 1):
        prev, cur = rows[-2], rows[-1]
        if cur[0] == 0:
            col.extend([np.nan] * (n + 1 - len(col)))
            break
        nxt = np.zeros(width)
        nxt[:-1] = (cur[0] * prev[1:] - prev[0] * cur[1:]) / cur[0]
        rows.append(nxt)
        col.append(nxt[0])
    return np.array(col[: n + 1])


def is_stable_rh(p: SystemParams) -> StabilityVerdict:
    """Routh-Hurwitz verdict and the first failing relation, if any."""
    c = char_coeffs(p)
    if c.is_real:
        s3, s2, s1, s0 = c.s3, c.s2, c.s1, c.s0
        if not all(s > 0 for s in (s3, s2, s1, s0)):
            return StabilityVerdict(False, "(1) all s_i > 0")
        if not s3 * s2 - s1 > 0:
            return StabilityVerdict(False, "(2) s3 s2 - s1 > 0")
        if not s3 * s2 * s1 - s1**2 - s0 * s3**2 > 0:
            return StabilityVerdict(False, "(3) s3 s2 s1 - s1^2 - s0 s3^2 > 0")
        return StabilityVerdict(True)

    poly = c.polynomial()
    real_poly = np.polymul(poly, poly.conj()).real
    column = routh_first_column(real_poly)
    for k, entry in enumerate(column):
        if not entry > 0:
            return StabilityVerdict(False, f"Routh column entry {k} of p*conj(p) not > 0")
    return StabilityVerdict(True)


def eigenvalues(p: SystemParams) -> np.ndarray:
    """Eigenvalues of M as roots of its numerically built characteristic polynomial."""
    coeffs = characteristic_polynomial(dynamic_matrix(p))
    return quartic_roots(*coeffs).roots


def is_stable_eig(p: SystemParams) -> StabilityVerdict:
    """Stable iff max Re(lambda) < -1e-9; the band around zero counts as unstable."""
    lam = eigenvalues(p)
    max_real = float(np.max(lam.real))
    stable = max_real < -EIG_MARGIN
    return StabilityVerdict(stable, None if stable else "max Re(lambda) >= -1e-9", max_real)


def approx_condition(p: SystemParams) -> StabilityVerdict:
    """Weak-damping, impedance-matched approximation: stable iff Gamma_c > Gamma_a.

    Warns when gamma_m is not small against the cavity rates and couplings,
    or when Gamma_c and Gamma_d differ by more than 10%.
    """
    ga, gc, gd = (cooperativity(p, m) for m in "acd")
    scales = [p.kappa_a, p.kappa_c, p.kappa_d] + [g for g in (p.g_a, p.g_c, p.g_d_mag) if g > 0]
    if p.gamma_m > 0.1 * min(scales):
        warnings.warn("gamma_m is not much smaller than the cavity rates and couplings", stacklevel=2)
    if abs(gc - gd) > 0.1 * max(gc, gd):
        warnings.warn("Gamma_c and Gamma_d are not impedance matched", stacklevel=2)
    stable = gc > ga
    return StabilityVerdict(stable, None if stable else "Gamma_c > Gamma_a")


def onset_g_a(p: SystemParams, g_max: float | None = None, tol: float = 1e-10) -> float:
    """Smallest G_a at which ``is_stable_rh`` fails, by bisection.

    Assumes a single transition between ``p.g_a = 0`` (stable) and ``g_max``.
    """
    lo, hi = 0.0, g_max if g_max is not None else 10 * max(p.g_c, p.g_d_mag, p.kappa_a, 1.0)
    if not is_stable_rh(p.with_(g_a=lo)).stable:
        raise ValueError("unstable already at G_a = 0")
    if is_stable_rh(p.with_(g_a=hi)).stable:
        raise ValueError(f"still stable at G_a = {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_stable_rh(p.with_(g_a=mid)).stable:
            lo = mid
        else:
            hi = mid
    return hi
