"""
Bipartite and tripartite entanglement of the output modes.

* ``eof``: Gaussian entanglement of formation of a two-mode state in standard
  form, computed from the minimal two-mode squeezing r0 that can prepare it.
* ``log_negativity``: PPT-based cross-check.
* ``delta_e`` / ``tripartite_witness``: a product-of-spreads inequality whose
  violation (Delta E < 0) signals genuine tripartite entanglement, tested on
  seeded random weights.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import counter_rng
from .model import SystemParams
from .moments import (
    output_covariance,
    reduce_pair,
    require_physical,
    standard_form,
    symplectic_eigenvalues,
)

PPT_TOL = 1e-12
DEFAULT_SAMPLES = 50_000
_CHUNK = 20_000
_PT = np.diag([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True)
class EofResult:
    r0: float
    e_f: float
    kappa_inv: float
    lambda_plus: float
    lambda_minus: float


def eof_from_r0(r0: float) -> float:
    """cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r, in ebits."""
    if r0 <= 0:
        return 0.0
    c2, s2 = math.cosh(r0) ** 2, math.sinh(r0) ** 2
    return c2 * math.log2(c2) - s2 * math.log2(s2)


def _ppt_min(m: np.ndarray) -> float:
    return float(symplectic_eigenvalues(_PT @ m @ _PT)[0])


def eof(s) -> EofResult:
    """Entanglement of formation of a two-mode standard-form covariance.

    States certified separable by the PPT criterion return r0 = e_f = 0
    without evaluating the closed form.
    """
    m = np.asarray(getattr(s, "matrix", s), dtype=float)
    require_physical(m)
    v_aa, v_cc, v_ac = m[0, 0], m[2, 2], abs(m[0, 2])
    kappa = 2 * (16 * np.linalg.det(m) + 1) - 4 * (v_aa - v_cc) ** 2
    lam_p = 4 * (v_aa + v_cc + 2 * v_ac) ** 2
    lam_m = 4 * (v_aa + v_cc - 2 * v_ac) ** 2
    if _ppt_min(m) >= 0.5 - PPT_TOL:
        return EofResult(0.0, 0.0, kappa, lam_p, lam_m)
    # kappa - sqrt(kappa^2 - l+ l-) rewritten as l+ l- / (kappa + sqrt(...)):
    # avoids cancellation when the state is close to pure.
    root = math.sqrt(max(kappa * kappa - lam_p * lam_m, 0.0))
    r0 = 0.25 * math.log(lam_p / (kappa + root))
    if r0 <= 0:
        return EofResult(0.0, 0.0, kappa, lam_p, lam_m)
    return EofResult(r0, eof_from_r0(r0), kappa, lam_p, lam_m)


def eof_pair(p: SystemParams, omega_n: float = 0.0, pair: str = "ac") -> EofResult:
    cov = output_covariance(p, omega_n)
    return eof(standard_form(reduce_pair(cov, pair)))


def log_negativity(r) -> float:
    """max(0, -log2(2 nu)), nu the smallest symplectic eigenvalue after partial transposition."""
    m = np.asarray(getattr(r, "matrix", r), dtype=float)
    require_physical(m)
    return max(0.0, -math.log2(2 * _ppt_min(m)))


@dataclass(frozen=True)
class WeightVector:
    """Weights of u = sum h_i X_i and v = sum g_i P_i over outputs (a, c, d)."""

    h: tuple[float, float, float]
    g: tuple[float, float, float]

    def __post_init__(self):
        h = tuple(float(x) for x in self.h)
        g = tuple(float(x) for x in self.g)
        if len(h) != 3 or len(g) != 3:
            raise ValueError("h and g need three components each")
        if any(abs(x) > 1 for x in h + g):
            raise ValueError("weights must lie in [-1, 1]")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    def as_array(self) -> np.ndarray:
        return np.array(self.h + self.g)


def biseparable_bound(h, g) -> np.ndarray:
    """min{|g3 h3| + |h1 g1 + h2 g2|, |g2 h2| + |h1 g1 + h3 g3|, |g1 h1| + |g2 h2 + h3 g3|}."""
    h, g = np.atleast_2d(h), np.atleast_2d(g)
    hg = h * g
    return np.minimum.reduce(
        [
            np.abs(hg[:, 2]) + np.abs(hg[:, 0] + hg[:, 1]),
            np.abs(hg[:, 1]) + np.abs(hg[:, 0] + hg[:, 2]),
            np.abs(hg[:, 0]) + np.abs(hg[:, 1] + hg[:, 2]),
        ]
    )


def _delta_e_batch(m, h, g, spread, bound_scale):
    vx, vp = m[0::2, 0::2], m[1::2, 1::2]
    var_u = np.einsum("ni,ij,nj->n", h, vx, h)
    var_v = np.einsum("ni,ij,nj->n", g, vp, g)
    if spread == "std":
        prod = np.sqrt(np.clip(var_u, 0, None) * np.clip(var_v, 0, None))
    elif spread == "variance":
        prod = var_u * var_v
    else:
        raise ValueError(f"spread must be 'std' or 'variance', got {spread!r}")
    return prod - bound_scale * biseparable_bound(h, g)


def delta_e(v, w: WeightVector, spread: str = "std", bound_scale: float = 1.0) -> float:
    """Delta E = spread(u) * spread(v) - bound_scale * biseparable bound.

    ``spread="std"`` multiplies standard deviations, ``"variance"``
    variances. With the vacuum variance 1/2 used for V, the bound is not
    rescaled by default, so even vacuum gives Delta E < 0 for some weights.
    ``bound_scale=0.5`` with ``spread="std"`` is the vacuum-normalised test.
    """
    m = np.asarray(getattr(v, "matrix", v), dtype=float)
    h, g = np.array([w.h]), np.array([w.g])
    return float(_delta_e_batch(m, h, g, spread, bound_scale)[0])


def sample_weights(seed: int, start: int, count: int) -> np.ndarray:
    """Weights for samples ``start .. start+count-1`` as a (count, 6) array in [-1, 1)."""
    idx = np.arange(6 * start, 6 * (start + count), dtype=np.uint64)
    return (2.0 * counter_rng.uniform(seed, idx) - 1.0).reshape(count, 6)


@dataclass(frozen=True)
class TripartiteWitness:
    n_samples: int
    seed: int
    min_delta_e: float
    max_delta_e: float
    fraction_negative: float
    best_weights: WeightVector

    @property
    def witnessed(self) -> bool:
        """At least one sampled weight choice violates the inequality."""
        return self.min_delta_e < 0

    @property
    def all_negative(self) -> bool:
        """Every sampled weight choice violates the inequality."""
        return self.max_delta_e < 0


def tripartite_witness(
    v,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    spread: str = "std",
    bound_scale: float = 1.0,
) -> TripartiteWitness:
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    m = np.asarray(getattr(v, "matrix", v), dtype=float)
    require_physical(m)
    lo, hi, neg = math.inf, -math.inf, 0
    best = None
    for start in range(0, n_samples, _CHUNK):
        count = min(_CHUNK, n_samples - start)
        w = sample_weights(seed, start, count)
        d = _delta_e_batch(m, w[:, :3], w[:, 3:], spread, bound_scale)
        k = int(np.argmin(d))
        if d[k] < lo:
            lo, best = float(d[k]), w[k]
        hi = max(hi, float(d.max()))
        neg += int(np.count_nonzero(d < 0))
    return TripartiteWitness(
        n_samples=n_samples,
        seed=seed,
        min_delta_e=lo,
        max_delta_e=hi,
        fraction_negative=neg / n_samples,
        best_weights=WeightVector(best[:3], best[3:]),
    )


def tripartite_optimize(
    v,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    spread: str = "std",
    bound_scale: float = 1.0,
    start: WeightVector | None = None,
) -> tuple[WeightVector, float]:
    """Refine the most violating sampled weights with a bounded Nelder-Mead search.

    The returned Delta E never exceeds the starting value.
    """
    m = np.asarray(getattr(v, "matrix", v), dtype=float)
    if start is None:
        start = tripartite_witness(m, n_samples, seed, spread, bound_scale).best_weights
    x0 = start.as_array()

    def objective(x):
        x = np.clip(x, -1, 1)
        return float(_delta_e_batch(m, x[None, :3], x[None, 3:], spread, bound_scale)[0])

    f0 = objective(x0)
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        bounds=[(-1.0, 1.0)] * 6,
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20_000, "maxfev": 40_000},
    )
    x = np.clip(res.x, -1, 1)
    fx = objective(x)
    if fx > f0:
        x, fx = x0, f0
    return WeightVector(x[:3], x[3:]), fx
