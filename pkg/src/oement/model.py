"""
System parameters and the linear-response matrices of the three-cavity
optoelectromechanical interface.

Mode order everywhere is (a^dagger, b, c, d): cavity ``a`` is blue-detuned so
its creation operator enters the linear equations, ``b`` is the mechanical
mode and ``c``, ``d`` are red-detuned cavities joined by a hopping term.

All rates and couplings are the "/2pi" values in MHz. No factor of 2pi is
applied anywhere; every formula used downstream only involves ratios of
rates or matrices whose entries carry the same unit.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, fields, replace

import numpy as np

# Exact SI values (unchanged between CODATA 2018 and the 2019 SI redefinition).
PLANCK_H = 6.62607015e-34  # J s
BOLTZMANN_K = 1.380649e-23  # J / K

MODES = ("a", "b", "c", "d")


def normalize_phase(phi: float) -> float:
    """Map an angle into (-pi, pi]; -pi itself maps to pi."""
    out = math.remainder(phi, 2 * math.pi)
    if out <= -math.pi:
        out += 2 * math.pi
    return out


@dataclass(frozen=True)
class SystemParams:
    """One operating point.

    ``g_a``, ``g_c``, ``g_x`` are real couplings; the remaining loop phase is
    carried by ``G_d = g_d_mag * exp(i phi)``.
    """

    kappa_a: float
    kappa_c: float
    kappa_d: float
    gamma_m: float
    g_a: float
    g_c: float
    g_x: float
    g_d_mag: float
    phi: float = 0.0
    n_th: float = 0.0

    def __post_init__(self):
        problems = validate_fields({f.name: getattr(self, f.name) for f in fields(self)})
        if problems:
            raise ValueError("; ".join(problems))
        object.__setattr__(self, "phi", normalize_phase(float(self.phi)))

    @property
    def g_d(self) -> complex:
        return self.g_d_mag * complex(math.cos(self.phi), math.sin(self.phi))

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


def validate_fields(values: dict) -> list[str]:
    """Constraint violations for a mapping of ``SystemParams`` field values."""
    problems = []
    for name, value in values.items():
        if not isinstance(value, numbers.Real) or isinstance(value, bool) or not math.isfinite(value):
            problems.append(f"{name}: must be a finite number, got {value!r}")
            continue
        if name in ("kappa_a", "kappa_c", "kappa_d") and value <= 0:
            problems.append(f"{name}: must be > 0, got {value!r}")
        elif name in ("gamma_m", "g_a", "g_c", "g_x", "g_d_mag", "n_th") and value < 0:
            problems.append(f"{name}: must be >= 0, got {value!r}")
    return problems


def reference_params(phi: float = math.pi / 2, **overrides) -> SystemParams:
    """Reference operating point shared by all figure presets.

    kappa_a = 2, kappa_c = kappa_d = 3, gamma_m = 0.01, G_a = 1.5, G_c = 2 MHz,
    with G_x = sqrt(kappa_c kappa_d)/2 and |G_d| = G_c sqrt(kappa_d/kappa_c).
    ``g_x`` and ``g_d_mag`` are recomputed from overridden rates unless given.
    """
    base = dict(kappa_a=2.0, kappa_c=3.0, kappa_d=3.0, gamma_m=0.01, g_a=1.5, g_c=2.0, n_th=0.0)
    base.update({k: v for k, v in overrides.items() if k not in ("g_x", "g_d_mag")})
    g_x = overrides.get("g_x", math.sqrt(base["kappa_c"] * base["kappa_d"]) / 2)
    g_d_mag = overrides.get("g_d_mag", base["g_c"] * math.sqrt(base["kappa_d"] / base["kappa_c"]))
    return SystemParams(g_x=g_x, g_d_mag=g_d_mag, phi=phi, **base)


@dataclass(frozen=True)
class RawCouplings:
    """Complex couplings before the gauge transformation."""

    g_a: complex
    g_c: complex
    g_d: complex
    g_x: complex


def canonicalize(raw: RawCouplings, kappa_a, kappa_c, kappa_d, gamma_m, n_th=0.0):
    """Absorb coupling phases into the mode operators.

    Rephasing b -> b e^{-i phi_a}, c -> c e^{i(phi_c - phi_a)} and
    d -> d e^{i(-phi_x + phi_c - phi_a)} makes G_a, G_c, G_x real and leaves the
    loop phase phi = phi_d + phi_x - phi_c on G_d.

    Returns
    -------
    (SystemParams, dict)
        Canonical parameters and the per-mode rephasing angles.
    """
    pa, pc, pd, px = (np.angle(raw.g_a), np.angle(raw.g_c), np.angle(raw.g_d), np.angle(raw.g_x))
    params = SystemParams(
        kappa_a=kappa_a,
        kappa_c=kappa_c,
        kappa_d=kappa_d,
        gamma_m=gamma_m,
        g_a=abs(raw.g_a),
        g_c=abs(raw.g_c),
        g_x=abs(raw.g_x),
        g_d_mag=abs(raw.g_d),
        phi=pd + px - pc,
        n_th=n_th,
    )
    phases = {"a": 0.0, "b": -pa, "c": pc - pa, "d": -px + pc - pa}
    return params, phases


def coupling_matrix(g_a, g_c, g_d, g_x, kappa_a, kappa_c, kappa_d, gamma_m) -> np.ndarray:
    """Dynamic matrix for arbitrary complex couplings."""
    conj = np.conj
    return np.array(
        [
            [-kappa_a / 2, 1j * g_a, 0, 0],
            [-1j * conj(g_a), -gamma_m / 2, -1j * conj(g_c), -1j * conj(g_d)],
            [0, -1j * g_c, -kappa_c / 2, -1j * g_x],
            [0, -1j * g_d, -1j * conj(g_x), -kappa_d / 2],
        ],
        dtype=complex,
    )


def dynamic_matrix(p: SystemParams) -> np.ndarray:
    """The 4x4 drift matrix M of dv/dt = M v + sqrt(K) v_in."""
    return coupling_matrix(p.g_a, p.g_c, p.g_d, p.g_x, p.kappa_a, p.kappa_c, p.kappa_d, p.gamma_m)


def raw_dynamic_matrix(raw: RawCouplings, kappa_a, kappa_c, kappa_d, gamma_m) -> np.ndarray:
    return coupling_matrix(raw.g_a, raw.g_c, raw.g_d, raw.g_x, kappa_a, kappa_c, kappa_d, gamma_m)


def damping_matrix(p: SystemParams) -> np.ndarray:
    return np.diag(np.sqrt([p.kappa_a, p.gamma_m, p.kappa_c, p.kappa_d]))


def cooperativity(p: SystemParams, mode: str) -> float:
    """Gamma = 4 G^2 / kappa for cavity ``mode`` in {'a', 'c', 'd'}."""
    try:
        g, kappa = {
            "a": (p.g_a, p.kappa_a),
            "c": (p.g_c, p.kappa_c),
            "d": (p.g_d_mag, p.kappa_d),
        }[mode]
    except KeyError:
        raise ValueError(f"unknown cavity mode {mode!r}; expected 'a', 'c' or 'd'") from None
    return 4 * g * g / kappa


def sweet_spot(p: SystemParams, branch: str = "plus") -> SystemParams:
    """Move ``p`` onto one of the two switching operating points.

    plus:  |G_d| = 2 G_c G_x / kappa_c, phi = +pi/2  (a-c entangled, d decoupled)
    minus: |G_d| = G_c kappa_d / (2 G_x), phi = -pi/2  (a-d entangled, c decoupled)

    with G_x = sqrt(kappa_c kappa_d)/2 in both cases, which gives
    |G_d| = G_c sqrt(kappa_d / kappa_c), i.e. Gamma_c = Gamma_d.
    """
    if p.g_c <= 0:
        raise ValueError("sweet spot requires g_c > 0")
    g_x = math.sqrt(p.kappa_c * p.kappa_d) / 2
    if branch == "plus":
        return p.with_(g_x=g_x, g_d_mag=2 * p.g_c * g_x / p.kappa_c, phi=math.pi / 2)
    if branch == "minus":
        return p.with_(g_x=g_x, g_d_mag=p.g_c * p.kappa_d / (2 * g_x), phi=-math.pi / 2)
    raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")


def thermal_occupancy(omega_m: float, temperature: float) -> float:
    """Bose-Einstein occupancy of a mode at ``omega_m``/2pi MHz and ``temperature`` K."""
    if omega_m <= 0 or temperature <= 0:
        raise ValueError("omega_m and temperature must be positive")
    x = PLANCK_H * omega_m * 1e6 / (BOLTZMANN_K * temperature)
    if x > 700:
        return math.exp(-x)
    return 1.0 / math.expm1(x)
