"""
Run configuration, parameter sweeps and CSV/JSON emission.

Config files are flat ``key = value`` text. Keys are the ``SystemParams``
field names plus ``omega``, ``samples`` and ``seed``, and ``#`` starts a
comment. Values are numbers or simple expressions in ``pi`` such as
``3*pi/2``. All rates are "/2pi" values in MHz.
"""
from __future__ import annotations

import ast
import csv
import io
import json
import logging
import math
import operator
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .counter_rng import derive_seed
from .entanglement import DEFAULT_SAMPLES, eof_pair, tripartite_witness
from .model import SystemParams, normalize_phase, reference_params, validate_fields
from .moments import output_covariance
from .scattering import transmission
from .stability import is_stable_rh

log = logging.getLogger(__name__)

PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
CONFIG_KEYS = PARAM_KEYS + ("omega", "samples", "seed")
AXES = ("phi", "g_a", "omega", "n_th", "gamma_m", "g_c")
PAIR_NAMES = ("ac", "ad", "cd")
WITNESS_COLUMNS = ("dE_min", "dE_max", "dE_frac_neg", "dE_witnessed", "dE_all_neg")


class ConfigParseError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class ConfigValidationError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def parse_number(text: str) -> int | float:
    """Evaluate a number or an arithmetic expression in ``pi``.

    Integer literals stay exact Python ints unless combined with floats.
    """
    text = text.strip().replace("π", "pi")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported expression {text!r}")

    try:
        return ev(ast.parse(text, mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r}: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams = field(default_factory=reference_params)
    omega: float = 0.0
    samples: int = DEFAULT_SAMPLES
    seed: int = 0


def validate_config(text: str) -> tuple[RunConfig, list[str]]:
    """Parse and validate config text.

    Returns the config and a list of notices (e.g. phase normalisation).
    Raises ConfigParseError for malformed lines or values and
    ConfigValidationError for unknown keys or constraint violations; both
    carry the full ``errors`` list.
    """
    raw, parse_errors = {}, []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            parse_errors.append(f"line {lineno}: expected 'key = value'")
            continue
        if key in raw:
            parse_errors.append(f"line {lineno}: duplicate key {key}")
            continue
        try:
            raw[key] = parse_number(value)
        except ValueError as exc:
            parse_errors.append(f"line {lineno}: {key}: {exc}")
    if parse_errors:
        raise ConfigParseError(parse_errors)

    errors = [f"{k}: unknown key (allowed: {', '.join(CONFIG_KEYS)})" for k in raw if k not in CONFIG_KEYS]
    notices = []
    for key in PARAM_KEYS + ("omega",):
        if key in raw:
            try:
                raw[key] = float(raw[key])
            except OverflowError:
                raw[key] = math.nan
    base = asdict(reference_params())
    values = {k: raw.get(k, base[k]) for k in PARAM_KEYS}
    errors += validate_fields(values)
    if "phi" in raw and math.isfinite(raw["phi"]):
        phi = normalize_phase(raw["phi"])
        if phi != raw["phi"]:
            notices.append(f"phi: {raw['phi']!r} normalized to {phi!r}")
    for key in ("samples", "seed"):
        if key in raw:
            v = raw[key]
            if not (isinstance(v, int) or (math.isfinite(v) and v.is_integer())):
                errors.append(f"{key}: must be an integer, got {v!r}")
            elif key == "samples" and v < 1:
                errors.append(f"samples: must be >= 1, got {int(v)}")
            elif key == "seed" and not 0 <= v < 2**64:
                errors.append(f"seed: must be in [0, 2**64), got {int(v)}")
    if "omega" in raw and not math.isfinite(raw["omega"]):
        errors.append(f"omega: must be a finite number, got {raw['omega']!r}")
    if errors:
        raise ConfigValidationError(errors)

    cfg = RunConfig(
        params=SystemParams(**values),
        omega=raw.get("omega", 0.0),
        samples=int(raw.get("samples", DEFAULT_SAMPLES)),
        seed=int(raw.get("seed", 0)),
    )
    return cfg, notices


def format_config(cfg: RunConfig) -> str:
    """Config text that ``validate_config`` parses back to ``cfg`` exactly."""
    lines = [f"{k} = {getattr(cfg.params, k)!r}" for k in PARAM_KEYS]
    lines += [f"omega = {cfg.omega!r}", f"samples = {cfg.samples}", f"seed = {cfg.seed}"]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SweepSpec:
    """Inclusive linear grid over one axis."""

    axis: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"steps must be an integer >= 2, got {self.steps!r}")
        if self.start == self.stop:
            raise ValueError("start and stop must differ")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.steps))


def apply_axis(cfg: RunConfig, axis: str, value: float) -> tuple[SystemParams, float]:
    """Parameters and probe frequency for one grid point.

    ``g_c`` sweeps keep ``g_d_mag / g_c`` fixed so impedance matching is preserved.
    """
    p, omega = cfg.params, cfg.omega
    value = float(value)
    if axis == "omega":
        return p, value
    if axis == "g_c":
        ratio = p.g_d_mag / p.g_c if p.g_c > 0 else 0.0
        return p.with_(g_c=value, g_d_mag=ratio * value), omega
    return p.with_(**{axis: value}), omega


def expand_observables(names) -> list[str]:
    """Normalise observable names to column names.

    Accepts ``T`` (all |T_ij|^2), ``T31`` style entries, ``eof`` (all pairs),
    ``eof_ac`` / ``E_F_ac`` and ``witness``.
    """
    cols = []
    for name in names:
        name = name.strip()
        if name == "T":
            cols += [f"T{i}{j}_sq" for i in range(1, 5) for j in range(1, 5)]
        elif len(name) == 3 and name[0] == "T" and name[1] in "1234" and name[2] in "1234":
            cols.append(f"{name}_sq")
        elif name == "eof":
            cols += [f"E_F_{q}" for q in PAIR_NAMES]
        elif name.lower() in {f"eof_{q}" for q in PAIR_NAMES} | {f"e_f_{q}" for q in PAIR_NAMES}:
            cols.append(f"E_F_{name[-2:]}")
        elif name == "witness":
            cols += list(WITNESS_COLUMNS)
        else:
            raise ValueError(f"unknown observable {name!r}")
    return list(dict.fromkeys(cols))


def evaluate_point(p: SystemParams, omega: float, columns, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> dict:
    """Observables at one operating point; ``None`` for every column if unstable."""
    stable = is_stable_rh(p).stable
    row = {"stable": stable}
    if not stable:
        row.update({c: None for c in columns})
        return row
    t = None
    cov = None
    for col in columns:
        if col.startswith("T") and col.endswith("_sq"):
            if t is None:
                t = transmission(p, omega).matrix
            row[col] = float(abs(t[int(col[1]) - 1, int(col[2]) - 1]) ** 2)
        elif col.startswith("E_F_"):
            row[col] = eof_pair(p, omega, col[-2:]).e_f
    if any(c in WITNESS_COLUMNS for c in columns):
        cov = output_covariance(p, omega)
        w = tripartite_witness(cov, samples, seed)
        stats = dict(
            dE_min=w.min_delta_e,
            dE_max=w.max_delta_e,
            dE_frac_neg=w.fraction_negative,
            dE_witnessed=w.witnessed,
            dE_all_neg=w.all_negative,
        )
        row.update({c: stats[c] for c in columns if c in stats})
    return row


def _point_task(args):
    index, axis, value, p, omega, columns, samples, seed = args
    return {axis: float(value), **evaluate_point(p, omega, columns, samples, derive_seed(seed, index))}


def run_sweep(cfg: RunConfig, spec: SweepSpec, observables, workers: int = 1, extra: dict | None = None) -> list[dict]:
    """Evaluate every grid point; records come back in grid order.

    Grid points are independent, and witness seeds derive from (seed, index),
    so results do not depend on ``workers``.
    """
    columns = expand_observables(observables)
    tasks = []
    for index, value in enumerate(spec.values()):
        p, omega = apply_axis(cfg, spec.axis, value)
        tasks.append((index, spec.axis, value, p, omega, columns, cfg.samples, cfg.seed))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_point_task, tasks))
    else:
        records = [_point_task(t) for t in tasks]
    if extra:
        records = [{**extra, **r} for r in records]
    if not any(r["stable"] for r in records):
        warnings.warn(f"every point of the {spec.axis} sweep is unstable", stacklevel=2)
    log.debug("sweep over %s: %d points", spec.axis, len(records))
    return records


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def _jsonable(value):
    if isinstance(value, str):
        return value
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(format(float(value), ".12g"))


def columns_of(records) -> list[str]:
    cols = []
    for r in records:
        cols += [k for k in r if k not in cols]
    return cols


def to_csv(records) -> str:
    cols = columns_of(records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in records:
        writer.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def to_json(records, meta: dict | None = None) -> str:
    cols = columns_of(records)
    doc = {"columns": {c: [_jsonable(r.get(c)) for r in records] for c in cols}}
    if meta is not None:
        doc["meta"] = meta
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
