"""
Presets that regenerate the data behind each published figure (2 to 8).

Every preset writes ``figN[panel].csv`` and a ``.json`` sidecar holding the
same columns as arrays plus the exact parameters, grid, seed and sample count.
"""
from __future__ import annotations

import math
from dataclasses import asdict
from pathlib import Path

from .entanglement import DEFAULT_SAMPLES
from .model import reference_params
from .sweep import RunConfig, SweepSpec, run_sweep, to_csv, to_json

FIGURES = tuple(range(2, 9))
GAMMA_M_VALUES = (1e-2, 1e-3, 1e-4)
G_C_VALUES = (1.5, 2.0, 2.5)
T_ENTRIES = ("T11", "T13", "T31", "T33", "T41", "T43", "T14", "T34")


def _panels(n: int):
    """Yield (suffix, [(base params, curve columns)], SweepSpec, observables)."""
    half = math.pi / 2
    if n == 2:
        for suffix, phi in (("a", half), ("b", -half)):
            yield suffix, [(reference_params(phi), {})], SweepSpec("omega", -6.0, 6.0, 241), list(T_ENTRIES)
    elif n == 3:
        yield "", [(reference_params(), {})], SweepSpec("phi", -math.pi, math.pi, 201), ["eof"]
    elif n == 4:
        curves = [(reference_params(g_c=gc), {"g_c": gc}) for gc in G_C_VALUES]
        yield "", curves, SweepSpec("g_a", 0.0, 3.0, 301), ["eof_ac"]
    elif n == 5:
        for suffix, phi in (("a", half), ("b", -half)):
            yield suffix, [(reference_params(phi), {})], SweepSpec("omega", -6.0, 6.0, 241), ["eof"]
    elif n == 6:
        curves = [(reference_params(gamma_m=g), {"gamma_m": g}) for g in GAMMA_M_VALUES]
        yield "", curves, SweepSpec("n_th", 0.0, 400.0, 201), ["eof_ac"]
    elif n == 7:
        yield "", [(reference_params(), {})], SweepSpec("phi", -math.pi, math.pi, 201), ["witness"]
    elif n == 8:
        curves = [(reference_params(0.0, gamma_m=g), {"gamma_m": g}) for g in GAMMA_M_VALUES]
        yield "", curves, SweepSpec("n_th", 0.0, 400.0, 41), ["witness"]
    else:
        raise ValueError(f"figure must be one of {FIGURES}, got {n!r}")


def figure_records(n: int, seed: int = 0, samples: int = DEFAULT_SAMPLES, workers: int = 1):
    """Yield (suffix, records, meta) for each panel of figure ``n``."""
    for suffix, curves, spec, observables in _panels(n):
        records, meta_curves = [], []
        for params, extra in curves:
            cfg = RunConfig(params=params, samples=samples, seed=seed)
            records += run_sweep(cfg, spec, observables, workers=workers, extra=extra)
            meta_curves.append({"params": asdict(params), **extra})
        meta = {
            "figure": n,
            "panel": suffix or None,
            "sweep": asdict(spec),
            "omega": 0.0,
            "seed": seed,
            "samples": samples,
            "units": "rates and frequencies in MHz (divided by 2 pi); phases in radians",
            "curves": meta_curves,
        }
        yield suffix, records, meta


def reproduce_figure(
    n: int, out_dir=".", seed: int = 0, samples: int = DEFAULT_SAMPLES, workers: int = 1
) -> list[Path]:
    """Write the CSV and JSON sidecar for every panel of figure ``n``; return the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for suffix, records, meta in figure_records(n, seed, samples, workers):
        stem = out_dir / f"fig{n}{suffix}"
        csv_path, json_path = stem.with_suffix(".csv"), stem.with_suffix(".json")
        csv_path.write_text(to_csv(records))
        json_path.write_text(to_json(records, meta))
        paths += [csv_path, json_path]
    return paths
