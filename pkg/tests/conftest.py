import math
import sys

import numpy as np
import pytest

from oement.model import SystemParams, reference_params
from oement.stability import is_stable_rh


def random_params(rng, lo=0.1, hi=10.0, n_th_max=0.0) -> SystemParams:
    """Rates and couplings uniform in [lo, hi] MHz, phase uniform in (-pi, pi]."""
    r = rng.uniform(lo, hi, size=8)
    return SystemParams(
        kappa_a=r[0],
        kappa_c=r[1],
        kappa_d=r[2],
        gamma_m=r[3],
        g_a=r[4],
        g_c=r[5],
        g_x=r[6],
        g_d_mag=r[7],
        phi=rng.uniform(-math.pi, math.pi),
        n_th=rng.uniform(0, n_th_max) if n_th_max else 0.0,
    )


def stable_draws(seed, count, **kwargs):
    """``count`` random operating points accepted by the Routh-Hurwitz test."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = random_params(rng, **kwargs)
        if is_stable_rh(p).stable:
            out.append(p)
    return out


@pytest.fixture
def ref():
    return reference_params()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
