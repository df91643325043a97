"""Compiled kernels against the numpy fallback."""
import os
import subprocess
import sys

import numpy as np
import pytest

from wngdf import _backend, noise
from wngdf.beamformer import BeamformerSpec
from wngdf.geometry import ArrayGeometry, FrequencyGrid

from conftest import BACKENDS

needs_compiled = pytest.mark.skipif("compiled" not in BACKENDS, reason="extension not built")


def test_env_forces_fallback():
    env = dict(os.environ, WNGDF_BACKEND="python")
    out = subprocess.run(
        [sys.executable, "-c", "import wngdf; print(wngdf.backend)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_unknown_backend_is_auto():
    assert _backend.load("auto") in (_backend._fallback, _backend.load())


@needs_compiled
def test_segment_lags_agree(rng):
    c, p = _backend.load("compiled"), _backend.load("python")
    phase = rng.uniform(0, 3, 40)
    x, w = np.polynomial.legendre.leggauss(200)
    theta = 0.3 + (np.pi - 0.3) / 2 * (x + 1)
    args = (phase, np.cos(theta), 0.5 * w * np.sin(theta), 30)
    np.testing.assert_allclose(c.segment_lags(*args), p.segment_lags(*args), rtol=0, atol=1e-12)


@needs_compiled
@pytest.mark.parametrize("spec", [
    BeamformerSpec("DS"),
    BeamformerSpec("RSD", 0.2),
    BeamformerSpec("TUN", 1.0),
    BeamformerSpec("KP", 15),
    BeamformerSpec("CKP", 29),
])
def test_well_conditioned_designs_agree(spec, monkeypatch):
    from wngdf import beamformer, linalg
    from wngdf.metrics import evaluate
    g, grid = ArrayGeometry(30, 0.02), FrequencyGrid(bins=128)
    results = []
    for name in ("compiled", "python"):
        k = _backend.load(name)
        monkeypatch.setattr(linalg, "kernels", k)
        monkeypatch.setattr(noise, "kernels", k)
        H, _ = beamformer.build_stack(spec, g, grid.values)
        results.append((H, evaluate(spec, g, grid)[2]))
    (Hc, sc), (Hp, sp) = results
    np.testing.assert_allclose(Hc, Hp, rtol=1e-8, atol=1e-10)
    assert abs(sc.wng_db - sp.wng_db) <= 1e-8 and abs(sc.df_db - sp.df_db) <= 1e-8
