import math

import numpy as np
import pytest

from wngdf import noise
from wngdf.beamformer import BeamformerSpec, build
from wngdf.geometry import ArrayGeometry, FrequencyGrid, steering_vector
from wngdf.metrics import (
    MetricCurve,
    broadband,
    df_narrowband,
    evaluate,
    harmonic_mean,
    wng_narrowband,
)

from test_beamformer import ALL_SPECS

DS_DB = 10 * math.log10(30)

# designs whose solves run on the loading ladder over most of the band
SD_REGIME = [
    BeamformerSpec("SD"),
    BeamformerSpec("RSD", 0.0),
    BeamformerSpec("TUN", 0.0),
    BeamformerSpec("KP", 1),
    BeamformerSpec("KP", 5),
    BeamformerSpec("CKP", 1),
    BeamformerSpec("CKP", 12),
]


class TestWng:
    def test_delay_and_sum(self, geom30):
        d = steering_vector(geom30, 1500.0)
        assert wng_narrowband(d / 30, d) == pytest.approx(30, rel=1e-12)
        assert 10 * math.log10(wng_narrowband(d / 30, d)) == pytest.approx(14.771, abs=5e-4)

    def test_single_sensor_filter(self, geom30):
        d = steering_vector(geom30, 1500.0)
        h = np.zeros(30, dtype=complex)
        h[0] = 1
        assert wng_narrowband(h, d) == pytest.approx(1.0, rel=1e-15)

    def test_loop_oracle(self, rng):
        d = np.exp(-1j * 0.4 * np.arange(5))
        h = rng.normal(size=5) + 1j * rng.normal(size=5)
        h /= np.conj(np.vdot(h, d))
        num = 0j
        den = 0.0
        for k in range(5):
            num += np.conj(h[k]) * d[k]
            den += abs(h[k]) ** 2
        assert abs(wng_narrowband(h, d) - abs(num) ** 2 / den) <= 1e-12

    def test_accepts_weights_object(self, geom30):
        w = build(BeamformerSpec("DS"), geom30, 900.0)
        assert wng_narrowband(w, steering_vector(geom30, 900.0)) == pytest.approx(30)

    def test_zero_norm(self):
        with pytest.raises(ValueError):
            wng_narrowband(np.zeros(3), np.ones(3))


class TestDf:
    def test_zero_frequency_ds(self, geom30):
        d = steering_vector(geom30, 0.0)
        G = noise.gamma_isotropic(geom30, 0.0)
        assert df_narrowband(d / 30, d, G) == pytest.approx(1.0, rel=1e-12)

    def test_single_sensor(self):
        g = ArrayGeometry(1, 0.02)
        d = steering_vector(g, 4000.0)
        assert df_narrowband([1.0], d, noise.gamma_isotropic(g, 4000.0)) == pytest.approx(1.0)

    def test_ds_direct_evaluation(self, geom30):
        f = 4287.5
        d = steering_vector(geom30, f)
        quad = 0j
        for m in range(30):
            for n in range(30):
                x = 2 * math.pi * f * 0.02 * (m - n) / 343.0
                s = 1.0 if m == n else math.sin(x) / x
                quad += np.conj(d[m]) * s * d[n]
        expected = 900 / quad.real
        got = df_narrowband(d / 30, d, noise.gamma_isotropic(geom30, f))
        assert got == pytest.approx(expected, rel=1e-12)

    def test_degenerate(self):
        with pytest.raises(ValueError):
            df_narrowband([1, -1], [1, 1], np.ones((2, 2)))


class TestBroadband:
    def test_constant(self):
        g = FrequencyGrid(200, 8000, 64)
        assert broadband(MetricCurve(g, np.full(64, 7.3))) == pytest.approx(10 * math.log10(7.3), abs=1e-12)
        assert harmonic_mean(g.values, np.full(64, 7.3)) == pytest.approx(7.3, rel=1e-12)

    def test_two_point(self):
        g = FrequencyGrid(100, 200, 2)
        # mean of reciprocals is 2/3, harmonic mean 1.5
        assert broadband(MetricCurve(g, np.array([1.0, 3.0]))) == pytest.approx(1.76091259, abs=1e-6)

    def test_rejects_non_positive(self):
        g = FrequencyGrid(100, 200, 2)
        with pytest.raises(ValueError):
            broadband(MetricCurve(g, np.array([1.0, 0.0])))

    def test_curve_length_checked(self):
        with pytest.raises(ValueError):
            MetricCurve(FrequencyGrid(100, 200, 3), np.ones(2))


@pytest.fixture(scope="module")
def evaluated():
    g, grid = ArrayGeometry(30, 0.02), FrequencyGrid()
    return g, grid, {s: evaluate(s, g, grid) for s in ALL_SPECS}


class TestEvaluate:
    def test_ds_broadband(self, evaluated):
        *_, res = evaluated
        wng, _, score = res[BeamformerSpec("DS")]
        assert score.wng_db == pytest.approx(14.771, abs=1e-3)
        assert score.wng_db == pytest.approx(DS_DB, abs=1e-6)
        assert wng.values.max() / wng.values.min() == pytest.approx(1.0, abs=1e-9)

    def test_rsd_one_matches_ds(self, evaluated):
        *_, res = evaluated
        a, b = res[BeamformerSpec("RSD", 1.0)][2], res[BeamformerSpec("DS")][2]
        assert abs(a.wng_db - b.wng_db) <= 1e-9 and abs(a.df_db - b.df_db) <= 1e-9

    def test_am_hm(self, evaluated):
        *_, res = evaluated
        for spec, (wng, df, score) in res.items():
            for curve, val in ((wng, score.wng_db), (df, score.df_db)):
                am = np.trapezoid(curve.values, curve.grid.values) / (8000 - 200)
                assert 10 ** (val / 10) <= am * (1 + 1e-12), spec.label

    def test_wng_ceiling_and_positive(self, evaluated):
        *_, res = evaluated
        for spec, (wng, df, score) in res.items():
            assert np.all(wng.values <= 30 + 1e-9) and np.all(df.values > 0)
            assert score.wng_db <= 10 * math.log10(30) + 1e-6

    def test_sd_has_largest_df_per_bin(self, evaluated):
        *_, res = evaluated
        top = res[BeamformerSpec("SD")][1].values
        for spec, (_, df, _) in res.items():
            assert np.all(df.values <= top * (1 + 1e-8)), spec.label

    def test_fine_grid_agreement(self):
        g = ArrayGeometry(30, 0.02)
        coarse, fine = FrequencyGrid(), FrequencyGrid(bins=8 * 512)
        for spec in ALL_SPECS:
            a, b = evaluate(spec, g, coarse)[2], evaluate(spec, g, fine)[2]
            assert abs(a.df_db - b.df_db) <= 0.01, spec.label
            if spec not in SD_REGIME:
                assert abs(a.wng_db - b.wng_db) <= 0.01, spec.label

    @pytest.mark.xfail(strict=True, reason="SD-regime WNG is set per bin by the discrete loading ladder")
    def test_fine_grid_agreement_sd_regime_wng(self):
        g = ArrayGeometry(30, 0.02)
        coarse, fine = FrequencyGrid(), FrequencyGrid(bins=8 * 512)
        for spec in SD_REGIME:
            a, b = evaluate(spec, g, coarse)[2], evaluate(spec, g, fine)[2]
            assert abs(a.wng_db - b.wng_db) <= 0.01, spec.label
