"""Narrowband and broadband white-noise gain and directivity factor."""
from dataclasses import dataclass

import numpy as np

from . import noise
from .beamformer import BeamformerWeights, build_stack
from .geometry import FrequencyGrid, steering_matrix
from .linalg import as_complex_vec


@dataclass(frozen=True, eq=False)
class MetricCurve:
    """Linear-scale metric values on a frequency grid."""

    grid: FrequencyGrid
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.values.shape != (self.grid.bins,):
            raise ValueError(
                f"curve has {self.values.shape} values for a {self.grid.bins}-bin grid"
            )
        self.values.flags.writeable = False

    @property
    def db(self):
        return 10.0 * np.log10(self.values)


@dataclass(frozen=True)
class BroadbandScore:
    wng_db: float
    df_db: float
    spec: object = None


def _weights(h):
    return as_complex_vec(h.weights if isinstance(h, BeamformerWeights) else h)


def wng_narrowband(h, d):
    """``|h^H d|^2 / (h^H h)``."""
    h, d = _weights(h), as_complex_vec(d)
    if h.shape != d.shape:
        raise ValueError(f"dimension mismatch: h{h.shape}, d{d.shape}")
    energy = np.vdot(h, h).real
    if energy == 0.0:
        raise ValueError("zero-norm weight vector")
    return abs(np.vdot(h, d)) ** 2 / energy


def df_narrowband(h, d, gamma):
    """``|h^H d|^2 / (h^H Gamma h)`` with ``Gamma`` the isotropic coherence."""
    h, d = _weights(h), as_complex_vec(d)
    G = gamma.matrix if isinstance(gamma, noise.NoiseCorrelation) else np.asarray(gamma)
    if h.shape != d.shape or G.shape != (h.size, h.size):
        raise ValueError(f"dimension mismatch: h{h.shape}, d{d.shape}, Gamma{G.shape}")
    form = np.vdot(h, G @ h).real
    if not form > 0.0:
        raise ValueError("degenerate weight vector: h^H Gamma h is not positive")
    return abs(np.vdot(h, d)) ** 2 / form


def wng_stack(H, D):
    """Row-wise white-noise gain of weights ``H`` against steering ``D``."""
    gain = np.abs(np.einsum("fm,fm->f", H.conj(), D)) ** 2
    return gain / np.einsum("fm,fm->f", H.conj(), H).real


def df_stack(H, D, G):
    gain = np.abs(np.einsum("fm,fm->f", H.conj(), D)) ** 2
    return gain / np.einsum("fm,fm->f", H.conj(), np.einsum("fmn,fn->fm", G, H)).real


def harmonic_mean(freqs, values):
    """Bandwidth-normalised harmonic mean by the trapezoid rule."""
    freqs = np.asarray(freqs, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise ValueError("broadband aggregation needs strictly positive finite values")
    inv = np.trapezoid(1.0 / values, freqs) / (freqs[-1] - freqs[0])
    return 1.0 / inv


def broadband(curve):
    """Broadband value of ``curve`` in dB."""
    return float(10.0 * np.log10(harmonic_mean(curve.grid.values, curve.values)))


def evaluate(spec, geom, grid):
    """Build ``spec`` on every grid bin; return WNG curve, DF curve and broadband score."""
    freqs = grid.values
    H, _ = build_stack(spec, geom, freqs)
    D = steering_matrix(geom, freqs)
    wng = MetricCurve(grid, wng_stack(H, D), f"wng {spec.label}")
    df = MetricCurve(grid, df_stack(H, D, noise.isotropic_stack(geom, freqs)), f"df {spec.label}")
    return wng, df, BroadbandScore(broadband(wng), broadband(df), spec)
