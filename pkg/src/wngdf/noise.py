"""Noise pseudo-coherence matrices for the isotropic field and its variants.

Every builder has a stacked form taking an array of frequencies and
returning an ``(F, M, M)`` array; the single-frequency functions wrap these
in :class:`NoiseCorrelation`.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._backend import kernels

QUAD_NODES = 200
PSD_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class NoiseCorrelation:
    matrix: np.ndarray
    kind: str
    frequency: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.matrix.flags.writeable = False

    @property
    def size(self):
        return self.matrix.shape[0]


@lru_cache(maxsize=16)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = w.flags.writeable = False
    return x, w


def _toeplitz_hermitian(lags):
    """Build ``T[..., m, n] = g[m - n]`` (conjugated for ``m < n``) from lags ``g[..., l]``."""
    M = lags.shape[-1]
    idx = np.arange(M)[:, None] - np.arange(M)[None, :]
    T = lags[..., np.abs(idx)]
    upper = idx < 0
    T[..., upper] = T[..., upper].conj()
    return np.ascontiguousarray(T)


def _segment_lags(geom, freqs, lo, hi, nodes):
    x, w = _legendre(nodes)
    half = 0.5 * (hi - lo)
    theta = lo + half * (x + 1.0)
    # the 1/2 in front of the integral, the sin(theta) weight and the interval Jacobian
    weights = np.ascontiguousarray(0.5 * half * w * np.sin(theta))
    phase = np.ascontiguousarray(
        2.0 * np.pi * np.asarray(freqs, dtype=float) * geom.spacing / geom.sound_speed
    )
    return kernels.segment_lags(phase, np.ascontiguousarray(np.cos(theta)), weights, geom.sensors)


def segment_stack(geom, freqs, lo, hi, nodes=QUAD_NODES):
    """``1/2 * integral_lo^hi d(theta) d(theta)^H sin(theta) dtheta`` by Gauss-Legendre."""
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    if hi <= lo:
        return np.zeros((freqs.size, geom.sensors, geom.sensors), dtype=np.complex128)
    return _toeplitz_hermitian(_segment_lags(geom, freqs, lo, hi, nodes))


def isotropic_stack(geom, freqs):
    """Closed-form isotropic coherence ``sinc(2 pi f delta (m - n) / c)``."""
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    lag = np.arange(geom.sensors)
    lags = np.sinc(2.0 * freqs[:, None] * geom.spacing * lag / geom.sound_speed)
    return _toeplitz_hermitian(lags.astype(np.complex128))


def rsd_stack(geom, freqs, alpha):
    _check_alpha(alpha)
    G = isotropic_stack(geom, freqs)
    G *= 1.0 - alpha
    G += alpha * np.eye(geom.sensors)
    return G


def tunable_stack(geom, freqs, psi):
    """``Gamma_{psi,pi} + eps I`` with ``eps = (1 - cos psi) / 2``.

    The shorter of the two angular ranges is integrated numerically: for
    ``psi <= pi/2`` the band ``[0, psi]`` is removed from the closed-form
    isotropic matrix, otherwise ``[psi, pi]`` is integrated directly. Both
    endpoints are therefore exact (``psi=0`` gives the closed form, ``psi=pi``
    gives the empty segment).
    """
    _check_psi(psi, closed=True)
    if psi <= np.pi / 2:
        G = isotropic_stack(geom, freqs) - segment_stack(geom, freqs, 0.0, psi)
    else:
        G = segment_stack(geom, freqs, psi, np.pi)
    eps = (1.0 - np.cos(psi)) / 2.0
    G += eps * np.eye(geom.sensors)
    return G


def _check_alpha(alpha):
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")


def _check_psi(psi, closed):
    ok = 0.0 <= psi <= np.pi if closed else 0.0 <= psi < np.pi
    if not ok:
        raise ValueError(f"psi must lie in [0, pi{']' if closed else ')'}, got {psi}")


def gamma_segment(geom, f, psi, nodes=QUAD_NODES):
    """Isotropic field restricted to angles ``[psi, pi]``, by quadrature."""
    _check_psi(psi, closed=False)
    if f < 0:
        raise ValueError("frequency must be non-negative")
    G = segment_stack(geom, f, psi, np.pi, nodes)[0]
    return NoiseCorrelation(G, "segment", float(f), {"psi": float(psi), "nodes": nodes})


def gamma_isotropic(geom, f):
    if f < 0:
        raise ValueError("frequency must be non-negative")
    return NoiseCorrelation(isotropic_stack(geom, f)[0], "isotropic", float(f))


def field_rsd(geom, f, alpha):
    """Convex combination ``(1 - alpha) Gamma + alpha I``."""
    return NoiseCorrelation(rsd_stack(geom, f, alpha)[0], "rsd", float(f), {"alpha": float(alpha)})


def field_tunable(geom, f, psi):
    return NoiseCorrelation(tunable_stack(geom, f, psi)[0], "tunable", float(f), {"psi": float(psi)})


def field_identity(geom, f):
    return NoiseCorrelation(np.eye(geom.sensors, dtype=np.complex128), "identity", float(f))


def is_psd(matrix, rtol=PSD_RTOL):
    """Cholesky test on ``matrix + rtol * trace * I``; True if it factorizes."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    tol = rtol * abs(np.trace(matrix).real)
    if tol == 0.0:
        return not np.any(matrix)
    try:
        np.linalg.cholesky(matrix + tol * np.eye(matrix.shape[0]))
    except np.linalg.LinAlgError:
        return False
    return True
