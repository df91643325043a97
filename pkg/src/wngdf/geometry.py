"""Uniform linear array geometry, frequency grids and steering vectors."""
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .errors import InvalidSplit

SOUND_SPEED = 343.0


@dataclass(frozen=True)
class ArrayGeometry:
    """Far-field ULA with the reference sensor at index 0.

    ``source_angle`` is measured from the endfire direction (0 = along the
    array axis).
    """

    sensors: int
    spacing: float
    source_angle: float = 0.0
    sound_speed: float = SOUND_SPEED

    def __post_init__(self):
        if int(self.sensors) != self.sensors or self.sensors < 1:
            raise ValueError(f"sensors must be a positive integer, got {self.sensors}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if not self.sound_speed > 0:
            raise ValueError(f"sound_speed must be positive, got {self.sound_speed}")
        if not 0.0 <= self.source_angle <= np.pi:
            raise ValueError(f"source_angle must lie in [0, pi], got {self.source_angle}")
        object.__setattr__(self, "sensors", int(self.sensors))

    @property
    def aliasing_frequency(self):
        return self.sound_speed / (2.0 * self.spacing)


@dataclass(frozen=True)
class FrequencyGrid:
    f_lo: float = 200.0
    f_hi: float = 8000.0
    bins: int = 512

    def __post_init__(self):
        if not 0 < self.f_lo < self.f_hi:
            raise ValueError(f"need 0 < f_lo < f_hi, got {self.f_lo}, {self.f_hi}")
        if int(self.bins) != self.bins or self.bins < 2:
            raise ValueError(f"bins must be an integer >= 2, got {self.bins}")
        object.__setattr__(self, "bins", int(self.bins))

    @cached_property
    def values(self):
        v = np.linspace(self.f_lo, self.f_hi, self.bins)
        v.flags.writeable = False
        return v

    def __len__(self):
        return self.bins


def _phase_step(geom, f, theta):
    # radians of phase lag per sensor
    return 2.0 * np.pi * np.asarray(f, dtype=float) * geom.spacing * np.cos(theta) / geom.sound_speed


def phase_ratio(geom, f):
    """Inter-sensor phase factor for the desired source at frequency ``f``."""
    if f < 0:
        raise ValueError("frequency must be non-negative")
    return complex(np.exp(-1j * _phase_step(geom, f, geom.source_angle)))


def steering_vector(geom, f, theta=None):
    """Steering vector ``[1, r, r**2, ...]`` with ``r`` the phase ratio at angle ``theta``."""
    if f < 0:
        raise ValueError("frequency must be non-negative")
    theta = geom.source_angle if theta is None else theta
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"angle must lie in [0, pi], got {theta}")
    return np.exp(-1j * _phase_step(geom, f, theta) * np.arange(geom.sensors))


def steering_matrix(geom, freqs, theta=None):
    """Steering vectors for many frequencies, shape ``(F, M)``."""
    theta = geom.source_angle if theta is None else theta
    step = _phase_step(geom, np.asarray(freqs, dtype=float), theta)
    return np.exp(-1j * step[:, None] * np.arange(geom.sensors)[None, :])


def split_kp(geom, m1):
    """Split into a coarse ``m1``-sensor and a dense ``M/m1``-sensor sub-array.

    The full steering vector is the Kronecker product of the coarse and
    dense sub-array steering vectors, in that order.
    """
    M = geom.sensors
    if int(m1) != m1 or not 1 <= m1 <= M or M % m1:
        raise InvalidSplit(f"M1={m1} does not divide M={M}")
    m1 = int(m1)
    m2 = M // m1
    coarse = replace(geom, sensors=m1, spacing=m2 * geom.spacing)
    dense = replace(geom, sensors=m2)
    return coarse, dense


def split_ckp(geom, m1):
    """Split into overlapping sub-arrays of ``m1`` and ``M - m1 + 1`` sensors."""
    M = geom.sensors
    if int(m1) != m1 or not 1 <= m1 <= M:
        raise InvalidSplit(f"M1={m1} outside [1, {M}]")
    m1 = int(m1)
    return replace(geom, sensors=m1), replace(geom, sensors=M - m1 + 1)
