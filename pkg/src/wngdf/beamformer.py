"""Fixed beamformer designs trading white-noise gain against directivity.

All designs are computed for a whole stack of frequencies at once
(:func:`build_stack`); :func:`build` is the single-frequency view.
"""
from dataclasses import dataclass

import numpy as np

from . import noise
from .geometry import split_ckp, split_kp, steering_matrix
from .linalg import as_complex_vec, solve_hermitian_batch
from .errors import InvalidSplit, SingularMatrix

KINDS = ("DS", "SD", "RSD", "TUN", "KP", "CKP")

# Diagonal loading ladder, as multiples of trace / M, tried in order
# whenever the unloaded system is numerically singular.
LOADING_LADDER = tuple(10.0 ** k for k in range(-12, -5))
# Accepted solves must satisfy z^H (Phi + lI) z = d^H z to this relative accuracy.
CONSISTENCY_RTOL = 1e-6
CKP_RENORM_ATOL = 1e-10


@dataclass(frozen=True)
class BeamformerSpec:
    """Which design to build and its trade-off parameter.

    ``param`` is alpha in [0, 1] for RSD, psi in [0, pi] for TUN and the
    sub-array size M1 for KP/CKP. ``swap`` exchanges the KP sub-array roles
    (superdirective on the coarse sub-array, delay-and-sum on the dense one).
    """

    kind: str
    param: float | int | None = None
    swap: bool = False

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown beamformer kind {self.kind!r}")
        p = self.param
        if kind in ("DS", "SD"):
            if p is not None:
                raise ValueError(f"{kind} takes no parameter")
        elif p is None:
            raise ValueError(f"{kind} requires a parameter")
        elif kind == "RSD" and not 0.0 <= p <= 1.0:
            raise ValueError(f"RSD alpha must lie in [0, 1], got {p}")
        elif kind == "TUN" and not 0.0 <= p <= np.pi:
            raise ValueError(f"TUN psi must lie in [0, pi], got {p}")
        elif kind in ("KP", "CKP"):
            if int(p) != p or p < 1:
                raise InvalidSplit(f"{kind} M1 must be a positive integer, got {p}")
            object.__setattr__(self, "param", int(p))
        if self.swap and kind != "KP":
            raise ValueError("swap applies to KP only")

    def check(self, geom):
        """Raise :class:`InvalidSplit` if the parameter is incompatible with ``geom``."""
        if self.kind == "KP":
            split_kp(geom, self.param)
        elif self.kind == "CKP":
            split_ckp(geom, self.param)

    @property
    def label(self):
        if self.param is None:
            return self.kind
        return f"{self.kind}({self.param:g})" if self.kind in ("RSD", "TUN") else f"{self.kind}({self.param})"


@dataclass(frozen=True, eq=False)
class BeamformerWeights:
    weights: np.ndarray
    frequency: float
    spec: BeamformerSpec | None = None
    loading: float = 0.0

    def __post_init__(self):
        self.weights.flags.writeable = False


def _solve_checked(fields, steering, loading, check):
    z, ok = solve_hermitian_batch(fields, steering, loading)
    if check and ok.any():
        # a solve that passes the pivot test can still be dominated by roundoff
        s = np.einsum("fm,fm->f", steering.conj(), z)
        q = np.einsum("fm,fm->f", z.conj(), np.einsum("fmn,fn->fm", fields, z) + loading[:, None] * z)
        with np.errstate(invalid="ignore"):
            ok &= np.abs(q - s) <= CONSISTENCY_RTOL * np.abs(s)
    return z, ok


def mvdr_stack(fields, steering, loading=0.0, ladder=True):
    """Distortionless minimum-noise weights ``Phi^-1 d / (d^H Phi^-1 d)`` per row.

    Returns ``(H, used_loading)``. With ``ladder`` set, rows that are singular
    at ``loading``, or whose solution fails the self-consistency check
    ``z^H Phi z = d^H z``, are retried with loading from
    :data:`LOADING_LADDER` (scaled by trace / M) until they pass.
    """
    fields = np.asarray(fields, dtype=np.complex128)
    steering = np.asarray(steering, dtype=np.complex128)
    F, M = steering.shape
    used = np.broadcast_to(np.asarray(loading, dtype=float), (F,)).copy()
    z, ok = _solve_checked(fields, steering, used, ladder)
    if not ok.all() and ladder:
        scale = np.abs(np.einsum("fii->f", fields).real) / M
        for step in LOADING_LADDER:
            bad = np.flatnonzero(~ok)
            if bad.size == 0:
                break
            trial = np.maximum(used[bad], step * scale[bad])
            zb, okb = _solve_checked(fields[bad], steering[bad], trial, True)
            z[bad], ok[bad], used[bad] = zb, okb, trial
    if not ok.all():
        raise SingularMatrix(
            f"{np.count_nonzero(~ok)} of {F} systems singular even after loading"
        )
    norm = np.einsum("fm,fm->f", steering.conj(), z)
    return z / norm[:, None], used


def mvdr_solve(phi, d, loading=0.0):
    """Single-frequency distortionless solve; no automatic loading.

    Raises :class:`SingularMatrix` when ``phi + loading I`` is singular.
    """
    matrix = phi.matrix if isinstance(phi, noise.NoiseCorrelation) else np.asarray(phi)
    d = as_complex_vec(d)
    if matrix.shape != (d.size, d.size):
        raise ValueError(f"dimension mismatch: Phi{matrix.shape}, d{d.shape}")
    h, used = mvdr_stack(matrix[None], d[None], loading, ladder=False)
    f = phi.frequency if isinstance(phi, noise.NoiseCorrelation) else float("nan")
    return BeamformerWeights(h[0], f, None, float(used[0]))


def _field_stack(kind, param, geom, freqs):
    if kind == "DS":
        return np.broadcast_to(np.eye(geom.sensors, dtype=np.complex128), (freqs.size, geom.sensors, geom.sensors))
    if kind == "SD":
        return noise.isotropic_stack(geom, freqs)
    if kind == "RSD":
        return noise.rsd_stack(geom, freqs, param)
    if kind == "TUN":
        return noise.tunable_stack(geom, freqs, param)
    raise ValueError(kind)


def build_stack(spec, geom, freqs):
    """Weights of ``spec`` at every frequency in ``freqs``.

    Returns ``(H, loading)`` with ``H`` of shape ``(F, M)`` and the diagonal
    loading each row needed (non-zero only when the field was singular).
    """
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    spec.check(geom)
    kind = spec.kind
    if kind in ("DS", "SD", "RSD", "TUN"):
        return mvdr_stack(_field_stack(kind, spec.param, geom, freqs), steering_matrix(geom, freqs))

    if kind == "KP":
        coarse, dense = split_kp(geom, spec.param)
        first, second = ("SD", "DS") if spec.swap else ("DS", "SD")
        h1, l1 = build_stack(BeamformerSpec(first), coarse, freqs)
        h2, l2 = build_stack(BeamformerSpec(second), dense, freqs)
        H = (h1[:, :, None] * h2[:, None, :]).reshape(freqs.size, geom.sensors)
        return H, np.maximum(l1, l2)

    # CKP: convolve the sub-array filters along the sensor axis
    sub1, sub2 = split_ckp(geom, spec.param)
    h1, _ = build_stack(BeamformerSpec("DS"), sub1, freqs)
    h2, l2 = build_stack(BeamformerSpec("SD"), sub2, freqs)
    H = np.zeros((freqs.size, geom.sensors), dtype=np.complex128)
    for k in range(sub1.sensors):
        H[:, k:k + sub2.sensors] += h1[:, k, None] * h2
    # The product of the sub-array responses is already 1 up to roundoff;
    # rescale only rows whose full-array response drifted beyond that.
    response = np.einsum("fm,fm->f", H.conj(), steering_matrix(geom, freqs))
    drift = np.abs(response - 1.0) > CKP_RENORM_ATOL
    H[drift] /= response[drift].conj()[:, None]
    return H, l2


def build(spec, geom, f):
    """Weights of ``spec`` at a single frequency."""
    H, used = build_stack(spec, geom, [f])
    return BeamformerWeights(H[0], float(f), spec, float(used[0]))
