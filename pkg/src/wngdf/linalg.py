"""Small complex linear-algebra layer shared by the other modules.

Vectors and Hermitian matrices are plain ``complex128`` numpy arrays; the
``as_*`` helpers validate the invariants at module boundaries. The Hermitian
solve runs on the kernel backend chosen in :mod:`wngdf._backend`.
"""
import numpy as np

from ._backend import kernels
from .errors import SingularMatrix

HERMITIAN_ATOL = 1e-12
PIVOT_RTOL = 1e-14


def as_complex_vec(a):
    """Validate and return ``a`` as a finite, non-empty 1-D complex array."""
    v = np.asarray(a, dtype=np.complex128)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"expected a non-empty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def as_hermitian(B, atol=HERMITIAN_ATOL):
    """Validate and return ``B`` as a square Hermitian complex matrix."""
    m = np.asarray(B, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if np.max(np.abs(m - m.conj().T)) > atol:
        raise ValueError("matrix is not Hermitian")
    return m


def hermitian_inner(a, B, c):
    """Return the form ``a^H B c``."""
    a, c = as_complex_vec(a), as_complex_vec(c)
    B = np.asarray(B, dtype=np.complex128)
    if B.shape != (a.size, c.size):
        raise ValueError(
            f"dimension mismatch: a{a.shape}, B{B.shape}, c{c.shape}"
        )
    return complex(np.vdot(a, B @ c))


def solve_hermitian_batch(B, rhs, loading=0.0):
    """Batched solve of ``(B[k] + loading[k] I) z[k] = rhs[k]``.

    Returns ``(z, ok)``; ``ok[k]`` is False where the smallest available pivot
    fell below ``1e-14 * trace / M`` and ``z[k]`` is then NaN.
    """
    B = np.ascontiguousarray(B, dtype=np.complex128)
    rhs = np.ascontiguousarray(rhs, dtype=np.complex128)
    if B.ndim != 3 or B.shape[1] != B.shape[2] or rhs.shape != B.shape[:2]:
        raise ValueError(f"dimension mismatch: B{B.shape}, rhs{rhs.shape}")
    loading = np.ascontiguousarray(np.broadcast_to(loading, B.shape[:1]), dtype=float)
    if np.any(loading < 0):
        raise ValueError("loading must be non-negative")
    return kernels.lu_solve_batch(B, rhs, loading, PIVOT_RTOL)


def solve_hermitian(B, rhs, loading=0.0):
    """Solve ``(B + loading I) z = rhs`` for a Hermitian ``B``.

    Raises :class:`SingularMatrix` if the loaded matrix is numerically singular.
    """
    B = as_hermitian(B)
    rhs = as_complex_vec(rhs)
    if rhs.size != B.shape[0]:
        raise ValueError(f"dimension mismatch: B{B.shape}, rhs{rhs.shape}")
    z, ok = solve_hermitian_batch(B[None], rhs[None], loading)
    if not ok[0]:
        raise SingularMatrix(f"matrix singular with loading {float(loading):g}")
    return z[0]


def kron(a, b):
    """Kronecker product; ``out[i * len(b) + k] = a[i] * b[k]``."""
    a, b = as_complex_vec(a), as_complex_vec(b)
    return (a[:, None] * b[None, :]).reshape(-1)


def convolve(a, b):
    """Full linear convolution, ``out[n] = sum_k a[k] b[n - k]``."""
    a, b = as_complex_vec(a), as_complex_vec(b)
    out = np.zeros(a.size + b.size - 1, dtype=np.complex128)
    for k, ak in enumerate(a):
        out[k:k + b.size] += ak * b
    return out
