"""Pure numpy versions of the compiled kernels, used when the extension is absent."""
import numpy as np


def lu_solve_batch(A, rhs, loading, rel_tol):
    """Solve ``(A[b] + loading[b] I) x[b] = rhs[b]`` for every batch entry.

    Same elimination order as the compiled kernel, vectorized over the batch.
    Singular entries are flagged in the returned mask and filled with NaN.
    """
    A = np.array(A, dtype=np.complex128, copy=True)
    y = np.array(rhs, dtype=np.complex128, copy=True)
    nb, n = y.shape
    diag = np.arange(n)
    A[:, diag, diag] += np.asarray(loading, dtype=float)[:, None]
    thresh = rel_tol * np.abs(A[:, diag, diag].real.sum(axis=1)) / n
    ok = np.ones(nb, dtype=bool)
    rows = np.arange(nb)

    for k in range(n):
        mags = np.abs(A[:, k:, k])
        p = np.argmax(mags, axis=1)
        best = mags[rows, p]
        ok &= best >= thresh
        p = p + k
        swap = p != k
        if swap.any():
            r = rows[swap]
            tmp = A[r, k].copy()
            A[r, k] = A[r, p[swap]]
            A[r, p[swap]] = tmp
            tmp = y[r, k].copy()
            y[r, k] = y[r, p[swap]]
            y[r, p[swap]] = tmp
        piv = np.where(ok, A[:, k, k], 1.0)
        l = A[:, k + 1:, k] / piv[:, None]
        A[:, k + 1:, k + 1:] -= l[:, :, None] * A[:, k, None, k + 1:]
        y[:, k + 1:] -= l * y[:, k, None]

    x = np.empty_like(y)
    for k in range(n - 1, -1, -1):
        s = y[:, k].copy()
        for j in range(k + 1, n):
            s -= A[:, k, j] * x[:, j]
        x[:, k] = s / np.where(ok, A[:, k, k], 1.0)
    x[~ok] = np.nan
    return x, ok


def segment_lags(phase, cosines, weights, nlags):
    """Lag sums ``g[f, l] = sum_i weights[i] * exp(-1j * phase[f] * cosines[i] * l)``."""
    phase = np.asarray(phase, dtype=float)
    lags = np.arange(nlags)
    arg = phase[:, None, None] * np.asarray(cosines, dtype=float)[None, :, None] * lags
    return np.einsum("q,fql->fl", np.asarray(weights, dtype=float), np.exp(-1j * arg))
