"""Small dense linear-algebra kernels shared by the physics modules.

Everything here is deliberately simple: the matrices involved are at most a
few hundred wide, and each routine is checked against LAPACK/Padé in the test
suite rather than trusted blindly.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from .errors import NumericalError

JACOBI_MAX_SWEEPS = 100
JACOBI_REL_TOL = 1e-14


def jacobi_eigh(a, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as orthonormal columns. Each eigenvector is sign-fixed so
    that its first significant component is positive.

    Raises NumericalError if the off-diagonal Frobenius norm does not drop
    below ``rel_tol * ||a||_F`` within ``max_sweeps`` sweeps.
    """
    a = np.array(a, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    threshold = rel_tol * scale

    off = _off_norm(a)
    sweeps = 0
    while off > threshold:
        if sweeps >= max_sweeps:
            raise NumericalError(
                f"Jacobi eigensolver did not converge after {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, threshold {threshold:.3e}, n={n})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                # negligible against both diagonals: drop instead of rotating
                if abs(apq) < 1e-300 or (
                    abs(app) + 1e3 * abs(apq) == abs(app) and abs(aqq) + 1e3 * abs(apq) == abs(aqq)
                ):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweeps += 1
        off = _off_norm(a)

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = fix_signs(v[:, order])
    return w, v


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def fix_signs(vectors, rel_tol=1e-8):
    """Flip each column so its first component above ``rel_tol * max`` is positive."""
    vectors = np.array(vectors, copy=True)
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        big = np.flatnonzero(np.abs(col) > rel_tol * np.abs(col).max())
        if big.size and col[big[0]].real < 0:
            vectors[:, j] = -col
    return vectors


def expm(a, tol=1e-12):
    """Matrix exponential by scaling and squaring with a truncated Taylor series.

    The series for ``a / 2**s`` (scaled to 1-norm <= 1/2) is summed until the
    newest term is below ``tol`` relative to the partial sum.
    """
    a = np.asarray(a)
    n = a.shape[0]
    norm = np.abs(a).sum(axis=0).max() if n else 0.0
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    b = a / (2.0**s)
    result = np.eye(n, dtype=np.result_type(a, float))
    term = result.copy()
    for k in range(1, 60):
        term = term @ b / k
        result = result + term
        if np.abs(term).max() <= tol * np.abs(result).max():
            break
    else:  # pragma: no cover - unreachable for ||b|| <= 1/2
        raise NumericalError("Taylor series for expm failed to converge")
    for _ in range(s):
        result = result @ result
    return result


def expm_multiply(op, vec, t=1.0, tol=1e-14):
    """Apply ``exp(t * op)`` to ``vec`` without forming the exponential.

    ``op`` may be dense or scipy-sparse. The interval is split so every
    substep has ``||t op||_1 <= 1`` and each substep is a Taylor series on
    the vector.
    """
    vec = np.asarray(vec, dtype=complex)
    if t == 0:
        return vec.copy()
    if sp.issparse(op):
        norm = abs(op).sum(axis=0).max()
    else:
        norm = np.abs(op).sum(axis=0).max()
    steps = max(1, int(math.ceil(abs(t) * float(norm))))
    h = t / steps
    out = vec.copy()
    for _ in range(steps):
        term = out
        acc = out.copy()
        for k in range(1, 80):
            term = (op @ term) * (h / k)
            acc += term
            if np.linalg.norm(term) <= tol * np.linalg.norm(acc):
                break
        else:  # pragma: no cover
            raise NumericalError("Taylor series for expm_multiply failed to converge")
        out = acc
    return out
