"""
Small dense real-symmetric matrix algebra for two-qubit density matrices.

Everything here accepts a single matrix of shape ``(n, n)`` or a stack of
shape ``(..., n, n)``; stacked input is how the Monte-Carlo code calls it.
Basis order for the two-qubit space is ``|00>, |01>, |10>, |11>``.
"""

import numpy as np

PSD_TOL = 1e-10
JACOBI_TOL = 1e-14
SPECTRUM_TOL = 1e-12


def as_spectrum(values, dim=None, tol=SPECTRUM_TOL):
    """Validate an eigenvalue vector and return it as a float array.

    The vector must have length 4 or 6 (or `dim`), be sorted nonascending,
    have entries in [0, 1] and sum to one, all up to `tol`.
    """
    lam = np.asarray(values, dtype=float)
    if lam.ndim != 1:
        raise ValueError(f"spectrum must be one-dimensional, got shape {lam.shape}")
    if dim is not None and lam.size != dim:
        raise ValueError(f"expected {dim} eigenvalues, got {lam.size}")
    if lam.size not in (4, 6):
        raise ValueError(f"spectrum length must be 4 or 6, got {lam.size}")
    if np.any(lam < -tol) or np.any(lam > 1 + tol):
        raise ValueError(f"eigenvalues must lie in [0, 1]: {lam}")
    if abs(lam.sum() - 1.0) > tol:
        raise ValueError(f"eigenvalues must sum to 1 (sum={float(lam.sum())!r})")
    if np.any(np.diff(lam) > tol):
        raise ValueError(f"eigenvalues must be sorted nonascending: {lam}")
    return lam


def partial_transpose(rho):
    """Transpose the second qubit factor of a 4x4 (stack of) matrix.

    ``sigma[(i,j),(k,l)] = rho[(i,l),(k,j)]`` with row index ``2i+j`` and
    column index ``2k+l``.
    """
    rho = np.asarray(rho)
    if rho.shape[-2:] != (4, 4):
        raise ValueError(f"expected 4x4 matrices, got shape {rho.shape}")
    lead = rho.shape[:-2]
    t = rho.reshape(lead + (2, 2, 2, 2))
    return np.ascontiguousarray(np.swapaxes(t, -3, -1)).reshape(lead + (4, 4))


def sym_eigenvalues(m, tol=JACOBI_TOL, max_sweeps=60):
    """Eigenvalues of real symmetric matrices by cyclic Jacobi rotations.

    Works on a single matrix or on a stack, rotating every matrix of the
    stack in lockstep.  Iteration stops when the off-diagonal Frobenius
    norm of every matrix drops below ``tol * max(1, ||m||_F)``.

    Returns
    -------
    np.ndarray
        Eigenvalues sorted nonascending along the last axis.
    """
    a = np.array(m, dtype=float)
    n = a.shape[-1]
    if a.shape[-2] != n:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    lead = a.shape[:-2]
    a = a.reshape((-1, n, n))
    if n == 1:
        return a[:, 0, 0].reshape(lead + (1,))

    iu = np.triu_indices(n, 1)
    scale = np.maximum(1.0, np.sqrt(np.einsum("kij,kij->k", a, a)))
    pairs = list(zip(*iu))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(max_sweeps):
            off = np.sqrt(2.0 * np.sum(a[:, iu[0], iu[1]] ** 2, axis=1))
            if np.all(off < tol * scale):
                break
            for p, q in pairs:
                apq = a[:, p, q]
                nz = apq != 0.0
                if not nz.any():
                    continue
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * np.where(nz, apq, 1.0))
                sgn = np.where(theta >= 0.0, 1.0, -1.0)
                t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                # huge theta overflows to inf: the rotation degenerates to identity
                t = np.where(nz & np.isfinite(t), t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c_ = c[:, None]
                s_ = s[:, None]
                col_p = a[:, :, p].copy()
                col_q = a[:, :, q]
                a[:, :, p] = c_ * col_p - s_ * col_q
                a[:, :, q] = s_ * col_p + c_ * col_q
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :]
                a[:, p, :] = c_ * row_p - s_ * row_q
                a[:, q, :] = s_ * row_p + c_ * row_q
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
        else:
            raise RuntimeError("Jacobi iteration did not converge")

    ev = np.diagonal(a, axis1=1, axis2=2)
    ev = -np.sort(-ev, axis=1)
    return ev.reshape(lead + (n,))


def min_eigenvalue(m):
    return sym_eigenvalues(m)[..., -1]


def is_ppt(rho, tol=PSD_TOL):
    """True where the partial transpose has no eigenvalue below ``-tol``.

    At 4x4 this is the separability test.
    """
    return min_eigenvalue(partial_transpose(rho)) >= -tol


def ppt_det(rho):
    """Determinant of the partial transpose.

    For a valid two-qubit state the partial transpose has at most one
    negative eigenvalue, so ``ppt_det(rho) < 0`` exactly when `rho` is
    entangled.  This is the cheap test used inside Monte-Carlo loops.
    """
    return np.linalg.det(partial_transpose(rho))


def majorizes(a, b, tol=SPECTRUM_TOL):
    """True if `a` majorizes `b`; both sorted nonascending with equal sums."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"length mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    if np.any(np.abs(a.sum(axis=-1) - b.sum(axis=-1)) > 1e-10):
        raise ValueError("vectors must have equal sums")
    return np.all(np.cumsum(a, axis=-1) >= np.cumsum(b, axis=-1) - tol, axis=-1)
