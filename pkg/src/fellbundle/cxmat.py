"""Dense complex matrix kernel.

Every fiber, section, operator and state in this package is a dense
``numpy`` array of ``complex128``.  This module supplies the handful of
primitives the rest of the code builds on: adjoint/transpose/conjugate,
the C*-norm (largest singular value), a positivity test, and the Gram
quotient used by the GNS construction.

The Hermitian eigensolver is a hand-rolled cyclic Jacobi iteration rather
than LAPACK: it is deterministic, dependency-light, and more than fast
enough at the dimensions that occur here (everything is <= ~64x64).
Tests cross-check it against an independent dense eigensolver.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ShapeError",
    "DomainError",
    "as_matrix",
    "adjoint",
    "transpose",
    "conjugate",
    "hermitian_eig",
    "op_norm",
    "is_psd",
    "gram_quotient",
]


class ShapeError(ValueError):
    """Raised when matrix dimensions do not conform."""


class DomainError(ValueError):
    """Raised when a value lies outside an operation's domain.

    Carries the offending quantity (e.g. a negative eigenvalue) in
    ``offender`` when one is available.
    """

    def __init__(self, msg, offender=None):
        super().__init__(msg)
        self.offender = offender


def as_matrix(m) -> np.ndarray:
    """Validate and coerce ``m`` to a 2-d complex128 array.

    Rejects empty axes and non-finite entries; all public operations
    funnel their inputs through this.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ShapeError(f"expected a matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"matrix axes must be nonempty, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise DomainError("matrix contains NaN or Inf entries")
    return a


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T.copy()


def transpose(m) -> np.ndarray:
    return as_matrix(m).T.copy()


def conjugate(m) -> np.ndarray:
    return as_matrix(m).conj().copy()


def _sym_schur2(app: float, aqq: float, apq_abs: float):
    # Golub & Van Loan sym.schur2: rotation for the real symmetric 2x2
    # [[app, apq], [apq, aqq]], returning (c, s) with J = [[c, s], [-s, c]].
    tau = (aqq - app) / (2.0 * apq_abs)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def hermitian_eig(h, rel_tol: float = 1e-14, max_sweeps: int = 60):
    """Eigendecompose a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending (real) and
    eigenvector columns ``v`` such that ``h = v @ diag(w) @ v*``.  The
    input is symmetrized first; callers are responsible for checking
    Hermiticity if it matters to them.
    """
    a = as_matrix(h)
    n, nc = a.shape
    if n != nc:
        raise ShapeError(f"eigendecomposition needs a square matrix, got {a.shape}")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return a.real.reshape(1).copy(), v

    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros(n), v
    stop = rel_tol * fro

    for _ in range(max_sweeps):
        off = np.sqrt(max(0.0, np.linalg.norm(a) ** 2 - np.linalg.norm(np.diag(a)) ** 2))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = a[p, q]
                ab = abs(beta)
                if ab <= stop / n:
                    continue
                u = beta / ab
                c, s = _sym_schur2(a[p, p].real, a[q, q].real, ab)
                # R differs from identity only at (p,p)=c, (p,q)=s,
                # (q,p)=-s*u.conj(), (q,q)=c*u.conj()  -- unitary, and
                # R* A R annihilates the (p,q) entry.
                ucon = np.conj(u)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * ucon * col_q
                a[:, q] = s * col_p + c * ucon * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * u * row_q
                a[q, :] = s * row_p + c * u * row_q
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * ucon * vq
                v[:, q] = s * vp + c * ucon * vq

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def op_norm(m) -> float:
    """Operator (C*-) norm: the largest singular value.

    Computed as the square root of the top eigenvalue of ``m* m`` via the
    Jacobi eigensolver.
    """
    a = as_matrix(m)
    gram = a.conj().T @ a
    w, _ = hermitian_eig(gram)
    return float(np.sqrt(max(w[-1], 0.0)))


def is_psd(m, tol: float = 1e-9) -> bool:
    """True iff ``m`` is Hermitian and positive semidefinite within ``tol``.

    Both the Hermiticity defect and the admissible negative eigenvalue are
    measured against ``tol * (1 + op_norm(m))``.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"positivity needs a square matrix, got {a.shape}")
    scale = tol * (1.0 + op_norm(a))
    if op_norm(a - a.conj().T) > scale:
        return False
    w, _ = hermitian_eig(a)
    return bool(w[0] >= -scale)


def gram_quotient(g, tol: float = 1e-9):
    """Quotient a PSD Gram matrix by its (numerical) null space.

    Eigenpairs with eigenvalue above ``tol * max_eigenvalue`` are kept.
    Returns ``(dim, isometry)`` where ``isometry`` has ``dim`` columns
    ``v_k / sqrt(lambda_k)``, so ``isometry* @ g @ isometry == identity``.

    Raises :class:`DomainError` (carrying the offending eigenvalue) if
    ``g`` is not Hermitian-PSD within ``tol``.
    """
    a = as_matrix(g)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"Gram matrix must be square, got {a.shape}")
    scale = tol * (1.0 + op_norm(a))
    herm_defect = op_norm(a - a.conj().T)
    if herm_defect > scale:
        raise DomainError(
            f"Gram matrix is not Hermitian within tolerance (defect {herm_defect:.3e})",
            offender=herm_defect,
        )
    w, v = hermitian_eig(a)
    if w[0] < -scale:
        raise DomainError(
            f"Gram matrix has a negative eigenvalue {w[0]:.6e}", offender=float(w[0])
        )
    lam_max = max(w[-1], 0.0)
    keep = np.nonzero(w > tol * lam_max)[0] if lam_max > 0.0 else np.array([], dtype=int)
    dim = int(keep.size)
    isometry = v[:, keep] / np.sqrt(w[keep]) if dim else np.zeros((a.shape[0], 0), dtype=np.complex128)
    return dim, isometry
