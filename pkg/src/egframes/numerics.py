"""Dense complex-matrix kernels.

Everything here takes and returns 2-D ``complex128`` numpy arrays.  Vectors
are single columns.  Tolerances live in :class:`Tolerances` so callers can
scale them together (the CLI's ``--tol-scale``).
"""

from dataclasses import dataclass, fields, replace
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DomainError, ShapeError, SingularityError


@dataclass(frozen=True)
class Tolerances:
    eig: float = 1e-10
    herm: float = 1e-8
    pd: float = 1e-10
    solve: float = 1e-9
    frame: float = 1e-10
    orth: float = 1e-10
    recon: float = 1e-8
    bound: float = 1e-8

    def scaled(self, factor):
        return replace(self, **{f.name: getattr(self, f.name) * factor for f in fields(self)})

    def updated(self, overrides):
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOL = Tolerances()


class HermitianEigenResult(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary, eigenvectors in columns


def as_matrix(a, name="matrix"):
    """Coerce ``a`` to a finite 2-D complex array (1-D input becomes a column)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError(f"{name} has non-finite entries")
    return m


def fro(a):
    return float(np.linalg.norm(a))


def matmul(a, b):
    """Matrix product, accumulated as rank-one updates in ascending inner index."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.complex128)
    for k in range(a.shape[1]):
        out += np.outer(a[:, k], b[k, :])
    return out


def adjoint(a):
    return np.conj(np.asarray(a, dtype=np.complex128)).T.copy()


def hermiticity_residual(m):
    """Relative Frobenius distance between ``m`` and its adjoint."""
    m = np.asarray(m, dtype=np.complex128)
    return fro(m - m.conj().T) / max(1.0, fro(m))


def _check_hermitian(m, tol):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    res = hermiticity_residual(m)
    if res > tol.herm:
        raise DomainError(f"matrix is not Hermitian (relative residual {res:.3e} > {tol.herm:.1e})")
    return 0.5 * (m + m.conj().T)


def hermitian_eig(m, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(m + m*)/2`` first so round-off asymmetry
    cannot leak into complex eigenvalues.  Eigenvalues come back ascending.
    """
    h = _check_hermitian(m, tol)
    w, v = np.linalg.eigh(h)
    return HermitianEigenResult(w, v)


def _check_pd(h, tol):
    w = np.linalg.eigvalsh(h)
    lam_min, lam_max = float(w[0]), float(w[-1])
    if lam_max <= 0 or lam_min <= tol.pd * lam_max:
        raise SingularityError(
            f"matrix is not positive definite (min eigenvalue {lam_min:.6e}, max {lam_max:.6e})",
            lam_min,
        )
    return lam_min


def solve_hpd(m, rhs, tol=DEFAULT_TOL):
    """Solve ``m x = rhs`` for Hermitian positive definite ``m`` (Cholesky)."""
    h = _check_hermitian(m, tol)
    rhs = np.asarray(rhs, dtype=np.complex128)
    if rhs.ndim == 1:
        rhs = rhs.reshape(-1, 1)
    if rhs.shape[0] != h.shape[0]:
        raise ShapeError(f"right-hand side has {rhs.shape[0]} rows, matrix is {h.shape}")
    lam_min = _check_pd(h, tol)
    x = scipy.linalg.cho_solve(scipy.linalg.cho_factor(h, lower=True), rhs)
    rhs_norm = fro(rhs)
    if fro(h @ x - rhs) > tol.solve * max(rhs_norm, np.finfo(float).tiny):
        raise SingularityError("Cholesky solve failed its residual check", lam_min)
    return x


def inv_sqrt_hpd(m, tol=DEFAULT_TOL):
    """Inverse square root of an HPD matrix via its eigendecomposition."""
    h = _check_hermitian(m, tol)
    _check_pd(h, tol)
    w, v = np.linalg.eigh(h)
    r = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    return 0.5 * (r + r.conj().T)


def operator_norm(m):
    """Largest singular value (spectral norm)."""
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def min_singular_value(m):
    m = np.asarray(m, dtype=np.complex128)
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def range_basis(m, rtol=1e-12):
    """Orthonormal basis (columns) of the column space of ``m``."""
    m = np.asarray(m, dtype=np.complex128)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    return u[:, s > rtol * s[0]]
