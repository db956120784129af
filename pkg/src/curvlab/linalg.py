"""Small dense matrix kernel: self-adjoint spectra, metric frames, Haar unitaries.

Everything here targets matrices of size n <= 8 and is backed by LAPACK via
numpy.  Eigenvalues always come back ascending; Haar sampling follows the
QR-with-phase-fix construction (diagonal of the triangular factor made real
positive), which gives exactly Haar measure.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DomainError, UsageError
from ._util import rng_from, split_rng  # noqa: F401  (re-exported)


def ensure_finite(arr, what="input"):
    arr = np.asarray(arr)
    finite = np.isfinite(arr.real) & np.isfinite(arr.imag) if np.iscomplexobj(arr) \
        else np.isfinite(arr)
    if not np.all(finite):
        raise DomainError(f"{what} contains NaN or Inf entries")
    return arr


def hermitian_residual(m):
    """Largest deviation of ``m`` from its conjugate transpose."""
    m = np.asarray(m)
    return float(np.abs(m - m.conj().T).max()) if m.size else 0.0


def is_hermitian(m, tol=None):
    tol = DEFAULT.hermitian_entry if tol is None else tol
    m = np.asarray(m)
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    return hermitian_residual(m) <= tol * scale


def unitary_residual(u):
    u = np.asarray(u)
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())


def is_unitary(u, tol=None):
    tol = DEFAULT.unitary if tol is None else tol
    return unitary_residual(u) <= tol


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectrum of a self-adjoint matrix.

    values are ascending; vectors holds the matching orthonormal eigenvectors
    as columns.  asymmetry records how far the original input was from
    self-adjoint before the internal symmetrization.
    """

    values: np.ndarray
    vectors: np.ndarray
    asymmetry: float
    reconstruction_residual: float


def self_adjoint_eigen(m):
    """Full spectrum of a (nearly) self-adjoint matrix, ascending.

    The input is symmetrized first; the asymmetry it carried is recorded on
    the result rather than raised, because quadratic-form consumers only ever
    see the symmetric part.
    """
    m = np.asarray(m)
    m = ensure_finite(m.astype(complex if np.iscomplexobj(m) else float), "matrix")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {m.shape}")
    asym = hermitian_residual(m)
    h = 0.5 * (m + m.conj().T)
    values, vectors = np.linalg.eigh(h)
    scale = max(1.0, float(np.abs(h).max()))
    recon = float(np.abs(h @ vectors - vectors * values).max())
    if recon > DEFAULT.eigen_reconstruction * scale:
        raise DomainError(f"eigendecomposition residual {recon:.3e} exceeds tolerance")
    return EigenDecomposition(values=values, vectors=vectors, asymmetry=asym,
                              reconstruction_residual=recon)


def is_psd(m, tol=None):
    """Positive semidefiniteness of the self-adjoint part: lambda_min >= -tol."""
    tol = DEFAULT.cone_agreement if tol is None else tol
    return bool(self_adjoint_eigen(m).values[0] >= -tol)


def cholesky_frame(g, pd_floor=None):
    """Columns of E are a g-orthonormal frame of (1,0)-vectors.

    Orthonormality is with respect to <X, Y> = sum g_{i jbar} X_i conj(Y_j),
    the pairing every curvature contraction here uses, so the condition is
    E^T g conj(E) = I; it is built from the Cholesky factor g = L L^H as
    E = (L^{-1})^T.  For real metrics this coincides with E^H g E = I, and
    diagonal metrics give diagonal frames.
    """
    pd_floor = DEFAULT.positive_definite if pd_floor is None else pd_floor
    g = ensure_finite(np.asarray(g, dtype=complex), "metric")
    lambda_min = float(np.linalg.eigvalsh(0.5 * (g + g.conj().T))[0])
    if lambda_min <= pd_floor:
        raise DomainError(
            f"metric is not positive definite: smallest eigenvalue {lambda_min:.6e}")
    low = np.linalg.cholesky(0.5 * (g + g.conj().T))
    e = np.linalg.inv(low).T
    residual = float(np.abs(e.T @ g @ np.conj(e) - np.eye(g.shape[0])).max())
    if residual > DEFAULT.frame_orthonormal * max(1.0, float(np.abs(g).max())):
        raise DomainError(f"frame orthonormality residual {residual:.3e} too large")
    return e


def haar_from_rng(n, rng):
    """Haar-distributed unitary drawn from an existing generator."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_unitary(n, seed):
    """Deterministic Haar-random unitary for (n, seed)."""
    if n < 1:
        raise UsageError("dimension must be >= 1")
    return haar_from_rng(n, rng_from(seed))


def random_hermitian(n, rng, scale=1.0):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (z + z.conj().T)
