"""Chern curvature tensors: assembly from metric jets, frame conversion,
frame transformations, Ricci contractions, and synthetic test tensors.

Index convention throughout: R[i, j, k, l] means R_{i jbar k lbar}, with the
Hermitian symmetry conj(R[i, j, k, l]) = R[j, i, l, k].  A tensor is either
in the coordinate basis (metric attached) or in a unitary frame (implicit
metric = identity); contractions to Ricci and scalar curvatures require the
frame basis.

Two frame-change conventions coexist because both appear in practice:

* full      all four indices transform, R ~ (U x Ubar x U x Ubar) R;
* adjoint   only the endomorphism block transforms: for each fixed (i, j)
            the matrix M[k, l] = R[i, j, k, l] maps to U M U^H.

The full convention is the honest change of unitary frame; the adjoint one
treats the tensor as a matrix of invariant (1,1)-forms and is the convention
under which the Hopf-surface components are frame independent.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT
from .errors import DomainError, UsageError
from .linalg import cholesky_frame, ensure_finite, unitary_residual
from ._util import rng_from

COORDINATE = "coordinate"
FRAME = "frame"


class FrameConvention(str, enum.Enum):
    FULL = "full"
    ADJOINT = "adjoint"


class RicciKind(enum.IntEnum):
    FIRST = 1
    SECOND = 2
    THIRD = 3
    FOURTH = 4


def hermitian_tensor_residual(values):
    return float(np.abs(np.conj(values) - values.transpose(1, 0, 3, 2)).max())


@dataclass(frozen=True)
class ChernTensor:
    """Dense n^4 curvature tensor with a basis tag."""

    values: np.ndarray
    basis: str
    metric: Optional[np.ndarray] = None
    sym_residual: float = 0.0

    @property
    def n(self):
        return self.values.shape[0]

    def require_frame(self, op):
        if self.basis != FRAME:
            raise UsageError(f"{op} needs a unitary-frame tensor; convert with to_frame first")


def _build(values, basis, metric=None):
    values = ensure_finite(np.asarray(values, dtype=complex), "curvature tensor")
    resid = hermitian_tensor_residual(values)
    scale = max(1.0, float(np.abs(values).max()))
    if resid > DEFAULT.tensor_hermitian * scale:
        raise DomainError(f"tensor violates Hermitian symmetry: residual {resid:.3e}")
    values.flags.writeable = False
    return ChernTensor(values=values, basis=basis, metric=metric, sym_residual=resid)


def curvature_from_jet(jet):
    """Coordinate-basis Chern curvature of a metric 2-jet:

        R_{i jbar k lbar} = - ddg[i,j,k,l]
                            + sum_{p,q} g^{p qbar} dg[i,k,q] conj(dg[j,l,p])

    where g^{p qbar} is the inverse metric in the convention
    sum_q g^{p qbar} g_{s qbar} = delta_{p s}.
    """
    g = np.asarray(jet.g, dtype=complex)
    try:
        ginv_t = np.linalg.inv(g).T  # ginv_t[p, q] = g^{p qbar}
    except np.linalg.LinAlgError:
        raise DomainError("metric matrix is singular; cannot form curvature") from None
    correction = np.einsum("pq,ikq,jlp->ijkl", ginv_t, jet.dg, np.conj(jet.dg))
    return _build(-jet.ddg + correction, COORDINATE, metric=g)


def to_frame(tensor, g=None):
    """Convert a coordinate tensor to the unitary frame built from g."""
    if tensor.basis == FRAME:
        return tensor
    g = tensor.metric if g is None else np.asarray(g, dtype=complex)
    if g is None:
        raise UsageError("coordinate tensor carries no metric; pass g explicitly")
    e = cholesky_frame(g)
    vals = np.einsum("ia,jb,kc,ld,ijkl->abcd", e, np.conj(e), e, np.conj(e), tensor.values)
    return _build(vals, FRAME)


def transform_frame(tensor, u, convention):
    """Apply a unitary frame change under the named convention."""
    tensor.require_frame("transform_frame")
    u = np.asarray(u, dtype=complex)
    if u.shape != (tensor.n, tensor.n):
        raise UsageError(f"unitary has shape {u.shape}, tensor has dimension {tensor.n}")
    if unitary_residual(u) > 1e-8:
        raise UsageError("frame-change matrix is not unitary")
    conv = FrameConvention(convention)
    r = tensor.values
    if conv is FrameConvention.FULL:
        vals = np.einsum("ia,jb,kc,ld,abcd->ijkl", u, np.conj(u), u, np.conj(u), r)
    else:
        vals = np.einsum("ka,lb,ijab->ijkl", u, np.conj(u), r)
    return _build(vals, FRAME)


def ricci(tensor, kind):
    """One of the four Ricci contractions of a frame tensor."""
    tensor.require_frame("ricci")
    kind = RicciKind(kind)
    r = tensor.values
    if kind is RicciKind.FIRST:
        out = np.einsum("ijkk->ij", r)
    elif kind is RicciKind.SECOND:
        out = np.einsum("iikl->kl", r)
    elif kind is RicciKind.THIRD:
        out = np.einsum("ijki->kj", r)
    else:
        out = np.einsum("ikkl->il", r)
    return out


def scalars(tensor):
    """(Scal, altered Scal): the two scalar traces of a frame tensor."""
    tensor.require_frame("scalars")
    r = tensor.values
    s = complex(np.einsum("iikk->", r))
    s_alt = complex(np.einsum("ikki->", r))
    scale = max(1.0, float(np.abs(r).max()))
    if max(abs(s.imag), abs(s_alt.imag)) > DEFAULT.scalar_imag * scale:
        raise DomainError("scalar traces have non-negligible imaginary part")
    return s.real, s_alt.real


def scal_equal(tensor, tol=None):
    """Pointwise balanced criterion: Scal == altered Scal within tol."""
    tol = DEFAULT.scalar_imag if tol is None else tol
    s, s_alt = scalars(tensor)
    return abs(s - s_alt) <= tol * max(1.0, abs(s), abs(s_alt))


# ---------------------------------------------------------------------------
# synthetic frame tensors

def kahler_constant(c, n):
    """Tensor of a Kaehler metric with constant holomorphic sectional
    curvature c: R = (c/2)(delta_ij delta_kl + delta_il delta_kj)."""
    if n < 1:
        raise UsageError("dimension must be >= 1")
    eye = np.eye(n)
    vals = 0.5 * c * (np.einsum("ij,kl->ijkl", eye, eye) + np.einsum("il,kj->ijkl", eye, eye))
    return _build(vals.astype(complex), FRAME)


def skew_pair(c, n, seed):
    """Tensor satisfying the constant altered-bisectional relations
    R_{i jbar k lbar} + R_{k lbar i jbar} = c delta_ij delta_kl:
    diagonal R_{i ibar i ibar} = c/2 and R_{i ibar j jbar} = c/2 + s_ij with
    s a seeded antisymmetric real matrix."""
    if n < 1:
        raise UsageError("dimension must be >= 1")
    rng = rng_from(seed)
    a = rng.standard_normal((n, n))
    s = 0.5 * (a - a.T)
    vals = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            vals[i, i, j, j] = 0.5 * c + s[i, j]
    return _build(vals, FRAME)


def paper_hopf(z):
    """Closed-form Hopf-surface components, used verbatim as frame components:
    R[i,j,k,l] = 4 delta_kl (delta_ij |z|^2 - z_j conj(z_i)) / |z|^6."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != 2:
        raise UsageError("the Hopf tensor lives on n = 2")
    abs2 = np.abs(z) ** 2
    rho = float(abs2.sum())
    if rho == 0.0:
        raise DomainError("the Hopf tensor is singular at z = 0")
    block = -4.0 * np.einsum("j,i->ij", z, np.conj(z)) / rho ** 3
    block[0, 0] = 4.0 * abs2[1] / rho ** 3
    block[1, 1] = 4.0 * abs2[0] / rho ** 3
    vals = np.einsum("ij,kl->ijkl", block, np.eye(2))
    return _build(vals, FRAME)


def paper_tricerri(b, d, im_w):
    """Two-parameter Tricerri frame family: the only nonzero entries are
    R[2,2,1,1] = |b|^2 R0 and R[2,2,2,2] = |d|^2 R0 with
    R0 = -3 / (2 Im(w)^4).  Unitarity bounds each row entry: |b| <= 1 and
    |d| <= 1."""
    bb, dd = abs(complex(b)) ** 2, abs(complex(d)) ** 2
    if bb > 1.0 + 1e-12 or dd > 1.0 + 1e-12:
        raise UsageError("|b| and |d| must each be <= 1 (unitarity row bound)")
    if im_w <= 0:
        raise DomainError("Im(w) must be positive")
    r0 = -1.5 / float(im_w) ** 4
    vals = np.zeros((2, 2, 2, 2), dtype=complex)
    vals[1, 1, 0, 0] = bb * r0
    vals[1, 1, 1, 1] = dd * r0
    return _build(vals, FRAME)


def random_tensor(seed, n):
    """Seeded random tensor with Hermitian symmetry enforced."""
    rng = rng_from(seed)
    raw = rng.standard_normal((n, n, n, n)) + 1j * rng.standard_normal((n, n, n, n))
    vals = 0.5 * (raw + np.conj(raw).transpose(1, 0, 3, 2))
    return _build(vals, FRAME)


def make_synthetic(kind, **params):
    """Dispatcher used by the CLI: kahler_constant | skew_pair | paper_hopf |
    paper_tricerri | random."""
    builders = {
        "kahler_constant": lambda: kahler_constant(params["c"], params["n"]),
        "skew_pair": lambda: skew_pair(params["c"], params["n"], params.get("seed", 0)),
        "paper_hopf": lambda: paper_hopf(params["z"]),
        "paper_tricerri": lambda: paper_tricerri(params.get("b", 0.0), params.get("d", 1.0),
                                                 params["im_w"]),
        "random": lambda: random_tensor(params.get("seed", 0), params["n"]),
    }
    try:
        builder = builders[kind]
    except KeyError:
        raise UsageError(f"unknown synthetic tensor '{kind}'; kinds: {sorted(builders)}") from None
    try:
        return builder()
    except KeyError as missing:
        raise UsageError(f"synthetic tensor '{kind}' needs parameter {missing}") from None
