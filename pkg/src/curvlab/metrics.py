"""Hermitian metric fields on domains in C^n and their 2-jets.

A metric field packages the dimension, a chart-domain predicate, a pointwise
evaluator returning the Hermitian matrix g_{i jbar}(p), and (for catalog
entries) a closed-form jet.  The jet of a metric at a point consists of

    g                  the metric matrix,
    dg[i, k, l]        d g_{k lbar} / d z_i,
    ddg[i, j, k, l]    d^2 g_{k lbar} / (d z_i d zbar_j),

which is exactly the data the Chern curvature formula consumes.  Jets can
also be produced by central finite differences in the Wirtinger convention
d/dz = (d/dx - i d/dy)/2, with second mixed derivatives built from nested
first differences.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT
from .errors import DomainError, UsageError
from .linalg import ensure_finite

CHART_BOUND = 10.0      # |coordinate| bound for the Tricerri fundamental-domain chart
HOPF_MARGIN = 0.05      # hopf domain: |z| > margin
TRICERRI_MARGIN = 0.05  # tricerri domain: Im(w) > margin


@dataclass(frozen=True)
class MetricJet:
    """Metric value and first/mixed-second derivatives at a point."""

    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray

    @property
    def n(self):
        return self.g.shape[0]

    def reality_residual(self):
        """Deviation from conj(ddg[i,j,k,l]) == ddg[j,i,l,k] and the matching
        Hermitian condition on g; zero for the jet of a genuine metric."""
        r_g = float(np.abs(self.g - self.g.conj().T).max())
        r_dd = float(np.abs(np.conj(self.ddg) - self.ddg.transpose(1, 0, 3, 2)).max())
        return max(r_g, r_dd)


@dataclass(frozen=True)
class MetricField:
    """A Hermitian metric g_{i jbar}(p) on a chart domain in C^n."""

    name: str
    n: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    domain: Callable[[np.ndarray], bool]
    jet: Optional[Callable[[np.ndarray], MetricJet]] = None
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FDConfig:
    """Finite-difference settings: base step, point scaling, stencil order."""

    h: float = 1e-4
    scale_with_point: bool = True
    order: int = 2


def as_point(p, n=None):
    p = np.asarray(p, dtype=complex).reshape(-1)
    ensure_finite(p, "point")
    if n is not None and p.size != n:
        raise UsageError(f"point has dimension {p.size}, expected {n}")
    return p


# ---------------------------------------------------------------------------
# finite differences

def _eval_checked(evaluate, p, domain):
    if domain is not None and not domain(p):
        raise DomainError(f"finite-difference stencil point {p.tolist()} leaves the domain")
    return np.asarray(evaluate(p), dtype=complex)


def _wirtinger_first(fn, p, axis, h, conjugated, domain):
    """d/dz_axis (or d/dzbar_axis) of a matrix-valued function by central
    differences along the real and imaginary directions."""
    e = np.zeros(p.size, dtype=complex)
    e[axis] = 1.0
    dx = (_eval_checked(fn, p + h * e, domain) - _eval_checked(fn, p - h * e, domain)) / (2.0 * h)
    dy = (_eval_checked(fn, p + 1j * h * e, domain) - _eval_checked(fn, p - 1j * h * e, domain)) / (2.0 * h)
    return 0.5 * (dx + 1j * dy) if conjugated else 0.5 * (dx - 1j * dy)


def _fd_jet_fixed_step(evaluate, p, h, domain):
    n = p.size
    g = _eval_checked(evaluate, p, domain)
    dg = np.empty((n, n, n), dtype=complex)
    for i in range(n):
        dg[i] = _wirtinger_first(evaluate, p, i, h, conjugated=False, domain=domain)
    ddg = np.empty((n, n, n, n), dtype=complex)
    for j in range(n):
        def inner(q, _j=j):
            return _wirtinger_first(evaluate, q, _j, h, conjugated=True, domain=domain)
        for i in range(n):
            ddg[i, j] = _wirtinger_first(inner, p, i, h, conjugated=False, domain=domain)
    return MetricJet(g=g, dg=dg, ddg=ddg)


def finite_difference_jet(evaluate, p, h, *, order=2, scale_with_point=True, domain=None):
    """Jet of an arbitrary pointwise metric by central Wirtinger differences.

    order=2 is the plain O(h^2) stencil; order=4 Richardson-extrapolates the
    steps h and h/2, which is needed when absolute accuracy near 1e-8 is
    required on O(1) second derivatives.
    """
    p = as_point(p)
    if h <= 0:
        raise UsageError("finite-difference step must be positive")
    step = h * max(1.0, float(np.linalg.norm(p))) if scale_with_point else h
    if step < DEFAULT.fd_min_step:
        raise UsageError(f"step {step:.3e} is below {DEFAULT.fd_min_step:.0e}; "
                         "cancellation would dominate")
    if order == 2:
        return _fd_jet_fixed_step(evaluate, p, step, domain)
    if order == 4:
        full = _fd_jet_fixed_step(evaluate, p, step, domain)
        half = _fd_jet_fixed_step(evaluate, p, step / 2.0, domain)
        return MetricJet(g=full.g,
                         dg=(4.0 * half.dg - full.dg) / 3.0,
                         ddg=(4.0 * half.ddg - full.ddg) / 3.0)
    raise UsageError(f"unsupported finite-difference order {order}")


def jet_at(metric, p, fd=FDConfig()):
    """Jet of a metric field: closed form when the catalog provides one,
    otherwise finite differences with the given configuration."""
    p = as_point(p, metric.n)
    if not metric.domain(p):
        raise DomainError(f"point {p.tolist()} is outside the domain of metric '{metric.name}'")
    if metric.jet is not None:
        return metric.jet(p)
    return finite_difference_jet(metric.evaluate, p, fd.h, order=fd.order,
                                 scale_with_point=fd.scale_with_point,
                                 domain=metric.domain)


# ---------------------------------------------------------------------------
# catalog

def euclidean(n):
    eye = np.eye(n, dtype=complex)
    zeros1 = np.zeros((n, n, n), dtype=complex)
    zeros2 = np.zeros((n, n, n, n), dtype=complex)

    def jet(p):
        return MetricJet(g=eye.copy(), dg=zeros1.copy(), ddg=zeros2.copy())

    return MetricField(name="euclidean", n=n, evaluate=lambda p: eye.copy(),
                       domain=lambda p: True, jet=jet, params={"dim": n})


def conformal(n, coeffs=None):
    """g = exp(f) I with f(z) = sum_m c_m |z_m|^2."""
    c = np.ones(n) if coeffs is None else np.asarray(coeffs, dtype=float).reshape(-1)
    if c.size != n:
        raise UsageError(f"conformal metric needs {n} coefficients, got {c.size}")
    eye = np.eye(n, dtype=complex)

    def evaluate(p):
        return np.exp(float(np.sum(c * np.abs(p) ** 2))) * eye

    def jet(p):
        w = np.exp(float(np.sum(c * np.abs(p) ** 2)))
        df = c * np.conj(p)                      # d f / d z_i
        dg = np.einsum("i,kl->ikl", w * df, eye)
        # d^2 f / dz_i dzbar_j = c_i delta_ij; product rule on exp(f)
        hess = np.einsum("i,j->ij", df, np.conj(df)) + np.diag(c).astype(complex)
        ddg = np.einsum("ij,kl->ijkl", w * hess, eye)
        return MetricJet(g=w * eye, dg=dg, ddg=ddg)

    return MetricField(name="conformal", n=n, evaluate=evaluate,
                       domain=lambda p: True, jet=jet,
                       params={"dim": n, "coeffs": c.tolist()})


def hopf():
    """Scale-invariant Hopf-surface metric g = 4 delta_{ij} / |z|^2 on n = 2."""
    eye = np.eye(2, dtype=complex)

    def rho(p):
        return float(np.sum(np.abs(p) ** 2))

    def evaluate(p):
        return 4.0 * eye / rho(p)

    def jet(p):
        r = rho(p)
        g = 4.0 * eye / r
        dg = np.einsum("i,kl->ikl", -4.0 * np.conj(p) / r ** 2, eye)
        dd = 4.0 * (2.0 * np.einsum("i,j->ij", np.conj(p), p) - r * np.eye(2)) / r ** 3
        ddg = np.einsum("ij,kl->ijkl", dd, eye)
        return MetricJet(g=g, dg=dg, ddg=ddg)

    return MetricField(name="hopf", n=2, evaluate=evaluate,
                       domain=lambda p: np.linalg.norm(p) > HOPF_MARGIN,
                       jet=jet, params={"dim": 2})


def fubini_study(n):
    """Affine-chart Fubini-Study metric g = d dbar log(1 + |w|^2)."""

    def evaluate(p):
        u = 1.0 / (1.0 + float(np.sum(np.abs(p) ** 2)))
        return u * np.eye(n) - u ** 2 * np.einsum("k,l->kl", np.conj(p), p)

    def jet(p):
        u = 1.0 / (1.0 + float(np.sum(np.abs(p) ** 2)))
        pb = np.conj(p)
        eye = np.eye(n, dtype=complex)
        g = u * eye - u ** 2 * np.einsum("k,l->kl", pb, p)
        dg = (-u ** 2 * np.einsum("i,kl->ikl", pb, eye)
              - u ** 2 * np.einsum("il,k->ikl", eye, pb)
              + 2.0 * u ** 3 * np.einsum("k,l,i->ikl", pb, p, pb))
        ddg = (-u ** 2 * (np.einsum("kl,ij->ijkl", eye, eye)
                          + np.einsum("il,jk->ijkl", eye, eye))
               + 2.0 * u ** 3 * (np.einsum("kl,j,i->ijkl", eye, p, pb)
                                 + np.einsum("il,j,k->ijkl", eye, p, pb)
                                 + np.einsum("jk,l,i->ijkl", eye, p, pb)
                                 + np.einsum("ij,k,l->ijkl", eye, pb, p))
               - 6.0 * u ** 4 * np.einsum("j,k,l,i->ijkl", p, pb, p, pb))
        return MetricJet(g=g, dg=dg, ddg=ddg)

    return MetricField(name="fubini_study", n=n, evaluate=evaluate,
                       domain=lambda p: True, jet=jet, params={"dim": n})


def tricerri():
    """Tricerri metric g = diag(Im w, 1/Im(w)^2) on a bounded chart of the
    Inoue-surface fundamental domain, coordinates (z, w) with Im w bounded
    away from zero."""

    def imw(p):
        return float(p[1].imag)

    def evaluate(p):
        y = imw(p)
        return np.diag([y, y ** -2.0]).astype(complex)

    def domain(p):
        return (imw(p) > TRICERRI_MARGIN
                and abs(p[0]) <= CHART_BOUND and abs(p[1]) <= CHART_BOUND)

    def jet(p):
        y = imw(p)
        g = np.diag([y, y ** -2.0]).astype(complex)
        dg = np.zeros((2, 2, 2), dtype=complex)
        # d/dw Im w = -i/2
        dg[1, 0, 0] = -0.5j
        dg[1, 1, 1] = 1j * y ** -3.0
        ddg = np.zeros((2, 2, 2, 2), dtype=complex)
        ddg[1, 1, 1, 1] = 1.5 * y ** -4.0
        return MetricJet(g=g, dg=dg, ddg=ddg)

    return MetricField(name="tricerri", n=2, evaluate=evaluate,
                       domain=domain, jet=jet, params={"dim": 2})


_CATALOG = {
    "euclidean": lambda dim=None, **kw: euclidean(_need_dim(dim)),
    "conformal": lambda dim=None, coeffs=None, **kw: conformal(_need_dim(dim), coeffs),
    "hopf": lambda dim=None, **kw: _fixed_dim(hopf, dim, 2),
    "fubini_study": lambda dim=None, **kw: fubini_study(_need_dim(dim)),
    "tricerri": lambda dim=None, **kw: _fixed_dim(tricerri, dim, 2),
}


def _need_dim(dim):
    if dim is None:
        raise UsageError("this metric needs an explicit dimension (--dim)")
    dim = int(dim)
    if dim < 1:
        raise UsageError(f"dimension must be >= 1, got {dim}")
    return dim


def _fixed_dim(builder, dim, expected):
    if dim is not None and int(dim) != expected:
        raise UsageError(f"this metric is defined for n = {expected}")
    return builder()


def make_metric(name, dim=None, **params):
    """Catalog lookup used by the CLI: euclidean | conformal | hopf |
    fubini_study | tricerri."""
    try:
        builder = _CATALOG[name]
    except KeyError:
        raise UsageError(f"unknown metric '{name}'; catalog: {sorted(_CATALOG)}") from None
    return builder(dim=dim, **params)
