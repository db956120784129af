import numpy as np
import pytest
from numpy.testing import assert_allclose

from curvlab import DomainError, FDConfig, UsageError, finite_difference_jet, jet_at, make_metric
from curvlab.linalg import rng_from
from curvlab.metrics import conformal, euclidean, fubini_study, hopf, tricerri

CATALOG = {
    "euclidean": euclidean(3),
    "conformal": conformal(2, [1.0, 0.5]),
    "hopf": hopf(),
    "fubini_study": fubini_study(2),
    "tricerri": tricerri(),
}


def sample_domain_point(name, rng):
    n = CATALOG[name].n
    p = 0.5 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    if name == "hopf":
        p = p / np.linalg.norm(p) * rng.uniform(0.3, 2.0)
    if name == "tricerri":
        p[1] = p[1].real + 1j * rng.uniform(0.4, 2.0)
    return p


def test_make_metric_examples():
    assert_allclose(make_metric("hopf").evaluate(np.array([1.0, 0.0])),
                    np.diag([4.0, 4.0]), atol=1e-14)
    assert_allclose(make_metric("euclidean", dim=3).evaluate(np.ones(3)), np.eye(3))
    assert_allclose(make_metric("tricerri").evaluate(np.array([0.0, 1.0j])),
                    np.eye(2), atol=1e-14)


def test_make_metric_errors():
    with pytest.raises(UsageError):
        make_metric("does_not_exist")
    with pytest.raises(UsageError):
        make_metric("euclidean")  # missing dim
    with pytest.raises(UsageError):
        make_metric("hopf", dim=3)


def test_euclidean_jet_is_exactly_flat():
    field = euclidean(2)
    jet = jet_at(field, np.array([0.3 + 1j, -2.0]))
    assert np.all(jet.dg == 0) and np.all(jet.ddg == 0)


def test_hopf_first_derivative_closed_form():
    # d/dz_1 of 4 delta_kl / |z|^2 at z = (1, 0) is -4 delta_kl
    jet = jet_at(hopf(), np.array([1.0, 0.0]))
    assert_allclose(jet.dg[0], -4.0 * np.eye(2), atol=1e-13)


def test_fubini_study_fd_agrees_with_closed_form_at_origin():
    field = fubini_study(2)
    p = np.zeros(2, dtype=complex)
    fd = finite_difference_jet(field.evaluate, p, 1e-4, scale_with_point=True)
    cf = field.jet(p)
    assert np.abs(fd.ddg - cf.ddg).max() < 1e-6
    assert np.abs(fd.dg - cf.dg).max() < 1e-6


def test_constant_field_has_zero_derivatives():
    jet = finite_difference_jet(lambda p: np.eye(2, dtype=complex),
                                np.array([0.2, -0.1j]), 1e-4)
    assert np.abs(jet.dg).max() < 1e-12
    assert np.abs(jet.ddg).max() < 1e-12


def test_conformal_gaussian_second_derivative():
    # exp(|z|^2) I at the origin: ddg[i,j,k,l] = delta_ij delta_kl
    field = conformal(2)
    fd = finite_difference_jet(field.evaluate, np.zeros(2), 1e-4)
    target = np.einsum("ij,kl->ijkl", np.eye(2), np.eye(2))
    assert np.abs(fd.ddg - target).max() < 1e-6
    cf = field.jet(np.zeros(2))
    assert_allclose(cf.ddg, target, atol=1e-14)


def test_hopf_fd_vs_closed_form_off_axis():
    field = hopf()
    p = np.array([1.0, 1.0], dtype=complex)
    fd = finite_difference_jet(field.evaluate, p, 1e-4)
    cf = field.jet(p)
    assert np.abs(fd.ddg - cf.ddg).max() / np.abs(cf.ddg).max() < 1e-6
    assert np.abs(fd.dg - cf.dg).max() / np.abs(cf.dg).max() < 1e-6


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_fd_matches_closed_form_at_random_points(name):
    field = CATALOG[name]
    rng = rng_from(sum(map(ord, name)))
    for _ in range(100):
        p = sample_domain_point(name, rng)
        cf = field.jet(p)
        fd = finite_difference_jet(field.evaluate, p, 1e-4, domain=field.domain)
        scale = max(1.0, float(np.abs(cf.ddg).max()), float(np.abs(cf.dg).max()))
        assert np.abs(fd.dg - cf.dg).max() / scale < 1e-5
        assert np.abs(fd.ddg - cf.ddg).max() / scale < 1e-5


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_positive_definite_on_domain(name):
    field = CATALOG[name]
    rng = rng_from(1000 + sum(map(ord, name)))
    for _ in range(1000):
        p = sample_domain_point(name, rng)
        g = field.evaluate(p)
        assert np.linalg.eigvalsh(0.5 * (g + g.conj().T))[0] > 0


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_jet_reality(name):
    field = CATALOG[name]
    rng = rng_from(2000 + sum(map(ord, name)))
    for _ in range(20):
        p = sample_domain_point(name, rng)
        assert field.jet(p).reality_residual() < 1e-8
        fd = finite_difference_jet(field.evaluate, p, 1e-4, domain=field.domain)
        assert fd.reality_residual() < 1e-8


def test_point_outside_domain_raises():
    with pytest.raises(DomainError):
        jet_at(hopf(), np.array([0.01, 0.0]))


def test_stencil_leaving_domain_names_point():
    field = hopf()
    p = np.array([0.0501, 0.0])
    with pytest.raises(DomainError, match="stencil"):
        finite_difference_jet(field.evaluate, p, 1e-3, scale_with_point=False,
                              domain=field.domain)


def test_too_small_step_rejected():
    with pytest.raises(UsageError, match="cancellation"):
        finite_difference_jet(lambda p: np.eye(2, dtype=complex),
                              np.zeros(2), 1e-12)


def test_fd_order4_beats_order2_on_tricerri():
    field = tricerri()
    p = np.array([0.0, 1.0j])
    err2 = abs(finite_difference_jet(field.evaluate, p, 1e-3, order=2,
                                     scale_with_point=False).ddg[1, 1, 1, 1] - 1.5)
    err4 = abs(finite_difference_jet(field.evaluate, p, 1e-3, order=4,
                                     scale_with_point=False).ddg[1, 1, 1, 1] - 1.5)
    assert err4 < err2 / 100
    assert err4 < 1e-8


def test_fd_config_defaults():
    assert FDConfig().h == pytest.approx(1e-4)
    assert FDConfig().order == 2
