import numpy as np
import pytest
from numpy.testing import assert_allclose

from curvlab import (ConstAlteredHBC, ConstAlteredRBC, ConstHSC, FunctionalKind,
                     UsageError, bisectional, constant_identity_check, evaluate,
                     fs_moment_check, hsc, kahler_constant, matrices_from, paper_hopf,
                     paper_tricerri, random_tensor, rayleigh_bounds, ricci_qobc_bounds,
                     skew_pair, weitzenbock)
from curvlab.curvature import ChernTensor, FRAME, curvature_from_jet, to_frame
from curvlab.functionals import moment_target
from curvlab.linalg import rng_from
from curvlab.metrics import fubini_study, jet_at


def fs_tensor(n=2):
    return to_frame(curvature_from_jet(jet_at(fubini_study(n), np.zeros(n))))


def zero_tensor(n=2):
    return ChernTensor(values=np.zeros((n, n, n, n), dtype=complex), basis=FRAME)


# ---------------------------------------------------------------------------
# matrices and pointwise functionals

def test_matrices_from_examples():
    m = matrices_from(paper_hopf([1.0, 0.0]))
    assert_allclose(m.rbc, [[0.0, 0.0], [4.0, 4.0]])
    assert_allclose(m.altered, np.diag([0.0, 4.0]))
    assert m.imag_residual == 0.0

    mk = matrices_from(kahler_constant(2.0, 2))
    assert_allclose(mk.rbc, [[2.0, 1.0], [1.0, 2.0]])
    assert_allclose(mk.altered, [[2.0, 1.0], [1.0, 2.0]])

    mz = matrices_from(zero_tensor())
    assert np.all(mz.rbc == 0) and np.all(mz.altered == 0)


def test_matrices_diagonals_agree():
    m = matrices_from(random_tensor(2, 4))
    assert_allclose(np.diag(m.rbc), np.diag(m.altered), atol=1e-14)


def test_hsc_examples():
    rng = rng_from(1)
    for _ in range(20):
        w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        assert hsc(kahler_constant(-1.2, 3), w) == pytest.approx(-1.2)
    assert hsc(fs_tensor(), np.array([1, 0], complex)) == pytest.approx(2.0)
    # paper hopf: hsc(e2) = 4 |z1|^2 / |z|^6
    assert hsc(paper_hopf([1.0, 0.0]), np.array([0, 1], complex)) == pytest.approx(4.0)
    z = np.array([0.5, 1.0 - 0.5j])
    rho = float(np.sum(np.abs(z) ** 2))
    assert hsc(paper_hopf(z), np.array([0, 1], complex)) == pytest.approx(
        4.0 * abs(z[0]) ** 2 / rho ** 3)


def test_hsc_scale_invariant_and_zero_vector():
    t = random_tensor(9, 3)
    rng = rng_from(2)
    w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert hsc(t, 3.7j * w) == pytest.approx(hsc(t, w))
    with pytest.raises(UsageError):
        hsc(t, np.zeros(3))


def test_bisectional_examples():
    e1 = np.array([1, 0], complex)
    e2 = np.array([0, 1], complex)
    assert bisectional(kahler_constant(1.5, 2), e1, e1) == pytest.approx(3.0)
    assert bisectional(paper_hopf([1.0, 0.0]), e1, e2) == pytest.approx(4.0)
    t = random_tensor(12, 3)
    rng = rng_from(3)
    for _ in range(100):
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        assert bisectional(t, x, y) == pytest.approx(bisectional(t, y, x))


def test_evaluate_examples():
    m = matrices_from(paper_hopf([1.0, 0.0]))
    v = np.array([-1.0, 1.0]) / np.sqrt(2.0)
    assert evaluate(FunctionalKind.QOBC, m, v) == pytest.approx(8.0)

    ms = matrices_from(skew_pair(2.0, 3, seed=4))
    rng = rng_from(4)
    for _ in range(50):
        v = rng.standard_normal(3)
        assert evaluate(FunctionalKind.RBC, ms, v) == pytest.approx(
            1.0 * np.sum(v) ** 2 / (v @ v))

    m11 = matrices_from(paper_hopf([1.0, 1.0]))
    v = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert evaluate(FunctionalKind.ALTERED_HSC, m11, v) == pytest.approx(1.5)


def test_evaluate_errors():
    m = matrices_from(zero_tensor())
    with pytest.raises(UsageError):
        evaluate(FunctionalKind.HSC, m, np.array([1.0, 0.0]))
    with pytest.raises(UsageError):
        evaluate(FunctionalKind.RBC, m, np.zeros(2))


def test_rayleigh_bounds_examples():
    lo, hi = rayleigh_bounds(np.array([[0.0, 0.0], [4.0, 4.0]]))
    assert (lo, hi) == (pytest.approx(2 - 2 * np.sqrt(2)), pytest.approx(2 + 2 * np.sqrt(2)))
    assert rayleigh_bounds(np.eye(3)) == (pytest.approx(1.0), pytest.approx(1.0))
    lo, hi = rayleigh_bounds(matrices_from(paper_tricerri(1.0, 0.0, 1.0)).rbc)
    assert (lo, hi) == (pytest.approx(-0.75), pytest.approx(0.75))


def test_rayleigh_bracketing_over_random_vectors():
    rng = rng_from(6)
    m = rng.standard_normal((4, 4))
    lo, hi = rayleigh_bounds(m)
    sym = 0.5 * (m + m.T)
    for _ in range(1000):
        v = rng.standard_normal(4)
        q = float(v @ sym @ v / (v @ v))
        assert lo - 1e-12 <= q <= hi + 1e-12


def test_weitzenbock_examples():
    assert np.all(weitzenbock(np.eye(2)) == 0)
    assert_allclose(weitzenbock(np.array([[0.0, 1.0], [1.0, 0.0]])),
                    [[2.0, -2.0], [-2.0, 2.0]])
    w = weitzenbock(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    assert_allclose(w, [[-2.0, 2.0], [2.0, -2.0]])
    assert np.linalg.eigvalsh(w)[0] < 0
    m = matrices_from(paper_hopf([1.0, 0.0])).rbc
    assert_allclose(weitzenbock(m), [[4.0, -4.0], [-4.0, 4.0]])


def test_weitzenbock_reproduces_difference_form():
    rng = rng_from(7)
    m = rng.standard_normal((5, 5))
    w = weitzenbock(m)
    for _ in range(1000):
        v = rng.standard_normal(5)
        direct = float(np.sum(m * (v[:, None] - v[None, :]) ** 2))
        assert direct == pytest.approx(float(v @ w @ v), rel=1e-10, abs=1e-10)


def test_qobc_vanishes_on_constant_vectors():
    for k in range(20):
        m = matrices_from(random_tensor(100 + k, 3))
        assert evaluate(FunctionalKind.QOBC, m, np.ones(3)) == 0.0


def test_altered_hsc_additivity():
    rng = rng_from(8)
    for k in range(100):
        m = matrices_from(random_tensor(200 + k, 3))
        v = rng.standard_normal(3)
        combined = evaluate(FunctionalKind.ALTERED_HSC, m, v)
        split = (evaluate(FunctionalKind.RBC, m, v)
                 + evaluate(FunctionalKind.ALTERED_RBC, m, v))
        assert combined == pytest.approx(split, abs=1e-12)


def test_diagonal_agreement_hsc_rbc_altered():
    for k in range(50):
        t = random_tensor(300 + k, 3)
        m = matrices_from(t)
        for axis in range(3):
            e = np.zeros(3)
            e[axis] = 1.0
            r = evaluate(FunctionalKind.RBC, m, e)
            assert hsc(t, e.astype(complex)) == pytest.approx(r, abs=1e-12)
            assert evaluate(FunctionalKind.ALTERED_RBC, m, e) == pytest.approx(r, abs=1e-12)


# ---------------------------------------------------------------------------
# constant-curvature identities

def test_const_hsc_on_kahler_constant_and_fs():
    rep = constant_identity_check(kahler_constant(2.0, 3), ConstHSC(2.0), seed=1)
    assert rep.passed and rep.max_residual < 1e-12
    rep_fs = constant_identity_check(fs_tensor(), ConstHSC(2.0), seed=1)
    assert rep_fs.passed


def test_const_hsc_detects_violation():
    rep = constant_identity_check(paper_hopf([1.0, 0.0]), ConstHSC(2.0), seed=1)
    assert not rep.passed
    assert rep.max_residual > 0.1


def test_const_altered_hbc_on_skew_pair():
    rep = constant_identity_check(skew_pair(3.0, 3, seed=7), ConstAlteredHBC(3.0), seed=2)
    assert rep.passed and rep.max_residual < 1e-10


def test_const_altered_rbc_on_scaled_skew_pair():
    # skew_pair(2c) satisfies the pair-sum relations with constant 2c, i.e.
    # the altered quadratic form is constant c across frames
    rep = constant_identity_check(skew_pair(4.0, 3, seed=9), ConstAlteredRBC(2.0), seed=3)
    assert rep.passed and rep.max_residual < 1e-10


def test_cross_sign_both_directions():
    rng = rng_from(10)
    for c in (2.0, -1.0):
        t = skew_pair(2.0 * c, 3, seed=21)
        m = matrices_from(t)
        for _ in range(200):
            v = rng.standard_normal(3)
            assert evaluate(FunctionalKind.RBC, m, v) * c >= -1e-12

    # converse: constant plain form forces the sign of the altered form
    def constant_rbc_tensor(c, n, seed):
        vals = np.zeros((n, n, n, n), dtype=complex)
        s = rng_from(seed).standard_normal((n, n))
        t_skew = 0.5 * (s - s.T)
        for i in range(n):
            for k in range(n):
                vals[i, k, k, i] = c
                if i != k:
                    vals[i, i, k, k] = t_skew[i, k]
        return ChernTensor(values=vals, basis=FRAME)

    for c in (1.0, -0.5):
        t = constant_rbc_tensor(c, 3, seed=22)
        m = matrices_from(t)
        for _ in range(200):
            v = rng.standard_normal(3)
            assert evaluate(FunctionalKind.RBC, m, v) == pytest.approx(c)
            assert evaluate(FunctionalKind.ALTERED_RBC, m, v) * c >= -1e-12


def test_negative_pair_sums_control_orthant_form():
    # pair sums <= -delta and diagonal <= -delta/2 force the squared-weight
    # form below -(delta/2)(sum v_i^2)^2
    delta = 1.3
    rng = rng_from(11)
    t = skew_pair(-delta, 4, seed=23)
    u = np.abs(rng.standard_normal((4, 4)))
    u = 0.5 * (u + u.T)
    vals = t.values.copy()
    for i in range(4):
        for j in range(4):
            vals[i, i, j, j] -= u[i, j]
    t2 = ChernTensor(values=vals, basis=FRAME)
    for tensor in (t, t2):
        r = tensor.values
        for _ in range(1000):
            v = rng.standard_normal(4)
            s2 = v ** 2
            lhs = float(np.real(np.einsum("iijj,i,j->", r, s2, s2)))
            assert lhs <= -0.5 * delta * float(s2.sum()) ** 2 + 1e-10


# ---------------------------------------------------------------------------
# Ricci inequalities and moments

def test_ricci_qobc_bounds_examples():
    rep = ricci_qobc_bounds(paper_hopf([1.0, 0.0]))
    assert rep.passed
    margins = dict((name, val) for name, val in rep.details["margins"])
    assert margins["ric12_pair[0,1]"] == pytest.approx(16.0)
    assert margins["scal_bound"] == pytest.approx(8.0)
    assert rep.details["qobc_nonneg_sampled"]

    rep_fs = ricci_qobc_bounds(fs_tensor())
    assert rep_fs.passed
    fs_margins = dict((name, val) for name, val in rep_fs.details["margins"])
    assert fs_margins["scal_bound"] == pytest.approx(4.0)  # 6 - 2/(n-1)

    rep_zero = ricci_qobc_bounds(zero_tensor(3))
    assert rep_zero.passed and rep_zero.max_residual == 0.0


def test_fs_moment_check_small():
    rep = fs_moment_check(2, 50_000, seed=3)
    assert rep.passed
    assert rep.details["max_abs_deviation"] < 0.01
    with pytest.raises(UsageError):
        fs_moment_check(2, 100)


def test_moment_target_values():
    tgt = moment_target(2)
    assert tgt[0, 0, 0, 0] == pytest.approx(1.0 / 3.0)
    assert tgt[0, 0, 1, 1] == pytest.approx(1.0 / 6.0)
    assert tgt[0, 1, 1, 1] == 0.0


def test_symmetrized_hsc_matches_sphere_average():
    # contracting the tensor against fourth moments of the sphere reproduces
    # the squared-weight altered sectional form
    rng = rng_from(12)
    for k in range(3):
        t = random_tensor(400 + k, 2)
        m = matrices_from(t)
        tau = rng.standard_normal(2)
        n_samp = 200_000
        w = rng.standard_normal((n_samp, 2)) + 1j * rng.standard_normal((n_samp, 2))
        w /= np.linalg.norm(w, axis=1, keepdims=True)
        v = w * tau
        summand = np.einsum("ijkl,ai,aj,ak,al->a", t.values, v, np.conj(v), v, np.conj(v))
        mc = summand.mean()
        se = summand.std(ddof=1) / np.sqrt(n_samp)
        tau2 = tau ** 2
        target = float(tau2 @ (m.rbc + m.altered) @ tau2) / 6.0  # n (n+1) = 6
        assert abs(mc.real - target) <= 3.0 * se + 1e-12
        assert abs(mc.imag) <= 3.0 * se + 1e-12
