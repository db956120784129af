"""Reproduction suites: each suite re-derives a battery of published
desk-scale numbers and identities and reports per-check pass/fail.

Suites: hopf, tricerri, fubini_study, cones, identities, all.
"""

import numpy as np

from .errors import UsageError
from ._util import rng_from
from .linalg import haar_from_rng
from .metrics import finite_difference_jet, hopf, fubini_study, tricerri, jet_at
from .curvature import (FrameConvention, RicciKind, curvature_from_jet, kahler_constant,
                        paper_hopf, paper_tricerri, random_tensor, ricci, scalars,
                        skew_pair, to_frame, transform_frame)
from .functionals import (ConstAlteredHBC, ConstAlteredRBC, ConstHSC, FunctionalKind,
                          constant_identity_check, evaluate, hsc, matrices_from,
                          rayleigh_bounds, ricci_qobc_bounds, fs_moment_check)
from .cones import (copositive_2x2, cone_min, dual_edm_test, edm_from_vector,
                    nonneg_orthant, perron_weights, perron_criterion_check)
from .search import invariance_test, tricerri_family_extrema
from .reports import VerifyReport

SUITES = ("hopf", "tricerri", "fubini_study", "cones", "identities")


def hopf_domain_points(seed, count, lo=0.1, hi=3.0):
    rng = rng_from(seed)
    pts = []
    for _ in range(count):
        u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        pts.append(u / np.linalg.norm(u) * rng.uniform(lo, hi))
    return pts


def hopf_fd_worst_error(seed, count=20):
    """Largest entrywise deviation (relative to the tensor sup-norm) between
    the finite-difference Chern tensor of the Hopf metric and its closed form,
    over random points 0.1 < |z| < 3."""
    metric = hopf()
    worst = 0.0
    for z in hopf_domain_points(seed, count):
        # step proportional to |z| keeps both truncation and cancellation
        # error around 1e-8 relative across the shell
        h = 1e-4 * float(np.linalg.norm(z))
        jet = finite_difference_jet(metric.evaluate, z, h,
                                    scale_with_point=False, domain=metric.domain)
        r_fd = curvature_from_jet(jet).values
        r_ref = paper_hopf(z).values
        worst = max(worst, float(np.abs(r_fd - r_ref).max() / np.abs(r_ref).max()))
    return worst


def hopf_altered_hsc_bounds(z):
    """Closed-form extrema of the altered sectional form on the Hopf surface."""
    a1, a2 = abs(z[0]) ** 2, abs(z[1]) ** 2
    rho = a1 + a2
    root = np.sqrt(5 * a1 ** 2 - 6 * a1 * a2 + 5 * a2 ** 2)
    return ((2.0 / rho ** 3) * (2.0 * rho - root), (2.0 / rho ** 3) * (2.0 * rho + root))


def suite_hopf(seed=0, frame_samples=1000):
    rep = VerifyReport(suite="hopf")
    rep.add("fd_tensor_vs_closed_form", 0.0, hopf_fd_worst_error(seed), 1e-6)

    t = paper_hopf([1.0, 0.0])
    m = matrices_from(t)
    rep.add("rbc_matrix_at_(1,0)", 0.0,
            float(np.abs(m.rbc - np.array([[0.0, 0.0], [4.0, 4.0]])).max()), 0.0)
    rep.add("altered_matrix_at_(1,0)", 0.0,
            float(np.abs(m.altered - np.diag([0.0, 4.0])).max()), 0.0)

    worst = 0.0
    for z in hopf_domain_points(seed + 1, 10):
        lo, hi = rayleigh_bounds(matrices_from(paper_hopf(z)).rbc
                                 + matrices_from(paper_hopf(z)).altered)
        flo, fhi = hopf_altered_hsc_bounds(z)
        worst = max(worst, abs(lo - flo), abs(hi - fhi))
    rep.add("altered_hsc_bounds_formula", 0.0, worst, 1e-9)

    t11 = paper_hopf([1.0, 1.0])
    m11 = matrices_from(t11)
    lo, hi = rayleigh_bounds(m11.rbc + m11.altered)
    rep.add("altered_hsc_lower_at_(1,1)", 0.5, lo, 1e-12)
    rep.add("altered_hsc_upper_at_(1,1)", 1.5, hi, 1e-12)

    # six listed components under the adjoint action
    listed = [(0, 0, 0, 0), (1, 1, 1, 1), (0, 0, 1, 1), (1, 1, 0, 0),
              (0, 1, 1, 0), (1, 0, 0, 1)]
    rng = rng_from(seed + 2)
    t_gen = paper_hopf([1.0, 0.5 - 0.5j])
    base = [t_gen.values[idx] for idx in listed]
    dev = 0.0
    for _ in range(frame_samples):
        u = haar_from_rng(2, rng)
        moved = transform_frame(t_gen, u, FrameConvention.ADJOINT)
        dev = max(dev, max(abs(moved.values[idx] - b) for idx, b in zip(listed, base)))
    rep.add("adjoint_component_invariance", 0.0, dev, 1e-9)

    for kind in (FunctionalKind.RBC, FunctionalKind.ALTERED_RBC, FunctionalKind.ALTERED_HSC):
        ok, _ = invariance_test(t_gen, kind, FrameConvention.ADJOINT,
                                samples=frame_samples, seed=seed + 3, tol=1e-9)
        rep.add_bool(f"invariance[{kind.value}]", ok)

    for z in ([1.0, 0.0], [1.0, 1.0], [0.3, -0.7j]):
        mm = matrices_from(paper_hopf(z))
        rho = float(np.sum(np.abs(np.asarray(z, complex)) ** 2))
        v_min = np.array([1.0, 1.0]) / np.sqrt(2.0)
        v_max = np.array([-1.0, 1.0]) / np.sqrt(2.0)
        rep.add(f"qobc_min_at_{z}", 0.0, evaluate(FunctionalKind.QOBC, mm, v_min), 1e-9)
        rep.add(f"qobc_max_at_{z}", 8.0 / rho ** 2,
                evaluate(FunctionalKind.QOBC, mm, v_max), 1e-9)

    rng = rng_from(seed + 4)
    worst = 0.0
    for _ in range(100):
        u = haar_from_rng(2, rng)
        mm = matrices_from(transform_frame(t_gen, u, FrameConvention.ADJOINT))
        for _ in range(10):
            v = rng.standard_normal(2)
            worst = max(worst, abs(evaluate(FunctionalKind.ALTERED_QOBC, mm, v)))
    rep.add("altered_qobc_identically_zero", 0.0, worst, 1e-9)

    ric1 = ricci(t, RicciKind.FIRST).real
    ric2 = ricci(t, RicciKind.SECOND).real
    rep.add("ric1_at_(1,0)", 0.0, float(np.abs(ric1 - np.diag([0.0, 8.0])).max()), 1e-12)
    rep.add("ric2_at_(1,0)", 0.0, float(np.abs(ric2 - np.diag([4.0, 4.0])).max()), 1e-12)
    s, s_alt = scalars(t)
    rep.add("scal_at_(1,0)", 8.0, s, 1e-12)
    rep.add("altered_scal_at_(1,0)", 4.0, s_alt, 1e-12)

    bounds = ricci_qobc_bounds(t, tol=1e-10, seed=seed + 5)
    margins = dict((name, val) for name, val in bounds.details["margins"])
    rep.add("ricci_pair_margin", 16.0, margins["ric12_pair[0,1]"], 1e-10)
    rep.add("scal_bound_margin", 8.0, margins["scal_bound"], 1e-10)
    rep.add_bool("ricci_qobc_bounds_pass", bounds.passed)
    return rep


def tricerri_second_derivative_error(points=None):
    """Worst |ddg_ww - 3/(2 Im^4)| over chart points, fourth-order differences."""
    metric = tricerri()
    pts = points or [np.array([0.2 + 0.1j, 0.3 + 1.0j]),
                     np.array([0.0j, 1.6j]),
                     np.array([-0.4j, 0.1 + 0.8j])]
    worst = 0.0
    for p in pts:
        jet = finite_difference_jet(metric.evaluate, p, 1e-3,
                                    order=4, scale_with_point=False,
                                    domain=metric.domain)
        y = float(p[1].imag)
        worst = max(worst, abs(float(jet.ddg[1, 1, 1, 1].real) - 1.5 / y ** 4))
    return worst


def tricerri_eigen_formula_error(seed, count=100):
    """Deviation of the family Rayleigh bounds from the printed closed form
    -(3/(4 Im^4)) (|d|^2 -+ sqrt(|b|^4 + |d|^4)), over sampled (b, d)."""
    rng = rng_from(seed)
    worst = 0.0
    for k in range(count):
        if k % 2 == 0:
            u = haar_from_rng(2, rng)  # genuine unitary members
            b, d = u[0, 1], u[1, 1]
        else:
            b = np.sqrt(rng.uniform())  # independent square members
            d = np.sqrt(rng.uniform())
        im_w = rng.uniform(0.7, 2.0)
        t = paper_tricerri(b, d, im_w)
        lo, hi = rayleigh_bounds(matrices_from(t).rbc)
        bb, dd = abs(b) ** 2, abs(d) ** 2
        root = np.sqrt(bb ** 2 + dd ** 2)
        pref = 3.0 / (4.0 * im_w ** 4)
        worst = max(worst, abs(lo + pref * (dd + root)), abs(hi + pref * (dd - root)))
    return worst


def suite_tricerri(seed=0):
    rep = VerifyReport(suite="tricerri")
    rep.add("gww_second_derivative_fd", 0.0, tricerri_second_derivative_error(), 1e-8)
    rep.add("family_eigenvalue_formula", 0.0, tricerri_eigen_formula_error(seed), 1e-9)

    for im_w in (1.0, 2.0):
        scan = tricerri_family_extrema(im_w, FunctionalKind.RBC)
        target_inf = -0.75 * (1.0 + np.sqrt(2.0)) / im_w ** 4
        target_sup = 0.75 / im_w ** 4
        rep.add(f"rbc_family_inf[imw={im_w}]", target_inf, scan["inf"],
                0.02 * abs(target_inf))
        rep.add(f"rbc_family_sup[imw={im_w}]", target_sup, scan["sup"],
                0.02 * abs(target_sup))
        alt = tricerri_family_extrema(im_w, FunctionalKind.ALTERED_RBC)
        rep.add(f"altered_rbc_family_inf[imw={im_w}]", -1.5 / im_w ** 4, alt["inf"],
                0.02 * 1.5 / im_w ** 4)
        rep.add(f"altered_rbc_family_sup[imw={im_w}]", 0.0, alt["sup"], 1e-9)

    # metric-derived tensor differs from the printed one; report, don't judge
    metric = tricerri()
    p = np.array([0.1 + 0.2j, 0.4 + 1.0j])
    derived = to_frame(curvature_from_jet(jet_at(metric, p)))
    printed = paper_tricerri(0.0, 1.0, float(p[1].imag))
    gap = float(np.abs(derived.values - printed.values).max())
    rep.add("metric_vs_printed_tensor_gap", "reported", gap, None)
    return rep


def suite_fubini_study(seed=0, moment_samples=200_000):
    rep = VerifyReport(suite="fubini_study")
    rng = rng_from(seed)
    worst = 0.0
    for _ in range(25):
        n = int(rng.integers(2, 4))
        p = 0.5 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        t = to_frame(curvature_from_jet(jet_at(fubini_study(n), p)))
        for _ in range(4):
            w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            worst = max(worst, abs(hsc(t, w) - 2.0))
    rep.add("hsc_constant_2", 0.0, worst, 1e-7)

    t0 = to_frame(curvature_from_jet(jet_at(fubini_study(2), np.zeros(2))))
    const_check = constant_identity_check(t0, ConstHSC(2.0), tol=1e-10, seed=seed)
    rep.add_bool("const_hsc_identities", const_check.passed)
    ric_all = [ricci(t0, k).real for k in RicciKind]
    rep.add("all_ricci_equal_3I", 0.0,
            float(max(np.abs(r - 3 * np.eye(2)).max() for r in ric_all)), 1e-9)
    s, s_alt = scalars(t0)
    rep.add("scal_6", 6.0, s, 1e-9)
    rep.add("altered_scal_6", 6.0, s_alt, 1e-9)

    moments = fs_moment_check(2, moment_samples, seed=seed + 1)
    rep.add_bool("moment_identity_within_3_sigma", moments.passed)
    rep.add("moment_worst_abs_deviation", 0.0,
            moments.details["max_abs_deviation"], 5e-3)
    return rep


def cone_oracle_disagreements(n, count, seed, thm_samples=2000, direct_samples=10_000,
                              tol=1e-8):
    """Number of matrices where the PSD oracle, the Perron-weight criterion,
    and direct distance-matrix sampling disagree about nonnegativity of the
    difference form.  The Perron and direct oracles share one sample stream
    (the former reads a prefix)."""
    bad = 0
    for k in range(count):
        m = rng_from(seed, n, k).standard_normal((n, n))
        sample_seed = (seed + 1) * 1_000_003 + 101 * n + k
        rep = perron_criterion_check(m, samples=thm_samples, seed=sample_seed, tol=tol)
        vs = rng_from(sample_seed).standard_normal((direct_samples, n))
        sig = (vs[:, :, None] - vs[:, None, :]) ** 2
        s = 0.5 * (m + m.T)
        traces = np.einsum("aij,ij->a", sig, s)
        verdict_direct = bool(traces.min() >= -tol)
        agree = (rep.details["verdict_dual_edm"] == rep.details["verdict_criterion"]
                 == verdict_direct) and rep.passed
        bad += 0 if agree else 1
    return bad


def suite_cones(seed=0, per_size=120, thm_samples=1500, direct_samples=4000):
    rep = VerifyReport(suite="cones")
    for n in (3, 4, 5):
        bad = cone_oracle_disagreements(n, per_size, seed + n,
                                        thm_samples=thm_samples,
                                        direct_samples=direct_samples)
        rep.add(f"oracle_disagreements[n={n}]", 0, bad, 0.0)

    rng = rng_from(seed + 10)
    mismatches = 0
    for _ in range(1000):
        m = rng.standard_normal((2, 2)) * 2.0
        exact = copositive_2x2(m)
        grid = cone_min(m, nonneg_orthant(2), resolution=64)
        approx = grid.value >= -1e-7
        if exact != approx:
            mismatches += 1
    rep.add("copositive_2x2_vs_grid", 0, mismatches, 0.0)

    sigma = edm_from_vector([0.0, 1.0, 2.0])
    r = perron_weights(sigma)
    root6 = np.sqrt(6.0)
    rep.add("perron_r2_(0,1,2)", (root6 - 2.0) / (2.0 + root6), float(r[0]), 1e-12)
    rep.add("perron_r3_(0,1,2)", 4.0 / (2.0 + root6), float(r[1]), 1e-12)

    neg_eig_ok = True
    for k in range(500):
        v = rng_from(seed + 20, k).standard_normal(4)
        sig = edm_from_vector(v)
        neg_eig_ok &= bool(np.linalg.eigvalsh(sig.sigma)[0] < -1e-12)
    rep.add_bool("edm_outside_psd_cone", neg_eig_ok)

    rep.add_bool("dual_edm[hopf_rbc_matrix]",
                 dual_edm_test(matrices_from(paper_hopf([1.0, 0.0])).rbc))
    return rep


def suite_identities(seed=0):
    rep = VerifyReport(suite="identities")
    rep.add_bool("kahler_constant_const_hsc",
                 constant_identity_check(kahler_constant(2.0, 3), ConstHSC(2.0),
                                         tol=1e-10, seed=seed).passed)
    rep.add_bool("skew_pair_const_altered_hbc",
                 constant_identity_check(skew_pair(3.0, 3, seed=7), ConstAlteredHBC(3.0),
                                         tol=1e-10, seed=seed).passed)
    rep.add_bool("skew_pair_const_altered_rbc",
                 constant_identity_check(skew_pair(5.0, 4, seed=11), ConstAlteredRBC(2.5),
                                         tol=1e-10, seed=seed).passed)

    # cross-sign: constant altered form forces a sign on the plain form
    rng = rng_from(seed + 1)
    ok = True
    for c in (1.5, -2.0):
        t = skew_pair(2.0 * c, 3, seed=13)
        m = matrices_from(t)
        for _ in range(200):
            v = rng.standard_normal(3)
            ok &= evaluate(FunctionalKind.RBC, m, v) * c >= -1e-12
    rep.add_bool("cross_sign_rbc", ok)

    worst_add = 0.0
    worst_const = 0.0
    dominance_ok = True
    for k in range(50):
        t = random_tensor(seed + 100 + k, 3)
        m = matrices_from(t)
        ones = np.ones(3)
        worst_const = max(worst_const, abs(evaluate(FunctionalKind.QOBC, m, ones)))
        v = rng.standard_normal(3)
        lhs = evaluate(FunctionalKind.ALTERED_HSC, m, v)
        rhs = (evaluate(FunctionalKind.RBC, m, v)
               + evaluate(FunctionalKind.ALTERED_RBC, m, v))
        worst_add = max(worst_add, abs(lhs - rhs))
        full_min = rayleigh_bounds(m.rbc)[0]
        orthant_min = cone_min(m.rbc, nonneg_orthant(3), resolution=12).value
        dominance_ok &= full_min <= orthant_min + 1e-9
        e1 = np.zeros(3)
        e1[k % 3] = 1.0
        diag_gap = max(abs(hsc(t, e1.astype(complex)) - evaluate(FunctionalKind.RBC, m, e1)),
                       abs(evaluate(FunctionalKind.RBC, m, e1)
                           - evaluate(FunctionalKind.ALTERED_RBC, m, e1)))
        worst_add = max(worst_add, diag_gap)
    rep.add("altered_hsc_additivity_and_diagonal", 0.0, worst_add, 1e-12)
    rep.add("qobc_constant_vector_zero", 0.0, worst_const, 0.0)
    rep.add_bool("full_min_below_orthant_min", dominance_ok)

    # scalar traces are invariant under genuine (full-convention) frame changes
    rng2 = rng_from(seed + 2)
    worst = 0.0
    t = random_tensor(seed + 3, 3)
    s0 = scalars(t)
    for _ in range(100):
        u = haar_from_rng(3, rng2)
        s1 = scalars(transform_frame(t, u, FrameConvention.FULL))
        worst = max(worst, abs(s1[0] - s0[0]), abs(s1[1] - s0[1]))
    rep.add("scalar_trace_invariance", 0.0, worst, 1e-9)
    return rep


def run_suite(name, seed=0):
    builders = {
        "hopf": suite_hopf,
        "tricerri": suite_tricerri,
        "fubini_study": suite_fubini_study,
        "cones": suite_cones,
        "identities": suite_identities,
    }
    if name == "all":
        combined = VerifyReport(suite="all")
        for key in SUITES:
            part = builders[key](seed=seed)
            for check in part.checks:
                check.name = f"{key}:{check.name}"
                combined.checks.append(check)
        return combined
    if name not in builders:
        raise UsageError(f"unknown verify suite '{name}'; "
                         f"suites: {', '.join(SUITES + ('all',))}")
    return builders[name](seed=seed)
