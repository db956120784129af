"""curvlab command line: eval | verify | sweep | frame-scan | cone-check.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 verification failure.
Every command accepts --format json|csv|text, --out PATH, --seed N and
--config PATH (a JSON file mirroring the flag names; explicit flags win).
Output is deterministic for a fixed command line and seed.
"""

import argparse
import json
import re
import sys

import numpy as np

from .errors import CurvlabError, DomainError, UsageError
from .metrics import FDConfig, jet_at, make_metric
from .curvature import (FrameConvention, curvature_from_jet, make_synthetic,
                        paper_hopf, paper_tricerri, scalars, to_frame)
from .functionals import FunctionalKind, evaluate, hsc, matrices_from, rayleigh_bounds
from .cones import (copositive_2x2, cone_min, dual_edm_test, make_cone, perron_criterion_check)
from .search import SearchConfig, extremize, tricerri_family_extrema
from .verify import run_suite
from . import reports

QUAD_KINDS = ["rbc", "altered_rbc", "altered_hsc", "qobc", "altered_qobc"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex_vector(text):
    try:
        return np.array([complex(part) for part in text.split(",")], dtype=complex)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex vector '{text}': {exc}") from None


def parse_real_vector(text):
    try:
        return np.array([float(part) for part in text.split(",")], dtype=float)
    except ValueError as exc:
        raise UsageError(f"cannot parse vector '{text}': {exc}") from None


def parse_matrix(text):
    rows = [parse_real_vector(row) for row in text.split(";")]
    if len({r.size for r in rows}) != 1:
        raise UsageError("matrix rows have unequal lengths")
    return np.vstack(rows)


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


def _opt(args, cfg, name, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return cfg.get(name, default)


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _common_flags(sub):
    sub.add_argument("--format", choices=["json", "csv", "text"], default=None)
    sub.add_argument("--out", default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--config", default=None)


def build_parser():
    parser = _Parser(prog="curvlab", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="evaluate a curvature functional at a point")
    p_eval.add_argument("--metric", default=None)
    p_eval.add_argument("--dim", type=int, default=None)
    p_eval.add_argument("--point", default=None)
    p_eval.add_argument("--functional", default=None)
    p_eval.add_argument("--vector", default=None, help="real vector for the quadratic kinds")
    p_eval.add_argument("--cvector", default=None, help="complex vector for hsc")
    p_eval.add_argument("--use-paper-tensor", action="store_true", default=None)
    p_eval.add_argument("--fd-step", type=float, default=None)
    p_eval.add_argument("--fd-order", type=int, default=None)
    _common_flags(p_eval)

    p_verify = subs.add_parser("verify", help="run a reproduction suite")
    p_verify.add_argument("suite", choices=["hopf", "tricerri", "fubini_study",
                                            "cones", "identities", "all"])
    _common_flags(p_verify)

    p_sweep = subs.add_parser("sweep", help="sweep a point grid to CSV")
    p_sweep.add_argument("--metric", default=None)
    p_sweep.add_argument("--dim", type=int, default=None)
    p_sweep.add_argument("--point", default=None, help="base point")
    p_sweep.add_argument("--grid", default=None,
                         help="axis sweeps, e.g. 'im2=1:2:2,re1=0:1:3'")
    p_sweep.add_argument("--use-paper-tensor", action="store_true", default=None)
    p_sweep.add_argument("--convention", choices=["full", "adjoint"], default=None)
    p_sweep.add_argument("--restarts", type=int, default=None)
    p_sweep.add_argument("--refine-steps", type=int, default=None)
    _common_flags(p_sweep)

    p_scan = subs.add_parser("frame-scan", help="extremize a functional over frames")
    p_scan.add_argument("--metric", default=None)
    p_scan.add_argument("--dim", type=int, default=None)
    p_scan.add_argument("--point", default=None)
    p_scan.add_argument("--tensor", default=None,
                        help="synthetic tensor kind instead of a metric")
    p_scan.add_argument("--tensor-params", default=None,
                        help="JSON parameters for --tensor")
    p_scan.add_argument("--family", choices=["tricerri"], default=None)
    p_scan.add_argument("--imw", type=float, default=None)
    p_scan.add_argument("--use-paper-tensor", action="store_true", default=None)
    p_scan.add_argument("--functional", default=None)
    p_scan.add_argument("--cone", choices=["full", "orthant", "monotone"], default=None)
    p_scan.add_argument("--convention", choices=["full", "adjoint"], default=None)
    p_scan.add_argument("--restarts", type=int, default=None)
    p_scan.add_argument("--refine-steps", type=int, default=None)
    _common_flags(p_scan)

    p_cone = subs.add_parser("cone-check", help="copositivity and dual-EDM tests")
    p_cone.add_argument("--matrix", default=None, help="inline CSV, rows ';'-separated")
    p_cone.add_argument("--matrix-file", default=None, help="JSON file with a nested list")
    p_cone.add_argument("--cone", choices=["full", "orthant", "monotone", "generators"],
                        default=None)
    p_cone.add_argument("--generators", default=None,
                        help="generator vectors for --cone generators, inline CSV")
    p_cone.add_argument("--resolution", type=int, default=None)
    p_cone.add_argument("--samples", type=int, default=None)
    _common_flags(p_cone)
    return parser


# ---------------------------------------------------------------------------
# pipelines

def _tensor_at_point(metric_name, dim, point, use_paper, fd):
    metric = make_metric(metric_name, dim=dim)
    p = np.asarray(point, dtype=complex)
    if p.size != metric.n:
        raise UsageError(f"point has dimension {p.size}, metric '{metric.name}' has {metric.n}")
    if not metric.domain(p):
        raise DomainError(f"point {point} lies outside the domain of '{metric.name}'")
    if use_paper:
        if metric.name == "hopf":
            return paper_hopf(p), {"tensor_source": "paper_hopf"}
        if metric.name == "tricerri":
            return (paper_tricerri(0.0, 1.0, float(p[1].imag)),
                    {"tensor_source": "paper_tricerri(b=0,d=1)"})
        raise UsageError("--use-paper-tensor is available for hopf and tricerri only")
    jet = jet_at(metric, p, fd)
    coord = curvature_from_jet(jet)
    frame = to_frame(coord)
    diag = {"tensor_source": "metric_jet",
            "jet_source": "closed_form" if metric.jet is not None else "finite_difference",
            "hermitian_residual": frame.sym_residual}
    return frame, diag


def cmd_eval(args, cfg):
    metric_name = _opt(args, cfg, "metric")
    if metric_name is None:
        raise UsageError("eval needs --metric")
    point_text = _opt(args, cfg, "point")
    if point_text is None:
        raise UsageError("eval needs --point")
    kind_name = _opt(args, cfg, "functional")
    if kind_name is None:
        raise UsageError("eval needs --functional")
    try:
        kind = FunctionalKind(kind_name)
    except ValueError:
        raise UsageError(f"unknown functional '{kind_name}'; "
                         f"choices: {[k.value for k in FunctionalKind]}") from None
    point = parse_complex_vector(point_text if isinstance(point_text, str)
                                 else ",".join(map(str, point_text)))
    fd = FDConfig(h=_opt(args, cfg, "fd_step", 1e-4), order=_opt(args, cfg, "fd_order", 2))
    tensor, diag = _tensor_at_point(metric_name, _opt(args, cfg, "dim"), point,
                                    bool(_opt(args, cfg, "use_paper_tensor", False)), fd)
    matrices = matrices_from(tensor)
    diag["imag_residual"] = matrices.imag_residual
    diag["hermitian_residual"] = tensor.sym_residual
    scal, scal_alt = scalars(tensor)

    if kind is FunctionalKind.HSC:
        cvec = _opt(args, cfg, "cvector")
        if cvec is None:
            raise UsageError("hsc needs --cvector")
        value = hsc(tensor, parse_complex_vector(cvec))
    else:
        vec = _opt(args, cfg, "vector")
        if vec is None:
            raise UsageError(f"{kind.value} needs --vector")
        value = evaluate(kind, matrices, parse_real_vector(vec))

    payload = {"command": "eval", "metric": metric_name,
               "point": [str(z) for z in point], "functional": kind.value,
               "value": value, "scal": scal, "altered_scal": scal_alt,
               "diagnostics": diag}
    fmt = _opt(args, cfg, "format", "text")
    if fmt == "json":
        return reports.dumps(payload), True
    lines = [f"value = {value:.12g}",
             f"scal = {scal:.12g}  altered_scal = {scal_alt:.12g}"]
    for key in sorted(diag):
        lines.append(f"{key} = {diag[key]}")
    return "\n".join(lines) + "\n", True


def cmd_verify(args, cfg):
    seed = _opt(args, cfg, "seed", 0)
    report = run_suite(args.suite, seed=seed)
    fmt = _opt(args, cfg, "format", "text")
    text = reports.dumps(report) if fmt == "json" else reports.render_table(report)
    return text, report.passed


def _parse_grid(grid_text, base, n):
    """Grid spec 'axis=start:stop:count,...' with axes re1,im1,...  Returns
    the list of points in row-major grid order."""
    axes = []
    for part in grid_text.split(","):
        try:
            name, rng_text = part.split("=")
            start, stop, count = rng_text.split(":")
            start, stop, count = float(start), float(stop), int(count)
        except ValueError:
            raise UsageError(f"cannot parse grid axis '{part}'; "
                             "expected name=start:stop:count") from None
        if count < 1:
            raise UsageError("grid axis count must be >= 1")
        kind, idx = name[:2], int(name[2:]) - 1
        if kind not in ("re", "im") or not 0 <= idx < n:
            raise UsageError(f"unknown grid axis '{name}' for dimension {n}")
        values = np.linspace(start, stop, count) if count > 1 else np.array([start])
        axes.append((kind, idx, values))
    points = []
    shape = [len(a[2]) for a in axes]
    for multi in np.ndindex(*shape):
        p = base.copy()
        for (kind, idx, values), i in zip(axes, multi):
            if kind == "re":
                p[idx] = values[i] + 1j * p[idx].imag
            else:
                p[idx] = p[idx].real + 1j * values[i]
        points.append(p)
    return points


def cmd_sweep(args, cfg):
    metric_name = _opt(args, cfg, "metric")
    if metric_name is None:
        raise UsageError("sweep needs --metric")
    metric = make_metric(metric_name, dim=_opt(args, cfg, "dim"))
    base_text = _opt(args, cfg, "point")
    base = (parse_complex_vector(base_text) if base_text
            else np.zeros(metric.n, dtype=complex))
    if base.size != metric.n:
        raise UsageError("base point dimension mismatch")
    grid_text = _opt(args, cfg, "grid")
    if grid_text is None:
        raise UsageError("sweep needs --grid")
    points = _parse_grid(grid_text, base, metric.n)
    offenders = [p for p in points if not metric.domain(p)]
    if offenders:
        listing = "; ".join(str([str(z) for z in p]) for p in offenders[:5])
        raise DomainError(f"{len(offenders)} grid points leave the domain of "
                          f"'{metric.name}': {listing}")

    use_paper = bool(_opt(args, cfg, "use_paper_tensor", False))
    convention = FrameConvention(_opt(args, cfg, "convention", "adjoint"))
    seed = _opt(args, cfg, "seed", 0)
    search = SearchConfig(restarts=_opt(args, cfg, "restarts", 4),
                          refine_steps=_opt(args, cfg, "refine_steps", 12),
                          seed=seed)
    fd = FDConfig()

    header = ["index"]
    for k in range(metric.n):
        header += [f"re{k + 1}", f"im{k + 1}"]
    header += ["scal", "altered_scal"]
    for kind in QUAD_KINDS:
        header += [f"{kind}_inf", f"{kind}_sup"]
    header += ["herm_residual", "imag_residual"]

    def one_row(idx_point):
        idx, p = idx_point
        if use_paper and metric.name == "tricerri":
            tensor = paper_tricerri(0.0, 1.0, float(p[1].imag))
            family = True
        else:
            tensor, _ = _tensor_at_point(metric_name, metric.n, p, use_paper, fd)
            family = False
        m = matrices_from(tensor)
        scal, scal_alt = scalars(tensor)
        row = [float(idx)]
        for z in p:
            row += [z.real, z.imag]
        row += [scal, scal_alt]
        for kind in QUAD_KINDS:
            if family:
                scan = tricerri_family_extrema(float(p[1].imag), kind)
                lo, hi = scan["inf"], scan["sup"]
            else:
                inf_ext, sup_ext = extremize(tensor, kind, convention=convention,
                                             cfg=search)
                lo, hi = inf_ext.value, sup_ext.value
            row += [lo, hi]
        row += [tensor.sym_residual, m.imag_residual]
        return row

    from ._util import parallel_map
    rows = parallel_map(one_row, list(enumerate(points)))
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{x:.12g}" for x in row))
    return "\n".join(lines) + "\n", True


def cmd_frame_scan(args, cfg):
    kind_name = _opt(args, cfg, "functional")
    if kind_name is None:
        raise UsageError("frame-scan needs --functional")
    kind = FunctionalKind(kind_name)
    fmt = _opt(args, cfg, "format", "text")

    family = _opt(args, cfg, "family")
    if family == "tricerri":
        im_w = _opt(args, cfg, "imw")
        if im_w is None:
            raise UsageError("--family tricerri needs --imw")
        scan = tricerri_family_extrema(float(im_w), kind)
        payload = {"command": "frame-scan", "family": "tricerri", **scan}
        if fmt == "json":
            return reports.dumps(payload), True
        return (f"family=tricerri imw={im_w} kind={kind.value}\n"
                f"inf = {scan['inf']:.12g} at (|b|^2,|d|^2)={scan['inf_at']}\n"
                f"sup = {scan['sup']:.12g} at (|b|^2,|d|^2)={scan['sup_at']}\n"), True

    tensor_kind = _opt(args, cfg, "tensor")
    if tensor_kind is not None:
        params = json.loads(_opt(args, cfg, "tensor_params") or "{}")
        tensor = make_synthetic(tensor_kind, **params)
        source = {"tensor": tensor_kind, "params": params}
    else:
        metric_name = _opt(args, cfg, "metric")
        point_text = _opt(args, cfg, "point")
        if metric_name is None or point_text is None:
            raise UsageError("frame-scan needs --metric/--point, --tensor, or --family")
        point = parse_complex_vector(point_text)
        tensor, diag = _tensor_at_point(metric_name, _opt(args, cfg, "dim"), point,
                                        bool(_opt(args, cfg, "use_paper_tensor", False)),
                                        FDConfig())
        source = {"metric": metric_name, "point": [str(z) for z in point], **diag}

    cone = make_cone(_opt(args, cfg, "cone", "full"), tensor.n)
    convention = FrameConvention(_opt(args, cfg, "convention", "full"))
    cfg_search = SearchConfig(restarts=_opt(args, cfg, "restarts", 8),
                              refine_steps=_opt(args, cfg, "refine_steps", 30),
                              seed=_opt(args, cfg, "seed", 0))
    inf_ext, sup_ext = extremize(tensor, kind, cone=cone, convention=convention,
                                 cfg=cfg_search)
    payload = {"command": "frame-scan", "functional": kind.value,
               "cone": cone.kind, "convention": convention.value, "source": source,
               "inf": {"value": inf_ext.value,
                       "vector": [float(x) for x in np.real(inf_ext.vector)]},
               "sup": {"value": sup_ext.value,
                       "vector": [float(x) for x in np.real(sup_ext.vector)]},
               "restarts": cfg_search.restarts}
    if fmt == "json":
        return reports.dumps(payload), True
    return (f"kind={kind.value} cone={cone.kind} convention={convention.value}\n"
            f"inf = {inf_ext.value:.12g}\nsup = {sup_ext.value:.12g}\n"), True


def cmd_cone_check(args, cfg):
    inline = _opt(args, cfg, "matrix")
    path = _opt(args, cfg, "matrix_file")
    if inline is not None:
        m = parse_matrix(inline)
    elif path is not None:
        try:
            with open(path) as fh:
                m = np.asarray(json.load(fh), dtype=float)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read matrix from {path}: {exc}") from None
    else:
        raise UsageError("cone-check needs --matrix or --matrix-file")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError(f"matrix must be square, got shape {m.shape}")

    gens_text = _opt(args, cfg, "generators")
    cone = make_cone(_opt(args, cfg, "cone", "orthant"), m.shape[0],
                     generators=parse_matrix(gens_text) if gens_text else None)
    resolution = _opt(args, cfg, "resolution", 24)
    samples = _opt(args, cfg, "samples", 1000)
    seed = _opt(args, cfg, "seed", 0)

    minimum = cone_min(m, cone, resolution=resolution)
    lo, hi = rayleigh_bounds(m)
    report = perron_criterion_check(m, samples=max(100, samples), seed=seed)
    payload = {
        "command": "cone-check", "n": m.shape[0], "cone": cone.kind,
        "cone_min": {"value": minimum.value,
                     "argmin": [float(x) for x in minimum.argmin],
                     "gap_bound": minimum.gap_bound},
        "rayleigh_bounds": [lo, hi],
        "dual_edm_member": dual_edm_test(m),
        "perron_criterion": report.to_dict(),
    }
    if m.shape[0] == 2:
        payload["copositive_2x2"] = copositive_2x2(m)
    fmt = _opt(args, cfg, "format", "text")
    if fmt == "json":
        return reports.dumps(payload), True
    lines = [f"cone_min[{cone.kind}] = {minimum.value:.12g} "
             f"(suboptimality bound {minimum.gap_bound:.3g})",
             f"rayleigh bounds = ({lo:.12g}, {hi:.12g})",
             f"dual EDM member = {payload['dual_edm_member']}",
             f"perron criterion verdict = {report.details['verdict_criterion']}"]
    if "copositive_2x2" in payload:
        lines.append(f"copositive (exact 2x2) = {payload['copositive_2x2']}")
    return "\n".join(lines) + "\n", True


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "frame-scan": cmd_frame_scan,
    "cone-check": cmd_cone_check,
}


_VALUE_FLAGS = {"--vector", "--cvector", "--point", "--matrix", "--grid"}
_NUMERIC_START = re.compile(r"^-[\d.]")


def _merge_negative_values(argv):
    """Rejoin '--vector -0.7,0.7' into '--vector=-0.7,0.7' so argparse does
    not read a leading minus sign as a new flag."""
    out, skip = [], False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if (token in _VALUE_FLAGS and i + 1 < len(argv)
                and _NUMERIC_START.match(argv[i + 1])):
            out.append(f"{token}={argv[i + 1]}")
            skip = True
        else:
            out.append(token)
    return out


def main(argv=None):
    argv = _merge_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = build_parser().parse_args(argv)
        cfg = _load_config(getattr(args, "config", None))
        text, ok = COMMANDS[args.command](args, cfg)
        _emit(text, _opt(args, cfg, "out"))
        return 0 if ok else 3
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except CurvlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
