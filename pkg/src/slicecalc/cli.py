"""Batch CLI: operator ingestion, spectrum/resolvent/apply/verify commands.

Exit codes: 0 success, 1 verify-suite failure, 2 schema violation,
3 solver failure, 4 clearance failure or spectrum hit.  Output files are
written to a temporary sibling and renamed on success, so failures never
leave partial files behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from .clifford import ImagUnit, algebra, parse_multivector, parse_paravector
from .errors import (
    ContourError,
    ConvergenceError,
    OperatorSchemaError,
    SpectrumHitError,
)
from .operators import load_operator, operator_to_dict
from .series import (
    SliceSeriesFunction,
    constant_series,
    cos_series,
    exp_series,
    geometric_series,
    monomial,
    rational_pole,
    sin_series,
)
from .spectrum import (
    hausdorff_distance,
    resolvent_equation_residual,
    s_resolvent,
    s_spectrum_exact,
    s_spectrum_scan,
)
from .calculus import build_contour, f_of_T
from .chart import ExtendedFunction, f_of_T_via_chart
from .verify import SUITE_NAMES, run_suites

MAX_N_ENV = "SLICECALC_MAX_N"


@dataclass
class JobConfig:
    subcommand: str
    input_path: str | None = None
    fn_spec: str | None = None
    plane: str = "e1"
    nodes: int = 512
    margin: float | None = None
    method: str = "exact"
    step: float | None = None
    tol: float = 1e-8
    chart: float | None = None
    out: str | None = None
    seed: int = 0
    suite: str = "all"
    point: str | None = None


def max_units() -> int:
    cap = os.environ.get(MAX_N_ENV)
    if cap is None:
        return 8
    try:
        value = int(cap)
    except ValueError:
        raise OperatorSchemaError(f"{MAX_N_ENV} must be an integer, got {cap!r}")
    return max(1, min(8, value))


def atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".slicecalc-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(out: str | None, text: str):
    if out is None:
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def parse_plane(spec: str, n: int) -> ImagUnit:
    spec = spec.strip()
    if spec.startswith("e") and spec[1:].isdigit():
        j = int(spec[1:])
        if not 1 <= j <= n:
            raise OperatorSchemaError(f"plane unit e{j} outside 1..{n}", field="plane")
        return ImagUnit.axis(j, n)
    try:
        dirs = [float(x) for x in spec.split(",")]
    except ValueError:
        raise OperatorSchemaError(f"cannot parse plane {spec!r}", field="plane")
    if len(dirs) != n or not any(dirs):
        raise OperatorSchemaError(
            f"plane needs {n} direction components", field="plane"
        )
    return ImagUnit(dirs)


def parse_function_spec(spec: str, n: int):
    """Function mini-language used by `apply`.

    Named intrinsics: one, exp, sin, cos, geom.  Parameterized families:
    'poly:m=2[,a=<multivector>]' for x^m a and 'ratpole:c=5[,m=1]' for
    (x-c)^(-m).  A leading '{' switches to a JSON literal with keys center,
    coeffs, laurent, outer, inner, finf, all coefficients in multivector
    text form.
    """
    alg = algebra(n)
    spec = spec.strip()
    if spec.startswith("{"):
        try:
            data = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise OperatorSchemaError(f"invalid function JSON: {exc.msg}", field="fn")
        try:
            power = tuple(parse_multivector(t, alg) for t in data.get("coeffs", []))
            laurent = tuple(parse_multivector(t, alg) for t in data.get("laurent", []))
            outer = data.get("outer", "inf")
            outer = float("inf") if outer in ("inf", None) else float(outer)
            f = SliceSeriesFunction(
                center=float(data.get("center", 0.0)),
                power_coeffs=power or (alg.scalar(0.0),),
                laurent_coeffs=laurent,
                outer_radius=outer,
                inner_radius=float(data.get("inner", 0.0)),
            )
        except (ValueError, KeyError) as exc:
            raise OperatorSchemaError(f"bad function literal: {exc}", field="fn")
        finf = data.get("finf")
        return f, (parse_multivector(finf, alg) if finf is not None else None)
    name, _, params_text = spec.partition(":")
    params = {}
    if params_text:
        for item in params_text.split(","):
            key, _, value = item.partition("=")
            if not value:
                raise OperatorSchemaError(f"bad function parameter {item!r}", field="fn")
            params[key.strip()] = value.strip()
    if name == "one":
        return constant_series(alg, 1.0), alg.scalar(1.0)
    if name == "exp":
        return exp_series(alg), None
    if name == "sin":
        return sin_series(alg), None
    if name == "cos":
        return cos_series(alg), None
    if name == "geom":
        return geometric_series(alg), None
    if name == "poly":
        try:
            m = int(params.get("m", "1"))
        except ValueError:
            raise OperatorSchemaError("poly needs integer m", field="fn")
        a = parse_multivector(params["a"], alg) if "a" in params else None
        f = monomial(alg, m, a)
        return f, (f.power_coeffs[m] if m == 0 else None)
    if name == "ratpole":
        if "c" not in params:
            raise OperatorSchemaError("ratpole needs c=<real>", field="fn")
        try:
            c = float(params["c"])
            m = int(params.get("m", "1"))
        except ValueError:
            raise OperatorSchemaError("bad ratpole parameters", field="fn")
        return rational_pole(alg, c, m), alg.scalar(0.0)
    raise OperatorSchemaError(f"unknown function spec {spec!r}", field="fn")


# -- subcommands ---------------------------------------------------------------


def cmd_spectrum(cfg: JobConfig) -> int:
    T = load_operator(cfg.input_path, max_n=max_units())
    lines = ["u,r,multiplicity,method"]
    reports = []
    if cfg.method in ("exact", "both"):
        reports.append(s_spectrum_exact(T))
    if cfg.method in ("scan", "both"):
        reports.append(s_spectrum_scan(T, step=cfg.step, tol=cfg.tol))
    for report in reports:
        for row in report.csv_rows():
            lines.append(",".join(row))
    if cfg.method == "both":
        gap = hausdorff_distance(reports[0].points(), reports[1].points())
        lines.append(f"# hausdorff_exact_scan = {gap!r}")
    emit(cfg.out, "\n".join(lines) + "\n")
    if cfg.out is not None:
        plot_path = os.path.splitext(cfg.out)[0] + ".plot.csv"
        plot_lines = ["u,v"]
        for report in reports:
            for u, v in report.plane_points():
                plot_lines.append(f"{u!r},{v!r}")
        atomic_write(plot_path, "\n".join(plot_lines) + "\n")
    return 0


def cmd_resolvent(cfg: JobConfig) -> int:
    T = load_operator(cfg.input_path, max_n=max_units())
    if cfg.point is None:
        raise OperatorSchemaError("resolvent needs --point", field="point")
    s = parse_paravector(cfg.point, T.n)
    R = s_resolvent(s, T)
    payload = {
        "point": cfg.point,
        "resolvent": operator_to_dict(R),
        "equation_residual": resolvent_equation_residual(s, T),
    }
    emit(cfg.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_apply(cfg: JobConfig) -> int:
    T = load_operator(cfg.input_path, max_n=max_units())
    if cfg.fn_spec is None:
        raise OperatorSchemaError("apply needs --fn", field="fn")
    f, finf = parse_function_spec(cfg.fn_spec, T.n)
    plane = parse_plane(cfg.plane, T.n)
    if cfg.chart is not None:
        if finf is None:
            raise OperatorSchemaError(
                "chart route needs a function with a finite value at infinity",
                field="fn",
            )
        ef = ExtendedFunction(f=f, f_inf=finf)
        result = f_of_T_via_chart(
            ef, T, cfg.chart, plane=plane, margin=cfg.margin, nodes=cfg.nodes
        )
    else:
        report = s_spectrum_exact(T)
        contour = build_contour(report, f, plane, margin=cfg.margin, nodes=cfg.nodes)
        result = f_of_T(f, T, contour, report=report)
    emit(cfg.out, json.dumps(result.to_json_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_verify(cfg: JobConfig) -> int:
    names = SUITE_NAMES if cfg.suite == "all" else (cfg.suite,)
    for name in names:
        if name not in SUITE_NAMES:
            raise OperatorSchemaError(
                f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or all",
                field="suite",
            )
    report = run_suites(names, cfg.seed)
    emit(cfg.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicecalc",
        description="S-spectrum and slice functional calculus toolbox",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="operator JSON file")
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")

    p_spec = sub.add_parser("spectrum", help="compute the S-spectrum")
    common(p_spec)
    p_spec.add_argument("--method", choices=("exact", "scan", "both"), default="exact")
    p_spec.add_argument("--step", type=float, default=None, help="scan grid step")
    p_spec.add_argument("--tol", type=float, default=1e-8, help="scan singularity tolerance")

    p_res = sub.add_parser("resolvent", help="evaluate the S-resolvent at a point")
    common(p_res)
    p_res.add_argument("--point", required=True, help="paravector text, e.g. '1 + 2 e1'")

    p_apply = sub.add_parser("apply", help="evaluate f(T) by contour quadrature")
    common(p_apply)
    p_apply.add_argument("--fn", required=True, help="function spec (see docs)")
    p_apply.add_argument("--plane", default="e1", help="slice plane: e1..e8 or comma directions")
    p_apply.add_argument("--nodes", type=int, default=512)
    p_apply.add_argument("--margin", type=float, default=None)
    p_apply.add_argument("--chart", default=None, help="k=<real> selects the chart route")

    p_ver = sub.add_parser("verify", help="run the theorem verification suites")
    common(p_ver, needs_input=False)
    p_ver.add_argument(
        "--suite", default="all", help=f"one of {', '.join(SUITE_NAMES)} or all"
    )
    p_ver.add_argument("--seed", type=int, default=0)
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    cfg = JobConfig(subcommand=args.subcommand)
    cfg.input_path = getattr(args, "input", None)
    cfg.out = getattr(args, "out", None)
    cfg.method = getattr(args, "method", "exact")
    cfg.step = getattr(args, "step", None)
    cfg.tol = getattr(args, "tol", 1e-8)
    cfg.fn_spec = getattr(args, "fn", None)
    cfg.plane = getattr(args, "plane", "e1")
    cfg.nodes = getattr(args, "nodes", 512)
    cfg.margin = getattr(args, "margin", None)
    cfg.point = getattr(args, "point", None)
    cfg.suite = getattr(args, "suite", "all")
    cfg.seed = getattr(args, "seed", 0)
    chart = getattr(args, "chart", None)
    if chart is not None:
        text = chart[2:] if chart.startswith("k=") else chart
        try:
            cfg.chart = float(text)
        except ValueError:
            raise OperatorSchemaError(f"cannot parse chart point {chart!r}", field="chart")
    if cfg.nodes < 4:
        raise OperatorSchemaError("nodes must be at least 4", field="nodes")
    if cfg.margin is not None and cfg.margin <= 0:
        raise OperatorSchemaError("margin must be positive", field="margin")
    return cfg


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "resolvent": cmd_resolvent,
    "apply": cmd_apply,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return _COMMANDS[cfg.subcommand](cfg)
    except OperatorSchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SpectrumHitError, ContourError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (np.linalg.LinAlgError, ConvergenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


def entry():
    sys.exit(main())
