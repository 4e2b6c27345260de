"""Command-line front end.

    isoprofile profile --model --K 1 --N 2 --grid 512
    isoprofile certify sphere.csv --N 2 --total-volume 12.566370614359172 --levy-gromov
    isoprofile tube --K 0 --N 3 --c 2 --P0 12.566370614 --V0 4.188790205 --t 1

Exit codes: 0 success / all certificates pass, 1 a certificate failed,
2 usage or parse error, 3 domain error. ``ISOPROFILE_TOL`` overrides the
default certification tolerance (1e-8).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, IsoprofileError, OutOfRange, ProfileParseError
from .inequalities import CERT_TOL, AvrContext, certify_avr, certify_levy_gromov
from .io import read_profile, write_table
from .model_geometry import CurvatureDimension, model_profile
from .profile import SampledProfile, psi_transform, volume_grid
from .tube_bounds import TubeBound, write_tube_csv
from .warped import WarpedProduct, profile_values
from .weak_d2 import check_concavity, check_distributional, check_pointwise, check_viscosity, profile_rhs

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
DEFAULT_GRID = 512
DEFAULT_VMAX = 10.0
SENSES = {"pointwise": check_pointwise, "viscosity": check_viscosity, "distributional": check_distributional}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    K: float | None = None
    N: int | None = None
    theta: float | None = None
    grid_size: int = DEFAULT_GRID
    tolerance: float = CERT_TOL
    input_path: Path | None = None
    output_path: Path | None = None
    format: str = "csv"
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.grid_size < 3:
            raise UsageError("--grid must be at least 3")
        if not self.tolerance > 0:
            raise UsageError("tolerances must be positive")
        if self.N is not None and self.N < 2:
            raise UsageError("--N must be at least 2")


def _env_tolerance() -> float:
    raw = os.environ.get("ISOPROFILE_TOL")
    if raw is None or raw.strip() == "":
        return CERT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"ISOPROFILE_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise UsageError("ISOPROFILE_TOL must be positive")
    return tol


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def cmd_profile(cfg: RunConfig) -> int:
    ex = cfg.extra
    if cfg.N is None:
        raise UsageError("--N is required")
    if ex["model"]:
        if cfg.K is None:
            raise UsageError("--model needs --K")
        cd = CurvatureDimension(cfg.K, cfg.N)
        total = cd.total_volume
        evaluate = lambda V: np.array([model_profile(cd, float(v)) for v in V])  # noqa: E731
        label = f"model(K={cfg.K:g})"
    else:
        if ex["cone"] is not None:
            w = WarpedProduct.cone(ex["cone"], cfg.N)
        else:
            w = WarpedProduct.suspension(ex["suspension"], cfg.N)
        total = w.total_volume
        evaluate = lambda V: profile_values(w, V)  # noqa: E731
        label = f"{w.kind}({w.a:g})"
    if ex["volumes"]:
        V = np.array(sorted(ex["volumes"]), dtype=float)
    else:
        V = volume_grid(total, cfg.grid_size, v_min=ex["v_min"], v_max=ex["v_max"], geometric=ex["geometric"])
    if np.any(np.diff(V) <= 0) or V[0] <= 0 or not V[-1] < total:
        raise OutOfRange(f"volumes must be distinct and lie in (0, {total})")
    values = evaluate(V)
    if cfg.format == "json":
        data = {
            "label": label,
            "total_volume": total if math.isfinite(total) else None,
            "dimension": cfg.N,
            "samples": [[float(v), float(y)] for v, y in zip(V, values)],
        }
        _emit(json.dumps(data, indent=2) + "\n", cfg.output_path)
    else:
        buf = io.StringIO()
        write_table(buf, ["volume", "profile", "psi"], zip(V, values, values ** (cfg.N / (cfg.N - 1))))
        _emit(buf.getvalue(), cfg.output_path)
    return EXIT_OK


def _load(cfg: RunConfig) -> SampledProfile:
    path = cfg.input_path
    if path is None:
        raise UsageError("certify needs an input profile")
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    total = cfg.extra["total_volume"]
    p = read_profile(path, cfg.N, total if total is not None else math.inf)
    if path.suffix.lower() == ".json" and total is not None:
        p = SampledProfile(p.volumes, p.values, p.dimension, total, p.label)
    if cfg.N is not None and p.dimension != cfg.N:
        raise UsageError(f"--N {cfg.N} contradicts the file's dimension {p.dimension}")
    return p


def cmd_certify(cfg: RunConfig) -> int:
    ex = cfg.extra
    p = _load(cfg)
    senses = [s for s in ex["senses"].split(",") if s] if ex["senses"] else []
    for s in senses:
        if s not in SENSES:
            raise UsageError(f"unknown sense {s!r} (choose from {', '.join(SENSES)})")
    if not (ex["concavity"] or senses or ex["levy_gromov"] or cfg.theta is not None):
        raise UsageError("nothing to certify: pass --concavity, --senses, --levy-gromov or --avr")
    if ex["levy_gromov"] and not p.finite:
        raise UsageError("--levy-gromov needs a finite total volume (--total-volume or a JSON profile)")
    certs: dict[str, dict] = {}
    passed = True
    psi = psi_transform(p).grid_function()
    if ex["concavity"]:
        r = check_concavity(psi)
        certs["psi_concavity"] = r.to_dict()
        passed &= r.passed
    if senses:
        K = cfg.K if cfg.K is not None else 0.0
        g = profile_rhs(K, p.dimension)
        for s in senses:
            r = SENSES[s](psi, g)
            certs[f"psi_inequality_{s}"] = dict(r.to_dict(), K=K)
            passed &= r.passed
    if ex["levy_gromov"]:
        r = certify_levy_gromov(p, cfg.tolerance)
        certs["levy_gromov"] = r.to_dict()
        passed &= r.passed
    if cfg.theta is not None:
        r = certify_avr(p, AvrContext(cfg.theta, p.dimension), cfg.tolerance)
        certs["avr"] = r.to_dict()
        passed &= r.passed
    report = {
        "input": str(cfg.input_path),
        "dimension": p.dimension,
        "total_volume": p.total_volume if p.finite else None,
        "samples": len(p),
        "tolerance": cfg.tolerance,
        "pass": bool(passed),
        "certificates": certs,
    }
    _emit(json.dumps(report, indent=2) + "\n", cfg.output_path)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_tube(cfg: RunConfig) -> int:
    ex = cfg.extra
    if cfg.K is None or cfg.N is None:
        raise UsageError("tube needs --K and --N")
    if ex["t"]:
        ts = ex["t"]
    elif ex["t_range"]:
        a, b, n = ex["t_range"]
        if int(n) != n or n < 2:
            raise UsageError("--t-range count must be an integer >= 2")
        ts = list(np.linspace(a, b, int(n)))
    else:
        raise UsageError("tube needs --t or --t-range")
    bound = TubeBound(CurvatureDimension(cfg.K, cfg.N), ex["c"], ex["P0"], ex["V0"])
    buf = io.StringIO()
    write_tube_csv(buf, bound.table(ts))
    _emit(buf.getvalue(), cfg.output_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isoprofile", description="Isoperimetric profiles, certificates and tube bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--K", type=float, help="Ricci lower bound")
        sp.add_argument("--N", type=int, help="dimension")
        sp.add_argument("-o", "--output", type=Path, help="output file (default: stdout)")

    sp = sub.add_parser("profile", help="tabulate a model, cone or suspension profile")
    common(sp)
    kind = sp.add_mutually_exclusive_group(required=True)
    kind.add_argument("--model", action="store_true", help="constant-curvature model with the given K")
    kind.add_argument("--cone", type=float, metavar="A", help="cone with link scale A")
    kind.add_argument("--suspension", type=float, metavar="A", help="spherical suspension with link scale A")
    sp.add_argument("--grid", type=int, default=DEFAULT_GRID, help="number of volumes (default 512)")
    sp.add_argument("--volumes", type=float, nargs="+", help="explicit volumes instead of a grid")
    sp.add_argument("--v-max", type=float, default=DEFAULT_VMAX, help="largest volume for infinite spaces")
    sp.add_argument("--v-min", type=float, help="smallest volume with --geometric")
    sp.add_argument("--geometric", action="store_true", help="log-uniform grid")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("certify", help="certify inequalities on a sampled profile")
    common(sp)
    sp.add_argument("input", type=Path, help="profile CSV or JSON")
    sp.add_argument("--total-volume", type=float, help="total volume for CSV input")
    sp.add_argument("--concavity", action="store_true", help="concavity of I^(N/(N-1))")
    sp.add_argument("--senses", help="comma list of pointwise,viscosity,distributional for the sharp inequality (uses --K)")
    sp.add_argument("--levy-gromov", action="store_true")
    sp.add_argument("--avr", type=float, metavar="THETA", help="declared asymptotic volume ratio")
    sp.add_argument("--tol", type=float, help="certification tolerance (default ISOPROFILE_TOL or 1e-8)")

    sp = sub.add_parser("tube", help="tube perimeter and volume bounds")
    common(sp)
    sp.add_argument("--c", type=float, required=True, help="mean curvature barrier")
    sp.add_argument("--P0", type=float, required=True, help="perimeter of the base set")
    sp.add_argument("--V0", type=float, default=0.0, help="volume of the base set")
    sp.add_argument("--t", type=float, nargs="+", help="tube parameters")
    sp.add_argument("--t-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    extra = {k: v for k, v in vars(args).items() if k not in ("command", "K", "N", "output", "grid", "format", "input", "avr", "tol")}
    tol = getattr(args, "tol", None)
    return RunConfig(
        command=args.command,
        K=args.K,
        N=args.N,
        theta=getattr(args, "avr", None),
        grid_size=getattr(args, "grid", DEFAULT_GRID),
        tolerance=tol if tol is not None else _env_tolerance(),
        input_path=getattr(args, "input", None),
        output_path=args.output,
        format=getattr(args, "format", "csv"),
        extra=extra,
    )


COMMANDS = {"profile": cmd_profile, "certify": cmd_certify, "tube": cmd_tube}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ProfileParseError) as exc:
        print(f"isoprofile: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"isoprofile: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except IsoprofileError as exc:
        print(f"isoprofile: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
