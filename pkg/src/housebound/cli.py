"""Command-line interface: ``housebound <subcommand> ...``.

Exit codes: 0 success (or theorem not applicable), 1 input error,
2 house-bound violation found.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import potential as pot
from .errors import HouseboundError, InputError
from .harness import (
    ERROR,
    FAIL,
    AnalysisConfig,
    analyze,
    bundled_corpus_path,
    constants_table,
    run_corpus,
)
from .intpoly import IntPolynomial
from .roots import find_roots, pair_symmetric_roots
from .series import dimitrov_coefficients

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


@dataclass(frozen=True)
class CliConfig:
    precision: float = 1e-12
    leja_points: int = 200
    grid_density: int = 2000
    seed: int = 0
    max_coeffs: int = 64
    jobs: int = 1
    as_json: bool = False

    def __post_init__(self):
        if not self.precision > 0:
            raise InputError("--precision must be > 0")
        if self.leja_points < 2:
            raise InputError("-m/--leja-points must be >= 2")
        if self.grid_density < 100:
            raise InputError("--grid must be >= 100")
        if self.max_coeffs < 1:
            raise InputError("-N/--max-coeffs must be >= 1")

    @classmethod
    def from_args(cls, args) -> "CliConfig":
        return cls(
            precision=args.precision,
            leja_points=args.leja_points,
            grid_density=args.grid,
            seed=args.seed,
            max_coeffs=args.max_coeffs,
            jobs=args.jobs,
            as_json=args.json,
        )

    def analysis(self) -> AnalysisConfig:
        return AnalysisConfig(
            precision=self.precision,
            leja_points=self.leja_points,
            grid_density=self.grid_density,
            seed=self.seed,
            max_coeffs=self.max_coeffs,
            jobs=self.jobs,
        )


def parse_coeffs(text: str, name: str = "") -> IntPolynomial:
    """Parse '1,-3,1' (ascending: constant term first)."""
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if not parts:
        raise InputError("no coefficients given")
    if len(parts) > 1 and parts[-1].lstrip("+-").strip("0") == "":
        raise InputError(
            "leading coefficient is zero (coefficients are ascending, constant term first)"
        )
    return IntPolynomial.from_coeffs(parts, name=name or text)


def _load_poly(args) -> IntPolynomial:
    if getattr(args, "coeffs", None):
        return parse_coeffs(args.coeffs)
    if getattr(args, "file", None):
        text = Path(args.file).read_text(encoding="utf-8").strip()
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            # JSON-lines file: take the first record
            try:
                obj = json.loads(text.splitlines()[0])
            except (json.JSONDecodeError, IndexError) as exc:
                raise InputError(f"cannot parse polynomial JSON: {exc}") from exc
        except ValueError as exc:
            raise InputError(f"cannot parse polynomial JSON: {exc}") from exc
        return IntPolynomial.from_json(obj)
    raise InputError("give --coeffs or --file")


def _pair(text: str, kind=float):
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"expected two comma-separated values, got {text!r}")
    try:
        return kind(parts[0]), kind(parts[1])
    except ValueError:
        raise InputError(f"cannot parse {text!r}") from None


def _emit(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=str) + "\n"


# --- subcommands ------------------------------------------------------


def cmd_analyze(args, cfg: CliConfig) -> int:
    P = _load_poly(args)
    rep = analyze(P, cfg.analysis())
    if cfg.as_json:
        _emit(args, _dumps(rep.to_json()))
    else:
        lines = [
            f"polynomial:   {P}",
            f"degree:       {rep.degree}",
            "flags:        " + ", ".join(f"{k}={v}" for k, v in rep.flags.items()),
        ]
        if rep.house:
            lines.append(f"house:        [{rep.house['lo']}, {rep.house['hi']}]")
            lines.append(f"mahler:       [{rep.mahler['lo']}, {rep.mahler['hi']}]")
        if rep.theorem_bound:
            lines.append(f"bound:        {rep.theorem_bound[0]:.12g}")
        for step in rep.induction_chain:
            lines.append(f"reduces to:   {','.join(step['coeffs'])} ({step['verdict']})")
        if rep.tw_chain:
            tw = rep.tw_chain
            lines.append(
                "tw chain:     E={tw_E_numeric:.6g} E~={tw_E_tilde_numeric:.6g} "
                "E*={tw_Estar_numeric:.6g} star={star_tw_analytic:.6g}".format(**tw)
            )
        for r in rep.reasons:
            lines.append(f"note:         {r}")
        for e in rep.errors:
            lines.append(f"stage error:  {e['stage']}: {e['error']}")
        lines.append(f"verdict:      {rep.bound_verdict}")
        _emit(args, "\n".join(lines) + "\n")
    if rep.bound_verdict == FAIL:
        return EXIT_VIOLATION
    if rep.bound_verdict == ERROR:
        return EXIT_INPUT
    return EXIT_OK


def cmd_series(args, cfg: CliConfig) -> int:
    P = _load_poly(args)
    D = dimitrov_coefficients(P, cfg.max_coeffs)
    if cfg.as_json:
        _emit(args, _dumps(D.to_json()))
    else:
        _emit(args, ", ".join(str(c) for c in D.coeffs) + f"\nall_integer: {D.all_integer}\n")
    return EXIT_OK


def _slit_set_from_args(args, cfg: CliConfig) -> pot.SlitSet:
    if getattr(args, "interval", None):
        return pot.SlitSet([_pair(args.interval)])
    if getattr(args, "star", None):
        h, n = args.star.split(",")
        return pot.build_E_star(float(h), int(n))
    if getattr(args, "slits_file", None):
        return pot.SlitSet.from_json(json.loads(Path(args.slits_file).read_text()))
    if getattr(args, "from_poly", None):
        P = parse_coeffs(args.from_poly)
        rs = find_roots(P, cfg.precision, seed=cfg.seed)
        E = pot.build_E(pair_symmetric_roots(rs))
        if getattr(args, "tilde", False):
            h = max(abs(z) for z in rs.values)
            E = pot.build_E_tilde(E, h)
        return E
    raise InputError("give --interval, --star, --slits-file or --from-poly")


def cmd_slits(args, cfg: CliConfig) -> int:
    E = _slit_set_from_args(args, cfg)
    if args.merged:
        E = E.merged()
    if cfg.as_json:
        _emit(args, _dumps(E.to_json()))
    else:
        rows = [f"{len(E)} slits"]
        for a, b in E.slits:
            rows.append(f"[{a.real:.10g}{a.imag:+.10g}j, {b.real:.10g}{b.imag:+.10g}j]")
        _emit(args, "\n".join(rows) + "\n")
    return EXIT_OK


def _dump_points(path: str, est, E):
    path = Path(path)
    z_pts = est.points
    zs, prof = pot.potential_profile(est, E)
    pts_pot = pot._smeared_potential(z_pts, E.merged(), z_pts)
    if est.weight:
        pts_pot = pts_pot + est.weight * pot._log_abs(z_pts)
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["re", "im", "potential"])
        for z, u in zip(z_pts, pts_pot):
            w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(u))])
    prof_path = path.with_name(path.stem + ".profile" + (path.suffix or ".csv"))
    with prof_path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["re", "im", "potential"])
        for z, u in zip(zs, prof):
            w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(u))])


def cmd_leja(args, cfg: CliConfig) -> int:
    E = _slit_set_from_args(args, cfg)
    est = pot.weighted_leja(
        E, args.weight, cfg.leja_points, grid_density=cfg.grid_density, seed=cfg.seed
    )
    if args.dump_points:
        _dump_points(args.dump_points, est, E)
    if cfg.as_json:
        _emit(args, _dumps(est.to_json(include_points=args.points)))
    else:
        keys = ["tw_direct", "tw_formula", "capacity", "green_at_zero", "robin_constant", "fekete_constant_term"]
        data = est.to_json(include_points=False)
        _emit(args, "".join(f"{k}: {data[k]!r}\n" for k in keys))
    return EXIT_OK


def cmd_verify(args, cfg: CliConfig) -> int:
    path = args.file or bundled_corpus_path()
    rep = run_corpus(path, cfg.analysis())
    if args.csv:
        Path(args.csv).write_text(rep.to_csv(), encoding="utf-8")
    if cfg.as_json or args.out:
        _emit(args, _dumps(rep.to_json()))
    else:
        s = rep.summary
        lines = [
            f"{e['name']}: {e.get('bound_verdict', 'PARSE_ERROR')}" for e in rep.entries
        ]
        lines.append(
            f"total {s['total']}  pass {s['pass']}  fail {s['fail']}  "
            f"not applicable {s['not_applicable']}  errors {s['error'] + s['entry_errors']}"
        )
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_VIOLATION if rep.summary["fail"] else EXIT_OK


def cmd_constants(args, cfg: CliConfig) -> int:
    table = constants_table()
    if cfg.as_json:
        _emit(args, _dumps(table))
    else:
        _emit(args, "".join(f"{r['name']:<22} {r['digits']:<20} {r['meaning']}\n" for r in table))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; 2 is reserved for violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write output to FILE instead of stdout")
    common.add_argument("--precision", type=float, default=1e-12)
    common.add_argument("-m", "--leja-points", type=int, default=200)
    common.add_argument("--grid", type=int, default=2000, help="nodes per slit")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("-N", "--max-coeffs", type=int, default=64)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(
        prog="housebound", description="House bounds for reciprocal algebraic integers."
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def poly_source(p):
        p.add_argument("--coeffs", help="ascending integer coefficients, e.g. 1,-3,1")
        p.add_argument("--file", help="polynomial JSON {'name','coeffs'}")

    def slit_source(p):
        p.add_argument("--interval", help="a,b on the positive real axis")
        p.add_argument("--star", help="h,n for the equally spaced star E*")
        p.add_argument("--from-poly", help="build E from a reciprocal polynomial")
        p.add_argument("--slits-file", help="SlitSet JSON")
        p.add_argument("--tilde", action="store_true", help="extend slits to [h^-4, h^4]")

    p = sub.add_parser("analyze", parents=[common], help="full pipeline on one polynomial")
    poly_source(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("series", parents=[common], help="Dimitrov series coefficients")
    poly_source(p)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("slits", parents=[common], help="print a slit set")
    slit_source(p)
    p.add_argument("--merged", action="store_true")
    p.set_defaults(func=cmd_slits)

    p = sub.add_parser("leja", parents=[common], help="weighted Leja estimates")
    slit_source(p)
    p.add_argument("--weight", type=float, default=0.5, help="exponent s of |z|^-s")
    p.add_argument("--dump-points", help="CSV of Leja points (plus PATH.profile.csv)")
    p.add_argument("--points", action="store_true", help="include points in --json output")
    p.set_defaults(func=cmd_leja)

    p = sub.add_parser("verify", parents=[common], help="analyze a JSON-lines corpus")
    p.add_argument("--file", help="corpus (default: bundled)")
    p.add_argument("--csv", help="write a CSV summary")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("constants", parents=[common], help="landmark constants")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = CliConfig.from_args(args)
        return args.func(args, cfg)
    except (HouseboundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
