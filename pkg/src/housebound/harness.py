"""End-to-end analysis of reciprocal integer polynomials.

`analyze` runs one polynomial through the whole pipeline: reciprocality and
parity, cyclotomic screen, certified roots, the house bound, the
perfect-square reduction P(z) = R(z^2), and the weighted Chebyshev constant
chain E -> E~ -> E* -> I. `run_corpus` maps it over a JSON-lines file.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import List, Optional, Tuple

import mpmath

from . import potential as pot
from .errors import HouseboundError, InputError
from .intpoly import (
    LEHMER,
    IntPolynomial,
    cyclotomic_report,
    decompose_even,
    integer_roots,
    is_reciprocal,
)
from .roots import (
    ON_OR_NEAR,
    classify_circle_roots,
    house_report,
    pair_symmetric_roots,
)
from .series import dimitrov_coefficients, functional_equation_check, p2_is_perfect_square

__all__ = [
    "AnalysisConfig",
    "AnalysisReport",
    "CorpusReport",
    "theorem_bound",
    "constants_table",
    "quadratic_threshold",
    "analyze",
    "run_corpus",
    "bundled_corpus_path",
    "PASS",
    "FAIL",
    "NOT_APPLICABLE",
    "ERROR",
]

log = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
NOT_APPLICABLE = "NOT_APPLICABLE"
ERROR = "ERROR"


@dataclass(frozen=True)
class AnalysisConfig:
    precision: float = 1e-12
    leja_points: int = 200
    grid_density: int = 2000
    seed: int = 0
    max_coeffs: int = 64
    circle_eps: float = 1e-9
    pair_tol: float = 1e-8
    fekete_sweeps: int = 2
    certificate_k: int = 4
    compute_tw: bool = True
    functional_samples: int = 100
    functional_tol: float = 1e-9
    reject_reducible: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not self.precision > 0:
            raise InputError("precision must be > 0")
        if self.leja_points < 2:
            raise InputError("leja_points must be >= 2")
        if self.grid_density < 100:
            raise InputError("grid_density must be >= 100")
        if self.max_coeffs < 1:
            raise InputError("max_coeffs must be >= 1")
        if self.jobs < 1:
            raise InputError("jobs must be >= 1")


def theorem_bound(n: int) -> Tuple[float, float]:
    """((1+sqrt 2)^(1/(2n)), 1 + log(1+sqrt 2)/(2n)) for even n >= 2."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise InputError("theorem_bound: n must be an integer >= 2")
    if n % 2:
        raise InputError("theorem_bound: n must be even")
    base = 1 + math.sqrt(2)
    return base ** (1 / (2 * n)), 1 + math.log(base) / (2 * n)


def quadratic_threshold(x: float) -> bool:
    """x^2 - 2x - 1 >= 0, i.e. x >= 1 + sqrt 2 (with a 1e-12 relative slack)."""
    if not x > 0:
        raise InputError("quadratic_threshold: x must be positive")
    return x * x - 2 * x - 1 >= -1e-12 * x * x


def constants_table(dps: int = 30) -> List[dict]:
    """Landmark constants for house and Mahler-measure lower bounds."""
    with mpmath.workdps(dps):
        theta0 = mpmath.findroot(lambda t: t**3 - t - 1, 1.3)
        lehmer = mpmath.findroot(lambda t: LEHMER(t), 1.17)
        sqrt2 = mpmath.sqrt(2)
        rows = [
            ("lehmer_alpha", lehmer, "largest root of Lehmer's degree-10 polynomial", "computed"),
            ("smyth_theta0", theta0, "real root of z^3 - z - 1", "computed"),
            ("dimitrov_general_c", mpmath.log(2) / 4, "house >= 2^(1/(4n))", "computed"),
            ("dubickas_c", mpmath.mpf("0.30965"), "non-reciprocal bound", "literature value"),
            ("dimitrov_symmetric_c", mpmath.log(2) / 2, "reciprocal, no roots on |z|=1", "computed"),
            ("boyd_c", mpmath.mpf(3) / 2 * mpmath.log(theta0), "(3/2) log theta0", "computed"),
            (
                "symmetric_house_c",
                mpmath.log(1 + sqrt2) / 2,
                "house >= (1+sqrt 2)^(1/(2n))",
                "computed",
            ),
        ]
        return [
            {"name": n, "value": float(v), "digits": mpmath.nstr(v, 15), "meaning": m, "source": s}
            for n, v, m, s in rows
        ]


@dataclass
class AnalysisReport:
    name: str
    coeffs: List[int]
    degree: int
    flags: dict = field(default_factory=dict)
    house: Optional[dict] = None
    mahler: Optional[dict] = None
    house_lo: Optional[float] = None
    house_hi: Optional[float] = None
    min_circle_distance: Optional[float] = None
    theorem_bound: Optional[Tuple[float, float]] = None
    bound_verdict: str = NOT_APPLICABLE
    applicable: bool = False
    reasons: List[str] = field(default_factory=list)
    cyclotomic: Optional[dict] = None
    induction_chain: List[dict] = field(default_factory=list)
    tw_chain: Optional[dict] = None
    dimitrov: Optional[dict] = None
    functional_equation: Optional[dict] = None
    certificate: Optional[dict] = None
    errors: List[dict] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def violation(self) -> bool:
        return self.bound_verdict == FAIL

    def to_json(self, include_timings: bool = True) -> dict:
        out = asdict(self)
        out["coeffs"] = [str(c) for c in self.coeffs]
        if not include_timings:
            out.pop("timings")
        return out


class _Stage:
    def __init__(self, report: AnalysisReport, name: str):
        self.report, self.name = report, name

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.report.timings[self.name] = round(time.perf_counter() - self.t0, 6)
        if exc is not None and isinstance(exc, (HouseboundError, ArithmeticError)):
            self.report.errors.append({"stage": self.name, "error": f"{exc_type.__name__}: {exc}"})
            return True
        return False


def _induction_depth_cap(degree: int) -> int:
    return max(int(math.log2(degree)), 0) if degree > 0 else 0


def analyze(P: IntPolynomial, config: AnalysisConfig = AnalysisConfig(), _depth: int = 0) -> AnalysisReport:
    """Run the full pipeline on one monic integer polynomial.

    Stage failures are recorded in ``report.errors``; only malformed input
    (non-monic, constant, zero constant term) raises.
    """
    if P.is_zero() or not P.is_monic():
        raise InputError(f"polynomial must be monic: {P}")
    if P.degree < 1:
        raise InputError("polynomial must have degree >= 1")
    if P.coeffs[0] == 0:
        raise InputError("zero constant term: 0 is a root")

    rep = AnalysisReport(name=P.name, coeffs=list(P.coeffs), degree=P.degree)
    n = P.degree
    flags = rep.flags
    flags["reciprocal"] = is_reciprocal(P)
    flags["even_degree"] = n % 2 == 0
    roots_int = integer_roots(P)
    flags["visibly_reducible"] = bool(roots_int) and n > 1

    with _Stage(rep, "cyclotomic"):
        cyc = cyclotomic_report(P)
        rep.cyclotomic = cyc.to_json()
        flags["cyclotomic"] = cyc.is_cyclotomic

    rs = None
    with _Stage(rep, "roots"):
        hr, rs = house_report(P, config.precision, seed=config.seed)
        rep.house = hr.house.to_json()
        rep.mahler = hr.mahler.to_json()
        rep.house_lo = float(hr.house.lo)
        rep.house_hi = float(hr.house.hi)
        rep.min_circle_distance = float(hr.min_circle_distance)
        circ = classify_circle_roots(rs, config.circle_eps)
        flags["roots_on_circle"] = circ.status == ON_OR_NEAR

    if flags["even_degree"] and n >= 2:
        rep.theorem_bound = theorem_bound(n)
    if flags["reciprocal"] and flags["even_degree"]:
        with _Stage(rep, "p2_square"):
            flags["p2_perfect_square"] = p2_is_perfect_square(P)
        with _Stage(rep, "dimitrov"):
            D = dimitrov_coefficients(P, config.max_coeffs)
            rep.dimitrov = {
                "N": config.max_coeffs,
                "all_integer": D.all_integer,
                "head": [str(c) for c in D.coeffs[:8]],
            }
    else:
        flags["p2_perfect_square"] = False

    reasons = rep.reasons
    if not flags["reciprocal"]:
        reasons.append("not reciprocal")
    if not flags["even_degree"]:
        reasons.append("odd degree")
    if flags.get("cyclotomic"):
        reasons.append("cyclotomic: all roots are roots of unity")
    if flags.get("roots_on_circle", False):
        reasons.append("roots on or near the unit circle")
    if flags["visibly_reducible"] and config.reject_reducible:
        reasons.append("visibly reducible")
    if rs is None:
        rep.bound_verdict = ERROR
        return rep
    rep.applicable = not reasons
    if not rep.applicable:
        rep.bound_verdict = NOT_APPLICABLE
        return rep

    bound = rep.theorem_bound[0]
    rep.bound_verdict = PASS if rep.house_lo >= bound else FAIL
    if rep.bound_verdict == FAIL:
        log.error("house bound violated for %s: %.12g < %.12g", P, rep.house_lo, bound)

    pairs = None
    with _Stage(rep, "pairing"):
        pairs = pair_symmetric_roots(rs, config.pair_tol)

    if flags["p2_perfect_square"]:
        with _Stage(rep, "induction"):
            R = decompose_even(P)
            if R is not None and _depth < _induction_depth_cap(P.degree):
                R = IntPolynomial(R.coeffs, name=f"{P.name}|R" if P.name else "R")
                child = analyze(R, replace(config, compute_tw=False), _depth + 1)
                consistent = None
                if child.house_lo is not None:
                    lo, hi = math.sqrt(child.house_lo), math.sqrt(child.house_hi)
                    slack = 4 * config.precision
                    consistent = lo - slack <= rep.house_hi and rep.house_lo <= hi + slack
                rep.induction_chain.append(
                    {
                        "coeffs": [str(c) for c in R.coeffs],
                        "degree": R.degree,
                        "house_lo": child.house_lo,
                        "verdict": child.bound_verdict,
                        "house_sqrt_consistent": consistent,
                    }
                )
                rep.induction_chain.extend(child.induction_chain)

    if pairs is not None:
        with _Stage(rep, "functional_equation"):
            fe = functional_equation_check(
                P, config.functional_samples, config.functional_tol, config.seed, pairs=pairs
            )
            rep.functional_equation = fe.to_json()
        if config.compute_tw:
            with _Stage(rep, "tw_chain"):
                rep.tw_chain = _tw_chain(pairs, rep.house_lo, rep.house_hi, n, config)
            with _Stage(rep, "certificate"):
                E = pot.build_E(pairs)
                cert = pot.robinson_certificate(
                    E, config.certificate_k, config.grid_density, config.seed, config.fekete_sweeps
                )
                rep.certificate = {
                    "k": config.certificate_k,
                    "found": cert is not None,
                    "consistent_with_bound": cert is None or not cert.valid,
                    "detail": cert.to_json() if cert is not None else None,
                }
    return rep


def _tw_chain(pairs, h_lo: float, h_hi: float, n: int, config: AnalysisConfig) -> dict:
    h = (h_lo + h_hi) / 2
    E = pot.build_E(pairs)
    Et = pot.build_E_tilde(E, h)
    Es = pot.build_E_star(h, n)
    kw = dict(
        w=0.5,
        m=config.leja_points,
        grid_density=config.grid_density,
        seed=config.seed,
        fekete_sweeps=config.fekete_sweeps,
    )
    eE = pot.weighted_leja(E, **kw)
    eT = pot.weighted_leja(Et, **kw)
    eS = pot.weighted_leja(Es, **kw)
    star = pot.star_tw(h, n)
    tw_I = pot.interval_tw(h ** (-4 * n), h ** (4 * n))
    return {
        "house_used": h,
        "slits_E": len(E.merged()),
        "slits_E_tilde": len(Et),
        "tw_E_numeric": eE.tw_direct,
        "tw_E_formula": eE.tw_formula,
        "capacity_E": eE.capacity,
        "green_at_zero_E": eE.green_at_zero,
        "fekete_constant_term_E": eE.fekete_constant_term,
        "tw_E_tilde_numeric": eT.tw_direct,
        "tw_Estar_numeric": eS.tw_direct,
        "star_tw_analytic": star,
        "interval_tw_analytic": tw_I,
        "interval_tw_pow": tw_I ** (1.0 / n),
        "quadratic_threshold": quadratic_threshold(h ** (2 * n)),
    }


# --- corpus ---------------------------------------------------------------


def bundled_corpus_path() -> Path:
    return Path(str(resources.files("housebound") / "data" / "corpus.jsonl"))


@dataclass
class CorpusReport:
    entries: List[dict]
    summary: dict

    def to_json(self, include_timings: bool = True) -> dict:
        entries = self.entries
        if not include_timings:
            entries = [{k: v for k, v in e.items() if k != "timings"} for e in entries]
        return {"summary": self.summary, "entries": entries}

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["name", "degree", "house_lo", "bound", "verdict", "tw_E", "tw_Estar", "tw_I_pow"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for e in self.entries:
            if "error" in e and "bound_verdict" not in e:
                w.writerow([e.get("name", ""), "", "", "", "PARSE_ERROR", "", "", ""])
                continue
            tw = e.get("tw_chain") or {}
            bound = e.get("theorem_bound")
            w.writerow(
                [
                    e["name"],
                    e["degree"],
                    _fmt(e.get("house_lo")),
                    _fmt(bound[0] if bound else None),
                    e["bound_verdict"],
                    _fmt(tw.get("tw_E_numeric")),
                    _fmt(tw.get("tw_Estar_numeric")),
                    _fmt(tw.get("interval_tw_pow")),
                ]
            )
        return buf.getvalue()


def _fmt(x):
    return "" if x is None else repr(float(x))


def _analyze_entry(args):
    P, config = args
    try:
        return analyze(P, config).to_json()
    except InputError as exc:
        return {"name": P.name, "coeffs": [str(c) for c in P.coeffs], "error": str(exc)}


def _parse_lines(text: str) -> List[Tuple[int, object]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            P = IntPolynomial.from_json(json.loads(line))
            if not P.name:
                P = IntPolynomial(P.coeffs, name=f"line{lineno}")
            out.append((lineno, P))
        except (json.JSONDecodeError, InputError) as exc:
            out.append((lineno, f"line {lineno}: {exc}"))
    return out


def run_corpus(path, config: AnalysisConfig = AnalysisConfig()) -> CorpusReport:
    """Analyze every polynomial of a JSON-lines file, in input order."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read corpus {path}: {exc}") from exc
    parsed = _parse_lines(text)
    polys = [(i, p) for i, (_, p) in enumerate(parsed) if isinstance(p, IntPolynomial)]
    work = [(p, config) for _, p in polys]
    if config.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as ex:
            results = list(ex.map(_analyze_entry, work))
    else:
        results = [_analyze_entry(w) for w in work]
    by_pos = dict(zip((i for i, _ in polys), results))
    entries = []
    for i, (lineno, item) in enumerate(parsed):
        if i in by_pos:
            entries.append(by_pos[i])
        else:
            entries.append({"name": f"line{lineno}", "error": item})
    verdicts = [e.get("bound_verdict") for e in entries]
    summary = {
        "total": len(entries),
        "pass": verdicts.count(PASS),
        "fail": verdicts.count(FAIL),
        "not_applicable": verdicts.count(NOT_APPLICABLE),
        "error": verdicts.count(ERROR),
        "entry_errors": sum(1 for e in entries if "error" in e),
        "violations": [e["name"] for e in entries if e.get("bound_verdict") == FAIL],
    }
    return CorpusReport(entries, summary)
