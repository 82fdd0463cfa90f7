"""Exact truncated power series and Dimitrov's square-root series."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .errors import InputError, IntegralityViolation
from .intpoly import IntPolynomial, _mul, graeffe_transform, is_reciprocal, poly_exact_sqrt
from .roots import RootPair, find_roots, pair_symmetric_roots

__all__ = [
    "IntSeries",
    "series_sqrt",
    "dimitrov_product",
    "dimitrov_coefficients",
    "p2_is_perfect_square",
    "pair_segments",
    "evaluate_F",
    "FunctionalEquationReport",
    "functional_equation_check",
]


@dataclass(frozen=True)
class IntSeries:
    """Power series truncated after z**order, with exact rational coefficients."""

    coeffs: tuple
    order: int

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.order + 1:
            raise InputError("series needs exactly order+1 coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_iterable(cls, coeffs: Iterable, order: Optional[int] = None) -> "IntSeries":
        c = [Fraction(x) for x in coeffs]
        if order is None:
            order = len(c) - 1
        c = (c + [Fraction(0)] * (order + 1))[: order + 1]
        return cls(tuple(c), order)

    @property
    def all_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __mul__(self, other: "IntSeries") -> "IntSeries":
        N = min(self.order, other.order)
        out = [
            sum(self.coeffs[i] * other.coeffs[k - i] for i in range(k + 1)) for k in range(N + 1)
        ]
        return IntSeries(tuple(out), N)

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) for c in self.coeffs],
            "order": self.order,
            "all_integer": self.all_integer,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntSeries":
        return cls.from_iterable((Fraction(c) for c in obj["coeffs"]), obj.get("order"))


def series_sqrt(S, N: int) -> IntSeries:
    """Series T with T*T = S mod z^(N+1) and T(0) = +1.

    `S` may be an IntSeries, an IntPolynomial or a plain coefficient list.
    """
    if isinstance(S, IntPolynomial):
        s = list(S.coeffs)
    elif isinstance(S, IntSeries):
        s = list(S.coeffs)
    else:
        s = list(S)
    if N < 0:
        raise InputError("series_sqrt: N must be nonnegative")
    s = [Fraction(x) for x in s] + [Fraction(0)] * max(0, N + 1 - len(s))
    if s[0] != 1:
        raise InputError("series_sqrt: constant term must be 1")
    t = [Fraction(1)] + [Fraction(0)] * N
    for k in range(1, N + 1):
        cross = sum(t[i] * t[k - i] for i in range(1, k))
        t[k] = (s[k] - cross) / 2
    return IntSeries(tuple(t), N)


def _check_dimitrov_input(P: IntPolynomial):
    if P.is_zero() or not P.is_monic():
        raise InputError("polynomial must be monic")
    if not is_reciprocal(P):
        raise InputError("polynomial must be reciprocal")
    if P.degree % 2 or P.degree == 0:
        raise InputError("polynomial must have positive even degree")


def dimitrov_product(P: IntPolynomial) -> IntPolynomial:
    """P2 * P4, the squared Dimitrov function."""
    _check_dimitrov_input(P)
    P2 = graeffe_transform(P)
    P4 = graeffe_transform(P2)
    return IntPolynomial(tuple(_mul(P2.coeffs, P4.coeffs)))


def dimitrov_coefficients(P: IntPolynomial, N: int) -> IntSeries:
    """First N+1 Maclaurin coefficients of sqrt(P2 * P4), branch D(0) = 1.

    Raises IntegralityViolation if a coefficient is not an integer; that
    cannot happen for valid input and points at a bug.
    """
    T = series_sqrt(dimitrov_product(P), N)
    if not T.all_integer:
        bad = next(k for k, c in enumerate(T.coeffs) if c.denominator != 1)
        raise IntegralityViolation(f"coefficient {bad} of D is {T.coeffs[bad]}")
    return T


def p2_is_perfect_square(P: IntPolynomial) -> bool:
    P2 = graeffe_transform(P)
    return P2.degree % 2 == 0 and poly_exact_sqrt(P2) is not None


def pair_segments(pairs: Sequence[RootPair]) -> List[tuple]:
    """Endpoints (alpha^2, beta^2) and (alpha^4, beta^4) for every root pair."""
    segs = []
    for p in pairs:
        a, b = complex(p.alpha), complex(p.beta)
        segs.append((a * a, b * b))
        segs.append((a**4, b**4))
    return segs


def _branch(z, a, b):
    # sqrt((z-a)(z-b)) holomorphic off [a, b] and ~ z at infinity
    # u*sqrt(1 - (c/u)^2) with c = (b-a)/2, written as a product of the
    # endpoint distances to avoid cancellation when |c/u| ~ 1
    u = z - (a + b) / 2
    return u * np.sqrt((z - a) * (z - b) / (u * u))


def evaluate_F(segments: Sequence[tuple], z) -> np.ndarray:
    """Product of the pairwise square-root branches at z (array-friendly)."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for a, b in segments:
        out = out * _branch(z, a, b)
    return out


def _segment_distance(z: np.ndarray, a: complex, b: complex) -> np.ndarray:
    d = b - a
    if d == 0:
        return np.abs(z - a)
    t = np.clip(((z - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(z - (a + t * d))


@dataclass(frozen=True)
class FunctionalEquationReport:
    max_relative_error: float
    samples: int
    resampled: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tol

    def to_json(self) -> dict:
        return {
            "max_relative_error": self.max_relative_error,
            "samples": self.samples,
            "resampled": self.resampled,
            "tol": self.tol,
            "passed": self.passed,
        }


def functional_equation_check(
    P: IntPolynomial,
    samples: int = 100,
    tol: float = 1e-9,
    seed: int = 0,
    pairs: Optional[Sequence[RootPair]] = None,
    points: Optional[Sequence[complex]] = None,
) -> FunctionalEquationReport:
    """Sample max |F(z) - z^n F(1/z)| / |F(z)| at points off the slit set.

    Candidate points within `tol` of a slit (for z or 1/z) are discarded and
    redrawn. `points` overrides the random candidates; excluded ones are
    then simply dropped.
    """
    _check_dimitrov_input(P)
    if pairs is None:
        pairs = pair_symmetric_roots(find_roots(P, seed=seed))
    segs = pair_segments(pairs)
    n = P.degree
    rmax = max(max(abs(a), abs(b)) for a, b in segs)
    rng = np.random.default_rng(seed)

    def clear(z):
        ok = np.ones(z.shape, dtype=bool)
        for a, b in segs:
            ok &= _segment_distance(z, a, b) > tol
            ok &= _segment_distance(1 / z, a, b) > tol
        return ok & (z != 0)

    if points is not None:
        cand = np.asarray(points, dtype=complex)
        keep = clear(cand)
        z = cand[keep]
        resampled = int((~keep).sum())
    else:
        z = np.empty(0, dtype=complex)
        resampled = 0
        while z.size < samples:
            k = samples - z.size
            mod = np.exp(rng.uniform(-1.2, 1.2, size=k) * np.log(rmax))
            arg = rng.uniform(-np.pi, np.pi, size=k)
            cand = mod * np.exp(1j * arg)
            keep = clear(cand)
            resampled += int((~keep).sum())
            z = np.concatenate([z, cand[keep]])
    if z.size == 0:
        return FunctionalEquationReport(0.0, 0, resampled, tol)
    lhs = evaluate_F(segs, z)
    rhs = z**n * evaluate_F(segs, 1 / z)
    err = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.finfo(float).tiny)
    return FunctionalEquationReport(float(err.max()), int(z.size), resampled, tol)
