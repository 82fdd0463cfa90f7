"""Certified complex roots, house and Mahler measure.

Roots come from a simultaneous Ehrlich-Aberth iteration (double precision
first, then mpmath polishing). Every approximation z carries the radius
n*|P(z)/P'(z)|; the closed disk of that radius around z contains a root of P.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConvergenceFailure, InputError, NoSymmetricMatching
from .intpoly import IntPolynomial

__all__ = [
    "Interval",
    "RootSet",
    "RootPair",
    "HouseReport",
    "CircleClassification",
    "find_roots",
    "house",
    "mahler_measure",
    "pair_symmetric_roots",
    "classify_circle_roots",
    "house_report",
    "OFF_CIRCLE",
    "ON_OR_NEAR",
]

OFF_CIRCLE = "OFF_CIRCLE"
ON_OR_NEAR = "ON_OR_NEAR"


@dataclass(frozen=True)
class Interval:
    lo: mpmath.mpf
    hi: mpmath.mpf

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> float:
        return float(self.hi - self.lo)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self, digits: int = 20) -> dict:
        return {"lo": mpmath.nstr(self.lo, digits), "hi": mpmath.nstr(self.hi, digits)}


@dataclass(frozen=True)
class RootSet:
    """Root approximations with certification radii.

    `multiplicity[i]` is the size of the cluster of overlapping disks root i
    belongs to (1 for an isolated root).
    """

    approximations: tuple
    radii: tuple
    source_degree: int
    multiplicity: tuple = ()
    dps: int = 15

    def __post_init__(self):
        if len(self.approximations) != self.source_degree:
            raise ValueError("root count must equal the source degree")
        if not self.multiplicity:
            object.__setattr__(self, "multiplicity", (1,) * self.source_degree)

    def __len__(self):
        return self.source_degree

    def __iter__(self):
        return iter(zip(self.approximations, self.radii))

    @property
    def values(self) -> np.ndarray:
        return np.array([complex(z) for z in self.approximations])

    @property
    def max_radius(self) -> float:
        return float(max(self.radii)) if self.radii else 0.0

    def to_json(self) -> dict:
        return {
            "source_degree": self.source_degree,
            "roots": [
                {
                    "re": mpmath.nstr(z.real, 20),
                    "im": mpmath.nstr(z.imag, 20),
                    "radius": mpmath.nstr(r, 5),
                    "multiplicity": m,
                }
                for z, r, m in zip(self.approximations, self.radii, self.multiplicity)
            ],
        }


def _initial_guesses(P: IntPolynomial, seed: int) -> np.ndarray:
    n = P.degree
    c = [float(x) for x in P.coeffs]
    # Fujiwara bound on root moduli
    bound = 2 * max(abs(c[n - k]) ** (1.0 / k) for k in range(1, n + 1))
    bound = max(bound, 1e-3)
    center = -c[n - 1] / n
    rng = np.random.default_rng(seed)
    phase = 0.4 + 0.1 * rng.uniform()
    theta = 2 * np.pi * np.arange(n) / n + phase
    radius = 0.5 * bound * (1 + 0.05 * rng.uniform(size=n))
    return center + radius * np.exp(1j * theta)


def _aberth_double(P: IntPolynomial, z: np.ndarray, max_iter: int = 500) -> np.ndarray:
    coeffs = np.array([float(c) for c in reversed(P.coeffs)])
    dcoeffs = np.polyder(coeffs)
    n = len(z)
    for _ in range(max_iter):
        p = np.polyval(coeffs, z)
        dp = np.polyval(dcoeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            step = ratio / (1 - ratio * inv.sum(axis=1))
        step = np.where(np.isfinite(step), step, 1e-3 * (1 + np.abs(z)))
        z = z - step
        if np.all(np.abs(step) <= 1e-15 * (1 + np.abs(z))):
            break
    if n == 1:
        z = np.array([-coeffs[1] / coeffs[0]], dtype=complex)
    return z


def _radii(P: IntPolynomial, dP: IntPolynomial, zs) -> list:
    n = P.degree
    absP = IntPolynomial(tuple(abs(c) for c in P.coeffs))
    out = []
    for z in zs:
        d = abs(dP(z))
        # Horner rounding bound: |P(z)| can hide below 2n*eps*sum|c_k||z|^k
        slack = 4 * n * mpmath.eps * absP(abs(z))
        if d <= slack:
            out.append(mpmath.inf)
        else:
            out.append(n * (abs(P(z)) + slack) / (d - slack))
    return out


def _aberth_mp(P: IntPolynomial, dP: IntPolynomial, zs: list, sweeps: int) -> list:
    zs = list(zs)
    n = len(zs)
    for _ in range(sweeps):
        moved = mpmath.mpf(0)
        for k in range(n):
            zk = zs[k]
            d = dP(zk)
            p = P(zk)
            if p == 0:
                continue
            if d == 0:
                zs[k] = zk + mpmath.mpf(10) ** (-mpmath.mp.dps // 2)
                continue
            ratio = p / d
            s = mpmath.fsum(1 / (zk - zs[j]) for j in range(n) if j != k and zs[j] != zk)
            step = ratio / (1 - ratio * s)
            zs[k] = zk - step
            moved = max(moved, abs(step))
        scale = 1 + max(abs(z) for z in zs)
        if moved <= 16 * mpmath.eps * scale:
            break
    return zs


def _cluster(approx: list, radii: list) -> Tuple[list, list]:
    """Merge overlapping disks; every member gets a disk covering the cluster."""
    n = len(approx)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(approx[i] - approx[j]) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    mult = [1] * n
    new_r = list(radii)
    for members in groups.values():
        if len(members) == 1:
            continue
        for i in members:
            mult[i] = len(members)
            new_r[i] = max(abs(approx[i] - approx[j]) + radii[j] for j in members)
    return new_r, mult


def find_roots(
    P: IntPolynomial,
    precision: float = 1e-12,
    seed: int = 0,
    max_dps: int = 400,
) -> RootSet:
    """Locate all roots of a monic integer polynomial.

    Raises ConvergenceFailure when radii cannot be pushed below `precision`
    before the working precision reaches `max_dps` digits.
    """
    if P.is_zero() or not P.is_monic():
        raise InputError("find_roots: polynomial must be monic")
    if P.degree < 1:
        raise InputError("find_roots: degree must be >= 1")
    if not precision > 0:
        raise InputError("find_roots: precision must be positive")
    n = P.degree
    dP = P.derivative()
    try:
        z0 = _aberth_double(P, _initial_guesses(P, seed))
    except OverflowError:
        z0 = _initial_guesses(P, seed)
    if not np.all(np.isfinite(z0)):
        z0 = _initial_guesses(P, seed)

    digits = max(15, int(-math.log10(precision)) + 1)
    dps = max(30, 2 * digits + 10)
    zs = None
    history = []
    while dps <= max_dps:
        with mpmath.workdps(dps):
            if zs is None:
                zs = [mpmath.mpc(complex(z)) for z in z0]
            else:
                zs = [mpmath.mpc(z) for z in zs]
            zs = _aberth_mp(P, dP, zs, sweeps=60 + 4 * n)
            radii = _radii(P, dP, zs)
            radii, mult = _cluster(zs, radii)
            worst = max(radii)
            history.append((dps, float(worst)))
            if worst <= precision / 2:
                return RootSet(tuple(zs), tuple(radii), n, tuple(mult), dps)
        dps *= 2
    raise ConvergenceFailure(
        f"roots of degree-{n} polynomial not certified to {precision:g}",
        diagnostics={"history": history, "precision": precision},
    )


def house(rs: RootSet) -> Interval:
    if not len(rs):
        raise InputError("house: empty root set")
    with mpmath.workdps(rs.dps):
        lo = max(max(abs(z) - r, mpmath.mpf(0)) for z, r in rs)
        hi = max(abs(z) + r for z, r in rs)
    return Interval(lo, hi)


def mahler_measure(rs: RootSet) -> Interval:
    if not len(rs):
        raise InputError("mahler_measure: empty root set")
    one = mpmath.mpf(1)
    with mpmath.workdps(rs.dps):
        lo = mpmath.fprod(max(one, abs(z) - r) for z, r in rs)
        hi = mpmath.fprod(max(one, abs(z) + r) for z, r in rs)
    return Interval(lo, hi)


@dataclass(frozen=True)
class RootPair:
    """alpha (|alpha| >= 1) matched with beta ~ 1/conj(alpha)."""

    alpha: complex
    beta: complex
    on_circle: bool = False

    def as_tuple(self):
        return (self.alpha, self.beta)


def _match_bipartite(left: list, right: list, cost_fn, limit_fn) -> list:
    if len(left) != len(right):
        raise NoSymmetricMatching(
            f"{len(left)} roots cannot be matched against {len(right)} partners"
        )
    if not left:
        return []
    cost = np.array([[cost_fn(a, b) for b in right] for a in left])
    rows, cols = linear_sum_assignment(cost)
    pairs = []
    for i, j in zip(rows, cols):
        if cost[i, j] > limit_fn(left[i], right[j]):
            raise NoSymmetricMatching(
                f"root {complex(left[i][0]):.6g} has no partner 1/conj within tolerance"
            )
        pairs.append((left[i], right[j]))
    return pairs


def pair_symmetric_roots(rs: RootSet, tol: float = 1e-8) -> List[RootPair]:
    """Match every root alpha with a partner beta satisfying beta ~ 1/conj(alpha).

    Roots off the unit circle are matched outside-to-inside by minimising
    |alpha*conj(beta) - 1|. A root on the circle is its own mirror image, so
    on-circle roots are paired with their complex conjugates instead.
    """
    if len(rs) % 2:
        raise NoSymmetricMatching("odd number of roots")
    items = list(zip(rs.values, (float(r) for r in rs.radii)))
    outside, inside, circle = [], [], []
    for z, r in items:
        gap = abs(abs(z) - 1)
        if gap <= tol + r:
            circle.append((z, r))
        elif abs(z) > 1:
            outside.append((z, r))
        else:
            inside.append((z, r))

    def mirror_cost(a, b):
        return abs(a[0] * np.conj(b[0]) - 1)

    def mirror_limit(a, b):
        return tol + abs(b[0]) * a[1] + abs(a[0]) * b[1]

    pairs = [
        RootPair(a[0], b[0]) for a, b in _match_bipartite(outside, inside, mirror_cost, mirror_limit)
    ]
    upper = [c for c in circle if c[0].imag > tol + c[1]]
    lower = [c for c in circle if c[0].imag < -(tol + c[1])]
    real = [c for c in circle if abs(c[0].imag) <= tol + c[1]]

    def conj_cost(a, b):
        return abs(a[0] - np.conj(b[0]))

    def conj_limit(a, b):
        return tol + a[1] + b[1]

    for a, b in _match_bipartite(upper, lower, conj_cost, conj_limit):
        pairs.append(RootPair(a[0], b[0], on_circle=True))
    # +-1 roots pair among themselves (a reciprocal polynomial has them in even number)
    for sign in (1, -1):
        group = sorted((c for c in real if np.sign(c[0].real) == sign), key=lambda c: c[0].real)
        if len(group) % 2:
            raise NoSymmetricMatching("unpaired real root on the unit circle")
        for k in range(0, len(group), 2):
            pairs.append(RootPair(group[k][0], group[k + 1][0], on_circle=True))
    pairs.sort(key=lambda p: (-abs(p.alpha), np.angle(p.alpha)))
    return pairs


@dataclass(frozen=True)
class CircleClassification:
    status: str
    offending: tuple
    min_circle_distance: float

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "offending": [[z.real, z.imag] for z in self.offending],
            "min_circle_distance": self.min_circle_distance,
        }


def classify_circle_roots(rs: RootSet, eps: float = 1e-9) -> CircleClassification:
    offending = []
    dist = math.inf
    for z, r in rs:
        gap = float(abs(abs(z) - 1) - r)
        dist = min(dist, gap)
        if gap <= eps:
            offending.append(complex(z))
    status = OFF_CIRCLE if not offending else ON_OR_NEAR
    return CircleClassification(status, tuple(offending), dist)


@dataclass(frozen=True)
class HouseReport:
    house: Interval
    mahler: Interval
    degree: int
    min_circle_distance: float

    def to_json(self) -> dict:
        return {
            "house": self.house.to_json(),
            "mahler": self.mahler.to_json(),
            "degree": self.degree,
            "min_circle_distance": mpmath.nstr(self.min_circle_distance, 12),
        }


def house_report(
    P: IntPolynomial, precision: float = 1e-12, seed: int = 0
) -> Tuple[HouseReport, RootSet]:
    """Root the polynomial and summarise house / Mahler measure.

    Tightens the root radii until both interval widths are within
    `precision`.
    """
    target = precision
    for _ in range(12):
        rs = find_roots(P, target, seed=seed)
        h, m = house(rs), mahler_measure(rs)
        if h.width <= precision and m.width <= precision:
            break
        target /= max(8.0, 2 * float(m.hi))
    dist = classify_circle_roots(rs).min_circle_distance
    return HouseReport(h, m, P.degree, dist), rs
