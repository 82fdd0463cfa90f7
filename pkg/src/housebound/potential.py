"""Radial slit sets and their (weighted) potential theory.

Closed forms cover single intervals on the positive axis and stars of
equally spaced slits. Everything else is estimated from weighted Leja points
on a Chebyshev discretisation of the slits, see `WeightedLeja`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_points, check_positive_int, check_real, check_slit_set
from .errors import InputError, RootOnCircle

__all__ = [
    "SlitSet",
    "WeightSpec",
    "EquilibriumEstimate",
    "RobinsonCertificate",
    "WeightedLeja",
    "build_E",
    "build_E_tilde",
    "build_E_star",
    "origin_star",
    "interval_tw",
    "segment_capacity",
    "interval_green_at_zero",
    "origin_star_capacity",
    "star_tw",
    "tw_via_formula",
    "weighted_leja",
    "equilibrium_constancy_check",
    "potential_profile",
    "robinson_certificate",
]

_TINY = 1e-300


def _cheb(n: int, offset: float) -> np.ndarray:
    theta = (np.arange(n) + offset) / n * np.pi
    return (1 - np.cos(theta)) / 2


def _seg_distance(z, a, b):
    d = b - a
    if d == 0:
        return np.abs(z - a)
    t = np.clip(((z - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(z - (a + t * d))


@dataclass(frozen=True)
class SlitSet:
    """Finite union of straight segments avoiding the origin.

    `allow_origin=True` lifts the origin restriction; such sets only make
    sense for unweighted capacity (stars emanating from 0).
    """

    slits: tuple
    allow_origin: bool = False

    def __post_init__(self):
        segs = []
        for s in self.slits:
            a, b = s
            a, b = complex(a), complex(b)
            if not (np.isfinite(a) and np.isfinite(b)):
                raise InputError("slit endpoints must be finite")
            segs.append((a, b))
        if not segs:
            raise InputError("slit set is empty")
        if not self.allow_origin:
            for a, b in segs:
                if _seg_distance(0j, a, b) <= 1e-300:
                    raise InputError(f"slit [{a}, {b}] contains the origin")
        object.__setattr__(self, "slits", tuple(segs))

    def __len__(self):
        return len(self.slits)

    def __iter__(self):
        return iter(self.slits)

    @property
    def total_length(self) -> float:
        return float(sum(abs(b - a) for a, b in self.merged().slits))

    def is_radial(self, tol: float = 1e-9) -> bool:
        for a, b in self.slits:
            if abs(a) == 0 or abs(b) == 0:
                continue
            # same ray: a/b is a positive real
            q = a / b
            if abs(q.imag) > tol * abs(q) or q.real <= 0:
                return False
        return True

    def is_inversion_symmetric(self, tol: float = 1e-8) -> bool:
        """True when z -> 1/conj(z) maps the set onto itself (checked on samples)."""
        t = np.linspace(0.0, 1.0, 33)
        for a, b in self.slits:
            z = a + (b - a) * t
            img = 1 / np.conj(z)
            d = np.min([_seg_distance(img, c, e) for c, e in self.slits], axis=0)
            if np.any(d > tol * np.maximum(1.0, np.abs(img))):
                return False
        return True

    def merged(self, tol: float = 1e-12) -> "SlitSet":
        """Merge overlapping collinear segments; the point set is unchanged."""
        groups: List[list] = []
        for a, b in self.slits:
            if a == b:
                groups.append([(a, (0.0, 0.0), 1.0 + 0j)])
                continue
            d = (b - a) / abs(b - a)
            # canonical direction for a line
            if d.real < -tol or (abs(d.real) <= tol and d.imag < 0):
                d = -d
            placed = False
            for g in groups:
                base, _, gd = g[0]
                if abs(gd) == 0 or abs((gd * np.conj(d)).imag) > tol:
                    continue
                # same line if the offset (cross product) matches
                if abs(((a - base) * np.conj(gd)).imag) <= tol * max(1.0, abs(a - base)):
                    ta = ((a - base) * np.conj(gd)).real
                    tb = ((b - base) * np.conj(gd)).real
                    g.append((base, (min(ta, tb), max(ta, tb)), gd))
                    placed = True
                    break
            if not placed:
                tb = ((b - a) * np.conj(d)).real
                groups.append([(a, (min(0.0, tb), max(0.0, tb)), d)])
        out = []
        for g in groups:
            base, _, d = g[0]
            intervals = sorted(iv for _, iv, _ in g)
            cur = list(intervals[0])
            for lo, hi in intervals[1:]:
                if lo <= cur[1] + tol * max(1.0, abs(cur[1])):
                    cur[1] = max(cur[1], hi)
                else:
                    out.append((base + cur[0] * d, base + cur[1] * d))
                    cur = [lo, hi]
            out.append((base + cur[0] * d, base + cur[1] * d))
        return SlitSet(tuple(out), allow_origin=self.allow_origin)

    def discretize(self, density: int, offset: float = 0.5) -> Tuple[np.ndarray, np.ndarray]:
        """Endpoint-clustered nodes on every merged slit.

        Radial slits get two Chebyshev families of density/2 nodes each: one
        on the slit itself and one on its image under z -> 1/z, mapped back.
        The second family resolves the mass the weighted equilibrium measure
        piles up near the end closest to 0. Other slits get plain Chebyshev
        nodes. `offset` in (0, 1) shifts the node phase; 0.5 gives
        first-kind Chebyshev points. Returns (points, slit index per point).
        """
        pts, owner = [], []
        for i, (a, b) in enumerate(self.merged().slits):
            radial = a != 0 and b != 0 and abs((a / b).imag) <= 1e-9 * abs(a / b) and (a / b).real > 0
            if radial and a != b:
                k = density - density // 2
                t = _cheb(k, offset)
                ia, ib = 1 / a, 1 / b
                seg = np.concatenate([a + (b - a) * _cheb(density // 2, offset), 1 / (ia + (ib - ia) * t)])
            else:
                seg = a + (b - a) * _cheb(density, offset)
            pts.append(seg)
            owner.append(np.full(seg.size, i))
        return np.concatenate(pts), np.concatenate(owner)

    def to_json(self) -> dict:
        return {
            "slits": [[[a.real, a.imag], [b.real, b.imag]] for a, b in self.slits],
            "allow_origin": self.allow_origin,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SlitSet":
        return cls(
            tuple((complex(*a), complex(*b)) for a, b in obj["slits"]),
            allow_origin=bool(obj.get("allow_origin", False)),
        )


@dataclass(frozen=True)
class WeightSpec:
    """w(z) = |z|^(-exponent)."""

    exponent: float = 0.5

    def __post_init__(self):
        check_real(self.exponent, "weight exponent", nonnegative=True)

    def log_weight(self, z):
        if self.exponent == 0:
            return np.zeros(np.shape(z))
        return -self.exponent * np.log(np.abs(z))


def _as_weight(w) -> WeightSpec:
    return w if isinstance(w, WeightSpec) else WeightSpec(float(w))


# --- geometry -----------------------------------------------------------


def build_E(pairs, tol: float = 1e-9) -> SlitSet:
    """Slits [alpha^2, beta^2] and [alpha^4, beta^4] for each root pair.

    `pairs` holds RootPair objects or plain (alpha, beta) tuples.
    """
    segs = []
    for p in pairs:
        alpha, beta = (p.alpha, p.beta) if hasattr(p, "alpha") else p
        alpha, beta = complex(alpha), complex(beta)
        if getattr(p, "on_circle", False) or abs(abs(alpha) - 1) <= tol:
            raise RootOnCircle(f"root {alpha:.6g} lies on the unit circle")
        segs.append((alpha**2, beta**2))
        segs.append((alpha**4, beta**4))
    if not segs:
        raise InputError("build_E: no root pairs")
    return SlitSet(tuple(segs))


def build_E_tilde(E: SlitSet, h: float) -> SlitSet:
    """Extend every radial slit along its ray to run from h^-4 to h^4."""
    E = check_slit_set(E)
    h = check_real(h, "h")
    if h <= 1:
        raise InputError("build_E_tilde: h must exceed 1")
    if not E.is_radial():
        raise InputError("build_E_tilde: slits must be radial")
    lo, hi = h**-4, h**4
    segs = []
    for a, b in E.slits:
        u = a / abs(a)
        segs.append((lo * u, hi * u))
    return SlitSet(tuple(segs)).merged()


def build_E_star(h: float, n: int) -> SlitSet:
    """n slits e^(2 pi i k/n) [h^-4, h^4], k = 1..n."""
    h = check_real(h, "h")
    n = check_positive_int(n, "n")
    if h <= 1:
        raise InputError("build_E_star: h must exceed 1")
    segs = []
    for k in range(1, n + 1):
        u = np.exp(2j * np.pi * k / n)
        segs.append((h**-4 * u, h**4 * u))
    return SlitSet(tuple(segs))


def origin_star(s: float, k: int) -> SlitSet:
    """k equally spaced segments [0, s e^(2 pi i j/k)] meeting at the origin."""
    s = check_real(s, "s", positive=True)
    k = check_positive_int(k, "k")
    segs = tuple((0j, s * np.exp(2j * np.pi * j / k)) for j in range(k))
    return SlitSet(segs, allow_origin=True)


# --- closed forms ------------------------------------------------------


def segment_capacity(a: float, b: float) -> float:
    if b < a:
        raise InputError("segment_capacity: need a <= b")
    return (b - a) / 4


def interval_green_at_zero(a: float, b: float) -> float:
    """g(0, inf) for the complement of [a, b], 0 < a < b."""
    if a <= 0 or b <= 0:
        raise InputError("interval_green_at_zero: interval must not contain 0")
    if b < a:
        raise InputError("interval_green_at_zero: need a <= b")
    if a == b:
        return math.inf
    ra, rb = math.sqrt(a), math.sqrt(b)
    return -math.log((rb - ra) / (rb + ra))


def interval_tw(a: float, b: float) -> float:
    """Weighted Chebyshev constant of [a, b] for w = |z|^(-1/2)."""
    if a <= 0:
        raise InputError("interval_tw: need a > 0")
    if b < a:
        raise InputError("interval_tw: need a <= b")
    return (math.sqrt(b) - math.sqrt(a)) / 2


def origin_star_capacity(s: float, k: int) -> float:
    """Capacity of k equal segments of length s from the origin."""
    s = check_real(s, "s", positive=True)
    k = check_positive_int(k, "k")
    return (s**k / 4) ** (1.0 / k)


def star_tw(h: float, n: int) -> float:
    n = check_positive_int(n, "n")
    if h <= 1:
        raise InputError("star_tw: h must exceed 1")
    return interval_tw(h ** (-4 * n), h ** (4 * n)) ** (1.0 / n)


def tw_via_formula(capacity: float, green_at_zero: float) -> float:
    if capacity <= 0:
        raise InputError("tw_via_formula: capacity must be positive")
    if green_at_zero < 0:
        raise InputError("tw_via_formula: Green function value must be >= 0")
    return math.exp(-green_at_zero / 2) * math.sqrt(capacity)


# --- Leja estimation ---------------------------------------------------


def _log_abs(x):
    return np.log(np.maximum(np.abs(x), _TINY))


def _greedy_leja(grid: np.ndarray, log_w: np.ndarray, m: int) -> np.ndarray:
    acc = np.zeros(grid.size)
    idx = np.empty(m, dtype=int)
    for k in range(m):
        i = int(np.argmax(acc + (k + 1) * log_w))
        idx[k] = i
        acc += _log_abs(grid - grid[i])
    return idx


def _fekete_sweeps(grid: np.ndarray, log_w: np.ndarray, idx: np.ndarray, sweeps: int) -> np.ndarray:
    """Coordinate ascent on the weighted Vandermonde energy, grid-restricted."""
    idx = idx.copy()
    m = idx.size
    if sweeps <= 0 or m < 2:
        return idx
    acc = np.zeros(grid.size)
    for i in idx:
        acc += _log_abs(grid - grid[i])
    taken = np.zeros(grid.size, dtype=bool)
    taken[idx] = True
    for _ in range(sweeps):
        moved = 0
        for t in range(m):
            old = idx[t]
            acc -= _log_abs(grid - grid[old])
            taken[old] = False
            score = np.where(taken, -np.inf, acc + (m - 1) * log_w)
            new = int(np.argmax(score))
            idx[t] = new
            taken[new] = True
            acc += _log_abs(grid - grid[new])
            moved += new != old
        if not moved:
            break
    return idx


def _log_norm_profile(points: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.zeros(z.size)
    for p in points:
        out += _log_abs(z - p)
    return out


@dataclass(frozen=True)
class EquilibriumEstimate:
    points: np.ndarray = field(repr=False)
    tw_direct: float
    tw_formula: float
    capacity: float
    green_at_zero: float
    robin_constant: float
    fekete_constant_term: float
    weight: float
    m: int
    unweighted_points: Optional[np.ndarray] = field(default=None, repr=False)

    def to_json(self, include_points: bool = True) -> dict:
        out = {
            "tw_direct": self.tw_direct,
            "tw_formula": self.tw_formula,
            "capacity": self.capacity,
            "green_at_zero": self.green_at_zero,
            "robin_constant": self.robin_constant,
            "fekete_constant_term": self.fekete_constant_term,
            "weight": self.weight,
            "m": self.m,
        }
        if include_points:
            out["points"] = [[z.real, z.imag] for z in self.points]
        return out


class WeightedLeja(BaseEstimator):
    """Weighted Leja points on a slit set, with Chebyshev-constant estimates.

    Parameters
    ----------
    weight : float
        Exponent s of the weight |z|^(-s); 0 gives classical Leja points.
    n_points : int
        Number m of points.
    grid_density : int
        Chebyshev nodes per (merged) slit used for point selection.
    refine_factor : int
        Sup norms are taken on a grid this many times denser.
    fekete_sweeps : int
        Coordinate-ascent passes applied after the greedy selection.
    seed : int
        Drives the node phase of the discretisation.

    Attributes
    ----------
    points_ : ndarray of complex
    tw_direct_, capacity_, robin_constant_, green_at_zero_, tw_formula_,
    fekete_constant_term_ : float
    estimate_ : EquilibriumEstimate
    """

    def __init__(
        self,
        weight=0.5,
        n_points=200,
        grid_density=2000,
        refine_factor=4,
        fekete_sweeps=2,
        seed=0,
    ):
        self.weight = weight
        self.n_points = n_points
        self.grid_density = grid_density
        self.refine_factor = refine_factor
        self.fekete_sweeps = fekete_sweeps
        self.seed = seed

    def _validate_params(self):
        s = check_real(self.weight, "weight", nonnegative=True)
        m = check_positive_int(self.n_points, "n_points", minimum=2)
        g = check_positive_int(self.grid_density, "grid_density", minimum=100)
        r = check_positive_int(self.refine_factor, "refine_factor")
        f = check_positive_int(self.fekete_sweeps, "fekete_sweeps", minimum=0)
        return s, m, g, r, f

    def _offsets(self):
        u = float(np.random.default_rng(self.seed).uniform(0.05, 0.95))
        return u, (u + 0.5) % 1.0 or 0.5

    def _run(self, E: SlitSet, s: float, m: int, g: int, r: int, f: int):
        u, v = self._offsets()
        grid, _ = E.discretize(g, u)
        fine, _ = E.discretize(g * r, v)
        fine = np.concatenate([fine, grid])
        log_w = -s * _log_abs(grid) if s else np.zeros(grid.size)
        idx = _greedy_leja(grid, log_w, m)
        idx = _fekete_sweeps(grid, log_w, idx, f)
        pts = grid[idx]
        prof = _log_norm_profile(pts, fine)
        if s:
            prof = prof - m * s * _log_abs(fine)
        return pts, float(np.exp(prof.max() / m))

    def fit(self, X, y=None):
        """Select points on the slit set `X` and fill the estimates."""
        E = check_slit_set(X).merged()
        s, m, g, r, f = self._validate_params()
        if E.total_length <= 0:
            raise InputError("slit set has zero total length")
        if s and E.allow_origin:
            raise InputError("weighted estimation needs a slit set avoiding 0")
        pts, tw = self._run(E, s, m, g, r, f)
        if s:
            upts, cap = self._run(E, 0.0, m, g, r, f)
        else:
            upts, cap = pts, tw
        robin = -math.log(cap)
        if E.allow_origin and min(_seg_distance(0j, a, b) for a, b in E.slits) == 0:
            green = 0.0
        else:
            # g(0, inf) = V_E - U^mu(0) with mu the equilibrium measure
            green = max(robin + float(np.mean(_log_abs(upts))), 0.0)
        with np.errstate(divide="ignore"):
            fek = float(np.exp(np.mean(_log_abs(pts))))
        self.points_ = pts
        self.unweighted_points_ = upts
        self.tw_direct_ = tw
        self.capacity_ = cap
        self.robin_constant_ = robin
        self.green_at_zero_ = green
        self.tw_formula_ = tw_via_formula(cap, green)
        self.fekete_constant_term_ = fek
        self.slit_set_ = E
        self.estimate_ = EquilibriumEstimate(
            points=pts,
            tw_direct=tw,
            tw_formula=self.tw_formula_,
            capacity=cap,
            green_at_zero=green,
            robin_constant=robin,
            fekete_constant_term=fek,
            weight=s,
            m=m,
            unweighted_points=upts,
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "points_"):
            from sklearn.exceptions import NotFittedError

            raise NotFittedError("WeightedLeja is not fitted yet; call fit first")

    def transform(self, X):
        """Discrete weighted potential U^mu(z) + s log|z| at the points X."""
        self._check_fitted()
        z = check_points(X)
        s = float(self.weight)
        out = -_log_norm_profile(self.points_, z) / self.points_.size
        if s:
            out = out + s * _log_abs(z)
        return out

    def score(self, X=None, y=None):
        """Negative log of the estimated weighted Chebyshev constant."""
        self._check_fitted()
        return -math.log(self.tw_direct_)


def weighted_leja(
    E,
    w=0.5,
    m: int = 200,
    grid_density: int = 2000,
    seed: int = 0,
    fekete_sweeps: int = 2,
    refine_factor: int = 4,
) -> EquilibriumEstimate:
    est = WeightedLeja(
        weight=_as_weight(w).exponent,
        n_points=m,
        grid_density=grid_density,
        refine_factor=refine_factor,
        fekete_sweeps=fekete_sweeps,
        seed=seed,
    )
    return est.fit(E).estimate_


# --- equilibrium checks ------------------------------------------------


def _segment_log_integral(zeta: np.ndarray, x: np.ndarray) -> np.ndarray:
    # antiderivative in x of log|x - zeta| for real x and complex zeta
    d = x - zeta
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (d * np.log(np.where(d == 0, 1, d))).real - d.real
    return np.where(d == 0, 0.0, val)


def _smeared_potential(points: np.ndarray, E: SlitSet, z: np.ndarray) -> np.ndarray:
    """Potential of the Leja measure with each unit mass spread over its cell.

    Cells are delimited by midpoints between consecutive points on the same
    slit, so the measure keeps mass 1/m per point but has no log poles.
    """
    slits = E.merged().slits
    owner = np.argmin(
        np.stack([_seg_distance(points, a, b) for a, b in slits]), axis=0
    )
    total = np.zeros(z.size)
    m = points.size
    for i, (a, b) in enumerate(slits):
        mine = points[owner == i]
        if mine.size == 0:
            continue
        L = abs(b - a)
        d = (b - a) / L
        t = np.sort(((mine - a) * np.conj(d)).real)
        edges = np.concatenate([[0.0], (t[1:] + t[:-1]) / 2, [L]])
        zeta = (z - a) * np.conj(d)
        lo, hi = edges[:-1], edges[1:]
        width = np.maximum(hi - lo, _TINY)
        for j in range(lo.size):
            avg = (_segment_log_integral(zeta, hi[j]) - _segment_log_integral(zeta, lo[j])) / width[j]
            total -= avg
    return total / m


def potential_profile(est: EquilibriumEstimate, E, grid: int = 2000) -> Tuple[np.ndarray, np.ndarray]:
    """Weighted potential of the point measure along a uniform grid on E.

    Returns (z, U(z) + s log|z|) using the cell-smeared measure.
    """
    E = check_slit_set(E).merged()
    grid = check_positive_int(grid, "grid", minimum=2)
    t = np.linspace(0.0, 1.0, grid)
    z = np.concatenate([a + (b - a) * t for a, b in E.slits])
    pot = _smeared_potential(np.asarray(est.points), E, z)
    if est.weight:
        pot = pot + est.weight * _log_abs(z)
    return z, pot


def equilibrium_constancy_check(
    est: EquilibriumEstimate,
    E,
    w=None,
    grid: int = 2000,
    exclude_fraction: float = 0.01,
) -> float:
    """Spread (max - min) of U^mu + s log|z| over a uniform grid on E.

    The `exclude_fraction` of grid points closest to a slit endpoint are
    ignored. `w` defaults to the weight the estimate was computed with.
    """
    E = check_slit_set(E).merged()
    s = est.weight if w is None else _as_weight(w).exponent
    t = np.linspace(0.0, 1.0, grid)
    z = np.concatenate([a + (b - a) * t for a, b in E.slits])
    ends = np.array([e for ab in E.slits for e in ab])
    dist = np.min(np.abs(z[:, None] - ends[None, :]), axis=1)
    keep = dist > np.quantile(dist, exclude_fraction)
    z = z[keep]
    pot = _smeared_potential(np.asarray(est.points), E, z)
    if s:
        pot = pot + s * _log_abs(z)
    return float(pot.max() - pot.min())


# --- Robinson certificates ---------------------------------------------


@dataclass(frozen=True)
class RobinsonCertificate:
    """Laurent polynomial h_k = z^-k Q_2k with sup norm < 1 on the slit set.

    `coefficients[j + k]` is A_{j,k}, j = -k..k. When |A_{-k,k}| < 1 the
    certificate is normalised to g_k = h_k / A_{-k,k}.
    """

    k: int
    coefficients: tuple
    sup_norm: float
    constant_term_abs: float
    normalized: bool
    normalized_sup_norm: float

    @property
    def valid(self) -> bool:
        """Extreme coefficients of modulus >= 1 and final sup norm < 1."""
        return self.normalized_sup_norm < 1

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "sup_norm": self.sup_norm,
            "constant_term_abs": self.constant_term_abs,
            "normalized": self.normalized,
            "normalized_sup_norm": self.normalized_sup_norm,
            "valid": self.valid,
        }


def robinson_certificate(
    E,
    k: int,
    grid_density: int = 2000,
    seed: int = 0,
    fekete_sweeps: int = 2,
) -> Optional[RobinsonCertificate]:
    """Try to build h_k from 2k weighted Leja points (weight |z|^-1/2).

    Returns None when sup_E |h_k| >= 1.
    """
    E = check_slit_set(E)
    k = check_positive_int(k, "k")
    est = WeightedLeja(
        weight=0.5,
        n_points=max(2 * k, 2),
        grid_density=grid_density,
        fekete_sweeps=fekete_sweeps,
        seed=seed,
    ).fit(E)
    m = 2 * k
    sup = est.tw_direct_**m
    if not sup < 1:
        return None
    coeffs = np.poly(est.points_)[::-1]  # ascending: coefficient of z^(j+k) is A_{j,k}
    const = abs(coeffs[0])
    normalized = const < 1
    if normalized:
        coeffs = coeffs / coeffs[0]
        nsup = sup / const
    else:
        nsup = sup
    return RobinsonCertificate(
        k=k,
        coefficients=tuple(complex(c) for c in coeffs),
        sup_norm=float(sup),
        constant_term_abs=float(const),
        normalized=bool(normalized),
        normalized_sup_norm=float(nsup),
    )
