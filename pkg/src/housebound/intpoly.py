"""Exact integer polynomials.

Coefficients are stored in ascending order (constant term first) as Python
ints, so every operation here is exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional, Sequence

from .errors import InputError

__all__ = [
    "IntPolynomial",
    "CyclotomicReport",
    "LEHMER",
    "graeffe_transform",
    "is_reciprocal",
    "poly_exact_sqrt",
    "decompose_even",
    "is_cyclotomic_product",
    "cyclotomic_report",
    "integer_roots",
]


def _trim(coeffs: Sequence[int]) -> tuple:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (0,)


def _mul(a: Sequence[int], b: Sequence[int]) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, ascending coefficient order.

    >>> IntPolynomial.from_coeffs([1, -3, 1]).degree
    2
    """

    coeffs: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        for c in coeffs:
            # bool is an int subclass but never a coefficient
            if not isinstance(c, int) or isinstance(c, bool):
                raise InputError(f"coefficients must be integers, got {c!r}")
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, name: str = "") -> "IntPolynomial":
        out = []
        for c in coeffs:
            if isinstance(c, str):
                try:
                    c = int(c.strip())
                except ValueError:
                    raise InputError(f"not an integer coefficient: {c!r}") from None
            elif isinstance(c, float):
                if not c.is_integer():
                    raise InputError(f"not an integer coefficient: {c!r}")
                c = int(c)
            out.append(c)
        if not out:
            raise InputError("empty coefficient list")
        return cls(tuple(out), name=name)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial(tuple(_mul(self.coeffs, other.coeffs)))

    def __neg__(self):
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def compose_power(self, k: int) -> "IntPolynomial":
        """Return P(z**k)."""
        out = [0] * (self.degree * k + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return IntPolynomial(tuple(out))

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}{mono}"
            terms.append(("- " if c < 0 else "+ ") + s)
        if not terms:
            return "0"
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_json(self) -> dict:
        return {"name": self.name, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "IntPolynomial":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "coeffs" not in obj:
            raise InputError("polynomial JSON needs a 'coeffs' field")
        if not isinstance(obj["coeffs"], list):
            raise InputError("'coeffs' must be a list")
        return cls.from_coeffs(obj["coeffs"], name=str(obj.get("name", "")))


LEHMER = IntPolynomial((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1), name="lehmer")


def _require_monic(P: IntPolynomial, what: str):
    if P.is_zero() or not P.is_monic():
        raise InputError(f"{what}: polynomial must be monic, got {P}")


def graeffe_transform(P: IntPolynomial) -> IntPolynomial:
    """Monic polynomial whose roots are the squares of the roots of `P`.

    Computed as (-1)^n (E(z)^2 - z O(z)^2) where P(w) = E(w^2) + w O(w^2).
    """
    _require_monic(P, "graeffe_transform")
    if P.degree < 1:
        raise InputError("graeffe_transform: degree must be >= 1")
    even = P.coeffs[0::2]
    odd = P.coeffs[1::2]
    e2 = _mul(even, even)
    zo2 = [0] + (_mul(odd, odd) if odd else [])
    size = max(len(e2), len(zo2))
    e2 += [0] * (size - len(e2))
    zo2 += [0] * (size - len(zo2))
    sign = -1 if P.degree % 2 else 1
    return IntPolynomial(tuple(sign * (a - b) for a, b in zip(e2, zo2)))


def is_reciprocal(P: IntPolynomial) -> bool:
    if P.is_zero():
        raise InputError("is_reciprocal: zero polynomial")
    return P.coeffs == P.coeffs[::-1]


def poly_exact_sqrt(P: IntPolynomial) -> Optional[IntPolynomial]:
    """Monic integer R with R*R == P, or None.

    Coefficients of R are solved from the top degree down; the first
    non-integral coefficient or a nonzero remainder means no root exists.
    """
    _require_monic(P, "poly_exact_sqrt")
    n = P.degree
    if n % 2:
        raise InputError("poly_exact_sqrt: degree must be even")
    d = n // 2
    p = P.coeffs
    r = [0] * (d + 1)
    r[d] = 1
    for j in range(1, d + 1):
        cross = sum(r[d - i] * r[d - j + i] for i in range(1, j))
        num = p[n - j] - cross
        if num % 2:
            return None
        r[d - j] = num // 2
    R = IntPolynomial(tuple(r))
    return R if (R * R).coeffs == p else None


def decompose_even(P: IntPolynomial) -> Optional[IntPolynomial]:
    """R with P(z) = R(z^2), or None when an odd-degree coefficient is nonzero."""
    _require_monic(P, "decompose_even")
    if any(P.coeffs[1::2]):
        return None
    return IntPolynomial(P.coeffs[0::2])


@dataclass(frozen=True)
class CyclotomicReport:
    is_cyclotomic: bool
    iterations: int
    iteration_cap: int
    height_cap: int
    reason: str

    def to_json(self) -> dict:
        return {
            "is_cyclotomic": self.is_cyclotomic,
            "iterations": self.iterations,
            "iteration_cap": self.iteration_cap,
            "height_cap": str(self.height_cap),
            "reason": self.reason,
        }


def cyclotomic_report(P: IntPolynomial) -> CyclotomicReport:
    """Decide whether every root of `P` is a root of unity.

    Iterates the Graeffe transform. If all roots lie on the unit circle every
    iterate satisfies |c_k| <= C(n, k); a repeated iterate means z -> z^(2^p)
    permutes a finite root multiset, which forces roots of unity.
    """
    _require_monic(P, "is_cyclotomic_product")
    if P.coeffs[0] == 0:
        raise InputError("is_cyclotomic_product: zero constant term (root at 0)")
    n = P.degree
    cap = 2 * n + 16
    height = comb(n, n // 2)
    if n == 0:
        return CyclotomicReport(True, 0, cap, height, "constant")
    seen = set()
    Q = P
    for it in range(cap + 1):
        if any(abs(c) > comb(n, k) for k, c in enumerate(Q.coeffs)):
            return CyclotomicReport(False, it, cap, height, "height bound exceeded")
        if Q.coeffs in seen:
            return CyclotomicReport(True, it, cap, height, "graeffe cycle")
        seen.add(Q.coeffs)
        Q = graeffe_transform(Q)
    return CyclotomicReport(False, cap, cap, height, "iteration cap reached")


def is_cyclotomic_product(P: IntPolynomial) -> bool:
    return cyclotomic_report(P).is_cyclotomic


def _divisors(n: int, limit: int = 10**6) -> list:
    n = abs(n)
    if n > limit:
        return [1, n]
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i * i != n:
                out.append(n // i)
        i += 1
    return sorted(out)


def integer_roots(P: IntPolynomial) -> list:
    """Integer roots of a monic polynomial (rational-root screening).

    A nonempty result means P is visibly reducible (for degree > 1).
    Very large constant terms are only screened at +-1 and +-c0.
    """
    if P.coeffs[0] == 0:
        return [0]
    roots = []
    for d in _divisors(P.coeffs[0]):
        for cand in (d, -d):
            if P(cand) == 0:
                roots.append(cand)
    return sorted(set(roots))
