import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from housebound.errors import ConvergenceFailure
from housebound.intpoly import LEHMER, IntPolynomial
from housebound.roots import (
    OFF_CIRCLE,
    ON_OR_NEAR,
    classify_circle_roots,
    find_roots,
    house,
    house_report,
    mahler_measure,
    pair_symmetric_roots,
)

# frozen from sympy.nroots(..., n=30) on the Lehmer polynomial
LEHMER_HOUSE = 1.1762808182599175065440703384740350


def test_lehmer_house_and_mahler():
    rep, rs = house_report(LEHMER)
    assert abs(float(rep.house.lo) - LEHMER_HOUSE) < 1e-12
    assert rep.house.width <= 1e-12
    assert abs(float(rep.mahler.mid) - LEHMER_HOUSE) < 1e-12
    assert len(rs) == 10


def test_lehmer_frozen_value_matches_sympy():
    z = sympy.symbols("z")
    roots = sympy.Poly(list(reversed(LEHMER.coeffs)), z).nroots(n=30)
    assert abs(max(abs(complex(r)) for r in roots) - LEHMER_HOUSE) < 1e-14


def test_golden_ratio_square():
    rs = find_roots(IntPolynomial((1, -3, 1)))
    h = house(rs)
    assert abs(float(h.mid) - (3 + math.sqrt(5)) / 2) < 1e-12
    assert classify_circle_roots(rs).status == OFF_CIRCLE


def test_double_root_is_clustered():
    rs = find_roots(IntPolynomial((1, 2, 1)))
    assert rs.multiplicity == (2, 2)
    assert all(abs(z + 1) <= r + 1e-10 for z, r in rs)


def test_circle_classification():
    rs = find_roots(IntPolynomial((1, 1, 1)))
    cls = classify_circle_roots(rs)
    assert cls.status == ON_OR_NEAR and len(cls.offending) == 2


def test_convergence_failure_carries_diagnostics():
    with pytest.raises(ConvergenceFailure) as exc:
        find_roots(IntPolynomial((1, 2, 1)), precision=1e-40, max_dps=40)
    assert exc.value.diagnostics


def test_deterministic_for_fixed_seed():
    a = find_roots(LEHMER, seed=3)
    b = find_roots(LEHMER, seed=3)
    assert a.approximations == b.approximations


def test_pairing_lehmer_has_one_off_circle_pair():
    pairs = pair_symmetric_roots(find_roots(LEHMER))
    off = [p for p in pairs if not p.on_circle]
    assert len(pairs) == 5 and len(off) == 1
    assert abs(abs(off[0].alpha) - LEHMER_HOUSE) < 1e-12
    assert abs(off[0].alpha * np.conj(off[0].beta) - 1) < 1e-12


@st.composite
def monic_reciprocal(draw):
    half = draw(st.lists(st.integers(-6, 6), min_size=0, max_size=3))
    mid = draw(st.integers(-12, 12))
    return IntPolynomial(tuple([1] + half + [mid] + half[::-1] + [1]))


@settings(max_examples=40, deadline=None)
@given(monic_reciprocal())
def test_roots_satisfy_polynomial_and_vieta(P):
    try:
        rs = find_roots(P)
    except ConvergenceFailure:
        return  # high-multiplicity inputs may legitimately exhaust precision
    vals = rs.values
    assert len(vals) == P.degree
    # Vieta: sum of roots = -c_{n-1}
    assert abs(vals.sum() + P.coeffs[-2]) < 1e-6 * (1 + np.abs(vals).sum())
    m = mahler_measure(rs)
    assert float(m.hi) >= 1 - 1e-9
    assert float(house(rs).hi) >= 1 - 1e-9


@settings(max_examples=40, deadline=None)
@given(monic_reciprocal())
def test_pairing_invariant(P):
    try:
        rs = find_roots(P)
    except ConvergenceFailure:
        return
    pairs = pair_symmetric_roots(rs)
    assert 2 * len(pairs) == P.degree
    for p in pairs:
        a, b = complex(p.alpha), complex(p.beta)
        if p.on_circle:
            assert abs(abs(a) - 1) < 1e-6
        else:
            assert abs(a) >= 1 and abs(a * np.conj(b) - 1) < 1e-6


def test_interval_json_is_decimal_strings():
    h = house(find_roots(IntPolynomial((1, -3, 1))))
    js = h.to_json()
    assert mpmath.mpf(js["lo"]) <= mpmath.mpf(js["hi"])
