import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from housebound.errors import InputError
from housebound.intpoly import (
    LEHMER,
    IntPolynomial,
    cyclotomic_report,
    decompose_even,
    graeffe_transform,
    integer_roots,
    is_cyclotomic_product,
    is_reciprocal,
    poly_exact_sqrt,
)

z = sympy.symbols("z")


def to_sympy(P):
    return sympy.Poly(list(reversed(P.coeffs)), z)


def monic(draw_coeffs):
    return IntPolynomial(tuple(draw_coeffs) + (1,))


small_ints = st.lists(st.integers(-9, 9), min_size=1, max_size=7)


def test_construction_and_trimming():
    P = IntPolynomial((1, -3, 1, 0, 0))
    assert P.coeffs == (1, -3, 1)
    assert P.degree == 2 and P.is_monic()
    assert str(P) == "z^2 - 3z + 1"
    assert IntPolynomial(()).is_zero()


def test_rejects_non_integers():
    with pytest.raises(InputError):
        IntPolynomial((1, 2.5))
    with pytest.raises(InputError):
        IntPolynomial((True, 1))
    with pytest.raises(InputError):
        IntPolynomial.from_coeffs(["1", "x"])


def test_json_roundtrip_big_coefficients():
    P = IntPolynomial((10**40, -(10**39), 1), name="big")
    Q = IntPolynomial.from_json(P.to_json())
    assert Q == P and Q.name == "big"
    assert P.to_json()["coeffs"][0] == str(10**40)


def test_graeffe_known_value():
    # roots of z^2-3z+1 are phi^2, phi^-2; squares are roots of z^2-7z+1
    assert graeffe_transform(IntPolynomial((1, -3, 1))).coeffs == (1, -7, 1)


@settings(max_examples=60, deadline=None)
@given(small_ints)
def test_graeffe_matches_resultant_oracle(cs):
    P = monic(cs)
    n = P.degree
    y = sympy.symbols("y")
    # prod (y - r^2) = (-1)^n P(sqrt y) P(-sqrt y), computed via P(z)P(-z) at z^2=y
    prod = sympy.expand(to_sympy(P).as_expr() * to_sympy(P).as_expr().subs(z, -z) * (-1) ** n)
    oracle = sympy.Poly(prod, z)
    Q = graeffe_transform(P)
    got = [0] * (2 * n + 1)
    for k, c in enumerate(Q.coeffs):
        got[2 * k] = c
    assert list(reversed(oracle.all_coeffs())) == got
    assert Q.is_monic()


@settings(max_examples=60, deadline=None)
@given(small_ints, st.integers(-9, 9))
def test_reciprocity_preserved_by_graeffe(cs, mid):
    # even degree; odd-degree palindromes have the root -1 and flip sign
    half = list(cs)
    P = IntPolynomial(tuple([1] + half + [mid] + half[::-1] + [1]))
    assert is_reciprocal(P)
    assert is_reciprocal(graeffe_transform(P))


@settings(max_examples=60, deadline=None)
@given(small_ints)
def test_exact_sqrt_roundtrip(cs):
    R = monic(cs)
    assert poly_exact_sqrt(R * R) == R
    if R.degree >= 1:
        # (S - R)(S + R) = 1 has no monic solution of positive degree
        sq = list((R * R).coeffs)
        sq[0] += 1
        assert poly_exact_sqrt(IntPolynomial(tuple(sq))) is None


def test_decompose_even():
    P = IntPolynomial((1, 0, -5, 0, 1))
    assert decompose_even(P).coeffs == (1, -5, 1)
    assert decompose_even(IntPolynomial((1, -3, 1))) is None
    assert P.compose_power(1) == P
    assert IntPolynomial((1, -5, 1)).compose_power(2) == P


@pytest.mark.parametrize(
    "coeffs, expected",
    [
        ((1, 1, 1), True),
        ((1, 0, 1), True),
        ((1, -1, 1), True),
        ((1, 1, 1, 1, 1), True),
        ((1, 2, 1), True),
        ((1, -2, 1), True),
        ((1, -3, 1), False),
        (LEHMER.coeffs, False),
        ((1, -1, -1, -1, 1), False),
    ],
)
def test_cyclotomic_detection(coeffs, expected):
    P = IntPolynomial(coeffs)
    rep = cyclotomic_report(P)
    assert rep.is_cyclotomic is expected
    assert rep.iterations <= rep.iteration_cap
    assert is_cyclotomic_product(P) is expected


def test_cyclotomic_products_of_sympy_cyclotomics():
    for ks in [(1, 3), (5, 12), (7,), (2, 2, 9)]:
        expr = sympy.Integer(1)
        for k in ks:
            expr *= sympy.cyclotomic_poly(k, z)
        P = IntPolynomial(tuple(int(c) for c in reversed(sympy.Poly(expr, z).all_coeffs())))
        assert is_cyclotomic_product(P)


def test_cyclotomic_rejects_zero_constant():
    with pytest.raises(InputError):
        cyclotomic_report(IntPolynomial((0, 1)))


def test_integer_roots():
    P = IntPolynomial((-6, 11, -6, 1))
    assert sorted(integer_roots(P)) == [1, 2, 3]
    assert integer_roots(IntPolynomial((1, -3, 1))) == []


@settings(max_examples=60, deadline=None)
@given(small_ints, small_ints)
def test_multiplication_and_evaluation(a, b):
    P, Q = IntPolynomial(tuple(a)), IntPolynomial(tuple(b))
    for x in (-2, 0, 3):
        assert (P * Q)(x) == P(x) * Q(x)
    assert P.derivative().coeffs == tuple(
        int(c) for c in reversed(to_sympy(P).diff(z).all_coeffs())
    ) or P.degree == 0


def _brute_force_cyclotomic(P):
    poly = sympy.Poly(list(reversed(P.coeffs)), z)
    bound = 2 * P.degree**2
    one = sympy.Poly(1, z)
    for f, _ in poly.factor_list()[1]:
        # does f divide z^k - 1 for some k <= bound? walk z^k mod f
        r, hit = one, False
        for _ in range(bound):
            r = (r * sympy.Poly(z, z)).rem(f)
            if r == one.rem(f):
                hit = True
                break
        if not hit:
            return False
    return True


def _small_reciprocal():
    import itertools

    for n in range(1, 7):
        for mid in itertools.product(range(-3, 4), repeat=n // 2):
            half = list(mid[: (n - 1) // 2])
            if n % 2 == 0:
                coeffs = [1] + half + [mid[-1]] + half[::-1] + [1]
            else:
                coeffs = [1] + list(mid) + list(mid)[::-1] + [1]
            if len(coeffs) == n + 1:
                yield IntPolynomial(tuple(coeffs))


def test_cyclotomic_matches_brute_force_small_degrees():
    polys = list(_small_reciprocal())
    assert len(polys) > 400
    for P in polys:
        assert is_cyclotomic_product(P) == _brute_force_cyclotomic(P), P
