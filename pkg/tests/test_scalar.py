import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import scalars
from vaobstruction.scalar import IrrationalRoot, Scalar, ScalarArray, nth_roots, root_of_unity, scalar_mul


def S(m, p):
    return Scalar(Fraction(m), Fraction(p))


def test_scalar_mul_examples():
    assert scalar_mul(S(1, "1/2"), S(1, "1/2")) == S(1, 0)
    assert scalar_mul(S(2, 0), S("1/3", "1/4")) == S("2/3", "1/4")
    w = S(1, "1/3")
    assert scalar_mul(scalar_mul(w, w), w) == S(1, 0)


def test_nth_roots_examples():
    assert nth_roots(S(1, "1/2"), 2) == [S(1, "1/4"), S(1, "3/4")]
    assert nth_roots(S(4, 0), 2) == [S(2, 0), S(2, "1/2")]
    with pytest.raises(IrrationalRoot):
        nth_roots(S(2, 0), 2)


def test_text_format():
    assert str(Scalar.parse("1/1@1/2")) == "1/1@1/2"
    assert Scalar.parse("1/1@1/2") == Scalar.from_rational(-1)
    assert Scalar.parse("1").is_one()
    assert str(Scalar()) == "1"
    assert Scalar.parse("-3/4") == S("3/4", "1/2")
    assert Scalar.parse("2@5/4") == S(2, "1/4")
    assert Scalar.from_rational(-5).rational_value() == -5
    assert Scalar(1, "1/4").rational_value() is None


def test_invalid_scalars():
    with pytest.raises(ValueError):
        Scalar(0)
    with pytest.raises(ValueError):
        Scalar(-1)
    with pytest.raises(ValueError):
        Scalar.from_rational(0)
    with pytest.raises(AttributeError):
        Scalar(1).phase = Fraction(1, 2)


@given(scalars(), scalars())
def test_multiplication_matches_complex_numbers(a, b):
    assert cmath.isclose((a * b).to_complex(), a.to_complex() * b.to_complex(), rel_tol=1e-12)


@given(scalars(), scalars(), scalars())
def test_group_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a * a.inverse()).is_one()
    assert a / b * b == a
    assert 0 <= a.phase < 1


@given(scalars(), st.integers(1, 6))
def test_nth_roots_are_roots(a, n):
    a = a ** n  # keep the magnitude a perfect power
    roots = nth_roots(a, n)
    assert len(roots) == n == len(set(roots))
    assert all(r ** n == a for r in roots)


@given(scalars())
def test_text_round_trip(a):
    assert Scalar.parse(str(a)) == a


@given(st.lists(scalars(), min_size=1, max_size=12))
def test_array_round_trip_and_ops(vals):
    arr = ScalarArray.from_scalars(vals)
    back = arr.to_scalars().tolist()
    assert back == vals
    sq = (arr * arr).to_scalars().tolist()
    assert sq == [v * v for v in vals]
    assert (arr / arr).is_one()
    assert (arr * arr.inverse()).is_one()


def test_array_phase_and_magnitude_parts():
    arr = ScalarArray.from_scalars([S(2, "1/3"), S("1/6", "1/2"), S(1, 0)])
    assert arr.shape == (3,)
    assert arr.phases().tolist() == [Fraction(1, 3), Fraction(1, 2), 0]
    assert not arr.magnitude_is_one()
    assert ScalarArray.roots_of_unity(np.array([1, 3]), 4).magnitude_is_one()
    assert root_of_unity(Fraction(1, 4)) == S(1, "1/4")
