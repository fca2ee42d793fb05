from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncf4.field import PrimeField, RationalField
from ncf4.io import ParseError, format_poly, format_word, parse_poly, parse_problem
from ncf4.order import Ordering

Q = RationalField()


def test_basic_problem():
    pr = parse_problem("vars x y\norder deglex\nchar 0\npoly x*y*x - x*y")
    assert pr.varnames == ["x", "y"]
    assert pr.ordering == Ordering.deglex(2)
    assert pr.characteristic == 0
    assert pr.polys == [{(1, 2, 1): 1, (1, 2): -1}]


def test_defaults_comments_and_blocks():
    pr = parse_problem("# header\n\nvars a b c   # three\norder blocks 1 2 2\npoly a^2*b - 1/3\n")
    assert pr.ordering == Ordering.blocks([1, 2, 2])
    assert pr.characteristic == 0
    assert pr.polys == [{(1, 1, 2): 1, (): Fraction(-1, 3)}]


def test_mersenne_characteristic_accepted():
    pr = parse_problem("vars x\nchar 2147483647\npoly x - 1")
    assert pr.polys == [{(1,): 1, (): 2147483646}]


@pytest.mark.parametrize("text, line", [
    ("vars x\nchar 2147483648", 2),
    ("vars x\npoly x*z", 2),
    ("vars x\npoly x + 2*x", 2),
    ("vars x\nchar 7\npoly 1/2*x", 3),
    ("vars x\npoly 2*3*x", 2),
    ("vars x\npoly x - x", 2),
    ("vars x\npoly 0*x", 2),
    ("vars x\npoly x^0", 2),
    ("vars x\npoly x +", 2),
    ("vars x\npoly x $ 1", 2),
    ("vars x\nchar 7\npoly 7*x", 3),
    ("vars x\norder lex", 2),
    ("vars x y\norder blocks 1", 2),
    ("vars x x", 1),
    ("vars 2x", 1),
    ("vars x\nfoo", 2),
])
def test_diagnostics_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_problem(text)
    assert err.value.line == line


def test_missing_vars():
    with pytest.raises(ParseError):
        parse_problem("poly 1")


def test_format_examples():
    assert format_word((), ["x"]) == "1"
    assert format_word((1, 2, 2, 1), ["x", "y"]) == "x*y^2*x"
    terms = [(1, (2, 1)), (-1, (1, 2))]
    assert format_poly(terms, ["x", "y"], Q) == "y*x - x*y"
    assert format_poly([(Fraction(-1, 2), (1,)), (3, ())], ["x"], Q) == "-1/2*x + 3"
    assert format_poly([(6, (1,))], ["x"], PrimeField(7)) == "-x"
    assert format_poly([], ["x"], Q) == "0"


coeffs = st.fractions(min_value=-50, max_value=50, max_denominator=20).filter(bool)
polys = st.dictionaries(st.lists(st.integers(1, 3), max_size=5).map(tuple), coeffs, min_size=1, max_size=6)


@given(polys)
def test_round_trip_rational(poly):
    names = ["x", "y", "z"]
    text = format_poly(sorted(((c, w) for w, c in poly.items()), key=lambda t: (len(t[1]), t[1]), reverse=True),
                       names, Q)
    assert parse_poly(text, {n: i + 1 for i, n in enumerate(names)}, Q) == poly


@given(st.dictionaries(st.lists(st.integers(1, 2), max_size=4).map(tuple), st.integers(1, 12), min_size=1))
def test_round_trip_mod_p(poly):
    F = PrimeField(13)
    text = format_poly([(c, w) for w, c in poly.items()], ["a", "b"], F)
    assert parse_poly(text, {"a": 1, "b": 2}, F) == poly
