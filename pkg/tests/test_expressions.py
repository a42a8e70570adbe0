import pytest
from sympy import QQ

from braided_yangian.core.errors import ExpressionError
from braided_yangian.core.scalar import h, q, to_scalar
from braided_yangian.utils.expressions import format_rational, format_scalar, parse_expression


def test_parse_polynomial():
    assert parse_expression("q - q^-1") == q - q**-1
    assert parse_expression("2*q*h + 1") == 2 * q * h + 1
    assert parse_expression("(q + 1)/(q - 1)") == (q + 1) / (q - 1)
    assert parse_expression("-3/4") == to_scalar(QQ(-3, 4))


def test_power_operator_aliases():
    assert parse_expression("q**2") == parse_expression("q^2")


def test_decimal_rejected_with_position():
    with pytest.raises(ExpressionError) as info:
        parse_expression("q + 0.5")
    assert info.value.position == 4


def test_unknown_symbol_rejected():
    with pytest.raises(ExpressionError):
        parse_expression("x + 1")


def test_format_rational():
    assert format_rational(QQ(3, 4)) == "3/4"
    assert format_rational(QQ(-2)) == "-2"


@pytest.mark.parametrize("text", ["q - q^-1", "h", "(q^2 + 1)/q", "-3/4"])
def test_format_scalar_parses_back(text):
    value = parse_expression(text)
    assert parse_expression(format_scalar(value)) == value
