"""
Scalar expression grammar used by braiding files, reports and certificates

    expr   = term *[ ('+' | '-') term ]
    term   = unary *[ ('*' | '/') unary ]
    unary  = ('-' | '+') unary | factor
    factor = base [ '^' signed-integer ]
    base   = INTEGER | 'q' | 'h' | '(' expr ')'

Whitespace is insignificant; decimal literals are rejected.
"""
import re
from typing import List, NamedTuple

from sympy import QQ

from ..core.errors import ExpressionError
from ..core.scalar import FIELD, Scalar, h, q

TOKEN_PATTERN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+)|(\d+)|([qh])|(\*\*|[-+*/^()])|(\S))")


class Token(NamedTuple):
    kind: str  # 'int', 'var', 'op', 'end'
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """Split an expression into tokens"""
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if not match:
            # only trailing whitespace left
            break
        decimal, integer, variable, operator, junk = match.groups()
        start = match.start(match.lastindex) if match.lastindex else position
        if decimal is not None:
            raise ExpressionError(f"decimal literal '{decimal}' is not allowed", start, text)
        if junk is not None:
            raise ExpressionError(f"unexpected character '{junk}'", start, text)
        if integer is not None:
            tokens.append(Token("int", integer, start))
        elif variable is not None:
            tokens.append(Token("var", variable, start))
        elif operator is not None:
            tokens.append(Token("op", "^" if operator == "**" else operator, start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    """Recursive-descent parser producing exact Scalars"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _expect(self, text: str):
        if self.current.kind != "op" or self.current.text != text:
            found = self.current.text or "end of input"
            raise ExpressionError(f"expected '{text}', found '{found}'", self.current.position, self.text)
        self._advance()

    def parse(self) -> Scalar:
        if self.current.kind == "end":
            raise ExpressionError("empty expression", 0, self.text)
        value = self.expr()
        if self.current.kind != "end":
            raise ExpressionError(f"unexpected '{self.current.text}'", self.current.position, self.text)
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            operator = self._advance().text
            rhs = self.term()
            value = value + rhs if operator == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            token = self._advance()
            rhs = self.unary()
            if token.text == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise ExpressionError("division by zero", token.position, self.text)
                value = value / rhs
        return value

    def unary(self) -> Scalar:
        if self.current.kind == "op" and self.current.text in "+-":
            sign = self._advance().text
            value = self.unary()
            return -value if sign == "-" else value
        return self.factor()

    def factor(self) -> Scalar:
        base = self.base()
        if self.current.kind == "op" and self.current.text == "^":
            caret = self._advance()
            sign = 1
            if self.current.kind == "op" and self.current.text in "+-":
                sign = -1 if self._advance().text == "-" else 1
            if self.current.kind != "int":
                raise ExpressionError("exponent must be a signed integer", self.current.position, self.text)
            exponent = sign * int(self._advance().text)
            if exponent < 0 and not base:
                raise ExpressionError("zero raised to a negative power", caret.position, self.text)
            return base**exponent
        return base

    def base(self) -> Scalar:
        token = self.current
        if token.kind == "int":
            self._advance()
            return FIELD.convert(int(token.text))
        if token.kind == "var":
            self._advance()
            return q if token.text == "q" else h
        if token.kind == "op" and token.text == "(":
            self._advance()
            value = self.expr()
            self._expect(")")
            return value
        found = token.text or "end of input"
        raise ExpressionError(f"unexpected '{found}'", token.position, self.text)


def parse_expression(text: str) -> Scalar:
    """Parse a grammar expression into an exact Scalar"""
    return ExpressionParser(text).parse()


def format_rational(value) -> str:
    """Rational as 'p/q' (or 'p' when integral)"""
    value = QQ.convert(value)
    numerator, denominator = QQ.numer(value), QQ.denom(value)
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def _format_monomial(eq: int, eh: int) -> str:
    parts = []
    for name, exponent in (("q", eq), ("h", eh)):
        if exponent == 1:
            parts.append(name)
        elif exponent > 1:
            parts.append(f"{name}^{exponent}")
    return "*".join(parts)


def _format_polynomial(poly) -> str:
    """Polynomial in q, h with terms by descending total degree"""
    if not poly:
        return "0"
    terms = sorted(poly.iterterms(), key=lambda item: (-sum(item[0]), -item[0][0]))
    pieces = []
    for index, ((eq, eh), coeff) in enumerate(terms):
        coeff = QQ.convert(coeff)
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        monomial = _format_monomial(eq, eh)
        if not monomial:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{format_rational(magnitude)}*{monomial}"
        if index == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def format_scalar(value: Scalar) -> str:
    """Render a Scalar in the expression grammar (parse_expression inverts it)"""
    if not FIELD.of_type(value):
        value = FIELD.convert(value)
    numerator = _format_polynomial(value.numer)
    if value.denom == value.field.ring.one:
        return numerator
    denominator = _format_polynomial(value.denom)
    if len(value.numer) > 1:
        numerator = f"({numerator})"
    if len(value.denom) > 1 or "*" in denominator or "/" in denominator:
        denominator = f"({denominator})"
    return f"{numerator}/{denominator}"
