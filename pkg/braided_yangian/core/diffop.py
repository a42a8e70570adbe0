"""
Operator-valued rational functions of u and differential operators in d/du over them
"""
import logging
from math import comb, factorial
from typing import Any, Callable, Dict, Optional

from sympy import QQ, symbols

from .errors import PoleError
from .scalar import cleared_degree
from .tensor import TensorOperator

logger = logging.getLogger(__name__)

U_SYMBOL = symbols("u")
U_FIELD = QQ.frac_field(U_SYMBOL)
U = U_FIELD.gens[0]

RationalFunction = Any  # element of U_FIELD


def rational_function(value: Any) -> RationalFunction:
    if U_FIELD.of_type(value):
        return value
    return U_FIELD.convert(value)


def simple_pole(point: Any) -> RationalFunction:
    """1/(u - point)"""
    return (U - rational_function(point))**-1


def evaluate_function(f: RationalFunction, point: Any) -> Any:
    point = QQ.convert(point)
    denominator = f.denom(point)
    if not denominator:
        raise PoleError(f"rational function has a pole at u = {point}")
    return QQ.convert(f.numer(point)) / QQ.convert(denominator)


def residue_of(f: RationalFunction, point: Any) -> Any:
    """Coefficient of (u - point)^{-1} in the Laurent expansion of f at point"""
    point = QQ.convert(point)
    linear = U.numer.ring.gens[0] - point
    order = 0
    denominator = f.denom
    while not denominator % linear:
        denominator = denominator // linear
        order += 1
    if order == 0:
        return QQ.zero
    g = f * (U - rational_function(point))**order
    for _ in range(order - 1):
        g = g.diff(U)
    return evaluate_function(g, point) / factorial(order - 1)


class OpFunction:
    """sum_i f_i(u) X_i with f_i ∈ QQ(u) and constant operators X_i"""

    __slots__ = ("terms", "spaces", "dim")

    def __init__(self, terms: Dict[RationalFunction, TensorOperator], spaces: int, dim: int):
        self.terms = {f: op for f, op in terms.items() if f and not op.is_zero()}
        self.spaces = spaces
        self.dim = dim

    @classmethod
    def constant(cls, op: TensorOperator) -> "OpFunction":
        return cls({U_FIELD.one: op}, op.spaces, op.dim)

    @classmethod
    def zero(cls, spaces: int, dim: int) -> "OpFunction":
        return cls({}, spaces, dim)

    def _accumulate(self, terms: Dict, f: RationalFunction, op: TensorOperator):
        terms[f] = terms[f] + op if f in terms else op

    def __add__(self, other: "OpFunction") -> "OpFunction":
        terms = dict(self.terms)
        for f, op in other.terms.items():
            self._accumulate(terms, f, op)
        return OpFunction(terms, self.spaces, self.dim)

    def __neg__(self) -> "OpFunction":
        return OpFunction({f: -op for f, op in self.terms.items()}, self.spaces, self.dim)

    def __sub__(self, other: "OpFunction") -> "OpFunction":
        return self + (-other)

    def __mul__(self, other: "OpFunction") -> "OpFunction":
        terms: Dict[RationalFunction, TensorOperator] = {}
        for f, x in self.terms.items():
            for g, y in other.terms.items():
                self._accumulate(terms, f * g, x * y)
        return OpFunction(terms, self.spaces, self.dim)

    def times_function(self, g: Any) -> "OpFunction":
        g = rational_function(g)
        return OpFunction({f * g: op for f, op in self.terms.items()}, self.spaces, self.dim)

    def derivative(self) -> "OpFunction":
        terms: Dict[RationalFunction, TensorOperator] = {}
        for f, op in self.terms.items():
            self._accumulate(terms, f.diff(U), op)
        return OpFunction(terms, self.spaces, self.dim)

    def map_operators(self, func: Callable[[TensorOperator], TensorOperator]) -> "OpFunction":
        terms: Dict[RationalFunction, TensorOperator] = {}
        spaces, dim = self.spaces, self.dim
        for f, op in self.terms.items():
            image = func(op)
            spaces, dim = image.spaces, image.dim
            self._accumulate(terms, f, image)
        if not self.terms:
            empty = func(TensorOperator.zero(self.spaces, self.dim))
            spaces, dim = empty.spaces, empty.dim
        return OpFunction(terms, spaces, dim)

    def at(self, point: Any) -> TensorOperator:
        result = TensorOperator.zero(self.spaces, self.dim)
        for f, op in self.terms.items():
            result = result + op.scale(evaluate_function(f, point))
        return result

    def residue(self, point: Any) -> TensorOperator:
        result = TensorOperator.zero(self.spaces, self.dim)
        for f, op in self.terms.items():
            value = residue_of(f, point)
            if value:
                result = result + op.scale(value)
        return result

    def degree_bound(self) -> int:
        """Degree in u of the coefficients brought to a common denominator"""
        return cleared_degree(self.terms.keys(), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"OpFunction(terms={len(self.terms)}, spaces={self.spaces}, dim={self.dim})"


class DiffOpPoly:
    """sum_p c_p(u) ∂^p with OpFunction coefficients; ∂ f = f ∂ + f'"""

    __slots__ = ("coefficients", "spaces", "dim")

    def __init__(self, coefficients: Dict[int, OpFunction], spaces: int, dim: int):
        self.coefficients = {p: c for p, c in coefficients.items() if not c.is_zero()}
        self.spaces = spaces
        self.dim = dim

    @classmethod
    def first_order(cls, function: OpFunction) -> "DiffOpPoly":
        """function - I d/du"""
        identity = OpFunction.constant(TensorOperator.identity(function.spaces, function.dim))
        return cls({0: function, 1: -identity}, function.spaces, function.dim)

    def order(self) -> int:
        return max(self.coefficients, default=0)

    def __mul__(self, other: "DiffOpPoly") -> "DiffOpPoly":
        # (f ∂^p)(g ∂^r) = sum_i C(p, i) f g^(i) ∂^(p - i + r)
        result: Dict[int, OpFunction] = {}
        for p, f in self.coefficients.items():
            for r, g in other.coefficients.items():
                derivative = g
                for i in range(p + 1):
                    term = (f * derivative).times_function(comb(p, i))
                    power = p - i + r
                    result[power] = result[power] + term if power in result else term
                    if i < p:
                        derivative = derivative.derivative()
        return DiffOpPoly(result, self.spaces, self.dim)

    def apply_to_unit(self) -> OpFunction:
        """▷1: every term carrying a derivative annihilates the constant function"""
        return self.coefficients.get(0) or OpFunction.zero(self.spaces, self.dim)


def product_applied_to_unit(factors: "list[OpFunction]") -> OpFunction:
    """(F_1 - ∂)(F_2 - ∂)...(F_k - ∂) ▷ 1"""
    if not factors:
        raise ValueError("need at least one factor")
    result: Optional[DiffOpPoly] = None
    for factor in factors:
        operator = DiffOpPoly.first_order(factor)
        result = operator if result is None else result * operator
    return result.apply_to_unit()
