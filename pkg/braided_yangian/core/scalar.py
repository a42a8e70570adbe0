"""
Exact scalars: rationals and rational functions in the formal parameters q and h
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple, Union

from sympy import QQ, symbols

from .errors import SamplingError

logger = logging.getLogger(__name__)

Q_SYMBOL, H_SYMBOL = symbols("q h")

# All symbolic values live in one field; equality is a representation check
FIELD = QQ.frac_field(Q_SYMBOL, H_SYMBOL)
q, h = FIELD.gens

ZERO = FIELD.zero
ONE = FIELD.one
LAMBDA = q - q**-1

Scalar = Any  # element of FIELD
Rational = Any  # element of QQ

# q = 0 is never admissible; q = +-1 kills q-integers
GENERIC_Q_GUARDS = (q - 1, q + 1)


def to_scalar(value: Union[int, str, Scalar, Rational]) -> Scalar:
    """Convert an integer, rational, grammar string or field element to a Scalar"""
    if isinstance(value, str):
        from ..utils.expressions import parse_expression
        return parse_expression(value)
    if FIELD.of_type(value):
        return value
    return FIELD.convert(value)


def rational(numerator: int, denominator: int = 1) -> Rational:
    """Exact rational p/q"""
    return QQ(numerator, denominator)


def qint(k: int, involutive: bool = False) -> Scalar:
    """q-number k_q = q^{k-1} + q^{k-3} + ... + q^{1-k}; plain k when involutive"""
    if k < 1:
        raise ValueError(f"q-integers are defined for k >= 1, got {k}")
    if involutive:
        return FIELD.convert(k)
    total = ZERO
    for j in range(k):
        total += q**(k - 1 - 2 * j)
    return total


def qfactorial(k: int, involutive: bool = False) -> Scalar:
    """k_q! = 1_q 2_q ... k_q"""
    if k < 1:
        raise ValueError(f"q-factorials are defined for k >= 1, got {k}")
    result = ONE
    for j in range(1, k + 1):
        result *= qint(j, involutive)
    return result


def substitute(value: Scalar, q_value: Optional[Rational] = None,
               h_value: Optional[Rational] = None) -> Scalar:
    """Substitute rational values for q and/or h"""
    pairs = []
    if q_value is not None:
        pairs.append((q, q_value))
    if h_value is not None:
        pairs.append((h, h_value))
    if not pairs:
        return value
    denominator = value.denom.subs([(x.to_poly(), a) for x, a in pairs])
    if not denominator:
        from .errors import PoleError
        raise PoleError(f"denominator of {value.as_expr()} vanishes at {dict((str(x.as_expr()), str(a)) for x, a in pairs)}")
    return value.subs(pairs)


def is_constant(value: Scalar) -> bool:
    """True when the value does not depend on q or h"""
    return value.numer.is_ground and value.denom.is_ground


def to_rational(value: Scalar) -> Rational:
    """Exact rational of a constant Scalar"""
    if not is_constant(value):
        raise ValueError(f"{value.as_expr()} is not a constant")
    return QQ.convert(value.numer.const()) / QQ.convert(value.denom.const())


def degree_bound(value: Scalar, gen: int = 0) -> int:
    """max(deg numerator, deg denominator) in the chosen parameter (0 = q, 1 = h)"""
    if not value:
        return 0
    return max(value.numer.degree(gen), value.denom.degree(gen), 0)


def _lowest_exponent(poly, gen: int) -> int:
    return min(monom[gen] for monom in poly.monoms())


def cleared_degree(values: Iterable[Any], gen: int = 0) -> int:
    """Degree in one parameter of a family of fractions brought to a common denominator.

    The numerators are counted after dividing out the largest power of the parameter
    common to all of them, which never vanishes at a nonzero point. Works for any
    fraction field element (q, h or the spectral parameter u).
    """
    fractions = [value if hasattr(value, "denom") else to_scalar(value) for value in values if value]
    if not fractions:
        return 0
    common = fractions[0].denom
    for value in fractions[1:]:
        common = common.lcm(value.denom)
    numerators = [value.numer * common.exquo(value.denom) for value in fractions]
    shift = min(_lowest_exponent(numerator, gen) for numerator in numerators)
    top = max(numerator.degree(gen) for numerator in numerators)
    return max(top - shift, common.degree(gen), 0)


def minor_degree_bound(row_degrees: Iterable[int], size: int) -> int:
    """Degree bound of any size×size minor of a matrix whose cleared rows have the given degrees"""
    return sum(sorted(row_degrees, reverse=True)[:size])


def depends_on_q(value: Scalar) -> bool:
    return degree_bound(value, 0) > 0


def depends_on_h(value: Scalar) -> bool:
    return degree_bound(value, 1) > 0


def h_slices(value: Scalar) -> Dict[int, Scalar]:
    """Split a value polynomial in h into its h-homogeneous parts {order: coefficient}"""
    if value.denom.degree(1) > 0:
        raise ValueError("h appears in the denominator; no polynomial h-expansion")
    slices: Dict[int, Scalar] = {}
    denominator = FIELD.field.new(value.denom)
    for (eq, eh), coeff in value.numer.iterterms():
        slices[eh] = slices.get(eh, ZERO) + FIELD.convert(coeff) * q**eq
    return {order: part / denominator for order, part in slices.items() if part}


@dataclass(frozen=True)
class SamplePlan:
    """Seeded set of exact rational sample points.

    A univariate polynomial identity of degree <= degree_bound holding at
    every point holds identically, since there are more points than the bound.
    `h_points` is a second axis of the same length; grid plans keep it disjoint
    from `points`. Plans with `widen` set may be replaced by larger plans drawn
    from the same seed when an identity needs a larger bound.
    """
    degree_bound: int
    points: Tuple[Rational, ...]
    seed: int
    h_points: Tuple[Rational, ...] = ()
    excluded: Tuple[Any, ...] = field(default=(), compare=False, repr=False)
    span: int = field(default=97, compare=False, repr=False)
    widen: bool = False

    def __post_init__(self):
        if len(self.points) <= self.degree_bound:
            raise SamplingError(
                f"{len(self.points)} points cannot certify degree {self.degree_bound}")
        if len(set(self.points)) != len(self.points):
            raise SamplingError("sample points must be pairwise distinct")

    def pairs(self) -> Iterable[Tuple[Rational, Rational]]:
        """(q, h) value pairs, h defaulting to the q point list when no h points were drawn"""
        h_points = self.h_points or self.points
        for index, point in enumerate(self.points):
            yield point, h_points[index % len(h_points)]

    def grid(self) -> List[Tuple[Rational, Rational]]:
        """Every (point, h_point) pair; certifies identities of degree <= degree_bound in each variable"""
        if len(self.h_points) <= self.degree_bound:
            raise SamplingError(
                f"{len(self.h_points)} points on the second axis cannot certify degree {self.degree_bound}")
        if set(self.points) & set(self.h_points):
            raise SamplingError("grid axes must be disjoint")
        return [(u, v) for u in self.points for v in self.h_points]

    def certifies(self, degree_bound: int) -> bool:
        return degree_bound <= self.degree_bound

    def widened(self, degree_bound: int, count: Optional[int] = None,
                excluded: Iterable[Any] = ()) -> "SamplePlan":
        """Plan for a larger degree bound from the same seed, with any extra guards"""
        count = max(count or 0, degree_bound + 1, len(self.points))
        excluded = self.excluded + tuple(excluded)
        return make_sample_plan(degree_bound, count, self.seed, excluded, self.span, widen=self.widen)


def _vanishes(poly: Union[Scalar, Callable[[Rational], Rational]], point: Rational) -> bool:
    """Check an excluded polynomial (Scalar in q, or callable) at a point"""
    if callable(poly) and not FIELD.of_type(poly):
        return poly(point) == 0
    value = to_scalar(poly)
    if not value.denom.subs(q.to_poly(), point):
        return True
    return not value.numer.subs(q.to_poly(), point)


def make_sample_plan(degree_bound: int, count: int, seed: int,
                     excluded: Iterable[Any] = (), span: int = 97,
                     max_attempts: int = 2000, widen: bool = False) -> SamplePlan:
    """Draw `count` distinct nonzero rationals avoiding the zeros of `excluded`.

    Args:
        degree_bound: degree of the identities the plan must certify
        count: number of points (must exceed degree_bound)
        seed: RNG seed; equal seeds give equal plans
        excluded: polynomials in q (or callables of one rational) whose zeros are forbidden
        span: numerators in [-span, span], denominators in [1, span]
        widen: allow consumers to grow the plan when an identity needs a larger bound

    Returns:
        SamplePlan
    """
    if degree_bound < 0 or count <= degree_bound:
        raise ValueError(f"need count > degree_bound >= 0 (got count={count}, degree_bound={degree_bound})")

    excluded = tuple(excluded)
    rng = random.Random(seed)

    def draw(avoid: set) -> Rational:
        for _ in range(max_attempts):
            candidate = QQ(rng.randint(-span, span), rng.randint(1, span))
            if candidate == 0 or candidate in avoid:
                continue
            if any(_vanishes(poly, candidate) for poly in excluded):
                logger.debug("Sample point %s rejected by guard", candidate)
                continue
            return candidate
        raise SamplingError(
            f"could not avoid excluded denominators within numerators/denominators up to {span}")

    points = []
    for _ in range(count):
        points.append(draw(set(points)))
    h_points = []
    for _ in range(count):
        h_points.append(draw(set(h_points)))

    logger.debug("Sample plan seed=%s bound=%s points=%s", seed, degree_bound, points)
    return SamplePlan(degree_bound=degree_bound, points=tuple(points), seed=seed,
                      h_points=tuple(h_points), excluded=excluded, span=span, widen=widen)


def make_grid_plan(degree_bound: int, count: int, seed: int,
                   excluded: Iterable[Any] = (), span: int = 97) -> SamplePlan:
    """Two disjoint axes of `count` points each for identities in two variables"""
    flat = make_sample_plan(degree_bound, 2 * count, seed, excluded, span)
    return SamplePlan(degree_bound=degree_bound, points=flat.points[:count], seed=seed,
                      h_points=flat.points[count:], excluded=flat.excluded, span=span)
