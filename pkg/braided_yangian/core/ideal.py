"""
Bounded-degree ideal membership in the free algebra with combination certificates
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from sympy import QQ

from ..models.config import settings
from ..utils.expressions import format_rational, format_scalar, parse_expression
from .errors import InconsistentVerdictError, PoleError, SamplingError
from .freealg import Generator, NCPolynomial, RelationSet, Word, deglex, word_weight
from .scalar import (FIELD, GENERIC_Q_GUARDS, Rational, SamplePlan, Scalar, degree_bound, make_sample_plan,
                     minor_degree_bound, substitute, to_rational)

logger = logging.getLogger(__name__)

Origin = Tuple[Word, int, Word]


class MembershipVerdict(str, Enum):
    MEMBER = "member"
    NOT_DERIVABLE = "not-derivable"


@dataclass(frozen=True)
class CertificateTerm:
    """coefficient · left · relation[relation] · right"""
    left: Word
    relation: int
    right: Word
    coefficient: Scalar


@dataclass
class Certificate:
    """target = sum of terms, with q and h specialized when recorded"""
    terms: List[CertificateTerm]
    q_value: Optional[Rational] = None
    h_value: Optional[Rational] = None
    relations_label: str = ""

    def evaluate(self, relations: RelationSet) -> NCPolynomial:
        total = NCPolynomial.zero()
        for term in self.terms:
            relation = relations[term.relation]
            if self.q_value is not None or self.h_value is not None:
                relation = relation.specialize(self.q_value, self.h_value)
            left = NCPolynomial({term.left: 1})
            right = NCPolynomial({term.right: 1})
            total = total + (left * relation * right).scale(term.coefficient)
        return total

    def recheck(self, target: NCPolynomial, relations: RelationSet) -> bool:
        """Re-evaluate the combination exactly and compare with the target"""
        if self.q_value is not None or self.h_value is not None:
            target = target.specialize(self.q_value, self.h_value)
        return self.evaluate(relations) == target

    def to_json(self) -> Dict[str, Any]:
        return {
            "relations": self.relations_label,
            "q_value": format_rational(self.q_value) if self.q_value is not None else None,
            "h_value": format_rational(self.h_value) if self.h_value is not None else None,
            "terms": [{"left": [list(g) for g in term.left],
                       "relation": term.relation,
                       "right": [list(g) for g in term.right],
                       "coefficient": format_scalar(term.coefficient)} for term in self.terms],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Certificate":
        def word(items) -> Word:
            return tuple(Generator(*item) for item in items)

        def rational(text):
            return to_rational(parse_expression(text)) if text is not None else None

        terms = [CertificateTerm(word(item["left"]), int(item["relation"]), word(item["right"]),
                                 parse_expression(item["coefficient"])) for item in data.get("terms", [])]
        return cls(terms, rational(data.get("q_value")), rational(data.get("h_value")),
                   data.get("relations", ""))


@dataclass
class MembershipResult:
    verdict: MembershipVerdict
    certificate: Optional[Certificate] = None
    mode: str = "exact"
    rows: int = 0
    rank: int = 0
    points: List[Tuple[Optional[Rational], Optional[Rational]]] = field(default_factory=list)

    @property
    def member(self) -> bool:
        return self.verdict == MembershipVerdict.MEMBER


class IdealSpan:
    """Semi-echelon basis with pairwise distinct deglex-leading words.

    Every nonzero vector of the span has its leading word among the pivots, so a target
    reduces to zero exactly when it is a member.
    """

    def __init__(self, domain, track: bool = True):
        self.domain = domain
        self.track = track
        self.pivots: Dict[Word, Tuple[Dict[Word, Any], Dict[int, Any]]] = {}
        self.rows = 0

    def _axpy(self, target: Dict, source: Dict, factor):
        for key, value in source.items():
            total = target.get(key, self.domain.zero) + factor * value
            if total:
                target[key] = total
            else:
                target.pop(key, None)

    def add(self, row: Dict[Word, Any], origin: int) -> bool:
        """Insert a row; False when it was already in the span"""
        self.rows += 1
        row = dict(row)
        combo = {origin: self.domain.one} if self.track else {}
        while row:
            lead = max(row, key=deglex)
            pivot = self.pivots.get(lead)
            if pivot is None:
                inverse = self.domain.one / row[lead]
                row = {word: value * inverse for word, value in row.items()}
                combo = {key: value * inverse for key, value in combo.items()}
                self.pivots[lead] = (row, combo)
                return True
            factor = -row[lead]
            self._axpy(row, pivot[0], factor)
            if self.track:
                self._axpy(combo, pivot[1], factor)
        return False

    def reduce(self, target: Dict[Word, Any]) -> Tuple[Dict[Word, Any], Dict[int, Any]]:
        """(remainder, combination) with target = remainder + sum combination[origin]·row(origin)"""
        remainder = dict(target)
        combination: Dict[int, Any] = {}
        while remainder:
            lead = max(remainder, key=deglex)
            pivot = self.pivots.get(lead)
            if pivot is None:
                break
            factor = remainder[lead]
            self._axpy(remainder, pivot[0], -factor)
            if self.track:
                self._axpy(combination, pivot[1], factor)
        return remainder, combination

    @property
    def rank(self) -> int:
        return len(self.pivots)


@lru_cache(maxsize=None)
def _words(letters: Tuple[Generator, ...], length: int) -> Tuple[Word, ...]:
    """All words of exactly the given length, deglex order"""
    if length == 0:
        return ((),)
    return tuple(sorted((prefix + (g,) for prefix in _words(letters, length - 1) for g in letters)))


def words_up_to(letters: Sequence[Generator], max_length: int, max_weight: Optional[int] = None,
                exact_weight: Optional[int] = None) -> List[Word]:
    """Words of length <= max_length, optionally bounded (or fixed) in weight, deglex order"""
    letters = tuple(sorted(letters))
    result = []
    for length in range(max_length + 1):
        for word in _words(letters, length):
            weight = word_weight(word)
            if max_weight is not None and weight > max_weight:
                continue
            if exact_weight is not None and weight != exact_weight:
                continue
            result.append(word)
    return result


def span_origins(target: NCPolynomial, relations: RelationSet, degree_cap: int) -> List[Origin]:
    """Triples (left, relation id, right) whose products may contribute to the target's span.

    Weight-graded relation sets use only products of the target's weights; filtered sets
    use products whose top weight does not exceed the target's; ungraded sets only cap degree.
    """
    letters = relations.alphabet
    origins: List[Origin] = []
    target_weights = target.weights() if relations.grading != "none" else []
    top = max(target_weights, default=0)
    for index, relation in enumerate(relations):
        budget = degree_cap - relation.degree()
        if budget < 0:
            continue
        r_weights = relation.weights()
        if relations.grading == "weight":
            needed = sorted({w - r_weights[0] for w in target_weights if w >= r_weights[0]})
            pairs = []
            for extra in needed:
                for left in words_up_to(letters, budget, max_weight=extra):
                    rest = extra - word_weight(left)
                    for right in words_up_to(letters, budget - len(left), exact_weight=rest):
                        pairs.append((left, right))
        elif relations.grading == "filtered":
            extra = top - max(r_weights)
            if extra < 0:
                continue
            pairs = [(left, right)
                     for left in words_up_to(letters, budget, max_weight=extra)
                     for right in words_up_to(letters, budget - len(left),
                                              max_weight=extra - word_weight(left))]
        else:
            pairs = [(left, right)
                     for left in words_up_to(letters, budget)
                     for right in words_up_to(letters, budget - len(left))]
        origins.extend((left, index, right) for left, right in pairs)
    return origins


def _converter(domain, q_value, h_value):
    if domain == QQ:
        return lambda value: to_rational(substitute(value, q_value, h_value))
    return lambda value: value


def _row(origin: Origin, relations: Sequence[Dict[Word, Any]]) -> Dict[Word, Any]:
    left, index, right = origin
    return {left + word + right: value for word, value in relations[index].items()}


def _run_elimination(target: NCPolynomial, relations: RelationSet, origins: List[Origin], domain,
                     q_value=None, h_value=None, track: bool = True):
    convert = _converter(domain, q_value, h_value)
    converted = [{word: convert(value) for word, value in r.terms.items()} for r in relations]
    converted = [{w: v for w, v in r.items() if v} for r in converted]
    span = IdealSpan(domain, track)
    for index, origin in enumerate(origins):
        span.add(_row(origin, converted), index)
    goal = {word: convert(value) for word, value in target.terms.items()}
    goal = {w: v for w, v in goal.items() if v}
    remainder, combination = span.reduce(goal)
    logger.debug("Elimination over %s: rows=%s rank=%s remainder=%s", domain, span.rows, span.rank, len(remainder))
    return not remainder, combination, span


def _certificate(combination: Dict[int, Any], origins: List[Origin], relations: RelationSet,
                 q_value=None, h_value=None) -> Certificate:
    terms = []
    for index in sorted(combination):
        value = combination[index]
        if not value:
            continue
        left, relation, right = origins[index]
        terms.append(CertificateTerm(left, relation, right, FIELD.convert(value)))
    return Certificate(terms, q_value, h_value, relations.label)


def default_ideal_plan(seed: Optional[int] = None, count: Optional[int] = None) -> SamplePlan:
    seed = settings.default_seed if seed is None else seed
    count = settings.ideal_points if count is None else count
    return make_sample_plan(0, count, seed, excluded=GENERIC_Q_GUARDS, span=settings.sample_span, widen=True)


def ideal_member(p: NCPolynomial, relations: RelationSet, degree_cap: int,
                 plan: Optional[SamplePlan] = None, q_mode: str = "symbolic",
                 certificates: bool = True) -> MembershipResult:
    """Decide p ∈ span{w·r·w' : deg <= degree_cap} by exact elimination.

    Constant-coefficient problems are solved once over QQ. Otherwise symbolic mode eliminates
    over QQ(q, h) when the span is small enough. Sampled mode eliminates at plan points, widening
    the plan until the points decide the generic verdict.
    """
    if p.degree() > degree_cap:
        raise ValueError(f"polynomial degree {p.degree()} exceeds the cap {degree_cap}")
    if p.is_zero():
        return MembershipResult(MembershipVerdict.MEMBER, Certificate([], relations_label=relations.label))

    if relations.grading == "weight":
        components = p.weight_components()
        if len(components) > 1:
            return _merge_components([ideal_member(component, relations, degree_cap, plan, q_mode, certificates)
                                      for component in components.values()])

    origins = span_origins(p, relations, degree_cap)
    if p.is_constant_coefficient() and relations.is_constant_coefficient():
        member, combination, span = _run_elimination(p, relations, origins, QQ, track=certificates)
        return _result(member, combination, origins, relations, span, "exact", certificates)

    if q_mode == "symbolic" and len(origins) <= settings.symbolic_row_limit:
        member, combination, span = _run_elimination(p, relations, origins, FIELD, track=certificates)
        return _result(member, combination, origins, relations, span, "symbolic", certificates)

    return _sampled_membership(p, relations, origins, plan or default_ideal_plan(), certificates)


def _coefficients(p: NCPolynomial, relations: RelationSet) -> List[Scalar]:
    return [value for poly in (p, *relations) for value in poly.terms.values() if value]


def _pole_guards(values: List[Scalar], gens: Sequence[int]) -> Tuple[Callable, ...]:
    """Callables vanishing where a denominator of the problem has a factor (x - point)"""
    denominators = []
    for value in values:
        if value.denom not in denominators:
            denominators.append(value.denom)
    return tuple(lambda x, d=d, g=gen: d.evaluate(g, x)
                 for d in denominators for gen in gens if d.degree(gen) > 0)


def _sample_points(plan: SamplePlan, gens: Sequence[int], counts: Dict[int, int]) -> List[Tuple]:
    if len(gens) == 2:
        h_axis = plan.h_points or plan.points
        return [(u, v) for u in plan.points[:counts[0]] for v in h_axis[:counts[1]]]
    gen = gens[0]
    return [(x, None) if gen == 0 else (None, x) for x in plan.points[:counts[gen]]]


def _available(plan: SamplePlan, gens: Sequence[int]) -> Dict[int, int]:
    if len(gens) == 2:
        return {0: len(plan.points), 1: len(plan.h_points or plan.points)}
    return {gens[0]: len(plan.points)}


def _sampled_membership(p: NCPolynomial, relations: RelationSet, origins: List[Origin],
                        plan: SamplePlan, certificates: bool) -> MembershipResult:
    """Membership at sample points with enough points to decide the generic verdict.

    With r' the largest augmented rank seen, every (r'+1)-minor of the cleared augmented
    matrix vanishes at all points. Its degree in each parameter is at most the sum of the
    r'+1 largest row degrees, so once each axis has more points than that sum the minors
    vanish identically and the largest sampled ranks are the generic ones.
    """
    values = _coefficients(p, relations)
    gens = [gen for gen in (0, 1) if any(degree_bound(value, gen) > 0 for value in values)]
    row_degrees = {gen: [relations[index].degree_bound(gen) for _, index, _ in origins] + [p.degree_bound(gen)]
                   for gen in gens}
    if plan.widen:
        plan = plan.widened(plan.degree_bound, excluded=_pole_guards(values, gens))

    outcomes: Dict[Tuple, Tuple] = {}
    counts = _available(plan, gens)
    while True:
        points = _sample_points(plan, gens, counts)
        for point in points:
            if point not in outcomes:
                q_value, h_value = point
                try:
                    outcomes[point] = _run_elimination(p, relations, origins, QQ, q_value, h_value,
                                                       track=certificates)
                except PoleError as e:
                    raise SamplingError(f"sample point q={q_value}, h={h_value} hits a pole: {e}")
        rank = max(outcomes[point][2].rank for point in points)
        augmented = max(outcomes[point][2].rank + (0 if outcomes[point][0] else 1) for point in points)
        required = {gen: minor_degree_bound(row_degrees[gen], augmented + 1) + 1 for gen in gens}
        logger.debug("Sampled ranks: rows=%s augmented=%s, points needed per axis %s", rank, augmented, required)
        available = _available(plan, gens)
        if all(available[gen] >= required[gen] for gen in gens):
            if all(counts[gen] >= required[gen] for gen in gens):
                break
            counts = {gen: max(counts[gen], required[gen]) for gen in gens}
            continue
        if math.prod(required.values()) > settings.max_sample_points:
            logger.info("Sampling would need %s evaluations; eliminating over QQ(q, h) instead",
                        math.prod(required.values()))
            member, combination, span = _run_elimination(p, relations, origins, FIELD, track=certificates)
            return _result(member, combination, origins, relations, span, "symbolic", certificates)
        if not plan.widen:
            raise SamplingError(f"{available} sample points per parameter cannot decide membership; "
                                f"{required} are needed")
        need = max(required.values())
        plan = plan.widened(need - 1, count=need + settings.sample_margin)
        counts = required

    member = augmented == rank
    chosen = [point for point in points if outcomes[point][0] == member]
    if not chosen:
        raise InconsistentVerdictError(
            f"generic verdict is {'member' if member else 'not member'} but no sample point agrees")
    q_value, h_value = chosen[0]
    _, combination, span = outcomes[chosen[0]]
    result = _result(member, combination, origins, relations, span, "sampled", certificates, q_value, h_value)
    result.points = points
    return result


def _result(member: bool, combination, origins, relations, span: IdealSpan, mode: str,
            certificates: bool, q_value=None, h_value=None) -> MembershipResult:
    if not member:
        logger.debug("Not derivable at this truncation (%s rows, rank %s)", span.rows, span.rank)
        return MembershipResult(MembershipVerdict.NOT_DERIVABLE, None, mode, span.rows, span.rank)
    certificate = _certificate(combination, origins, relations, q_value, h_value) if certificates else None
    return MembershipResult(MembershipVerdict.MEMBER, certificate, mode, span.rows, span.rank)


def _merge_components(results: List[MembershipResult]) -> MembershipResult:
    """A weight-graded target is a member iff each weight component is"""
    rows = sum(r.rows for r in results)
    rank = sum(r.rank for r in results)
    modes = sorted({r.mode for r in results})
    mode = modes[0] if len(modes) == 1 else "+".join(modes)
    if not all(r.member for r in results):
        return MembershipResult(MembershipVerdict.NOT_DERIVABLE, None, mode, rows, rank)
    certificate = None
    if all(r.certificate is not None for r in results):
        values = {(r.certificate.q_value, r.certificate.h_value) for r in results if r.certificate.terms}
        if len(values) <= 1:
            q_value, h_value = values.pop() if values else (None, None)
            terms = [term for r in results for term in r.certificate.terms]
            certificate = Certificate(terms, q_value, h_value, results[0].certificate.relations_label)
    points = results[0].points
    return MembershipResult(MembershipVerdict.MEMBER, certificate, mode, rows, rank, points)
