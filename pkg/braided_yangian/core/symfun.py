"""
Quantum symmetric functions of the braided Yangian and the suites that verify their properties
"""
import logging
import time
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..models.report import CheckRecord, CheckStatus
from ..utils.expressions import format_scalar
from ..utils.parallel import ordered_map
from .braiding import Braiding, birank, c_matrix, symmetrizer
from .freealg import (NCMatrix, NCPolynomial, NCSeriesMatrix, RelationSet, default_case, generating_matrix,
                      shift_slices, shifted_copy, shifted_relation_coefficients, yangian_relations)
from .ideal import Certificate, MembershipResult, ideal_member
from .scalar import SamplePlan, Scalar, h as H, to_scalar

logger = logging.getLogger(__name__)


@dataclass
class SymSeries:
    """Truncated series sum_a coefficients[a] u^{-a} with NCPolynomial coefficients"""
    label: str
    truncation: int
    coefficients: Dict[int, NCPolynomial]
    case: str
    notes: List[str] = field(default_factory=list)

    @classmethod
    def constant(cls, value: Any, truncation: int, case: str, label: str = "1") -> "SymSeries":
        return cls(label, truncation, {0: NCPolynomial.constant(value)}, case)

    def coefficient(self, a: int) -> NCPolynomial:
        return self.coefficients.get(a) or NCPolynomial.zero()

    def orders(self) -> range:
        return range(self.truncation + 1)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients.values())

    def degree(self) -> int:
        return max((c.degree() for c in self.coefficients.values()), default=0)

    def scale(self, value: Any) -> "SymSeries":
        return SymSeries(self.label, self.truncation,
                         {a: c.scale(value) for a, c in self.coefficients.items()}, self.case)

    def __add__(self, other: "SymSeries") -> "SymSeries":
        coefficients = dict(self.coefficients)
        for a, c in other.coefficients.items():
            coefficients[a] = coefficients[a] + c if a in coefficients else c
        return SymSeries(self.label, min(self.truncation, other.truncation), coefficients, self.case)

    def __sub__(self, other: "SymSeries") -> "SymSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "SymSeries") -> "SymSeries":
        T = min(self.truncation, other.truncation)
        coefficients: Dict[int, NCPolynomial] = {}
        for a, left in self.coefficients.items():
            for b, right in other.coefficients.items():
                if a + b <= T:
                    product = left * right
                    coefficients[a + b] = coefficients[a + b] + product if a + b in coefficients else product
        return SymSeries(f"{self.label}*{other.label}", T, coefficients, self.case)

    def shifted(self, mode: str, j: int, q: Optional[Scalar] = None) -> "SymSeries":
        coefficients, _ = shift_slices(self.coefficients, self.truncation, mode, j, q)
        return SymSeries(self.label, self.truncation, coefficients, self.case)

    def specialize(self, q_value=None, h_value=None) -> "SymSeries":
        return SymSeries(self.label, self.truncation,
                         {a: c.specialize(q_value, h_value) for a, c in self.coefficients.items()}, self.case)

    def format(self) -> str:
        return " + ".join(f"[{self.coefficient(a).format()}]u^-{a}" for a in self.orders())


def _copies(L: NCSeriesMatrix, B: Braiding, positions: Sequence[int], shifts: Sequence[int],
            n: int, case: str) -> NCSeriesMatrix:
    product = None
    for position, j in zip(positions, shifts):
        copy = shifted_copy(L, B, position, n, j, case)
        product = copy if product is None else product * copy
    return product


def _traced(series: NCSeriesMatrix, B: Braiding, count: int) -> Dict[int, NCMatrix]:
    """R-trace of the trailing `count` spaces of every slice"""
    C = c_matrix(B)
    return {a: matrix.partial_trace(count, C) for a, matrix in series.slices.items()}


def _scalar_series(traced: Dict[int, NCMatrix]) -> Dict[int, NCPolynomial]:
    return {a: matrix[(0, 0)] for a, matrix in traced.items()}


def _zero_series(label: str, L: NCSeriesMatrix, case: str, note: str) -> SymSeries:
    logger.warning("%s: %s", label, note)
    return SymSeries(label, L.truncation, {}, case, [note])


def elementary_sym(B: Braiding, L: NCSeriesMatrix, k: int, case: Optional[str] = None) -> SymSeries:
    """e_k(u) = Tr_R A^(k) L_1̄(u) L_2̄(q^-2 u) ... L_k̄(q^{-2(k-1)} u); rational: u, u-1, ..., u-k+1"""
    case = case or default_case(B)
    label = f"e_{k}"
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > birank(B):
        return _zero_series(label, L, case, f"k={k} exceeds the bi-rank {birank(B)}; A^({k}) = 0")
    product = _copies(L, B, range(1, k + 1), range(k), k, case)
    full = symmetrizer(B, k) * product
    return SymSeries(label, L.truncation, _scalar_series(_traced(full, B, k)), case)


def power_sum(B: Braiding, L: NCSeriesMatrix, k: int, case: Optional[str] = None) -> SymSeries:
    """p_k(u) = Tr_R L_1̄(q^{-2(k-1)} u) ... L_k̄(u) R_{k-1} ... R_1"""
    case = case or default_case(B)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    product = _copies(L, B, range(1, k + 1), range(k - 1, -1, -1), k, case)
    tail = B.identity(k)
    for position in range(k - 1, 0, -1):
        tail = tail * B.at(position, k)
    full = product * tail
    return SymSeries(f"p_{k}", L.truncation, _scalar_series(_traced(full, B, k)), case)


def shifted_elementary(B: Braiding, L: NCSeriesMatrix, k: int, variant: str = "top") -> SymSeries:
    """ê_k(u) = Tr_R A^(m) L_1̄(u) L_2̄(u-h) ... L_k̄(u-h(k-1)) over m spaces.

    variant "own" uses A^(k) over k spaces instead of the top symmetrizer.
    """
    if not B.is_involutive:
        raise ValueError("ê_k is defined for involutive braidings")
    m = birank(B)
    if k > m:
        return _zero_series(f"ê_{k}", L, "h", f"k={k} exceeds the bi-rank {m}")
    n = m if variant == "top" else k
    if n == 0:
        return SymSeries.constant(1, L.truncation, "h", "ê_0")
    A = symmetrizer(B, n)
    if k == 0:
        value = to_scalar(A.partial_trace(n, c_matrix(B))[(0, 0)])
        return SymSeries.constant(value, L.truncation, "h", "ê_0")
    product = _copies(L, B, range(1, k + 1), range(k), n, "h")
    full = A * product
    return SymSeries(f"ê_{k}", L.truncation, _scalar_series(_traced(full, B, n)), "h")


def tau_combination(ehat: Sequence[SymSeries], k: int) -> SymSeries:
    """τ_k(u) = sum_p (-1)^{k-p} C(k, p) ê_p(u)"""
    if len(ehat) <= k:
        raise ValueError(f"need ê_0 .. ê_{k}")
    total = None
    for p in range(k + 1):
        term = ehat[p].scale((-1)**(k - p) * comb(k, p))
        total = term if total is None else total + term
    total.label = f"τ_{k}"
    return total


def newton_combination(B: Braiding, e: Dict[int, SymSeries], p: Dict[int, SymSeries], k: int) -> SymSeries:
    """k_q e_k(u) + sum_j (-1)^j q^{k-j} p_j(shifted by k-j) e_{k-j}(u)"""
    case = e[k].case
    total = e[k].scale(B.qint(k))
    for j in range(1, k + 1):
        shifted = p[j].shifted(case, k - j, q=B.q)
        term = shifted * e[k - j]
        total = total + term.scale((-1)**j * B.q**(k - j))
    total.label = f"newton_{k}"
    return total


# Membership bookkeeping

@dataclass
class CertifiedIdentity:
    """A target polynomial with a certificate of ideal membership"""
    target: NCPolynomial
    certificate: Certificate
    relations: RelationSet

    def recheck(self) -> bool:
        return self.certificate.recheck(self.target, self.relations)

    def to_json(self) -> Dict[str, Any]:
        data = self.certificate.to_json()
        data["target"] = self.target.format()
        return data


@dataclass
class Outcome:
    status: CheckStatus
    detail: str
    witness: Optional[str] = None
    certified: List[CertifiedIdentity] = field(default_factory=list)


def membership_outcome(poly: NCPolynomial, relations: RelationSet, degree_cap: int,
                       plan: Optional[SamplePlan] = None, q_mode: str = "symbolic",
                       certificates: bool = True) -> Outcome:
    """Classify one polynomial: zero, certified member, or not derivable at (T, D)"""
    if poly.is_zero():
        return Outcome(CheckStatus.PASS, "identically zero")
    if poly.degree() > degree_cap:
        return Outcome(CheckStatus.INCONCLUSIVE, f"degree {poly.degree()} exceeds D={degree_cap}")
    result: MembershipResult = ideal_member(poly, relations, degree_cap, plan, q_mode, certificates)
    if not result.member:
        logger.warning("Not derivable at T=%s, D=%s (%s rows, rank %s)",
                       relations.truncation, degree_cap, result.rows, result.rank)
        return Outcome(CheckStatus.INCONCLUSIVE,
                       f"not derivable at T={relations.truncation}, D={degree_cap} (rows={result.rows}, rank={result.rank})")
    detail = f"member ({result.mode}, rows={result.rows}, rank={result.rank})"
    if result.certificate is None:
        return Outcome(CheckStatus.PASS, detail)
    certified = CertifiedIdentity(poly, result.certificate, relations)
    if not certified.recheck():
        return Outcome(CheckStatus.FAIL, detail, witness="certificate does not re-evaluate to the target")
    return Outcome(CheckStatus.PASS, detail, certified=[certified])


def combine(outcomes: Iterable[Outcome]) -> Outcome:
    """fail beats inconclusive beats pass; certificates are pooled"""
    outcomes = list(outcomes)
    certified = [c for o in outcomes for c in o.certified]
    for status in (CheckStatus.FAIL, CheckStatus.INCONCLUSIVE):
        bad = [o for o in outcomes if o.status == status]
        if bad:
            return Outcome(status, f"{len(bad)} of {len(outcomes)} entries: {bad[0].detail}",
                           bad[0].witness, certified)
    members = sum(1 for o in outcomes if o.certified)
    return Outcome(CheckStatus.PASS, f"{len(outcomes)} entries, {members} certified members", None, certified)


def to_record(check_id: str, parameters: Dict[str, Any], outcome: Outcome, started: float) -> CheckRecord:
    return CheckRecord.build(check_id, parameters, status=outcome.status, witness=outcome.witness,
                             detail=outcome.detail, started=started,
                             certificates=outcome.certified)


def _base(B: Braiding, T: int, D: Optional[int] = None, **extra) -> Dict[str, Any]:
    base = {"braiding": B.label, "T": T}
    if D is not None:
        base["D"] = D
    base.update(extra)
    return base


# Suites

def verify_newton(B: Braiding, kmax: int, T: int, D: int, case: Optional[str] = None,
                  plan: Optional[SamplePlan] = None, q_mode: str = "symbolic",
                  certificates: bool = True, workers: int = 1) -> List[CheckRecord]:
    """Newton identities per u-coefficient; k = 1 must vanish in the free algebra"""
    case = case or default_case(B)
    m = birank(B)
    L = generating_matrix(B.dim, T)
    top = min(kmax, m)
    e = {0: SymSeries.constant(1, T, case, "e_0")}
    p: Dict[int, SymSeries] = {}
    for k in range(1, top + 1):
        e[k] = elementary_sym(B, L, k, case)
        p[k] = power_sum(B, L, k, case)
    relations = yangian_relations(B, T, case) if top > 1 else None
    records: List[CheckRecord] = []
    for k in range(top + 1, kmax + 1):
        records.append(CheckRecord.build("newton", _base(B, T, D, k=k, case=case), status=CheckStatus.SKIPPED,
                                         detail=f"k exceeds the bi-rank {m}"))

    def check(task: Tuple[int, int]) -> CheckRecord:
        k, a = task
        started = time.perf_counter()
        poly = newton_combination(B, e, p, k).coefficient(a)
        params = _base(B, T, D, k=k, order=a, case=case)
        if k == 1:
            outcome = Outcome(CheckStatus.PASS, "identically zero") if poly.is_zero() else \
                Outcome(CheckStatus.FAIL, "e_1 - p_1 is nonzero", witness=poly.format())
        else:
            outcome = membership_outcome(poly, relations, D, plan, q_mode, certificates)
        return to_record("newton", params, outcome, started)

    tasks = [(k, a) for k in range(1, top + 1) for a in range(T + 1)]
    return ordered_map(check, tasks, workers) + records


def verify_bethe_commutativity(B: Braiding, pairs: Iterable[Tuple[int, int]], T: int, D: int,
                               family: str = "elementary", case: Optional[str] = None,
                               plan: Optional[SamplePlan] = None, q_mode: str = "symbolic",
                               certificates: bool = True, workers: int = 1) -> List[CheckRecord]:
    """[e_k(u), e_p(v)] (or [p_k(u), p_l(v)]) per bidegree (a, b), 1 <= a, b <= T"""
    case = case or default_case(B)
    m = birank(B)
    builder = elementary_sym if family == "elementary" else power_sum
    L = generating_matrix(B.dim, T)
    relations = yangian_relations(B, T, case)
    pairs = [tuple(pair) for pair in pairs]
    records: List[CheckRecord] = []
    series: Dict[int, SymSeries] = {}
    tasks = []
    for k, l in pairs:
        if max(k, l) > m and family == "elementary":
            records.append(CheckRecord.build("bethe_commutativity", _base(B, T, D, k=k, p=l, family=family),
                                             status=CheckStatus.SKIPPED, detail=f"beyond the bi-rank {m}"))
            continue
        for index in (k, l):
            if index not in series:
                series[index] = builder(B, L, index, case)
        tasks.extend((k, l, a, b) for a in range(1, T + 1) for b in range(1, T + 1))

    def check(task) -> CheckRecord:
        k, l, a, b = task
        started = time.perf_counter()
        poly = series[k].coefficient(a).commutator(series[l].coefficient(b))
        outcome = membership_outcome(poly, relations, D, plan, q_mode, certificates)
        return to_record("bethe_commutativity",
                         _base(B, T, D, k=k, p=l, a=a, b=b, family=family), outcome, started)

    return ordered_map(check, tasks, workers) + records


def verify_qdet_central(B: Braiding, T: int, D: int, case: Optional[str] = None,
                        plan: Optional[SamplePlan] = None, q_mode: str = "symbolic",
                        certificates: bool = True, workers: int = 1) -> List[CheckRecord]:
    """[e_m(u), l_i^j[a]] in the ideal for every generator, m the bi-rank"""
    case = case or default_case(B)
    m = birank(B)
    L = generating_matrix(B.dim, T)
    relations = yangian_relations(B, T, case)
    qdet = elementary_sym(B, L, m, case)

    def check(g) -> CheckRecord:
        started = time.perf_counter()
        generator = NCPolynomial.generator(g)
        outcomes = [membership_outcome(qdet.coefficient(a).commutator(generator), relations, D,
                                       plan, q_mode, certificates) for a in range(T + 1)]
        return to_record("qdet_central", _base(B, T, D, m=m, generator=g.label), combine(outcomes), started)

    return ordered_map(check, relations.alphabet, workers)


def shift_lemma_sides(B: Braiding, L: NCSeriesMatrix, k: int, p: int,
                      case: Optional[str] = None) -> Tuple[Dict[int, NCMatrix], Dict[int, NCMatrix]]:
    """Tr_R over spaces k+1..k+p of A^(p) L_{k+1}‾(u) ... L_{k+p}‾(q^{-2(p-1)}u), and I ⊗ e_p(u)"""
    case = case or default_case(B)
    n = k + p
    product = _copies(L, B, range(k + 1, n + 1), range(p), n, case)
    full = symmetrizer(B, p).embed(k + 1, n) * product
    lhs = _traced(full, B, p)
    e = elementary_sym(B, L, p, case)
    rhs = {}
    for a in range(L.truncation + 1):
        value = e.coefficient(a)
        rhs[a] = NCMatrix({(i, i): value for i in range(B.dim**k)}, k, B.dim)
    return lhs, rhs


def _matrix_witness(lhs: NCMatrix, rhs: NCMatrix) -> Optional[str]:
    difference = lhs - rhs
    if difference.is_zero():
        return None
    key = sorted(difference.entries)[0]
    return f"entry {key}: lhs - rhs = {difference[key].format()}"


def verify_shift_lemma(B: Braiding, k: int, p: int, T: int, case: Optional[str] = None) -> List[CheckRecord]:
    """Exact equality in the free algebra, slice by slice"""
    records = []
    m = birank(B)
    if p > m:
        return [CheckRecord.build("shift_lemma", _base(B, T, k=k, p=p), status=CheckStatus.SKIPPED,
                                  detail=f"p exceeds the bi-rank {m}")]
    L = generating_matrix(B.dim, T)
    lhs, rhs = shift_lemma_sides(B, L, k, p, case)
    for a in range(T + 1):
        started = time.perf_counter()
        left = lhs.get(a) or NCMatrix.zero(k, B.dim)
        witness = _matrix_witness(left, rhs[a])
        records.append(CheckRecord.build("shift_lemma", _base(B, T, k=k, p=p, order=a), witness is None,
                                         witness=witness, detail="exact equality", started=started))
    return records


def al_chain_sides(B: Braiding, L: NCSeriesMatrix, k: int) -> Tuple[NCSeriesMatrix, NCSeriesMatrix]:
    """A^(k) L_1̄(u) ... L_k̄(q^{-2(k-1)}u) and L_1̄(q^{-2(k-1)}u) ... L_k̄(u) A^(k)"""
    A = symmetrizer(B, k)
    left = A * _copies(L, B, range(1, k + 1), range(k), k, "trig")
    right = _copies(L, B, range(1, k + 1), range(k - 1, -1, -1), k, "trig") * A
    return left, right


def verify_AL_chain(B: Braiding, k: int, T: int, D: int, plan: Optional[SamplePlan] = None,
                    q_mode: str = "symbolic", certificates: bool = True, workers: int = 1) -> List[CheckRecord]:
    """Entries of the symmetrizer/chain exchange identity are ideal members"""
    if not B.is_hecke:
        return [CheckRecord.build("al_chain", _base(B, T, D, k=k), status=CheckStatus.SKIPPED,
                                  detail="stated for Hecke braidings")]
    L = generating_matrix(B.dim, T)
    relations = yangian_relations(B, T, "trig") if k > 1 else None
    left, right = al_chain_sides(B, L, k)

    def check(a: int) -> CheckRecord:
        started = time.perf_counter()
        difference = left.slice(a) - right.slice(a)
        if k == 1 or difference.is_zero():
            outcome = Outcome(CheckStatus.PASS if difference.is_zero() else CheckStatus.FAIL,
                              "identically zero" if difference.is_zero() else "k=1 sides differ",
                              _matrix_witness(left.slice(a), right.slice(a)))
        else:
            outcome = combine(membership_outcome(poly, relations, D, plan, q_mode, certificates)
                              for _, poly in sorted(difference.entries.items()))
        return to_record("al_chain", _base(B, T, D, k=k, order=a), outcome, started)

    return ordered_map(check, range(T + 1), workers)


def verify_shifted_relations(B: Braiding, T: int, D: int, case: Optional[str] = None,
                             plan: Optional[SamplePlan] = None, q_mode: str = "symbolic",
                             certificates: bool = True, workers: int = 1) -> List[CheckRecord]:
    """Relations moved to positions 2, 3 of V^{⊗3} follow from the unshifted ones"""
    case = case or default_case(B)
    relations = yangian_relations(B, T, case)
    groups: Dict[str, List[NCPolynomial]] = {}
    for origin, poly in shifted_relation_coefficients(B, T, case):
        groups.setdefault(origin.split("[")[0], []).append(poly)

    def check(item) -> CheckRecord:
        origin, polys = item
        started = time.perf_counter()
        outcome = combine(membership_outcome(poly, relations, D, plan, q_mode, certificates) for poly in polys)
        return to_record("shifted_relations", _base(B, T, D, coefficient=origin), outcome, started)

    return ordered_map(check, sorted(groups.items()), workers)


def ehat_family(B: Braiding, L: NCSeriesMatrix, k: int, variant: str = "top") -> List[SymSeries]:
    return [shifted_elementary(B, L, p, variant) for p in range(k + 1)]


def verify_tau(B: Braiding, k: int, T: int, D: int, variant: str = "top",
               plan: Optional[SamplePlan] = None, q_mode: str = "symbolic",
               certificates: bool = True) -> List[CheckRecord]:
    """h-slices of τ_k below h^k reduce to ideal members; reports the h-valuation per u-order"""
    if not B.is_involutive:
        return [CheckRecord.build("tau_order", _base(B, T, D, k=k), status=CheckStatus.SKIPPED,
                                  detail="stated for involutive braidings")]
    L = generating_matrix(B.dim, T, scale=H)
    relations = yangian_relations(B, T, "h", scale=H)
    tau = tau_combination(ehat_family(B, L, k, variant), k)
    records = []
    leading_orders = []
    for a in range(T + 1):
        coefficient = tau.coefficient(a)
        slices = coefficient.h_slices()
        valuation = min(slices) if slices else None
        if k in slices:
            leading_orders.append(a)
        for j in range(k):
            started = time.perf_counter()
            outcome = membership_outcome(slices.get(j, NCPolynomial.zero()), relations, D, plan, q_mode, certificates)
            records.append(to_record("tau_order", _base(B, T, D, k=k, order=a, h_power=j, variant=variant),
                                     outcome, started))
        logger.info("τ_%s coefficient u^-%s: h-valuation %s", k, a, valuation)
    started = time.perf_counter()
    if leading_orders:
        detail = f"h^{k} term present at u-orders {leading_orders}"
        records.append(CheckRecord.build("tau_leading", _base(B, T, D, k=k, variant=variant), True,
                                         detail=detail, started=started))
    else:
        # every h comes with a factor u^-1, so h^k cannot appear below u-order k
        if T < k:
            detail = f"h^{k} first appears at u-order {k} > T = {T}; raise T to at least {k}"
        else:
            detail = f"no h^{k} term up to u-order {T}; raise T"
        records.append(CheckRecord.build("tau_leading", _base(B, T, D, k=k, variant=variant),
                                         status=CheckStatus.INCONCLUSIVE, started=started, detail=detail))
    return records


def scalar_multiplier(numerator: SymSeries, denominator: SymSeries) -> Tuple[Dict[int, Scalar], Optional[int]]:
    """Scalar series μ(u) with numerator = μ(u)·denominator, order by order.

    Returns (μ coefficients found, first order where no scalar multiplier exists or None).
    """
    base = denominator.coefficient(0)
    if not base.is_zero() and base.degree() != 0:
        return {}, 0
    d0 = base.constant_term()
    if not d0:
        return {}, 0
    mu: Dict[int, Scalar] = {}
    for a in range(numerator.truncation + 1):
        residual = numerator.coefficient(a)
        for b, value in mu.items():
            residual = residual - denominator.coefficient(a - b).scale(value)
        if residual.degree() > 0:
            return mu, a
        mu[a] = residual.constant_term() / d0
    return mu, None


def verify_ehat_multiplier(B: Braiding, k: int, T: int, variant: str = "top") -> List[CheckRecord]:
    """Compute the multiplier relating ê_k at h = 1 and e_k (rational case)"""
    started = time.perf_counter()
    params = _base(B, T, k=k, variant=variant)
    if not B.is_involutive:
        return [CheckRecord.build("ehat_multiplier", params, status=CheckStatus.SKIPPED,
                                  detail="stated for involutive braidings")]
    L = generating_matrix(B.dim, T)
    ehat = shifted_elementary(B, L, k, variant).specialize(h_value=1)
    e = elementary_sym(B, L, k, "rational")
    mu, failure = scalar_multiplier(ehat, e)
    rendered = ", ".join(f"u^-{a}: {format_scalar(value)}" for a, value in sorted(mu.items()))
    if failure is None:
        return [CheckRecord.build("ehat_multiplier", params, True, detail=f"μ = [{rendered}]", started=started)]
    return [CheckRecord.build("ehat_multiplier", params, status=CheckStatus.INCONCLUSIVE, started=started,
                              detail=f"no scalar multiplier at u-order {failure}; found [{rendered}]")]

