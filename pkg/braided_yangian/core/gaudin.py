"""
Classical and braided rational Gaudin systems: site realizations, Lax matrices,
quadratic Hamiltonians, Talalaev operators and their commutativity checks
"""
import json
import logging
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError
from sympy import QQ

from ..models.config import settings
from ..models.report import CheckRecord, CheckStatus
from ..models.schemas import SystemDescriptor
from ..utils.expressions import format_rational, parse_expression
from ..utils.parallel import ordered_map
from .braiding import (Braiding, birank, builtin_braiding, c_matrix, operator_mismatch, resolve_braiding,
                       symmetrizer)
from .diffop import OpFunction, product_applied_to_unit, rational_function, simple_pole
from .errors import BraidedYangianError, BraidingError, ConfigError, PoleError, SamplingError, SiteRelationError
from .freealg import Generator, NCMatrix, NCPolynomial, RelationCollector, RelationSet
from .scalar import Rational, SamplePlan, cleared_degree, make_grid_plan, to_rational
from .symfun import membership_outcome, to_record
from .tensor import TensorOperator

logger = logging.getLogger(__name__)

FLAVORS = ("classical", "braided", "weighted")
REALIZATIONS = ("fundamental", "transported", "abstract")


def site_operator(m: int, K: int, k: int) -> TensorOperator:
    """M(k) on V^{⊗K} ⊗ V_aux: sum_ij E_ij in physical factor k times E_ij in the aux factor"""
    local = TensorOperator.from_entries({(i * m + i, j * m + j): 1 for i in range(m) for j in range(m)}, 2, m, QQ)
    return local.embed_at((k - 1, K), K + 1)


@dataclass(frozen=True)
class GaudinSystem:
    """K sites at distinct points with m×m site matrices.

    Concrete systems carry one operator per site on V^{⊗K} ⊗ V_aux (aux last);
    abstract systems carry none and are handled by the free-algebra prover.
    """
    flavor: str
    m: int
    points: Tuple[Rational, ...]
    braiding: Braiding
    sites: Tuple[TensorOperator, ...] = ()
    realization: str = "fundamental"
    _cache: Dict[Any, Any] = field(default_factory=dict, init=False, compare=False, repr=False)
    _lock: Any = field(default_factory=threading.RLock, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor '{self.flavor}' (choose from {', '.join(FLAVORS)})")
        if self.realization not in REALIZATIONS:
            raise ValueError(f"unknown realization '{self.realization}'")
        if len(set(self.points)) != len(self.points):
            raise PoleError("site points must be pairwise distinct")
        if self.braiding.dim != self.m:
            raise BraidingError(f"braiding acts on dimension {self.braiding.dim}, sites need {self.m}")
        if self.realization != "abstract" and len(self.sites) != len(self.points):
            raise ValueError(f"{len(self.sites)} site operators for {len(self.points)} points")

    def _cached(self, key: Tuple, build: Callable[[], Any]) -> Any:
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    @property
    def K(self) -> int:
        return len(self.points)

    @property
    def d(self) -> int:
        return self.m**self.K

    @property
    def is_abstract(self) -> bool:
        return self.realization == "abstract"

    @property
    def label(self) -> str:
        points = ",".join(format_rational(u) for u in self.points)
        return f"{self.flavor}[{self.realization}](m={self.m}, K={self.K}, points={points}, B={self.braiding.label})"

    def trace_weight(self) -> Optional[TensorOperator]:
        """None for the plain trace, C of B for the R-trace"""
        if self.flavor == "classical":
            return None
        return c_matrix(self.braiding)

    # Site copies

    def site(self, k: int, aux: int = 1, aux_count: int = 1) -> TensorOperator:
        """M(k) acting in aux factor `aux` of V^{⊗K} ⊗ V_aux^{⊗aux_count}"""
        if self.is_abstract:
            raise BraidedYangianError("abstract systems have no site operators")
        positions = tuple(range(self.K)) + (self.K + aux - 1,)
        return self._cached(("site", k, aux, aux_count),
                            lambda: self.sites[k - 1].embed_at(positions, self.K + aux_count))

    def overlined_site(self, k: int, copy: int, aux_count: int) -> TensorOperator:
        """M(k)_{copy̅}: M_1̅ = M_1, M_{j+1}̅ = R_j M_j̅ R_j^{-1} on the aux factors"""
        def build() -> TensorOperator:
            if copy == 1:
                return self.site(k, 1, aux_count)
            ambient = self.K + aux_count
            position = self.K + copy - 1
            R = self.braiding.at(position, ambient)
            R_inv = self.braiding.at(position, ambient, power=-1)
            return R * self.overlined_site(k, copy - 1, aux_count) * R_inv
        return self._cached(("overline", k, copy, aux_count), build)

    def aux_braiding(self, aux_count: int = 2) -> TensorOperator:
        """R on the first two aux factors"""
        return self.braiding.at(self.K + 1, self.K + aux_count)

    # Lax matrices

    def _numerator(self, k: int, weighted: bool) -> Rational:
        return self.points[k - 1] if weighted else QQ.one

    def lax_at(self, u: Any, copy: int = 1, aux_count: int = 1, weighted: bool = False) -> TensorOperator:
        """sum_k M(k)_{copy̅} n_k/(u - u_k) with n_k = 1, or u_k when weighted"""
        u = QQ.convert(u)
        result = TensorOperator.zero(self.K + aux_count, self.m)
        for k, point in enumerate(self.points, start=1):
            if u == point:
                raise PoleError(f"u = {format_rational(u)} hits the site point u_{k}")
            coefficient = self._numerator(k, weighted) / (u - point)
            result = result + self.overlined_site(k, copy, aux_count).scale(coefficient)
        return result

    def lax_function(self, copy: int = 1, aux_count: int = 1, weighted: bool = False) -> OpFunction:
        def build() -> OpFunction:
            result = OpFunction.zero(self.K + aux_count, self.m)
            for k, point in enumerate(self.points, start=1):
                pole = simple_pole(point) * rational_function(self._numerator(k, weighted))
                result = result + OpFunction({pole: self.overlined_site(k, copy, aux_count)},
                                             self.K + aux_count, self.m)
            return result
        return self._cached(("lax", copy, aux_count, weighted), build)

    def pair_trace(self, k: int, l: int) -> TensorOperator:
        """Tr_aux M(k) M(l), braided when the flavor is"""
        return self._cached(("pair", k, l),
                            lambda: (self.site(k) * self.site(l)).partial_trace(1, self.trace_weight()))


# Construction

def default_points(K: int, flavor: str = "classical") -> Tuple[Rational, ...]:
    """0, 1, ..., K-1; the weighted flavor starts at 1 so that u_k ↦ 1/u_k is defined"""
    start = 1 if flavor == "weighted" else 0
    return tuple(QQ(start + k) for k in range(K))


def _points(K: int, points: Optional[Sequence[Any]], flavor: str) -> Tuple[Rational, ...]:
    if not points:
        return default_points(K, flavor)
    converted = tuple(to_rational(parse_expression(p)) if isinstance(p, str) else QQ.convert(p)
                      for p in points)
    if len(converted) != K:
        raise ValueError(f"{len(converted)} points given for {K} sites")
    return converted


def site_relation_sides(sys: GaudinSystem) -> List[Tuple[str, TensorOperator, TensorOperator]]:
    """(label, lhs, rhs) for every ordered site pair, with overlined copies on two aux factors.

    Distinct sites commute; each site satisfies M_1̅M_2̅ - M_2̅M_1̅ = M_1̅R - M_2̅R.
    """
    R = sys.aux_braiding(2)
    sides = []
    for k in range(1, sys.K + 1):
        for l in range(1, sys.K + 1):
            first = sys.overlined_site(k, 1, 2)
            second = sys.overlined_site(l, 2, 2)
            lhs = first * second - second * first
            if k == l:
                rhs = first * R - second * R
            else:
                rhs = TensorOperator.zero(sys.K + 2, sys.m)
            sides.append((f"sites ({k},{l})", lhs, rhs))
    return sides


def check_site_relations(sys: GaudinSystem) -> Optional[str]:
    """Witness of the first violated site relation, None when all hold"""
    for label, lhs, rhs in site_relation_sides(sys):
        witness = operator_mismatch(lhs, rhs)
        if witness:
            return f"{label}: {witness}"
    return None


def classical_sites(m: int, K: int, points: Optional[Sequence[Any]] = None,
                    flavor: str = "classical") -> GaudinSystem:
    """Fundamental realization: M(k)_i^j = E_ij in the k-th factor of (C^m)^{⊗K}"""
    sites = tuple(site_operator(m, K, k) for k in range(1, K + 1))
    system = GaudinSystem(flavor, m, _points(K, points, flavor), builtin_braiding("flip", m), sites)
    witness = check_site_relations(system)
    if witness:
        raise SiteRelationError(f"classical sites violate their relations: {witness}")
    logger.debug("Built %s", system.label)
    return system


def abstract_system(B: Braiding, K: int, points: Optional[Sequence[Any]] = None,
                    flavor: str = "braided") -> GaudinSystem:
    return GaudinSystem(flavor, B.dim, _points(K, points, flavor), B, (), "abstract")


def braided_sites(B: Braiding, K: int, points: Optional[Sequence[Any]] = None,
                  flavor: str = "braided", realization: Optional[str] = None) -> GaudinSystem:
    """Concrete sites for B when one is known, otherwise an abstract system.

    B = P uses the fundamental sites; a conjugated flip R = (W⊗I)P(W⊗I)^{-1}
    transports them by W on the aux factor. Other symmetries, and transported
    sites that fail their relations, fall back to abstract mode with a warning.
    """
    if not B.is_involutive:
        raise BraidingError(f"Gaudin sites need an involutive braiding, {B.label} is {B.kind.value}")
    m = B.dim
    if birank(B) != m:
        logger.warning("%s has bi-rank %s != N; using abstract sites", B.label, birank(B))
        realization = "abstract"
    if realization == "abstract":
        return abstract_system(B, K, points, flavor)

    fundamental = tuple(site_operator(m, K, k) for k in range(1, K + 1))
    if B.name == "flip":
        system = GaudinSystem(flavor, m, _points(K, points, flavor), B, fundamental, "fundamental")
    elif B.conjugator is not None:
        W = B.conjugator.embed(K + 1, K + 1)
        W_inv = B.conjugator.inverse().embed(K + 1, K + 1)
        transported = tuple(W * site * W_inv for site in fundamental)
        system = GaudinSystem(flavor, m, _points(K, points, flavor), B, transported, "transported")
    else:
        logger.warning("No concrete site realization for %s; switching to abstract mode", B.label)
        return abstract_system(B, K, points, flavor)

    witness = check_site_relations(system)
    if witness:
        logger.warning("%s sites violate the braided relations (%s); switching to abstract mode",
                       system.realization, witness)
        return abstract_system(B, K, points, flavor)
    logger.debug("Built %s", system.label)
    return system


def system_from_descriptor(descriptor: SystemDescriptor, realization: Optional[str] = None) -> GaudinSystem:
    points = descriptor.points or None
    if descriptor.flavor == "classical" and descriptor.braiding in (None, "flip"):
        return classical_sites(descriptor.m, descriptor.sites, points)
    B = resolve_braiding(descriptor.braiding or "flip", descriptor.m)
    return braided_sites(B, descriptor.sites, points, descriptor.flavor, realization)


def load_system_descriptor(path: Union[str, Path]) -> SystemDescriptor:
    """Read and validate a JSON Gaudin system descriptor"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError([f"cannot read system descriptor {path}: {e}"])
    try:
        return SystemDescriptor.model_validate(data)
    except ValidationError as e:
        raise ConfigError([f"{path}: {'.'.join(str(p) for p in err['loc']) or 'descriptor'}: {err['msg']}"
                           for err in e.errors()])


# Operators

def lax_matrix(sys: GaudinSystem, u: Any, weighted: bool = False) -> TensorOperator:
    """L̃(u) = sum_k M(k)/(u - u_k) on V^{⊗K} ⊗ V_aux"""
    return sys.lax_at(u, weighted=weighted)


def hamiltonians(sys: GaudinSystem, weighted: Optional[bool] = None) -> List[TensorOperator]:
    """H_k = sum_{l≠k} Tr M(k)M(l) n_kl/(u_k - u_l), n_kl = 1 or u_l (weighted)"""
    if weighted is None:
        weighted = sys.flavor == "weighted"
    result = []
    for k in range(1, sys.K + 1):
        H = TensorOperator.zero(sys.K, sys.m)
        for l in range(1, sys.K + 1):
            if l == k:
                continue
            u_k, u_l = sys.points[k - 1], sys.points[l - 1]
            coefficient = (u_l if weighted else QQ.one) / (u_k - u_l)
            H = H + sys.pair_trace(k, l).scale(coefficient)
        result.append(H)
    return result


def talalaev_function(sys: GaudinSystem, k: int) -> OpFunction:
    """QH_k(u) = Tr A^(m) (L_1̅(u) - ∂)...(L_k̅(u) - ∂) ▷ 1 as a rational function of u"""
    if sys.is_abstract:
        raise BraidedYangianError("Talalaev operators need a concrete site realization")
    if k < 1 or k > sys.m:
        raise ValueError(f"QH_k is defined for 1 <= k <= m = {sys.m}, got k = {k}")

    def build() -> OpFunction:
        n = sys.m
        factors = [sys.lax_function(copy=j, aux_count=n) for j in range(1, k + 1)]
        applied = product_applied_to_unit(factors)
        A = symmetrizer(sys.braiding, n).embed(sys.K + 1, sys.K + n)
        weight = sys.trace_weight()
        return applied.map_operators(lambda X: (A * X).partial_trace(n, weight))
    return sys._cached(("talalaev", k), build)


def talalaev(sys: GaudinSystem, k: int, u_points: Iterable[Any]) -> List[TensorOperator]:
    function = talalaev_function(sys, k)
    return [function.at(u) for u in u_points]


def residue_decomposition(residue: TensorOperator, H: TensorOperator) -> Tuple[Rational, Rational]:
    """(c, s) with residue = c·H + s·I when such a pair exists; raises ValueError otherwise"""
    residue, H = residue.convert_to(QQ), H.convert_to(QQ)
    entries = H.entries()
    c = QQ.zero
    off_diagonal = [key for key in sorted(entries) if key[0] != key[1]]
    if off_diagonal:
        key = off_diagonal[0]
        c = residue[key] / entries[key]
    else:
        diagonal = [H[(i, i)] for i in range(H.size)]
        for i in range(1, H.size):
            if diagonal[i] != diagonal[0]:
                c = (residue[(i, i)] - residue[(0, 0)]) / (diagonal[i] - diagonal[0])
                break
    s = residue[(0, 0)] - c * H[(0, 0)]
    expected = H.scale(c) + TensorOperator.identity(H.spaces, H.dim).scale(s)
    witness = operator_mismatch(residue, expected)
    if witness:
        raise ValueError(f"residue is not of the form c·H + s·I: {witness}")
    return c, s


# Abstract mode

def abstract_site_matrix(k: int, m: int) -> NCMatrix:
    entries = {(i, j): NCPolynomial.generator(Generator(k, i, j, "M")) for i in range(m) for j in range(m)}
    return NCMatrix(entries, 1, m)


def abstract_relations(sys: GaudinSystem) -> RelationSet:
    """Entries of the site relations on two overlined aux copies, in the free algebra on M(k)_i^j"""
    B = sys.braiding
    R, R_inv = B.matrix, B.inverse
    copies = {}
    for k in range(1, sys.K + 1):
        first = abstract_site_matrix(k, sys.m).embed(1, 2)
        copies[k] = (first, R * first * R_inv)
    collector = RelationCollector(truncation=sys.K)
    for k in range(1, sys.K + 1):
        for l in range(1, sys.K + 1):
            first, second = copies[k][0], copies[l][1]
            relation = first * second - second * first
            if k == l:
                relation = relation - first * R + second * R
            collector.add_matrix(relation, f"sites({k},{l})")
    letters = tuple(Generator(k, i, j, "M") for k in range(1, sys.K + 1)
                    for i in range(sys.m) for j in range(sys.m))
    logger.debug("Abstract site relations for %s: %s", B.label, len(collector.relations))
    return RelationSet(tuple(collector.relations), tuple(collector.provenance), sys.K, letters,
                       grading="none", label=f"sites({B.label}, K={sys.K})")


def abstract_hamiltonians(sys: GaudinSystem) -> List[NCPolynomial]:
    weight = sys.trace_weight()
    matrices = {k: abstract_site_matrix(k, sys.m) for k in range(1, sys.K + 1)}
    weighted = sys.flavor == "weighted"
    result = []
    for k in range(1, sys.K + 1):
        H = NCPolynomial.zero()
        for l in range(1, sys.K + 1):
            if l == k:
                continue
            u_k, u_l = sys.points[k - 1], sys.points[l - 1]
            coefficient = (u_l if weighted else QQ.one) / (u_k - u_l)
            traced = (matrices[k] * matrices[l]).partial_trace(1, weight)
            H = H + traced[(0, 0)].scale(coefficient)
        result.append(H)
    return result


# Verification

def gaudin_plan(sys: GaudinSystem, degree_bound: int = 0, seed: Optional[int] = None,
                count: Optional[int] = None) -> SamplePlan:
    """Grid plan: disjoint u and v axes avoiding every site point, each longer than degree_bound"""
    seed = settings.default_seed if seed is None else seed
    count = max(degree_bound + 1 + settings.sample_margin, count or 0)
    guards = [lambda x, a=a: x - a for a in sys.points]
    return make_grid_plan(degree_bound, count, seed, excluded=guards, span=settings.sample_span)


def _plan_for(sys: GaudinSystem, plan: Optional[SamplePlan], degree_bound: int,
              seed: Optional[int]) -> SamplePlan:
    """The given plan when it can certify identities of this degree, else a fresh one"""
    if plan is None:
        return gaudin_plan(sys, degree_bound, seed)
    shortest = min(len(plan.points), len(plan.h_points))
    if shortest <= degree_bound:
        raise SamplingError(f"{shortest} points per axis cannot certify degree {degree_bound} in u or v")
    if set(plan.points) & set(plan.h_points):
        raise SamplingError("the u and v axes of a Gaudin plan must be disjoint")
    if set(plan.points + plan.h_points) & set(sys.points):
        raise SamplingError("sample points must avoid the site points")
    return plan


def lax_degree_bound(sys: GaudinSystem, limit: bool = False) -> int:
    """Degree in u (and in v) of the cleared Lax relation"""
    return sys.lax_function(copy=1, aux_count=2, weighted=limit).degree_bound() + 1


def talalaev_degree_bound(sys: GaudinSystem, top: int) -> int:
    """Degree in u (and in v) of the cleared commutators [QH_k(u), QH_l(v)], k, l <= top"""
    return max(talalaev_function(sys, k).degree_bound() for k in range(1, top + 1))


def _base(sys: GaudinSystem, **extra) -> Dict[str, Any]:
    base = {"system": sys.label}
    base.update(extra)
    return base


def _record(check_id: str, parameters: Dict[str, Any], body) -> CheckRecord:
    started = time.perf_counter()
    try:
        witness, detail = body()
    except BraidedYangianError as e:
        logger.debug("%s raised %s", check_id, e)
        return CheckRecord.build(check_id, parameters, False, witness=str(e), started=started)
    return CheckRecord.build(check_id, parameters, witness is None, witness=witness, detail=detail, started=started)


def lax_relation_sides(sys: GaudinSystem, u: Any, v: Any, limit: bool = False) -> Tuple[TensorOperator, TensorOperator]:
    """[L_1̅(u), L_2̅(v)] and [R/(u-v), L_1̅(u) + L_2̅(v)]; the limit form uses the weighted
    Lax matrix and [R/(u-v), u L_1̅(u) + v L_2̅(v)]"""
    u, v = QQ.convert(u), QQ.convert(v)
    if u == v:
        raise PoleError("the Lax relation needs u != v")
    L1 = sys.lax_at(u, copy=1, aux_count=2, weighted=limit)
    L2 = sys.lax_at(v, copy=2, aux_count=2, weighted=limit)
    R = sys.aux_braiding(2).scale(QQ.one / (u - v))
    lhs = L1.commutator(L2)
    rhs = R.commutator(L1.scale(u) + L2.scale(v) if limit else L1 + L2)
    return lhs, rhs


def _lax_records(check_id: str, sys: GaudinSystem, plan: Optional[SamplePlan], seed: Optional[int],
                 limit: bool) -> List[CheckRecord]:
    bound = lax_degree_bound(sys, limit)
    grid = _plan_for(sys, plan, bound, seed).grid()

    def body():
        for u, v in grid:
            witness = operator_mismatch(*lax_relation_sides(sys, u, v, limit=limit))
            if witness:
                return f"(u,v)=({format_rational(u)},{format_rational(v)}): {witness}", None
        return None, f"{len(grid)} grid points, degree <= {bound} in u and v"
    return [_record(check_id, _base(sys, points=len(grid), degree_bound=bound), body)]


def verify_pp(sys: GaudinSystem, plan: Optional[SamplePlan] = None,
              seed: Optional[int] = None) -> List[CheckRecord]:
    """Lax relation exactly on a grid certifying its degree in u and v"""
    return _lax_records("lax_relation", sys, plan, seed, limit=False)


def verify_limit_lax(sys: GaudinSystem, plan: Optional[SamplePlan] = None,
                     seed: Optional[int] = None) -> List[CheckRecord]:
    """Weighted Lax relation [L_1̅, L_2̅] = [R/(u-v), u L_1̅ + v L_2̅] on a certifying grid"""
    return _lax_records("limit_lax_relation", sys, plan, seed, limit=True)


def verify_hamiltonians(sys: GaudinSystem, weighted: Optional[bool] = None) -> List[CheckRecord]:
    """[H_k, H_l] = 0 for all k < l, and sum_k H_k = 0 for the unweighted family"""
    if weighted is None:
        weighted = sys.flavor == "weighted"
    family = hamiltonians(sys, weighted)
    records = []
    for k in range(1, sys.K + 1):
        for l in range(k + 1, sys.K + 1):
            def body(k=k, l=l):
                witness = operator_mismatch(family[k - 1].commutator(family[l - 1]),
                                            TensorOperator.zero(sys.K, sys.m))
                return witness, None
            records.append(_record("hamiltonian_commutator", _base(sys, k=k, l=l, weighted=weighted), body))
    if not weighted:
        def total():
            zero = TensorOperator.zero(sys.K, sys.m)
            summed = zero
            for H in family:
                summed = summed + H
            return operator_mismatch(summed, zero), None
        records.append(_record("hamiltonian_sum", _base(sys), total))
    return records


def verify_weighted_inversion(sys: GaudinSystem) -> List[CheckRecord]:
    """Weighted Hamiltonians at the points 1/u_k equal -u_k·H_k at the points u_k"""
    parameters = _base(sys)
    if any(not u for u in sys.points):
        return [CheckRecord.build("weighted_inversion", parameters, status=CheckStatus.SKIPPED,
                                  detail="a site point is 0, u ↦ 1/u is undefined")]
    inverted = replace(sys, points=tuple(QQ.one / u for u in sys.points))
    plain = hamiltonians(sys, weighted=False)
    weighted = hamiltonians(inverted, weighted=True)

    def body():
        for k, u in enumerate(sys.points, start=1):
            witness = operator_mismatch(weighted[k - 1], plain[k - 1].scale(-u))
            if witness:
                return f"site {k}: {witness}", None
        factors = ", ".join(format_rational(-u) for u in sys.points)
        return None, f"scale factors per site: {factors}"
    return [_record("weighted_inversion", parameters, body)]


def residue_check(sys: GaudinSystem) -> List[CheckRecord]:
    """Residue of QH_2 at each u_k decomposed as c·H_k + s·I; c and s are reported"""
    if sys.K < 2 or sys.m < 2:
        return [CheckRecord.build("talalaev_residue", _base(sys), status=CheckStatus.SKIPPED,
                                  detail="needs at least two sites and m >= 2")]
    function = talalaev_function(sys, 2)
    family = hamiltonians(sys, weighted=False)
    records = []
    for k, point in enumerate(sys.points, start=1):
        def body(k=k, point=point):
            residue = function.residue(point)
            try:
                c, s = residue_decomposition(residue, family[k - 1])
            except ValueError as e:
                return str(e), None
            return None, f"c={format_rational(c)}, s={format_rational(s)}"
        records.append(_record("talalaev_residue", _base(sys, site=k), body))
    return records


def verify_talalaev(sys: GaudinSystem, plan: Optional[SamplePlan] = None, kmax: int = 2,
                    workers: int = 1, seed: Optional[int] = None) -> List[CheckRecord]:
    """[QH_k(u), QH_l(v)] = 0 on a certifying grid for k <= l <= min(m, kmax), plus residues"""
    if sys.is_abstract:
        return [CheckRecord.build("talalaev_commutator", _base(sys), status=CheckStatus.SKIPPED,
                                  detail="abstract systems have no concrete Talalaev operators")]
    top = min(sys.m, kmax)
    functions = {k: talalaev_function(sys, k) for k in range(1, top + 1)}
    bound = talalaev_degree_bound(sys, top)
    braided = None
    if sys.flavor == "classical":
        braided = braided_sites(builtin_braiding("flip", sys.m), sys.K, sys.points)
        bound = max(bound, _flip_degree_bound(sys, braided, top))
    plan = _plan_for(sys, plan, bound, seed)
    grid = plan.grid()
    zero = TensorOperator.zero(sys.K, sys.m)
    at_u = {k: {u: function.at(u) for u in plan.points} for k, function in functions.items()}
    at_v = {k: {v: function.at(v) for v in plan.h_points} for k, function in functions.items()}

    def check(task: Tuple[int, int]) -> CheckRecord:
        k, l = task

        def body():
            for u, v in grid:
                witness = operator_mismatch(at_u[k][u].commutator(at_v[l][v]), zero)
                if witness:
                    return f"(u,v)=({format_rational(u)},{format_rational(v)}): {witness}", None
            return None, f"{len(grid)} grid points, degree <= {bound} in u and v"
        return _record("talalaev_commutator", _base(sys, k=k, l=l, degree_bound=bound), body)

    tasks = [(k, l) for k in range(1, top + 1) for l in range(k, top + 1)]
    records = ordered_map(check, tasks, workers)
    records.extend(residue_check(sys))
    if braided is not None:
        records.append(_braided_flip_consistency(sys, braided, plan.points, top))
    return records


def _flip_degree_bound(sys: GaudinSystem, braided: GaudinSystem, top: int) -> int:
    """Degree in u of the cleared differences QH_k(u) - QH_k^flip(u)"""
    return max(cleared_degree(list(talalaev_function(sys, k).terms) + list(talalaev_function(braided, k).terms))
               for k in range(1, top + 1))


def _braided_flip_consistency(sys: GaudinSystem, braided: GaudinSystem, points: Sequence[Rational],
                              top: int) -> CheckRecord:
    """Braided construction with B = P reproduces the classical Talalaev functions"""
    def body():
        for k in range(1, top + 1):
            for u in points:
                witness = operator_mismatch(talalaev_function(braided, k).at(u), talalaev_function(sys, k).at(u))
                if witness:
                    return f"k={k}, u={format_rational(u)}: {witness}", None
        return None, f"{len(points)} points"
    return _record("talalaev_flip_consistency", _base(sys, points=len(points)), body)


def abstract_commutativity(sys: GaudinSystem, D: int = 4, plan: Optional[SamplePlan] = None,
                           q_mode: str = "symbolic", certificates: bool = True,
                           workers: int = 1) -> List[CheckRecord]:
    """[H_k, H_l] as ideal members of the abstract site relations"""
    relations = abstract_relations(sys)
    family = abstract_hamiltonians(sys)

    def check(task: Tuple[int, int]) -> CheckRecord:
        k, l = task
        started = time.perf_counter()
        target = family[k - 1].commutator(family[l - 1])
        outcome = membership_outcome(target, relations, D, plan, q_mode, certificates)
        return to_record("abstract_commutator", _base(sys, k=k, l=l, D=D), outcome, started)

    tasks = [(k, l) for k in range(1, sys.K + 1) for l in range(k + 1, sys.K + 1)]
    return ordered_map(check, tasks, workers)


def verify_gaudin(sys: GaudinSystem, plan: Optional[SamplePlan] = None, D: int = 4,
                  q_mode: str = "symbolic", certificates: bool = True, workers: int = 1,
                  seed: Optional[int] = None) -> List[CheckRecord]:
    """All Gaudin checks for one system; the first record states which realization ran"""
    records = [CheckRecord.build("realization", _base(sys), True, detail=sys.realization)]
    if sys.is_abstract:
        records.extend(abstract_commutativity(sys, D, None, q_mode, certificates, workers))
        return records
    records.append(_record("site_relations", _base(sys), lambda: (check_site_relations(sys), None)))
    records.extend(verify_pp(sys, plan, seed))
    records.extend(verify_limit_lax(sys, plan, seed))
    records.extend(verify_hamiltonians(sys))
    if sys.flavor == "weighted":
        records.extend(verify_hamiltonians(sys, weighted=False))
    records.extend(verify_weighted_inversion(sys))
    return records
