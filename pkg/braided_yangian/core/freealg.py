"""
Free algebra on the Yangian generators: noncommutative polynomials, matrices and
truncated Laurent series of them, and the truncated defining relations
"""
import itertools
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Any, Callable, Dict, Iterator, List, NamedTuple, Optional, Tuple

from ..utils.expressions import format_scalar
from .errors import PositionError
from .scalar import ONE, ZERO, Scalar, cleared_degree, h as H, h_slices as scalar_h_slices, q as Q, substitute, to_scalar
from .tensor import TensorOperator, digits, is_scalar_like

logger = logging.getLogger(__name__)


class Generator(NamedTuple):
    """{symbol}_{row+1}^{col+1}[order]; tuple order (order, row, col, symbol) is the generator order.

    Yangian generators use the symbol "l"; Gaudin site generators use "M" with the site as order.
    """
    order: int
    row: int
    col: int
    symbol: str = "l"

    @property
    def label(self) -> str:
        return f"{self.symbol}{self.row + 1}{self.col + 1}[{self.order}]"


Word = Tuple[Generator, ...]


def deglex(word: Word) -> Tuple[int, Word]:
    return len(word), word


def word_weight(word: Word) -> int:
    return sum(g.order for g in word)


def alphabet(N: int, T: int) -> Tuple[Generator, ...]:
    return tuple(Generator(a, i, j) for a in range(1, T + 1) for i in range(N) for j in range(N))


class NCPolynomial:
    """Element of the free algebra: {word: Scalar}, zero coefficients never stored"""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Word, Any]] = None):
        self.terms: Dict[Word, Scalar] = {}
        for word, value in (terms or {}).items():
            value = to_scalar(value)
            if value:
                self.terms[tuple(word)] = value

    @classmethod
    def _raw(cls, terms: Dict[Word, Scalar]) -> "NCPolynomial":
        poly = cls.__new__(cls)
        poly.terms = terms
        return poly

    @classmethod
    def constant(cls, value: Any) -> "NCPolynomial":
        return cls({(): value})

    @classmethod
    def generator(cls, g: Generator) -> "NCPolynomial":
        return cls({(g,): ONE})

    @classmethod
    def zero(cls) -> "NCPolynomial":
        return cls._raw({})

    # Arithmetic

    def __add__(self, other: "NCPolynomial") -> "NCPolynomial":
        terms = dict(self.terms)
        for word, value in other.terms.items():
            total = terms.get(word, ZERO) + value
            if total:
                terms[word] = total
            else:
                terms.pop(word, None)
        return NCPolynomial._raw(terms)

    def __neg__(self) -> "NCPolynomial":
        return NCPolynomial._raw({word: -value for word, value in self.terms.items()})

    def __sub__(self, other: "NCPolynomial") -> "NCPolynomial":
        return self + (-other)

    def scale(self, value: Any) -> "NCPolynomial":
        value = to_scalar(value)
        if not value:
            return NCPolynomial.zero()
        return NCPolynomial._raw({word: coeff * value for word, coeff in self.terms.items()})

    def __mul__(self, other: Any) -> "NCPolynomial":
        if not isinstance(other, NCPolynomial):
            if is_scalar_like(other):
                return self.scale(other)
            return NotImplemented
        terms: Dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2
                total = terms.get(word, ZERO) + c1 * c2
                if total:
                    terms[word] = total
                else:
                    terms.pop(word, None)
        return NCPolynomial._raw(terms)

    def __rmul__(self, other: Any) -> "NCPolynomial":
        if is_scalar_like(other):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other: "NCPolynomial") -> "NCPolynomial":
        return self * other - other * self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.terms)

    # Inspection

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(word) for word in self.terms), default=0)

    def leading_word(self) -> Optional[Word]:
        return max(self.terms, key=deglex) if self.terms else None

    def generators(self) -> List[Generator]:
        return sorted({g for word in self.terms for g in word})

    def max_order(self) -> int:
        return max((g.order for word in self.terms for g in word), default=0)

    def weights(self) -> List[int]:
        return sorted({word_weight(word) for word in self.terms})

    def weight_components(self) -> Dict[int, "NCPolynomial"]:
        components: Dict[int, Dict[Word, Scalar]] = {}
        for word, value in self.terms.items():
            components.setdefault(word_weight(word), {})[word] = value
        return {w: NCPolynomial._raw(terms) for w, terms in sorted(components.items())}

    def coefficient(self, word: Word) -> Scalar:
        return self.terms.get(tuple(word), ZERO)

    def constant_term(self) -> Scalar:
        return self.terms.get((), ZERO)

    def is_constant_coefficient(self) -> bool:
        """True when no coefficient depends on q or h"""
        return all(v.numer.is_ground and v.denom.is_ground for v in self.terms.values())

    def degree_bound(self, gen: int = 0) -> int:
        """Degree in q (gen 0) or h (gen 1) of the coefficient row after clearing denominators"""
        return cleared_degree(self.terms.values(), gen)

    # Transformations

    def map_coefficients(self, func: Callable[[Scalar], Any]) -> "NCPolynomial":
        return NCPolynomial({word: func(value) for word, value in self.terms.items()})

    def specialize(self, q_value=None, h_value=None) -> "NCPolynomial":
        return self.map_coefficients(lambda value: substitute(value, q_value, h_value))

    def h_slices(self) -> Dict[int, "NCPolynomial"]:
        """Split by powers of h: {order: polynomial with h-free coefficients}"""
        slices: Dict[int, Dict[Word, Scalar]] = {}
        for word, value in self.terms.items():
            for order, part in scalar_h_slices(value).items():
                slices.setdefault(order, {})[word] = part
        return {order: NCPolynomial(terms) for order, terms in sorted(slices.items())}

    def evaluate(self, assignment: Dict[Generator, TensorOperator], identity: TensorOperator) -> TensorOperator:
        """Substitute operators for generators (used as a representation oracle)"""
        result = identity.scale(0)
        for word, value in self.terms.items():
            product = identity
            for g in word:
                product = product * assignment[g]
            result = result + product.scale(value)
        return result

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for word in sorted(self.terms, key=deglex, reverse=True):
            coeff = format_scalar(self.terms[word])
            monomial = "*".join(g.label for g in word)
            if not word:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(monomial)
            elif coeff == "-1":
                parts.append(f"-{monomial}")
            else:
                parts.append(f"({coeff})*{monomial}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NCPolynomial({self.format()})"


class NCMatrix:
    """Operator on V^{⊗spaces} with NCPolynomial entries, stored sparsely"""

    __slots__ = ("entries", "spaces", "dim")

    def __init__(self, entries: Dict[Tuple[int, int], NCPolynomial], spaces: int, dim: int):
        self.entries = {key: value for key, value in entries.items() if value}
        self.spaces = spaces
        self.dim = dim

    @classmethod
    def from_operator(cls, op: TensorOperator) -> "NCMatrix":
        return cls({key: NCPolynomial.constant(value) for key, value in op.entries().items()},
                   op.spaces, op.dim)

    @classmethod
    def identity(cls, spaces: int, dim: int) -> "NCMatrix":
        return cls({(i, i): NCPolynomial.constant(1) for i in range(dim**spaces)}, spaces, dim)

    @classmethod
    def zero(cls, spaces: int, dim: int) -> "NCMatrix":
        return cls({}, spaces, dim)

    def __getitem__(self, key: Tuple[int, int]) -> NCPolynomial:
        return self.entries.get(key, NCPolynomial.zero())

    def is_zero(self) -> bool:
        return not self.entries

    def _check_shape(self, other):
        if (self.spaces, self.dim) != (other.spaces, other.dim):
            raise PositionError(f"matrices on V^{self.spaces} and V^{other.spaces} do not match")

    def __add__(self, other: "NCMatrix") -> "NCMatrix":
        self._check_shape(other)
        entries = dict(self.entries)
        for key, value in other.entries.items():
            entries[key] = entries[key] + value if key in entries else value
        return NCMatrix(entries, self.spaces, self.dim)

    def __neg__(self) -> "NCMatrix":
        return NCMatrix({key: -value for key, value in self.entries.items()}, self.spaces, self.dim)

    def __sub__(self, other: "NCMatrix") -> "NCMatrix":
        return self + (-other)

    def scale(self, value: Any) -> "NCMatrix":
        return NCMatrix({key: poly.scale(value) for key, poly in self.entries.items()}, self.spaces, self.dim)

    def __mul__(self, other: Any) -> "NCMatrix":
        if isinstance(other, NCMatrix):
            self._check_shape(other)
            by_row: Dict[int, List[Tuple[int, NCPolynomial]]] = {}
            for (j, k), value in other.entries.items():
                by_row.setdefault(j, []).append((k, value))
            entries: Dict[Tuple[int, int], NCPolynomial] = {}
            for (i, j), left in self.entries.items():
                for k, right in by_row.get(j, ()):
                    product = left * right
                    entries[(i, k)] = entries[(i, k)] + product if (i, k) in entries else product
            return NCMatrix(entries, self.spaces, self.dim)
        if isinstance(other, TensorOperator):
            self._check_shape(other)
            by_row = {}
            for (j, k), value in other.entries().items():
                by_row.setdefault(j, []).append((k, value))
            entries = {}
            for (i, j), left in self.entries.items():
                for k, value in by_row.get(j, ()):
                    product = left.scale(value)
                    entries[(i, k)] = entries[(i, k)] + product if (i, k) in entries else product
            return NCMatrix(entries, self.spaces, self.dim)
        if is_scalar_like(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "NCMatrix":
        if isinstance(other, TensorOperator):
            self._check_shape(other)
            by_row: Dict[int, List[Tuple[int, NCPolynomial]]] = {}
            for (j, k), value in self.entries.items():
                by_row.setdefault(j, []).append((k, value))
            entries: Dict[Tuple[int, int], NCPolynomial] = {}
            for (i, j), value in other.entries().items():
                for k, right in by_row.get(j, ()):
                    product = right.scale(value)
                    entries[(i, k)] = entries[(i, k)] + product if (i, k) in entries else product
            return NCMatrix(entries, self.spaces, self.dim)
        if is_scalar_like(other):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other: "NCMatrix") -> "NCMatrix":
        return self * other - other * self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCMatrix):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def embed(self, position: int, ambient: int) -> "NCMatrix":
        """Act on factors position..position+spaces-1 (1-based) of V^{⊗ambient}"""
        if position < 1 or position + self.spaces - 1 > ambient:
            raise PositionError(f"cannot place a matrix on {self.spaces} spaces at position {position} of {ambient}")
        if self.spaces == ambient:
            return self
        dim = self.dim
        positions = tuple(range(position - 1, position - 1 + self.spaces))
        others = [p for p in range(ambient) if p not in positions]
        weights = [dim**(ambient - 1 - p) for p in range(ambient)]
        local = [(digits(r, self.spaces, dim), digits(c, self.spaces, dim), value)
                 for (r, c), value in self.entries.items()]
        entries = {}
        for rest in itertools.product(range(dim), repeat=len(others)):
            base = sum(weights[p] * d for p, d in zip(others, rest))
            for row_digits, col_digits, value in local:
                row = base + sum(weights[p] * d for p, d in zip(positions, row_digits))
                col = base + sum(weights[p] * d for p, d in zip(positions, col_digits))
                entries[(row, col)] = value
        return NCMatrix(entries, ambient, dim)

    def partial_trace(self, count: int, weight: Optional[TensorOperator] = None) -> "NCMatrix":
        """Trace out the trailing `count` factors of weight^{⊗count} · self"""
        if count < 0 or count > self.spaces:
            raise PositionError(f"cannot trace {count} of {self.spaces} spaces")
        if count == 0:
            return self
        block = self.dim**count
        if weight is None:
            weights = {(s, s): ONE for s in range(block)}
        else:
            full = weight
            for _ in range(count - 1):
                full = full.kron(weight)
            weights = full.entries()
        entries: Dict[Tuple[int, int], NCPolynomial] = {}
        for (row, col), value in self.entries.items():
            row_prefix, t = divmod(row, block)
            col_prefix, s = divmod(col, block)
            w = weights.get((s, t))
            if w:
                key = (row_prefix, col_prefix)
                term = value.scale(w)
                entries[key] = entries[key] + term if key in entries else term
        return NCMatrix(entries, self.spaces - count, self.dim)

    def degree(self) -> int:
        return max((poly.degree() for poly in self.entries.values()), default=0)

    def __repr__(self) -> str:
        return f"NCMatrix(spaces={self.spaces}, dim={self.dim}, nnz={len(self.entries)})"


def shift_slices(slices: Dict[int, Any], truncation: int, mode: str, j: int,
                 q: Optional[Scalar] = None) -> Tuple[Dict[int, Any], int]:
    """Laurent slices of X(u') for u' = q^{-2j}u (trig), u - j (rational) or u - jh (h).

    Works for any slice type with scale() and +. Returns (slices, number of discarded terms
    of order above the truncation).
    """
    if j == 0:
        return dict(slices), 0
    if mode == "trig":
        base = (Q if q is None else to_scalar(q))**(2 * j)
        return {a: (value if a == 0 else value.scale(base**a)) for a, value in slices.items()}, 0
    if mode == "rational":
        shift = to_scalar(j)
    elif mode == "h":
        shift = to_scalar(j) * H
    else:
        raise ValueError(f"unknown shift mode '{mode}'")
    # (u - c)^{-a} = sum_n C(a+n-1, n) c^n u^{-(a+n)}
    result: Dict[int, Any] = {}
    discarded = 0
    for a, value in sorted(slices.items()):
        if a == 0:
            result[0] = result[0] + value if 0 in result else value
            continue
        n = 0
        while True:
            order = a + n
            if order > truncation:
                discarded += 1
                break
            term = value.scale(comb(a + n - 1, n) * shift**n)
            result[order] = result[order] + term if order in result else term
            n += 1
    return result, discarded


@dataclass(frozen=True)
class NCSeriesMatrix:
    """Truncated Laurent series sum_a X[a] u^{-a}, 0 <= a <= truncation"""
    slices: Dict[int, NCMatrix]
    truncation: int
    spaces: int
    dim: int
    overline: Optional[int] = None  # aux position of an overlined copy
    discarded: int = 0

    def slice(self, a: int) -> NCMatrix:
        return self.slices.get(a) or NCMatrix.zero(self.spaces, self.dim)

    def map_slices(self, func: Callable[[NCMatrix], NCMatrix], **changes) -> "NCSeriesMatrix":
        values = {"spaces": self.spaces, "dim": self.dim, "overline": self.overline,
                  "truncation": self.truncation, "discarded": self.discarded}
        values.update(changes)
        return NCSeriesMatrix({a: func(x) for a, x in self.slices.items()}, **values)

    def __mul__(self, other: Any) -> "NCSeriesMatrix":
        if isinstance(other, NCSeriesMatrix):
            T = min(self.truncation, other.truncation)
            slices: Dict[int, NCMatrix] = {}
            for a, left in self.slices.items():
                for b, right in other.slices.items():
                    if a + b > T:
                        continue
                    product = left * right
                    slices[a + b] = slices[a + b] + product if a + b in slices else product
            return NCSeriesMatrix(slices, T, self.spaces, self.dim,
                                  discarded=self.discarded + other.discarded)
        if isinstance(other, TensorOperator) or is_scalar_like(other):
            return self.map_slices(lambda x: x * other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "NCSeriesMatrix":
        if isinstance(other, TensorOperator) or is_scalar_like(other):
            return self.map_slices(lambda x: other * x)
        return NotImplemented

    def __add__(self, other: "NCSeriesMatrix") -> "NCSeriesMatrix":
        slices = dict(self.slices)
        for a, value in other.slices.items():
            slices[a] = slices[a] + value if a in slices else value
        return NCSeriesMatrix(slices, min(self.truncation, other.truncation), self.spaces, self.dim)

    def __sub__(self, other: "NCSeriesMatrix") -> "NCSeriesMatrix":
        return self + other.map_slices(lambda x: -x)

    def embed(self, position: int, ambient: int) -> "NCSeriesMatrix":
        return self.map_slices(lambda x: x.embed(position, ambient), spaces=ambient)

    def conjugate(self, op: TensorOperator, op_inverse: TensorOperator) -> "NCSeriesMatrix":
        return self.map_slices(lambda x: op * x * op_inverse)


def generating_matrix(N: int, T: int, scale: Any = None) -> NCSeriesMatrix:
    """L(u) = I + sum_{a=1..T} L[a] u^{-a}, L[a] = (l_i^j[a]); with scale, L = I + scale·L̃"""
    if T < 1:
        raise ValueError(f"truncation must be >= 1, got {T}")
    slices = {0: NCMatrix.identity(1, N)}
    for a in range(1, T + 1):
        entries = {(i, j): NCPolynomial.generator(Generator(a, i, j)) for i in range(N) for j in range(N)}
        matrix = NCMatrix(entries, 1, N)
        slices[a] = matrix.scale(scale) if scale is not None else matrix
    return NCSeriesMatrix(slices, T, 1, N)


def overline_copy(L: NCSeriesMatrix, B, k: int, n: int) -> NCSeriesMatrix:
    """L_k̄ on V^{⊗n}: L_1̄ = L_1, L_{j+1}‾ = R_j L_j̄ R_j^{-1}"""
    if not 1 <= k <= n:
        raise PositionError(f"overlined copy {k} does not fit V^{n}")
    result = L.embed(1, n)
    for j in range(1, k):
        result = result.conjugate(B.at(j, n), B.at(j, n, -1))
    return NCSeriesMatrix(result.slices, result.truncation, n, L.dim, overline=k, discarded=L.discarded)


def shift_argument(L: NCSeriesMatrix, mode: str, j: int, q: Optional[Scalar] = None) -> NCSeriesMatrix:
    """L(q^{-2j}u), L(u - j) or L(u - jh) as a re-expanded series"""
    slices, discarded = shift_slices(L.slices, L.truncation, mode, j, q)
    if discarded:
        logger.debug("Shift %s by %s discarded %s terms above order %s", mode, j, discarded, L.truncation)
    return NCSeriesMatrix(slices, L.truncation, L.spaces, L.dim, L.overline, L.discarded + discarded)


def default_case(B) -> str:
    return "trig" if B.is_hecke else "rational"


def shifted_copy(L: NCSeriesMatrix, B, position: int, n: int, j: int, case: str) -> NCSeriesMatrix:
    """Overlined copy at `position` with its argument shifted j steps"""
    return shift_argument(overline_copy(L, B, position, n), case, j, q=B.q)


@dataclass(frozen=True)
class RelationSet:
    """Truncation-closed defining relations of a presentation.

    grading "weight": every relation is homogeneous in the generator weight (sum of orders);
    "filtered": terms of lower weight occur; "none": weights carry no meaning.
    """
    relations: Tuple[NCPolynomial, ...]
    provenance: Tuple[str, ...]
    truncation: int
    alphabet: Tuple[Generator, ...]
    grading: str = "weight"
    label: str = ""
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.relations)

    def __iter__(self) -> Iterator[NCPolynomial]:
        return iter(self.relations)

    def __getitem__(self, index: int) -> NCPolynomial:
        return self.relations[index]

    def degree(self) -> int:
        return max((r.degree() for r in self.relations), default=0)

    def is_constant_coefficient(self) -> bool:
        return all(r.is_constant_coefficient() for r in self.relations)

    def depends_on_h(self) -> bool:
        return any(v.numer.degree(1) > 0 or v.denom.degree(1) > 0
                   for r in self.relations for v in r.terms.values())


def normalized(poly: NCPolynomial) -> NCPolynomial:
    """Scale so that the deglex-leading coefficient is 1"""
    lead = poly.leading_word()
    return poly.scale(ONE / poly.terms[lead]) if lead is not None else poly


class RelationCollector:
    """Deduplicating accumulator of relations with provenance"""

    def __init__(self, truncation: int):
        self.truncation = truncation
        self.relations: List[NCPolynomial] = []
        self.provenance: List[str] = []
        self._seen = set()
        self.dropped = 0

    def add(self, poly: NCPolynomial, origin: str) -> bool:
        if poly.is_zero():
            return False
        if poly.max_order() > self.truncation:
            self.dropped += 1
            return False
        poly = normalized(poly)
        key = poly.format()
        if key in self._seen:
            return False
        self._seen.add(key)
        self.relations.append(poly)
        self.provenance.append(origin)
        return True

    def add_matrix(self, matrix: NCMatrix, origin: str):
        for (row, col), poly in sorted(matrix.entries.items()):
            self.add(poly, f"{origin}[{row},{col}]")


def _relation_case(B, case: Optional[str]) -> str:
    case = case or default_case(B)
    if case == "trig" and not B.is_hecke:
        raise ValueError("trigonometric relations need a Hecke braiding")
    if case in ("rational", "h") and not B.is_involutive:
        raise ValueError("rational relations need an involutive braiding")
    if case not in ("trig", "rational", "h"):
        raise ValueError(f"unknown case '{case}'")
    return case


def _two_copy_products(L1: Dict[int, NCMatrix], L2: Dict[int, NCMatrix], top: int, spaces: int, dim: int):
    zero = NCMatrix.zero(spaces, dim)
    X: Dict[Tuple[int, int], NCMatrix] = {}
    Y: Dict[Tuple[int, int], NCMatrix] = {}
    for a in range(top + 1):
        for b in range(top + 1):
            X[(a, b)] = L1[a] * L2[b]
            Y[(a, b)] = L1[b] * L2[a]

    def get(table, a, b):
        return table.get((a, b), zero) if a >= 0 and b >= 0 else zero
    return X, Y, get


def relation_coefficients(B, L1: Dict[int, NCMatrix], L2: Dict[int, NCMatrix], R_op: TensorOperator,
                          top: int, case: str, spaces: int) -> Iterator[Tuple[Tuple[int, int], NCMatrix]]:
    """Coefficients at u^{-s} v^{-t} of (u - v)(R(u,v) L1(u) L2(v) - L1(v) L2(u) R(u,v)).

    L1, L2 are slice maps 0..top of the two copies; R_op is R acting on their aux pair.
    """
    X, Y, get = _two_copy_products(L1, L2, top, spaces, B.dim)
    for s in range(-1, top):
        for t in range(-1, top):
            dx = get(X, s + 1, t) - get(X, s, t + 1)
            dy = get(Y, s + 1, t) - get(Y, s, t + 1)
            coefficient = R_op * dx - dy * R_op
            if case == "trig":
                coefficient = coefficient - (get(X, s + 1, t) - get(Y, s + 1, t)).scale(B.lam)
            else:
                c = ONE if case == "rational" else H
                coefficient = coefficient - (get(X, s, t) - get(Y, s, t)).scale(c)
            yield (s, t), coefficient


def yangian_relations(B, T: int, case: Optional[str] = None, scale: Any = None) -> RelationSet:
    """Truncation-closed coefficient relations of R(u,v) L_1̄(u) L_2̄(v) = L_1̄(v) L_2̄(u) R(u,v).

    Relations are built with generators up to order T+1 and kept only when every generator
    has order <= T.
    """
    if T < 1:
        raise ValueError(f"truncation must be >= 1, got {T}")
    case = _relation_case(B, case)
    L = generating_matrix(B.dim, T + 1, scale=scale)
    L1 = overline_copy(L, B, 1, 2)
    L2 = overline_copy(L, B, 2, 2)
    collector = RelationCollector(T)
    for (s, t), coefficient in relation_coefficients(B, L1.slices, L2.slices, B.matrix, T + 1, case, 2):
        collector.add_matrix(coefficient, f"(s={s},t={t})")
    grading = "weight" if case == "trig" and scale is None else "filtered"
    logger.info("Relations for %s (%s, T=%s): %s kept, %s outside the truncation",
                B.label, case, T, len(collector.relations), collector.dropped)
    return RelationSet(tuple(collector.relations), tuple(collector.provenance), T,
                       alphabet(B.dim, T), grading, label=f"{B.label} {case} T={T}")


def shifted_relation_coefficients(B, T: int, case: Optional[str] = None) -> List[Tuple[str, NCPolynomial]]:
    """Entries of (u - v)(R_2(u,v) L_2̄(u) L_3̄(v) - L_2̄(v) L_3̄(u) R_2(u,v)) on V^{⊗3} within the truncation"""
    case = _relation_case(B, case)
    L = generating_matrix(B.dim, T + 1)
    L2 = overline_copy(L, B, 2, 3)
    L3 = overline_copy(L, B, 3, 3)
    result = []
    for (s, t), coefficient in relation_coefficients(B, L2.slices, L3.slices, B.at(2, 3), T + 1, case, 3):
        for (row, col), poly in sorted(coefficient.entries.items()):
            if poly.max_order() <= T:
                result.append((f"(s={s},t={t})[{row},{col}]", poly))
    return result
