"""
Exact sparse operators on tensor powers V^{⊗n}

Basis vector e_{i1} ⊗ ... ⊗ e_{in} has index sum(i_k * N^(n-k)): mixed radix,
leftmost factor most significant. Operators act on column vectors.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import PositionError
from .scalar import FIELD, Scalar, is_constant, substitute, to_rational

logger = logging.getLogger(__name__)

Entry = Tuple[int, int]


def digits(index: int, spaces: int, dim: int) -> Tuple[int, ...]:
    """Mixed-radix digits of a basis index, leftmost factor first"""
    result = []
    for _ in range(spaces):
        index, digit = divmod(index, dim)
        result.append(digit)
    return tuple(reversed(result))


def compose(digit_seq: Iterable[int], dim: int) -> int:
    """Inverse of digits()"""
    index = 0
    for digit in digit_seq:
        index = index * dim + digit
    return index


def is_scalar_like(value: Any) -> bool:
    return isinstance(value, int) or FIELD.of_type(value) or QQ.of_type(value)


def _common_domain(*domains):
    return QQ if all(domain == QQ for domain in domains) else FIELD


def _convert(value: Any, domain) -> Any:
    if domain == QQ:
        if FIELD.of_type(value):
            return to_rational(value)
        return QQ.convert(value)
    if FIELD.of_type(value):
        return value
    return FIELD.convert(value)


class TensorOperator:
    """Immutable exact operator on V^{⊗spaces}, dim V = dim.

    Entries live in QQ or in FIELD = QQ(q, h); mixed arithmetic promotes to FIELD.
    """

    __slots__ = ("matrix", "spaces", "dim")

    def __init__(self, matrix: DomainMatrix, spaces: int, dim: int):
        size = dim**spaces
        if matrix.shape != (size, size):
            raise ValueError(f"matrix shape {matrix.shape} does not fit {spaces} spaces of dim {dim}")
        self.matrix = matrix.to_sparse()
        self.spaces = spaces
        self.dim = dim

    # Construction

    @classmethod
    def from_entries(cls, entries: Dict[Entry, Any], spaces: int, dim: int,
                     domain=None) -> "TensorOperator":
        """Build from a {(row, col): value} map; zero values are dropped"""
        if domain is None:
            domain = FIELD if any(FIELD.of_type(v) for v in entries.values()) else QQ
        size = dim**spaces
        dok = {}
        for (row, col), value in entries.items():
            if not (0 <= row < size and 0 <= col < size):
                raise PositionError(f"entry ({row}, {col}) outside [0, {size})")
            value = _convert(value, domain)
            if value:
                dok[(row, col)] = value
        return cls(DomainMatrix.from_dok(dok, (size, size), domain), spaces, dim)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], dim: int, domain=None) -> "TensorOperator":
        """Build from a dense row list; the number of spaces is inferred"""
        size = len(rows)
        spaces = 0
        while dim**spaces < size:
            spaces += 1
        if dim**spaces != size:
            raise ValueError(f"{size} rows is not a power of {dim}")
        entries = {(i, j): value for i, row in enumerate(rows) for j, value in enumerate(row)}
        return cls.from_entries(entries, spaces, dim, domain)

    @classmethod
    def identity(cls, spaces: int, dim: int, domain=QQ) -> "TensorOperator":
        size = dim**spaces
        return cls(DomainMatrix.eye(size, domain), spaces, dim)

    @classmethod
    def zero(cls, spaces: int, dim: int, domain=QQ) -> "TensorOperator":
        size = dim**spaces
        return cls(DomainMatrix.zeros((size, size), domain), spaces, dim)

    @classmethod
    def matrix_unit(cls, i: int, j: int, dim: int) -> "TensorOperator":
        """E_ij on a single space (0-based i, j)"""
        return cls.from_entries({(i, j): 1}, 1, dim, QQ)

    @classmethod
    def flip(cls, dim: int) -> "TensorOperator":
        """P(e_i ⊗ e_j) = e_j ⊗ e_i"""
        return cls.from_entries({(j * dim + i, i * dim + j): 1
                                 for i in range(dim) for j in range(dim)}, 2, dim, QQ)

    @classmethod
    def permutation(cls, order: Sequence[int], dim: int) -> "TensorOperator":
        """Operator sending the factor at position k to position order[k] (0-based)"""
        spaces = len(order)
        if sorted(order) != list(range(spaces)):
            raise PositionError(f"{list(order)} is not a permutation of 0..{spaces - 1}")
        entries = {}
        for source in itertools.product(range(dim), repeat=spaces):
            target = [0] * spaces
            for k, digit in enumerate(source):
                target[order[k]] = digit
            entries[(compose(target, dim), compose(source, dim))] = 1
        return cls.from_entries(entries, spaces, dim, QQ)

    # Inspection

    @property
    def domain(self):
        return self.matrix.domain

    @property
    def size(self) -> int:
        return self.dim**self.spaces

    def entries(self) -> Dict[Entry, Any]:
        return {key: value for key, value in self.matrix.to_dok().items() if value}

    def __getitem__(self, key: Entry) -> Any:
        return self.matrix.to_dok().get(key, self.domain.zero)

    def nnz(self) -> int:
        return len(self.entries())

    def is_zero(self) -> bool:
        return not self.entries()

    def is_identity(self) -> bool:
        return self == TensorOperator.identity(self.spaces, self.dim)

    def first_difference(self, other: "TensorOperator") -> Optional[Entry]:
        """Smallest (row, col) where the two operators differ, or None"""
        difference = self - other
        keys = sorted(difference.entries())
        return keys[0] if keys else None

    def is_symbolic(self) -> bool:
        return self.domain != QQ and any(not is_constant(v) for v in self.entries().values())

    # Arithmetic

    def _check_shape(self, other: "TensorOperator"):
        if (self.spaces, self.dim) != (other.spaces, other.dim):
            raise PositionError(
                f"operators on V^{self.spaces} (dim {self.dim}) and V^{other.spaces} (dim {other.dim}) do not match")

    def convert_to(self, domain) -> "TensorOperator":
        if self.domain == domain:
            return self
        if domain == FIELD:
            return TensorOperator(self.matrix.convert_to(FIELD), self.spaces, self.dim)
        return TensorOperator.from_entries(self.entries(), self.spaces, self.dim, domain)

    def _unified(self, other: "TensorOperator") -> Tuple[DomainMatrix, DomainMatrix]:
        self._check_shape(other)
        domain = _common_domain(self.domain, other.domain)
        return self.convert_to(domain).matrix, other.convert_to(domain).matrix

    def __add__(self, other: "TensorOperator") -> "TensorOperator":
        a, b = self._unified(other)
        return TensorOperator(a.add(b), self.spaces, self.dim)

    def __sub__(self, other: "TensorOperator") -> "TensorOperator":
        a, b = self._unified(other)
        return TensorOperator(a.sub(b), self.spaces, self.dim)

    def __neg__(self) -> "TensorOperator":
        return TensorOperator(self.matrix.neg(), self.spaces, self.dim)

    def __mul__(self, other: Any) -> "TensorOperator":
        if isinstance(other, TensorOperator):
            a, b = self._unified(other)
            return TensorOperator(a.matmul(b), self.spaces, self.dim)
        if is_scalar_like(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "TensorOperator":
        if is_scalar_like(other):
            return self.scale(other)
        return NotImplemented

    def scale(self, value: Any) -> "TensorOperator":
        """Multiply by a scalar (int, rational or Scalar)"""
        domain = FIELD if (FIELD.of_type(value) and not is_constant(value)) else self.domain
        value = _convert(value, domain)
        matrix = self.convert_to(domain).matrix
        return TensorOperator(matrix.scalarmul(value), self.spaces, self.dim)

    def commutator(self, other: "TensorOperator") -> "TensorOperator":
        return self * other - other * self

    def __pow__(self, exponent: int) -> "TensorOperator":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = TensorOperator.identity(self.spaces, self.dim, self.domain)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorOperator):
            return NotImplemented
        if (self.spaces, self.dim) != (other.spaces, other.dim):
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        return f"TensorOperator(spaces={self.spaces}, dim={self.dim}, nnz={self.nnz()}, domain={self.domain})"

    # Linear algebra

    def transpose(self) -> "TensorOperator":
        return TensorOperator(self.matrix.transpose(), self.spaces, self.dim)

    def rank(self) -> int:
        return self.matrix.to_dense().rank()

    def inverse(self) -> "TensorOperator":
        return TensorOperator(self.matrix.to_dense().inv(), self.spaces, self.dim)

    def trace(self) -> Any:
        total = self.domain.zero
        for (row, col), value in self.entries().items():
            if row == col:
                total += value
        return total

    def map(self, func: Callable[[Any], Any], domain=None) -> "TensorOperator":
        """Apply func entrywise"""
        return TensorOperator.from_entries({key: func(value) for key, value in self.entries().items()},
                                           self.spaces, self.dim, domain)

    def specialize(self, q_value=None, h_value=None) -> "TensorOperator":
        """Substitute rational values for q and/or h; constant results drop to QQ"""
        if self.domain == QQ:
            return self
        values = {key: substitute(value, q_value, h_value) for key, value in self.entries().items()}
        domain = QQ if all(is_constant(v) for v in values.values()) else FIELD
        return TensorOperator.from_entries(values, self.spaces, self.dim, domain)

    # Tensor structure

    def kron(self, other: "TensorOperator") -> "TensorOperator":
        """self ⊗ other, self on the leftmost factors"""
        if self.dim != other.dim:
            raise PositionError("tensor factors must share the dimension of V")
        domain = _common_domain(self.domain, other.domain)
        shift = other.size
        entries = {}
        right = other.convert_to(domain).entries()
        for (r1, c1), v1 in self.convert_to(domain).entries().items():
            for (r2, c2), v2 in right.items():
                entries[(r1 * shift + r2, c1 * shift + c2)] = v1 * v2
        return TensorOperator.from_entries(entries, self.spaces + other.spaces, self.dim, domain)

    def embed(self, position: int, ambient: int) -> "TensorOperator":
        """Act on factors position..position+spaces-1 (1-based) of V^{⊗ambient}"""
        if position < 1 or position + self.spaces - 1 > ambient:
            raise PositionError(
                f"cannot place an operator on {self.spaces} spaces at position {position} of {ambient}")
        return self.embed_at(tuple(range(position - 1, position - 1 + self.spaces)), ambient)

    def embed_at(self, positions: Sequence[int], ambient: int) -> "TensorOperator":
        """Act on the listed factors (0-based, in the order of this operator's factors)"""
        positions = tuple(positions)
        if len(positions) != self.spaces or len(set(positions)) != len(positions):
            raise PositionError(f"need {self.spaces} distinct positions, got {positions}")
        if any(p < 0 or p >= ambient for p in positions):
            raise PositionError(f"positions {positions} out of range for {ambient} spaces")
        if positions == tuple(range(ambient)):
            return self
        others = [p for p in range(ambient) if p not in positions]
        dim = self.dim
        weights = [dim**(ambient - 1 - p) for p in range(ambient)]
        entries = {}
        local = [(digits(r, self.spaces, dim), digits(c, self.spaces, dim), v)
                 for (r, c), v in self.entries().items()]
        for rest in itertools.product(range(dim), repeat=len(others)):
            base = sum(weights[p] * d for p, d in zip(others, rest))
            for row_digits, col_digits, value in local:
                row = base + sum(weights[p] * d for p, d in zip(positions, row_digits))
                col = base + sum(weights[p] * d for p, d in zip(positions, col_digits))
                entries[(row, col)] = value
        return TensorOperator.from_entries(entries, ambient, dim, self.domain)

    def partial_trace(self, count: int, weight: Optional["TensorOperator"] = None) -> "TensorOperator":
        """Trace out the trailing `count` factors of weight^{⊗count} · self.

        With weight=None this is the plain partial trace.
        """
        if count < 0 or count > self.spaces:
            raise PositionError(f"cannot trace {count} of {self.spaces} spaces")
        if count == 0:
            return self
        dim = self.dim
        block = dim**count
        if weight is None:
            weights = {(s, s): QQ.one for s in range(block)}
            domain = self.domain
        else:
            if weight.spaces != 1 or weight.dim != dim:
                raise PositionError("trace weight must be a single-space operator")
            full = weight
            for _ in range(count - 1):
                full = full.kron(weight)
            domain = _common_domain(self.domain, weight.domain)
            weights = full.convert_to(domain).entries()
        entries: Dict[Entry, Any] = {}
        source = self.convert_to(domain).entries()
        for (row, col), value in source.items():
            row_prefix, t = divmod(row, block)
            col_prefix, s = divmod(col, block)
            w = weights.get((s, t))
            if w:
                key = (row_prefix, col_prefix)
                entries[key] = entries.get(key, domain.zero) + _convert(w, domain) * value
        return TensorOperator.from_entries(entries, self.spaces - count, dim, domain)

    def rows(self) -> List[List[Any]]:
        dense = self.matrix.to_dense().to_list()
        return [list(row) for row in dense]


@dataclass(frozen=True)
class ChainSpec:
    """Chain of current R-matrices from position start to position end"""
    start: int
    end: int
    sign: int  # +1 or -1: argument steps q^{+2} or q^{-2}
    argument: Scalar

    def validate(self, ambient: int):
        if not (1 <= self.start <= ambient - 1 and 1 <= self.end <= ambient - 1):
            raise PositionError(f"chain {self.start}->{self.end} does not fit V^{ambient}")
        if self.sign not in (1, -1):
            raise ValueError(f"chain sign must be +1 or -1, got {self.sign}")

    def positions(self) -> Iterator[int]:
        step = 1 if self.end >= self.start else -1
        return iter(range(self.start, self.end + step, step))

    @property
    def length(self) -> int:
        return abs(self.end - self.start) + 1
