"""
Braidings: classification, baxterization, skew-symmetrizers, C-matrix, R-traces and chains
"""
import json
import logging
import random
import threading
import time
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMError

from ..models.config import settings
from ..models.report import CheckRecord, CheckStatus
from ..models.schemas import BraidingFile
from ..utils.expressions import format_scalar, parse_expression
from .errors import (BirankError, BraidRelationError, BraidedYangianError, BraidingError,
                     ClassificationError, ExpressionError, PoleError, PositionError,
                     SkewInvertibilityError)
from .scalar import (FIELD, ONE, Rational, SamplePlan, Scalar, make_sample_plan,
                     q as Q, qfactorial, qint, substitute, to_scalar)
from .tensor import ChainSpec, TensorOperator

logger = logging.getLogger(__name__)

BUILTIN_NAMES = ("conjugated_flip", "dj_hecke", "flip")


class BraidingKind(str, Enum):
    HECKE = "hecke"
    INVOLUTIVE = "involutive"


class Braiding:
    """Verified braiding R on V ⊗ V with write-once caches.

    `q_value` is set on specializations where q was replaced by a rational.
    """

    def __init__(self, name: str, matrix: TensorOperator, kind: BraidingKind,
                 conjugator: Optional[TensorOperator] = None,
                 q_value: Optional[Rational] = None):
        if matrix.spaces != 2:
            raise BraidingError(f"a braiding acts on V ⊗ V, got {matrix.spaces} spaces")
        self.name = name
        self.matrix = matrix
        self.dim = matrix.dim
        self.kind = BraidingKind(kind)
        self.conjugator = conjugator
        self.q_value = q_value
        self._lock = threading.Lock()
        self._inverse: Optional[TensorOperator] = None
        self._c_matrix: Optional[TensorOperator] = None
        self._birank: Optional[int] = None
        self._symmetrizers: Dict[int, TensorOperator] = {1: TensorOperator.identity(1, self.dim)}
        self._specializations: Dict[Rational, "Braiding"] = {}

    def __repr__(self) -> str:
        return f"Braiding({self.label}, kind={self.kind.value})"

    @property
    def label(self) -> str:
        suffix = f", q={self.q_value}" if self.q_value is not None else ""
        return f"{self.name}(N={self.dim}{suffix})"

    @property
    def is_hecke(self) -> bool:
        return self.kind == BraidingKind.HECKE

    @property
    def is_involutive(self) -> bool:
        return self.kind == BraidingKind.INVOLUTIVE

    # Parameters; involutive braidings use q = 1 throughout

    @property
    def q(self) -> Scalar:
        if self.is_involutive:
            return ONE
        if self.q_value is None:
            return Q
        return FIELD.convert(self.q_value)

    @property
    def lam(self) -> Scalar:
        return self.q - self.q**-1

    def qint(self, k: int) -> Scalar:
        if self.is_involutive:
            return qint(k, involutive=True)
        return substitute(qint(k), q_value=self.q_value)

    def qfactorial(self, k: int) -> Scalar:
        if self.is_involutive:
            return qfactorial(k, involutive=True)
        return substitute(qfactorial(k), q_value=self.q_value)

    # Operators

    def identity(self, spaces: int) -> TensorOperator:
        return TensorOperator.identity(spaces, self.dim)

    @property
    def inverse(self) -> TensorOperator:
        """R^{-1}: R - λI for Hecke, R itself when involutive"""
        if self._inverse is None:
            if self.is_involutive:
                inverse = self.matrix
            else:
                inverse = self.matrix - self.identity(2).scale(self.lam)
            with self._lock:
                self._inverse = inverse
        return self._inverse

    def at(self, position: int, ambient: int, power: int = 1) -> TensorOperator:
        """R_position (power +1) or its inverse (power -1) on V^{⊗ambient}"""
        if power not in (1, -1):
            raise ValueError("power must be +1 or -1")
        op = self.matrix if power == 1 else self.inverse
        return op.embed(position, ambient)

    def specialize(self, q_value: Rational) -> "Braiding":
        """Copy with q replaced by a rational (involutive braidings are returned unchanged)"""
        if self.is_involutive or self.q_value is not None:
            return self
        q_value = QQ.convert(q_value)
        cached = self._specializations.get(q_value)
        if cached is None:
            cached = Braiding(self.name, self.matrix.specialize(q_value=q_value), self.kind,
                              self.conjugator, q_value)
            with self._lock:
                self._specializations[q_value] = cached
        return cached

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "N": self.dim, "kind": self.kind.value, "m": birank(self)}


# Construction and classification

def braid_residual(matrix: TensorOperator) -> TensorOperator:
    """R1 R2 R1 - R2 R1 R2 on V^{⊗3}"""
    r1 = matrix.embed(1, 3)
    r2 = matrix.embed(2, 3)
    return r1 * r2 * r1 - r2 * r1 * r2


def check_braid(matrix: TensorOperator) -> None:
    """Raise BraidRelationError with a witness index triple unless the braid relation holds"""
    residual = braid_residual(matrix)
    if not residual.is_zero():
        row, col = sorted(residual.entries())[0]
        raise BraidRelationError("braid relation R1 R2 R1 = R2 R1 R2 fails", (row, col, 3))


def classify(matrix: TensorOperator) -> BraidingKind:
    """Involutive if R^2 = I, else Hecke if (R - qI)(R + q^{-1}I) = 0 with symbolic q"""
    identity = TensorOperator.identity(2, matrix.dim)
    if matrix * matrix == identity:
        return BraidingKind.INVOLUTIVE
    hecke = (matrix - identity.scale(Q)) * (matrix + identity.scale(Q**-1))
    if hecke.is_zero():
        return BraidingKind.HECKE
    raise ClassificationError("matrix satisfies neither R^2 = I nor (R - qI)(R + q^-1 I) = 0")


def flip_matrix(N: int) -> TensorOperator:
    return TensorOperator.flip(N)


def dj_hecke_matrix(N: int) -> TensorOperator:
    """Drinfeld-Jimbo Hecke symmetry.

    For i < j: R(e_i⊗e_i) = q e_i⊗e_i, R(e_i⊗e_j) = e_j⊗e_i + λ e_i⊗e_j, R(e_j⊗e_i) = e_i⊗e_j.
    """
    lam = Q - Q**-1
    entries = {}
    for i in range(N):
        entries[(i * N + i, i * N + i)] = Q
        for j in range(i + 1, N):
            entries[(j * N + i, i * N + j)] = ONE
            entries[(i * N + j, i * N + j)] = lam
            entries[(i * N + j, j * N + i)] = ONE
    return TensorOperator.from_entries(entries, 2, N, FIELD)


def default_conjugator(N: int) -> TensorOperator:
    """Unipotent W = I + (ones on the superdiagonal)"""
    entries = {(i, i): 1 for i in range(N)}
    entries.update({(i, i + 1): 1 for i in range(N - 1)})
    return TensorOperator.from_entries(entries, 1, N, QQ)


def _as_single_space(W: Union[TensorOperator, Sequence[Sequence[Any]]], N: int) -> TensorOperator:
    if isinstance(W, TensorOperator):
        op = W
    else:
        rows = [[to_scalar(value) for value in row] for row in W]
        if len(rows) != N or any(len(row) != N for row in rows):
            raise BraidingError(f"conjugator must be a {N}x{N} matrix")
        op = TensorOperator.from_rows(rows, N)
    if op.spaces != 1 or op.dim != N:
        raise BraidingError(f"conjugator must be a {N}x{N} matrix")
    return op


def builtin_braiding(name: str, N: int, W: Optional[Any] = None) -> Braiding:
    """Build and verify a catalog braiding"""
    if N < 2:
        raise BraidingError(f"dimension must be at least 2, got {N}")
    conjugator = None
    if name == "flip":
        matrix = flip_matrix(N)
    elif name == "dj_hecke":
        matrix = dj_hecke_matrix(N)
    elif name == "conjugated_flip":
        conjugator = _as_single_space(W, N) if W is not None else default_conjugator(N)
        if conjugator.rank() < N:
            raise BraidingError("conjugator W is singular")
        F = conjugator.kron(TensorOperator.identity(1, N))
        matrix = F * flip_matrix(N) * F.inverse()
    else:
        raise BraidingError(f"unknown builtin braiding '{name}' (choose from {', '.join(BUILTIN_NAMES)})")

    check_braid(matrix)
    kind = classify(matrix)
    logger.debug("Built %s N=%s kind=%s", name, N, kind.value)
    return Braiding(name, matrix, kind, conjugator)


def parse_braiding_document(text: str) -> Tuple[BraidingFile, TensorOperator]:
    """Parse an R-matrix file into its schema and raw matrix, without verification"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ExpressionError(f"invalid JSON: {e.msg}", e.pos, text)
    try:
        document = BraidingFile.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise BraidingError(f"invalid braiding file: {problems}")

    entries = {}
    for index, entry in enumerate(document.entries):
        try:
            entries[(entry.row, entry.col)] = parse_expression(entry.value)
        except ExpressionError as e:
            raise ExpressionError(f"entry {index} ('{entry.value}'): {e.args[0]}", e.position, entry.value)
    matrix = TensorOperator.from_entries(entries, 2, document.dim, FIELD)
    return document, matrix


def load_braiding(text: str) -> Braiding:
    """Parse, verify and classify an R-matrix file"""
    document, matrix = parse_braiding_document(text)
    check_braid(matrix)
    kind = classify(matrix)
    if document.kind != "auto" and document.kind != kind.value:
        raise ClassificationError(f"file declares kind '{document.kind}' but the matrix is {kind.value}")
    logger.info("Loaded braiding %s (N=%s, %s)", document.name, document.dim, kind.value)
    return Braiding(document.name, matrix, kind)


def load_braiding_file(path: Union[str, Path]) -> Braiding:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise BraidingError(f"cannot read braiding file {path}: {e}")
    return load_braiding(text)


def resolve_braiding(source: str, N: int) -> Braiding:
    """Builtin name or path to a braiding file"""
    if source in BUILTIN_NAMES:
        return builtin_braiding(source, N)
    return load_braiding_file(source)


def braiding_to_document(B: Braiding) -> Dict[str, Any]:
    """Serialize to the R-matrix file format"""
    entries = [{"row": row, "col": col, "value": format_scalar(to_scalar(value))}
               for (row, col), value in sorted(B.matrix.entries().items())]
    return {"name": B.name, "dim": B.dim, "kind": B.kind.value, "entries": entries}


# Baxterization

def _nonzero(value: Scalar, message: str) -> Scalar:
    if not value:
        raise PoleError(message)
    return value


def baxterize(B: Braiding, x: Any, h: Any = None, inverse: bool = False,
              mode: Optional[str] = None) -> TensorOperator:
    """Current R-matrix R(x) (or its inverse via the inversion formulas).

    trig (Hecke):        R(x) = R - λx/(x-1) I
    rational (involutive): R(x) = R - c/x I with c = h (default 1)
    """
    x = to_scalar(x)
    mode = mode or ("trig" if B.is_hecke else "rational")
    identity = B.identity(2)
    if mode == "trig":
        if not B.is_hecke:
            raise BraidingError("trigonometric baxterization needs a Hecke braiding")
        _nonzero(x - ONE, "R(x) has a pole at x = 1")
        if not inverse:
            return B.matrix - identity.scale(B.lam * x / (x - ONE))
        _nonzero(x, "R^-1(x) is undefined at x = 0")
        norm = _nonzero((x - ONE)**2 - B.lam**2 * x, "R(x) is singular at x = q^{±2}")
        return baxterize(B, x**-1, mode="trig").scale((x - ONE)**2 / norm)
    if mode == "rational":
        if not B.is_involutive:
            raise BraidingError("rational baxterization needs an involutive braiding")
        c = ONE if h is None else to_scalar(h)
        _nonzero(x, "R(x) has a pole at x = 0")
        if not inverse:
            return B.matrix - identity.scale(c / x)
        norm = _nonzero(x**2 - c**2, "R(x) is singular at x = ±h")
        return baxterize(B, -x, h=h, mode="rational").scale(x**2 / norm)
    raise ValueError(f"unknown baxterization mode '{mode}'")


def inversion_candidates(B: Braiding, x: Any) -> Dict[str, TensorOperator]:
    """Both printed forms of the trigonometric inversion formula"""
    x = to_scalar(x)
    norm = _nonzero((x - ONE)**2 - B.lam**2 * x, "R(x) is singular at x = q^{±2}")
    factor = (x - ONE)**2 / norm
    return {
        "R(x^-1)": baxterize(B, x**-1, mode="trig").scale(factor),
        "R(-x^-1)": baxterize(B, -x**-1, mode="trig").scale(factor),
    }


def current(B: Braiding, position: int, x: Any, ambient: int, inverse: bool = False,
            h: Any = None) -> TensorOperator:
    """R_position(x) on V^{⊗ambient}"""
    return baxterize(B, x, h=h, inverse=inverse).embed(position, ambient)


def embed(op: TensorOperator, position: int, ambient: int) -> TensorOperator:
    return op.embed(position, ambient)


# Skew-symmetrizers, bi-rank, C-matrix

def symmetrizer(B: Braiding, k: int) -> TensorOperator:
    """A^(k) on V^{⊗k} by the recursion A^(k+1) = k_q/(k+1)_q A^(k) (q^k/k_q - R_k) A^(k)"""
    if k < 1:
        raise ValueError(f"skew-symmetrizers start at k = 1, got {k}")
    cached = B._symmetrizers.get(k)
    if cached is not None:
        return cached
    previous = symmetrizer(B, k - 1).embed(1, k)
    qk = B.qint(k - 1)
    qk1 = B.qint(k)
    if not qk or not qk1:
        raise PoleError(f"q-integer vanishes at k = {k}")
    middle = B.identity(k).scale(B.q**(k - 1) / qk) - B.at(k - 1, k)
    result = (previous * middle * previous).scale(qk / qk1)
    with B._lock:
        B._symmetrizers[k] = result
    logger.debug("A^(%s) for %s: nnz=%s", k, B.label, result.nnz())
    return result


def skew_symmetrizers(B: Braiding, kmax: int) -> List[TensorOperator]:
    """[A^(1), ..., A^(kmax)], each embedded at positions 1..k of V^{⊗kmax}"""
    return [symmetrizer(B, k).embed(1, kmax) for k in range(1, kmax + 1)]


def birank(B: Braiding) -> int:
    """m with A^(m) != 0 = A^(m+1) and rank A^(m) = 1"""
    if B._birank is not None:
        return B._birank
    cutoff = B.dim + settings.birank_cutoff_offset
    for k in range(2, cutoff + 1):
        if symmetrizer(B, k).is_zero():
            m = k - 1
            rank = symmetrizer(B, m).rank()
            if rank != 1:
                raise BirankError(f"rank A^({m}) = {rank}; {B.label} is not of bi-rank ({m}|0)")
            with B._lock:
                B._birank = m
            return m
    raise BirankError(f"no vanishing skew-symmetrizer up to k = {cutoff} for {B.label}")


def _solve_c_matrix(B: Braiding) -> TensorOperator:
    N = B.dim
    R = B.matrix.entries()
    domain = B.matrix.domain
    system = {}
    for (row, col), value in R.items():
        i, j = divmod(row, N)
        k, l = divmod(col, N)
        system[(i * N + k, l * N + j)] = value
    M = DomainMatrix.from_dok(system, (N * N, N * N), domain).to_dense()
    rhs = DomainMatrix.from_dok({(i * N + i, 0): domain.one for i in range(N)}, (N * N, 1), domain).to_dense()
    if M.rank() < N * N:
        raise SkewInvertibilityError(f"Tr_2 R_12 C_2 = I_1 has no unique solution for {B.label}")
    try:
        solution = M.lu_solve(rhs).to_dok()
    except DMError as e:
        raise SkewInvertibilityError(f"cannot solve for C: {e}")
    entries = {(l, j): solution.get((l * N + j, 0), domain.zero) for l in range(N) for j in range(N)}
    return TensorOperator.from_entries(entries, 1, N, domain)


def c_matrix_properties(B: Braiding, C: TensorOperator) -> Dict[str, Tuple[bool, Optional[str]]]:
    """The three C-matrix properties as {name: (holds, witness)}"""
    results = {}
    traced = (B.matrix * C.embed(2, 2)).partial_trace(1)
    results["Tr_2 R_12 C_2 = I_1"] = (traced == B.identity(1), operator_mismatch(traced, B.identity(1)))
    CC = C.kron(C)
    lhs, rhs = B.matrix * CC, CC * B.matrix
    results["R C_1 C_2 = C_1 C_2 R"] = (lhs == rhs, operator_mismatch(lhs, rhs))
    m = birank(B)
    expected = B.qint(m) / B.q**m
    trace = to_scalar(C.trace())
    results["Tr C = m_q / q^m"] = (trace == expected,
                                   None if trace == expected else
                                   f"Tr C = {format_scalar(trace)}, m_q/q^m = {format_scalar(expected)}")
    return results


def c_matrix(B: Braiding) -> TensorOperator:
    """Solve Tr_2 R_12 C_2 = I_1 and verify the remaining C-matrix properties"""
    if B._c_matrix is not None:
        return B._c_matrix
    C = _solve_c_matrix(B)
    for name, (holds, witness) in c_matrix_properties(B, C).items():
        if not holds:
            raise BraidingError(f"C-matrix property {name} fails for {B.label}: {witness}")
    with B._lock:
        B._c_matrix = C
    return C


def _trace_count(X: TensorOperator, spaces: Optional[Sequence[int]]) -> int:
    if spaces is None:
        return X.spaces
    spaces = sorted(spaces)
    count = len(spaces)
    if spaces != list(range(X.spaces - count + 1, X.spaces + 1)):
        raise PositionError(f"R-trace spaces {spaces} are not a trailing block of 1..{X.spaces}")
    return count


def r_trace(B: Braiding, X: TensorOperator, spaces: Optional[Sequence[int]] = None) -> Union[TensorOperator, Scalar]:
    """Tr over the given trailing spaces (1-based; default all) of C ⊗ ... ⊗ C · X.

    The full trace returns a Scalar.
    """
    count = _trace_count(X, spaces)
    result = X.partial_trace(count, c_matrix(B))
    if result.spaces == 0:
        return to_scalar(result[(0, 0)])
    return result


# Chains

def _require_hecke(B: Braiding, what: str):
    if not B.is_hecke:
        raise BraidingError(f"{what} are defined for Hecke braidings only")


def chain(B: Braiding, spec: ChainSpec, ambient: int, inverse: bool = False) -> TensorOperator:
    """[R_{i->j}(x)]^(±): R_i(x) R_{i±1}(q^{±2}x) ... (current R^{-1} factors when inverse)"""
    _require_hecke(B, "chains")
    spec.validate(ambient)
    argument = to_scalar(spec.argument)
    step = B.q**(2 * spec.sign)
    result = B.identity(ambient)
    for position in spec.positions():
        result = result * current(B, position, argument, ambient, inverse=inverse)
        argument = argument * step
    return result


def inverse_chain(B: Braiding, spec: ChainSpec, ambient: int) -> TensorOperator:
    """{[R_{i->j}(u)]^(±)}^{-1} = [R^{-1}_{j->i}(q^{±2|i-j|}u)]^(∓)"""
    shifted = to_scalar(spec.argument) * B.q**(2 * spec.sign * (spec.length - 1))
    return chain(B, ChainSpec(spec.end, spec.start, -spec.sign, shifted), ambient, inverse=True)


def closed_form_symmetrizer(B: Braiding, k: int, form: int) -> TensorOperator:
    """A^(k) as a product of chains at q-power arguments; form in 1..4"""
    _require_hecke(B, "chain forms of the skew-symmetrizers")
    if k == 1:
        return B.identity(1)
    q2 = B.q**2
    if form == 1:
        specs = [ChainSpec(1, j, 1, q2) for j in range(k - 1, 0, -1)]
    elif form == 2:
        specs = [ChainSpec(k - 1, j, 1, q2) for j in range(1, k)]
    elif form == 3:
        specs = [ChainSpec(j, 1, -1, B.q**(2 * j)) for j in range(1, k)]
    elif form == 4:
        specs = [ChainSpec(k - j, k - 1, -1, B.q**(2 * j)) for j in range(1, k)]
    else:
        raise ValueError(f"form must be 1..4, got {form}")
    product = B.identity(k)
    for spec in specs:
        product = product * chain(B, spec, k)
    sign = -1 if (k * (k - 1) // 2) % 2 else 1
    return product.scale(FIELD.convert(sign) / B.qfactorial(k))


def permutation_rule_sides(B: Braiding, k: int, u: Any) -> Tuple[TensorOperator, TensorOperator]:
    """[R_{1->k}(u)]^+ [R_{1->k-1}(q^2)]^+ and [R_{2->k}(q^2)]^+ [R_{1->k-1}(q^2 u)]^+ R_k(u)"""
    u = to_scalar(u)
    n = k + 1
    q2 = B.q**2
    lhs = chain(B, ChainSpec(1, k, 1, u), n) * chain(B, ChainSpec(1, k - 1, 1, q2), n)
    rhs = (chain(B, ChainSpec(2, k, 1, q2), n) * chain(B, ChainSpec(1, k - 1, 1, q2 * u), n)
           * current(B, k, u, n))
    return lhs, rhs


def chain_lemma_sides(B: Braiding, k: int, u: Any) -> List[Tuple[TensorOperator, TensorOperator]]:
    """Both sides of the four chain/skew-symmetrizer commutation relations on V^{⊗(k+1)}"""
    u = to_scalar(u)
    n = k + 1
    shifted = B.q**(-2 * (k - 1)) * u
    low = symmetrizer(B, k).embed(1, n)
    high = symmetrizer(B, k).embed(2, n)
    return [
        (chain(B, ChainSpec(1, k, 1, shifted), n) * low,
         high * chain(B, ChainSpec(1, k, -1, u), n)),
        (chain(B, ChainSpec(1, k, -1, u), n, inverse=True) * low,
         high * chain(B, ChainSpec(1, k, 1, shifted), n, inverse=True)),
        (low * chain(B, ChainSpec(k, 1, -1, u), n),
         chain(B, ChainSpec(k, 1, 1, shifted), n) * high),
        (low * chain(B, ChainSpec(k, 1, 1, shifted), n, inverse=True),
         chain(B, ChainSpec(k, 1, -1, u), n, inverse=True) * high),
    ]


def check_compatibility(R: Braiding, F: Braiding) -> bool:
    """R1 F2 F1 = F2 F1 R2 and R2 F1 F2 = F1 F2 R1 on V^{⊗3}"""
    if R.dim != F.dim:
        raise BraidingError(f"dimension mismatch: {R.dim} vs {F.dim}")
    R1, R2 = R.at(1, 3), R.at(2, 3)
    F1, F2 = F.at(1, 3), F.at(2, 3)
    return R1 * F2 * F1 == F2 * F1 * R2 and R2 * F1 * F2 == F1 * F2 * R1


# Verification

IDENTITY_IDS = ("braid", "kind", "yang_baxter", "inversion", "c_matrix", "idempotency",
                "birank", "cyclic", "trace_shift", "forms", "inverse_chain",
                "permutation", "chain_lemma", "compatibility")
HECKE_IDENTITIES = ("forms", "inverse_chain", "permutation", "chain_lemma")


def operator_mismatch(lhs: TensorOperator, rhs: TensorOperator) -> Optional[str]:
    """Witness string for the first differing entry, or None when equal"""
    key = lhs.first_difference(rhs)
    if key is None:
        return None
    left = format_scalar(to_scalar(lhs[key]))
    right = format_scalar(to_scalar(rhs[key]))
    return f"entry {key} on V^{lhs.spaces}: lhs={left}, rhs={right}"


def random_operator(spaces: int, dim: int, rng: random.Random, density: float = 0.3,
                    span: int = 3) -> TensorOperator:
    """Sparse operator with small random integer entries"""
    size = dim**spaces
    entries = {}
    for row in range(size):
        for col in range(size):
            if rng.random() < density:
                entries[(row, col)] = rng.randint(-span, span)
    return TensorOperator.from_entries(entries, spaces, dim, QQ)


def _random_r_polynomial(B: Braiding, k: int, rng: random.Random, terms: int = 3) -> TensorOperator:
    """Random polynomial in R_1, ..., R_{k-1} on V^{⊗k}"""
    result = B.identity(k).scale(rng.randint(-2, 2))
    for _ in range(terms):
        word = B.identity(k)
        for _ in range(rng.randint(1, 3)):
            word = word * B.at(rng.randint(1, k - 1), k)
        result = result + word.scale(rng.randint(1, 3))
    return result


def _checked(check_id: str, parameters: Dict[str, Any],
             body: Callable[[], Tuple[bool, Optional[str], Optional[str]]]) -> CheckRecord:
    """Run body() -> (passed, witness, detail); input errors become failures with the message as witness"""
    started = time.perf_counter()
    try:
        passed, witness, detail = body()
    except BraidedYangianError as e:
        logger.debug("%s raised %s", check_id, e)
        return CheckRecord.build(check_id, parameters, False, witness=str(e), started=started)
    return CheckRecord.build(check_id, parameters, passed, witness=witness, detail=detail, started=started)


def _all_equal(pairs: Iterable[Tuple[Any, TensorOperator, TensorOperator]]) -> Tuple[bool, Optional[str]]:
    for label, lhs, rhs in pairs:
        witness = operator_mismatch(lhs, rhs)
        if witness:
            return False, f"{label}: {witness}"
    return True, None


def _instances(B: Braiding, plan: SamplePlan, q_mode: str) -> List[Tuple[Braiding, Scalar]]:
    """(braiding, u) pairs; sampled mode also draws q from the plan's second coordinate"""
    if q_mode == "sampled" and B.is_hecke:
        return [(B.specialize(q_value), to_scalar(u)) for u, q_value in plan.pairs()]
    return [(B, to_scalar(u)) for u in plan.points]


def chain_degree_bound(k: int) -> int:
    """Degree in u of a cross-multiplied identity between two chains of k current factors"""
    return 2 * k


def verify_rmatrix_identities(B: Braiding, selection: Optional[Iterable[str]] = None,
                              plan: Optional[SamplePlan] = None, kmax: int = 3,
                              q_mode: str = "symbolic", seed: Optional[int] = None,
                              cyclic_trials: Optional[int] = None,
                              trace_shift_trials: Optional[int] = None) -> List[CheckRecord]:
    """Evaluate the selected R-matrix identities; failures are records, not exceptions"""
    selected = list(IDENTITY_IDS if selection is None else selection)
    unknown = [name for name in selected if name not in IDENTITY_IDS]
    if unknown:
        raise ValueError(f"unknown identity ids: {unknown}")
    seed = settings.default_seed if seed is None else seed
    guards = [Q - 1, Q + 1]
    if plan is None:
        plan = make_sample_plan(chain_degree_bound(kmax + 1), max(settings.chain_points, chain_degree_bound(kmax + 1) + 1),
                                seed, excluded=guards)
    cyclic_trials = settings.cyclic_trials if cyclic_trials is None else cyclic_trials
    trace_shift_trials = settings.trace_shift_trials if trace_shift_trials is None else trace_shift_trials
    base = {"braiding": B.label, "q_mode": q_mode}
    records: List[CheckRecord] = []

    for name in selected:
        if name in HECKE_IDENTITIES and not B.is_hecke:
            records.append(CheckRecord.build(name, base, status=CheckStatus.SKIPPED,
                                             detail="chains are stated for Hecke braidings only"))
            continue
        runner = _IDENTITY_RUNNERS[name]
        records.extend(runner(B, plan, kmax, q_mode, seed, base,
                              cyclic_trials=cyclic_trials, trace_shift_trials=trace_shift_trials))
    return records


def _run_braid(B, plan, kmax, q_mode, seed, base, **_):
    def body():
        residual = braid_residual(B.matrix)
        if residual.is_zero():
            return True, None, "R1 R2 R1 - R2 R1 R2 = 0"
        row, col = sorted(residual.entries())[0]
        return False, f"witness (row={row}, col={col}, space=V^3)", None
    return [_checked("braid_relation", base, body)]


def _run_kind(B, plan, kmax, q_mode, seed, base, **_):
    def body():
        identity = B.identity(2)
        if B.is_involutive:
            square = B.matrix * B.matrix
            return square == identity, operator_mismatch(square, identity), "R^2 = I"
        hecke = (B.matrix - identity.scale(B.q)) * (B.matrix + identity.scale(B.q**-1))
        zero = TensorOperator.zero(2, B.dim)
        return hecke.is_zero(), operator_mismatch(hecke, zero), "(R - qI)(R + q^-1 I) = 0"
    return [_checked(f"{B.kind.value}_condition", base, body)]


def _yang_baxter_sides(B: Braiding, u: Scalar, v: Scalar, w: Scalar, h: Any = None):
    if B.is_hecke:
        args = (u / v, u / w, v / w)
    else:
        args = (u - v, u - w, v - w)
    uv, uw, vw = (baxterize(B, x, h=h) for x in args)
    lhs = uv.embed(1, 3) * uw.embed(2, 3) * vw.embed(1, 3)
    rhs = vw.embed(2, 3) * uw.embed(1, 3) * uv.embed(2, 3)
    return lhs, rhs


def _run_yang_baxter(B, plan, kmax, q_mode, seed, base, **_):
    records = []
    count = max(settings.yang_baxter_triples, 1)
    triples_plan = make_sample_plan(2, max(count + 2, 3), seed + 1)
    points = [to_scalar(p) for p in triples_plan.points]
    triples = [(points[i], points[i + 1], points[i + 2]) for i in range(count)] if len(points) >= count + 2 else []

    def body(h=None):
        for u, v, w in triples:
            lhs, rhs = _yang_baxter_sides(B, u, v, w, h=h)
            witness = operator_mismatch(lhs, rhs)
            if witness:
                return False, f"(u,v,w)=({format_scalar(u)},{format_scalar(v)},{format_scalar(w)}): {witness}", None
        return True, None, f"{len(triples)} sampled triples"
    records.append(_checked("yang_baxter", dict(base, triples=len(triples)), body))
    if B.is_involutive:
        records.append(_checked("yang_baxter_h", dict(base, triples=len(triples)), lambda: body(h=FIELD.gens[1])))
    return records


def _run_inversion(B, plan, kmax, q_mode, seed, base, **_):
    points = [to_scalar(p) for p in plan.points[:5]]
    if B.is_involutive:
        def body():
            checks = []
            for x in points:
                if x**2 == ONE:
                    continue
                checks.append((f"x={format_scalar(x)}", baxterize(B, x) * baxterize(B, x, inverse=True), B.identity(2)))
            passed, witness = _all_equal(checks)
            return passed, witness, "R^-1(x) = x^2/(x^2-1) R(-x)"
        return [_checked("inversion_rational", base, body)]

    def body():
        holds = {}
        for label in ("R(x^-1)", "R(-x^-1)"):
            holds[label] = True
        for x in points:
            product_with = {label: baxterize(B, x) * candidate
                            for label, candidate in inversion_candidates(B, x).items()}
            for label, product in product_with.items():
                if product != B.identity(2):
                    holds[label] = False
        passing = [label for label, ok in holds.items() if ok]
        detail = "holding variants: " + (", ".join(passing) if passing else "none")
        return bool(passing), None if passing else "neither printed inversion variant holds", detail
    return [_checked("inversion_trig", base, body)]


def _run_c_matrix(B, plan, kmax, q_mode, seed, base, **_):
    def body():
        C = _solve_c_matrix(B)
        failures = [f"{name}: {witness}" for name, (holds, witness) in c_matrix_properties(B, C).items() if not holds]
        diagonal = ", ".join(format_scalar(to_scalar(C[(i, i)])) for i in range(B.dim))
        return not failures, "; ".join(failures) or None, f"diag(C) = [{diagonal}]"
    return [_checked("c_matrix", base, body)]


def _run_idempotency(B, plan, kmax, q_mode, seed, base, **_):
    records = []
    top = min(kmax, birank(B))
    for k in range(1, top + 1):
        def body(k=k):
            A = symmetrizer(B, k)
            square = A * A
            return square == A, operator_mismatch(square, A), None
        records.append(_checked("idempotency", dict(base, k=k), body))
    return records


def _run_birank(B, plan, kmax, q_mode, seed, base, **_):
    def body():
        m = birank(B)
        vanishing = symmetrizer(B, m + 1).is_zero()
        rank = symmetrizer(B, m).rank()
        return vanishing and rank == 1, None if vanishing and rank == 1 else f"rank A^({m}) = {rank}", f"m = {m}"
    return [_checked("birank", base, body)]


def _run_cyclic(B, plan, kmax, q_mode, seed, base, cyclic_trials=5, **_):
    k = 3

    def body():
        rng = random.Random(seed)
        for trial in range(cyclic_trials):
            f = _random_r_polynomial(B, k, rng)
            X = random_operator(k, B.dim, rng)
            lhs, rhs = r_trace(B, f * X), r_trace(B, X * f)
            if lhs != rhs:
                return False, f"trial {trial}: {format_scalar(lhs)} != {format_scalar(rhs)}", None
        return True, None, f"{cyclic_trials} random (f, X) on V^{k}"
    return [_checked("cyclic_property", dict(base, k=k, trials=cyclic_trials), body)]


def trace_shift_sides(B: Braiding, X: TensorOperator, sign: int) -> Tuple[TensorOperator, TensorOperator]:
    """Tr_{R(k+1)}(R_k^{±1} X R_k^{∓1}) and Tr_{R(k)}(X) ⊗ I"""
    k = X.spaces
    extended = X.embed(1, k + 1)
    conjugated = B.at(k, k + 1, sign) * extended * B.at(k, k + 1, -sign)
    lhs = conjugated.partial_trace(1, c_matrix(B))
    reduced = X.partial_trace(1, c_matrix(B))
    if reduced.spaces == 0:
        rhs = B.identity(1).scale(reduced[(0, 0)])
    else:
        rhs = reduced.kron(B.identity(1))
    return lhs, rhs


def _run_trace_shift(B, plan, kmax, q_mode, seed, base, trace_shift_trials=5, **_):
    records = []
    for k in (1, 2):
        for sign in (1, -1):
            def body(k=k, sign=sign):
                rng = random.Random(seed * 31 + k * 2 + (sign > 0))
                for trial in range(trace_shift_trials):
                    X = random_operator(k, B.dim, rng, density=0.5)
                    lhs, rhs = trace_shift_sides(B, X, sign)
                    witness = operator_mismatch(lhs, rhs)
                    if witness:
                        return False, f"trial {trial}: {witness}", None
                return True, None, None
            records.append(_checked("trace_shift", dict(base, k=k, sign="+" if sign > 0 else "-"), body))
    return records


def _run_forms(B, plan, kmax, q_mode, seed, base, **_):
    records = []
    instance = B if q_mode == "symbolic" else B.specialize(plan.h_points[0] if plan.h_points else plan.points[0])
    for k in range(2, min(kmax, settings.forms_kmax) + 1):
        def body(k=k):
            reference = symmetrizer(instance, k)
            checks = [(f"form {form}", closed_form_symmetrizer(instance, k, form), reference)
                      for form in (1, 2, 3, 4)]
            passed, witness = _all_equal(checks)
            return passed, witness, None
        records.append(_checked("symmetrizer_forms", dict(base, k=k), body))
    return records


def _run_inverse_chain(B, plan, kmax, q_mode, seed, base, **_):
    records = []
    for k in range(1, kmax + 1):
        n = k + 1
        for sign in (1, -1):
            def body(k=k, n=n, sign=sign):
                checks = []
                for instance, u in _instances(B, plan, q_mode):
                    spec = ChainSpec(1, k, sign, u)
                    product = chain(instance, spec, n) * inverse_chain(instance, spec, n)
                    checks.append((f"u={format_scalar(u)}", product, instance.identity(n)))
                passed, witness = _all_equal(checks)
                return passed, witness, f"{len(checks)} sampled u"
            records.append(_checked("inverse_chain", dict(base, k=k, sign="+" if sign > 0 else "-"), body))
    return records


def _run_permutation(B, plan, kmax, q_mode, seed, base, **_):
    records = []
    for k in range(2, kmax + 1):
        def body(k=k):
            checks = []
            for instance, u in _instances(B, plan, q_mode):
                lhs, rhs = permutation_rule_sides(instance, k, u)
                checks.append((f"u={format_scalar(u)}", lhs, rhs))
            passed, witness = _all_equal(checks)
            return passed, witness, None
        records.append(_checked("permutation_rule", dict(base, k=k), body))
    return records


def _run_chain_lemma(B, plan, kmax, q_mode, seed, base, **_):
    records = []
    for k in range(1, kmax + 1):
        for relation in range(4):
            def body(k=k, relation=relation):
                checks = []
                for instance, u in _instances(B, plan, q_mode):
                    lhs, rhs = chain_lemma_sides(instance, k, u)[relation]
                    checks.append((f"u={format_scalar(u)}", lhs, rhs))
                passed, witness = _all_equal(checks)
                return passed, witness, None
            records.append(_checked("chain_lemma", dict(base, k=k, relation=relation + 1), body))
    return records


def _run_compatibility(B, plan, kmax, q_mode, seed, base, **_):
    flip = builtin_braiding("flip", B.dim)
    records = [
        _checked("compatibility", dict(base, partner="self"),
                 lambda: (check_compatibility(B, B), None, "(R, R)")),
        _checked("compatibility", dict(base, partner="flip"),
                 lambda: (check_compatibility(B, flip), None, "(R, P)")),
        _checked("compatibility", dict(base, partner="conjugated_flip"),
                 lambda: _conjugated_flip_agreement(B)),
    ]
    return records


def _conjugated_flip_agreement(B: Braiding) -> Tuple[bool, Optional[str], Optional[str]]:
    """R is compatible with (W⊗I)P(W⊗I)^{-1} exactly when R commutes with W⊗W.

    The record passes when the braid-relation check and the commutation test agree;
    the detail says which way both went.
    """
    partner = builtin_braiding("conjugated_flip", B.dim)
    W2 = partner.conjugator.kron(partner.conjugator)
    compatible = check_compatibility(B, partner)
    commutes = B.matrix * W2 == W2 * B.matrix
    if compatible != commutes:
        return False, (f"compatibility check says {compatible}, "
                       f"commutation with W⊗W says {commutes}"), None
    return True, None, "compatible" if compatible else "incompatible"


_IDENTITY_RUNNERS = {
    "braid": _run_braid,
    "kind": _run_kind,
    "yang_baxter": _run_yang_baxter,
    "inversion": _run_inversion,
    "c_matrix": _run_c_matrix,
    "idempotency": _run_idempotency,
    "birank": _run_birank,
    "cyclic": _run_cyclic,
    "trace_shift": _run_trace_shift,
    "forms": _run_forms,
    "inverse_chain": _run_inverse_chain,
    "permutation": _run_permutation,
    "chain_lemma": _run_chain_lemma,
    "compatibility": _run_compatibility,
}
