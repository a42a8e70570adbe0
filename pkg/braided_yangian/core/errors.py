"""
Exceptions raised by the verifier
"""
from typing import List, Optional, Tuple


class BraidedYangianError(Exception):
    """Base class for all verifier errors"""
    pass


class ExpressionError(BraidedYangianError):
    """Malformed scalar expression"""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class BraidingError(BraidedYangianError):
    """Invalid braiding input"""
    pass


class BraidRelationError(BraidingError):
    """R1 R2 R1 != R2 R1 R2"""

    def __init__(self, message: str, witness: Tuple[int, int, int]):
        self.witness = witness
        super().__init__(f"{message} (witness row={witness[0]}, col={witness[1]}, space=V^{witness[2]})")


class ClassificationError(BraidingError):
    """Neither the Hecke nor the involutive condition holds"""
    pass


class SkewInvertibilityError(BraidingError):
    """The C-matrix system Tr_2 R_12 C_2 = I_1 has no solution"""
    pass


class BirankError(BraidingError):
    """Bi-rank could not be determined or is not of the form (m|0)"""
    pass


class PoleError(BraidedYangianError):
    """An excluded parameter value was hit"""
    pass


class PositionError(BraidedYangianError):
    """Tensor position or space selection out of range"""
    pass


class SamplingError(BraidedYangianError):
    """No admissible sample plan could be produced"""
    pass


class InconsistentVerdictError(BraidedYangianError):
    """Sampled verdicts disagree between points"""
    pass


class ConfigError(BraidedYangianError):
    """Invalid run configuration"""

    def __init__(self, problems: List[str], message: Optional[str] = None):
        self.problems = list(problems)
        super().__init__(message or "; ".join(self.problems))


class SiteRelationError(BraidedYangianError):
    """A concrete Gaudin site realization violates its defining relations"""
    pass
