import pytest
from sympy import QQ

from braided_yangian.core.errors import PositionError
from braided_yangian.core.tensor import TensorOperator


def test_flip_squares_to_identity():
    P = TensorOperator.flip(3)
    assert P * P == TensorOperator.identity(2, 3)


def test_partial_trace_of_flip():
    P = TensorOperator.flip(2)
    assert P.partial_trace(1) == TensorOperator.identity(1, 2)
    assert P.trace() == QQ(2)


def test_kron_and_embed_dimensions():
    E = TensorOperator.matrix_unit(0, 1, 2)
    product = E.kron(TensorOperator.identity(1, 2))
    assert product.spaces == 2
    assert product.size == 4
    assert E.embed(1, 2) == product
    assert E.embed(2, 3).spaces == 3


def test_embed_out_of_range():
    with pytest.raises(PositionError):
        TensorOperator.flip(2).embed(2, 2)


def test_flip_conjugation_moves_factors():
    P = TensorOperator.flip(2)
    E = TensorOperator.matrix_unit(0, 1, 2)
    assert P * E.embed(1, 2) * P == E.embed(2, 2)


def test_inverse_and_rank():
    rows = [[1, 1], [0, 1]]
    X = TensorOperator.from_rows(rows, 2)
    assert X.rank() == 2
    assert X * X.inverse() == TensorOperator.identity(1, 2)
