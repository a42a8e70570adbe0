import pytest
from sympy import QQ

from braided_yangian.core.diffop import (U, DiffOpPoly, OpFunction, evaluate_function, product_applied_to_unit,
                                         residue_of, simple_pole)
from braided_yangian.core.errors import PoleError
from braided_yangian.core.tensor import TensorOperator

I = TensorOperator.identity(1, 2)
X = TensorOperator.matrix_unit(0, 1, 2)


def test_evaluate_and_pole():
    f = simple_pole(2)
    assert evaluate_function(f, 3) == QQ(1)
    with pytest.raises(PoleError):
        evaluate_function(f, 2)


def test_residues():
    assert residue_of(simple_pole(2), 2) == QQ(1)
    assert residue_of(simple_pole(2)**2, 2) == QQ(0)
    assert residue_of(U * simple_pole(2)**2, 2) == QQ(1)
    assert residue_of(simple_pole(2), 5) == QQ(0)


def test_leibniz_rule():
    f = OpFunction({U**2: X}, 1, 2)
    derivative = DiffOpPoly({1: OpFunction.constant(I)}, 1, 2)
    product = derivative * DiffOpPoly({0: f}, 1, 2)
    assert product.order() == 1
    assert product.coefficients[1].at(3) == X.scale(9)
    assert product.coefficients[0].at(3) == X.scale(6)


def test_single_factor_applied_to_unit():
    F = OpFunction({simple_pole(0): X}, 1, 2)
    assert product_applied_to_unit([F]).at(2) == X.scale(QQ(1, 2))


def test_two_factors_applied_to_unit():
    # (F - d)(F - d) 1 = F^2 - F' with F = I/u
    F = OpFunction({simple_pole(0): I}, 1, 2)
    applied = product_applied_to_unit([F, F])
    assert applied.at(1) == I.scale(2)
    assert applied.residue(0).is_zero()


def test_empty_product_rejected():
    with pytest.raises(ValueError):
        product_applied_to_unit([])
