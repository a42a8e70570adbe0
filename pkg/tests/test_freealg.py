from braided_yangian.core.freealg import Generator, NCMatrix, NCPolynomial, generating_matrix, yangian_relations
from braided_yangian.core.scalar import q
from braided_yangian.core.tensor import TensorOperator

A = NCPolynomial.generator(Generator(1, 0, 0))
B = NCPolynomial.generator(Generator(1, 0, 1))
C = NCPolynomial.generator(Generator(2, 1, 0))


def test_generator_labels():
    assert Generator(2, 0, 1).label == "l12[2]"
    assert Generator(1, 1, 1, "M").label == "M22[1]"


def test_free_product_is_noncommutative():
    assert A * B != B * A
    assert (A * B).degree() == 2
    assert A.commutator(A).is_zero()


def test_scalar_multiplication_and_weights():
    poly = A * C + B.scale(q)
    assert poly.coefficient((Generator(1, 0, 1),)) == q
    assert poly.weights() == [1, 3]
    assert set(poly.weight_components()) == {1, 3}
    assert not poly.is_constant_coefficient()


def test_zero_terms_are_dropped():
    assert (A - A).is_zero()
    assert not NCPolynomial({(Generator(1, 0, 0),): 0})


def test_specialize():
    poly = B.scale(q)
    assert poly.specialize(q_value=3) == B.scale(3)


def test_evaluate_in_a_representation():
    E01 = TensorOperator.matrix_unit(0, 1, 2)
    E10 = TensorOperator.matrix_unit(1, 0, 2)
    assignment = {Generator(1, 0, 1): E01, Generator(2, 1, 0): E10}
    identity = TensorOperator.identity(1, 2)
    value = B.commutator(C).evaluate(assignment, identity)
    assert value == E01 * E10 - E10 * E01


def test_matrix_times_operator():
    M = NCMatrix({(0, 1): A}, 1, 2)
    E10 = TensorOperator.matrix_unit(1, 0, 2)
    product = M * E10
    assert product[(0, 0)] == A
    assert product[(0, 1)].is_zero()


def test_generating_matrix_slices():
    L = generating_matrix(2, 2)
    assert L.slice(0) == NCMatrix.identity(1, 2)
    assert L.slice(2)[(1, 0)] == NCPolynomial.generator(Generator(2, 1, 0))


def test_relations_respect_truncation(flip2):
    relations = yangian_relations(flip2, 1)
    assert len(relations) > 0
    assert all(relation.max_order() <= 1 for relation in relations)
    assert relations.grading == "filtered"
    assert relations.is_constant_coefficient()


def test_hecke_relations_are_weight_graded(dj2):
    relations = yangian_relations(dj2, 1)
    assert relations.grading == "weight"
    assert all(len(relation.weights()) == 1 for relation in relations)
