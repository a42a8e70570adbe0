import json

import pytest
from sympy import QQ

from braided_yangian.core.braiding import (BraidingKind, baxterize, birank, braiding_to_document,
                                           builtin_braiding, c_matrix, chain, chain_lemma_sides, check_braid,
                                           check_compatibility, classify, closed_form_symmetrizer,
                                           inverse_chain, inversion_candidates, load_braiding,
                                           permutation_rule_sides, r_trace, symmetrizer,
                                           verify_rmatrix_identities)
from braided_yangian.core.errors import BraidingError, BraidRelationError, ClassificationError, PoleError
from braided_yangian.core.scalar import to_scalar
from braided_yangian.core.tensor import ChainSpec, TensorOperator
from braided_yangian.models.report import CheckStatus


def test_builtin_kinds(flip2, dj2, conj2):
    assert flip2.kind == BraidingKind.INVOLUTIVE
    assert dj2.kind == BraidingKind.HECKE
    assert conj2.kind == BraidingKind.INVOLUTIVE


def test_unknown_builtin():
    with pytest.raises(BraidingError):
        builtin_braiding("nope", 2)
    with pytest.raises(BraidingError):
        builtin_braiding("flip", 1)


def test_braid_relation_violation():
    diagonal = TensorOperator.from_entries({(i, i): i + 1 for i in range(4)}, 2, 2)
    with pytest.raises(BraidRelationError) as info:
        check_braid(diagonal)
    assert info.value.witness[2] == 3


def test_classification_rejects_scalar_multiple():
    R = TensorOperator.identity(2, 2).scale(QQ(2))
    check_braid(R)
    with pytest.raises(ClassificationError):
        classify(R)


def test_symmetrizers_of_flip(flip2):
    I = TensorOperator.identity(2, 2)
    P = flip2.matrix
    assert symmetrizer(flip2, 2) == (I - P).scale(QQ(1, 2))
    assert symmetrizer(flip2, 3).is_zero()


def test_birank(flip2, dj2, conj2):
    assert birank(flip2) == 2
    assert birank(dj2) == 2
    assert birank(conj2) == 2


def test_c_matrix_of_flip(flip2, conj2):
    identity = TensorOperator.identity(1, 2)
    assert c_matrix(flip2) == identity
    assert c_matrix(conj2) == identity


def test_r_trace_of_identity_is_dimension(flip2):
    assert r_trace(flip2, TensorOperator.identity(1, 2)) == to_scalar(2)


def test_rational_inversion(flip2):
    R = baxterize(flip2, 3)
    assert R * baxterize(flip2, 3, inverse=True) == TensorOperator.identity(2, 2)


def test_rational_pole(flip2):
    with pytest.raises(PoleError):
        baxterize(flip2, 0)


def test_trigonometric_inversion(dj2):
    R = baxterize(dj2, 3)
    identity = TensorOperator.identity(2, 2)
    assert R * baxterize(dj2, 3, inverse=True) == identity
    assert R * inversion_candidates(dj2, 3)["R(x^-1)"] == identity


def test_trigonometric_needs_hecke(flip2):
    with pytest.raises(BraidingError):
        baxterize(flip2, 3, mode="trig")


def test_document_round_trip(dj2):
    loaded = load_braiding(json.dumps(braiding_to_document(dj2)))
    assert loaded.matrix == dj2.matrix
    assert loaded.kind == BraidingKind.HECKE


def test_document_declared_kind_must_match(dj2):
    document = braiding_to_document(dj2)
    document["kind"] = "involutive"
    with pytest.raises(ClassificationError):
        load_braiding(json.dumps(document))


def test_identity_records_for_flip(flip2):
    records = verify_rmatrix_identities(flip2, ("braid", "kind", "c_matrix", "forms"))
    statuses = {record.check_id: record.status for record in records}
    assert statuses == {
        "braid_relation": CheckStatus.PASS,
        "involutive_condition": CheckStatus.PASS,
        "c_matrix": CheckStatus.PASS,
        "forms": CheckStatus.SKIPPED,
    }


def test_unknown_identity(flip2):
    with pytest.raises(ValueError):
        verify_rmatrix_identities(flip2, ("nope",))


def test_compatibility_with_conjugated_flip(flip2, dj2, conj2):
    assert not check_compatibility(dj2, conj2)
    assert check_compatibility(flip2, conj2)
    assert check_compatibility(conj2, conj2)
    assert check_compatibility(dj2, flip2)


def test_compatibility_records_agree_with_commutation(flip2, dj2):
    records = verify_rmatrix_identities(dj2, ("compatibility",))
    assert [record.parameters["partner"] for record in records] == ["self", "flip", "conjugated_flip"]
    assert {record.status for record in records} == {CheckStatus.PASS}
    assert records[2].detail == "incompatible"
    assert verify_rmatrix_identities(flip2, ("compatibility",))[2].detail == "compatible"


def test_compatibility_dimension_mismatch(flip2):
    with pytest.raises(BraidingError):
        check_compatibility(flip2, builtin_braiding("flip", 3))


@pytest.mark.parametrize("sign", [1, -1])
def test_chain_times_inverse_chain(dj2, sign):
    spec = ChainSpec(1, 2, sign, to_scalar(3))
    assert chain(dj2, spec, 3) * inverse_chain(dj2, spec, 3) == dj2.identity(3)


def test_chains_need_hecke(flip2):
    with pytest.raises(BraidingError):
        chain(flip2, ChainSpec(1, 1, 1, to_scalar(2)), 2)
    with pytest.raises(BraidingError):
        closed_form_symmetrizer(flip2, 2, 1)


@pytest.mark.parametrize("form", [1, 2, 3, 4])
def test_closed_form_symmetrizer_k2(dj2, form):
    assert closed_form_symmetrizer(dj2, 2, form) == symmetrizer(dj2, 2)


@pytest.mark.slow
@pytest.mark.parametrize("form", [1, 2, 3, 4])
def test_closed_form_symmetrizer_k3(dj2, form):
    assert closed_form_symmetrizer(dj2, 3, form) == symmetrizer(dj2, 3)


def test_closed_form_rejects_unknown_form(dj2):
    with pytest.raises(ValueError):
        closed_form_symmetrizer(dj2, 2, 5)


def test_chain_lemma_on_dj_hecke(dj2):
    for lhs, rhs in chain_lemma_sides(dj2, 2, 5):
        assert lhs == rhs


def test_permutation_rule(dj2):
    lhs, rhs = permutation_rule_sides(dj2, 2, 7)
    assert lhs == rhs


def test_parameter_runners_for_flip(flip2):
    records = verify_rmatrix_identities(flip2, ("yang_baxter", "cyclic", "trace_shift"),
                                        cyclic_trials=3, trace_shift_trials=2)
    check_ids = [record.check_id for record in records]
    assert check_ids == ["yang_baxter", "yang_baxter_h", "cyclic_property",
                         "trace_shift", "trace_shift", "trace_shift", "trace_shift"]
    assert {record.status for record in records} == {CheckStatus.PASS}


@pytest.mark.slow
def test_hecke_identity_suite(dj2):
    selection = ("yang_baxter", "cyclic", "trace_shift", "idempotency", "birank", "forms",
                 "inverse_chain", "permutation", "chain_lemma")
    records = verify_rmatrix_identities(dj2, selection, kmax=2, cyclic_trials=3, trace_shift_trials=2)
    assert {record.status for record in records} == {CheckStatus.PASS}
    assert "yang_baxter_h" not in {record.check_id for record in records}
