import pytest
from sympy import QQ

from braided_yangian.core.errors import SamplingError
from braided_yangian.core.freealg import Generator, NCPolynomial, RelationSet, yangian_relations
from braided_yangian.core.ideal import Certificate, MembershipVerdict, default_ideal_plan, ideal_member
from braided_yangian.core.scalar import SamplePlan, q
from braided_yangian.models.config import settings

a, b = Generator(1, 0, 0), Generator(1, 0, 1)
A, B = NCPolynomial.generator(a), NCPolynomial.generator(b)
COMMUTE = A * B - B * A
Q_COMMUTE = A * B - (B * A).scale(q)


@pytest.fixture
def commuting():
    return RelationSet((COMMUTE,), ("ab - ba",), 1, (a, b), grading="none", label="commuting")


def test_multiple_of_relation_is_member(commuting):
    target = A * COMMUTE + COMMUTE * B.scale(3)
    result = ideal_member(target, commuting, 3)
    assert result.verdict == MembershipVerdict.MEMBER
    assert result.mode == "exact"
    assert result.certificate.recheck(target, commuting)


def test_monomial_is_not_derivable(commuting):
    result = ideal_member(A * B, commuting, 3)
    assert result.verdict == MembershipVerdict.NOT_DERIVABLE
    assert result.certificate is None


def test_zero_is_member(commuting):
    assert ideal_member(NCPolynomial.zero(), commuting, 2).member


def test_degree_cap(commuting):
    with pytest.raises(ValueError):
        ideal_member(A * A * A, commuting, 2)


def test_certificate_json_round_trip(commuting):
    target = B * COMMUTE
    certificate = ideal_member(target, commuting, 3).certificate
    restored = Certificate.from_json(certificate.to_json())
    assert restored.recheck(target, commuting)


def test_trace_commutes_with_generators(flip2):
    relations = yangian_relations(flip2, 1)
    trace = NCPolynomial.generator(Generator(1, 0, 0)) + NCPolynomial.generator(Generator(1, 1, 1))
    target = trace.commutator(NCPolynomial.generator(Generator(1, 0, 1)))
    result = ideal_member(target, relations, 2)
    assert result.member
    assert result.certificate.recheck(target, relations)


@pytest.fixture
def q_commuting():
    return RelationSet((Q_COMMUTE,), ("ab - q ba",), 1, (a, b), grading="none", label="q-commuting")


def test_sampled_membership_sizes_the_plan(q_commuting):
    target = A * Q_COMMUTE
    result = ideal_member(target, q_commuting, 3, q_mode="sampled")
    assert result.member
    assert result.mode == "sampled"
    # five independent rows of q-degree 1 plus the target: six ones
    assert len(result.points) == 7
    assert result.certificate.recheck(target, q_commuting)


def test_sampled_non_member(q_commuting):
    result = ideal_member(A * B, q_commuting, 3, q_mode="sampled")
    assert result.verdict == MembershipVerdict.NOT_DERIVABLE
    assert result.mode == "sampled"


def test_fixed_plan_smaller_than_bound_raises(q_commuting):
    plan = SamplePlan(degree_bound=0, points=(QQ(2), QQ(3)), seed=0)
    with pytest.raises(SamplingError):
        ideal_member(A * Q_COMMUTE, q_commuting, 3, plan=plan, q_mode="sampled")


def test_default_plan_is_widenable():
    plan = default_ideal_plan(seed=3)
    assert plan.widen
    assert plan.degree_bound == 0


def test_sampling_falls_back_to_symbolic(q_commuting, monkeypatch):
    monkeypatch.setattr(settings, "max_sample_points", 4)
    target = Q_COMMUTE * B
    result = ideal_member(target, q_commuting, 3, q_mode="sampled")
    assert result.member
    assert result.mode == "symbolic"
    assert result.certificate.recheck(target, q_commuting)
