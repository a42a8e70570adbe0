import pytest
from sympy import QQ

from braided_yangian.core.errors import PoleError, SamplingError
from braided_yangian.core.scalar import (GENERIC_Q_GUARDS, SamplePlan, cleared_degree, h, is_constant,
                                         make_grid_plan, make_sample_plan, minor_degree_bound, q, qfactorial,
                                         qint, substitute, to_rational, to_scalar)


def test_qint_values():
    assert qint(1) == to_scalar(1)
    assert qint(2) == q + q**-1
    assert qint(3) == q**2 + 1 + q**-2
    assert qint(3, involutive=True) == to_scalar(3)


def test_qint_rejects_nonpositive():
    with pytest.raises(ValueError):
        qint(0)


def test_qfactorial_at_q_one():
    assert to_rational(substitute(qfactorial(3), q_value=QQ(1))) == QQ(6)


def test_substitute_pole():
    with pytest.raises(PoleError):
        substitute(q**-1, q_value=QQ(0))


def test_is_constant():
    assert is_constant(to_scalar(QQ(3, 4)))
    assert not is_constant(q)
    with pytest.raises(ValueError):
        to_rational(q)


def test_plan_is_deterministic():
    first = make_sample_plan(3, 5, seed=11, excluded=GENERIC_Q_GUARDS)
    second = make_sample_plan(3, 5, seed=11, excluded=GENERIC_Q_GUARDS)
    assert first == second
    assert len(first.points) == 5
    assert len(set(first.points)) == 5
    assert all(p not in (QQ(0), QQ(1), QQ(-1)) for p in first.points)


def test_plan_needs_more_points_than_degree():
    with pytest.raises(ValueError):
        make_sample_plan(4, 4, seed=1)


def test_plan_rejects_duplicates():
    with pytest.raises(SamplingError):
        SamplePlan(degree_bound=1, points=(QQ(2), QQ(2)), seed=0)
    with pytest.raises(SamplingError):
        SamplePlan(degree_bound=2, points=(QQ(2), QQ(3)), seed=0)


def test_cleared_degree_divides_out_common_powers():
    assert cleared_degree([q, q**2]) == 1
    assert cleared_degree([to_scalar(3), to_scalar(0)]) == 0
    assert cleared_degree([]) == 0


def test_cleared_degree_counts_the_common_denominator():
    assert cleared_degree([1 / (q - 1), q]) == 2
    assert cleared_degree([q**-1, q]) == 2


def test_cleared_degree_per_parameter():
    values = [q * h, h**2 + q**3]
    assert cleared_degree(values, 0) == 3
    assert cleared_degree(values, 1) == 2


def test_minor_degree_bound_takes_the_largest_rows():
    assert minor_degree_bound([1, 3, 2], 2) == 5
    assert minor_degree_bound([1, 3, 2], 5) == 6


def test_widened_plan_keeps_seed_and_prefix():
    plan = make_sample_plan(0, 3, seed=5, excluded=GENERIC_Q_GUARDS, widen=True)
    wide = plan.widened(6)
    assert wide.degree_bound == 6
    assert len(wide.points) == 7
    assert wide.seed == 5
    assert wide.widen
    assert wide.points[:3] == plan.points


def test_widened_plan_adds_guards():
    plan = make_sample_plan(0, 3, seed=5)
    avoided = plan.points[0]
    wide = plan.widened(2, excluded=[lambda x: x - avoided])
    assert avoided not in wide.points


def test_grid_plan_axes():
    plan = make_grid_plan(2, 4, seed=8)
    assert len(plan.points) == len(plan.h_points) == 4
    assert not set(plan.points) & set(plan.h_points)
    assert len(plan.grid()) == 16


def test_grid_needs_long_disjoint_axes():
    with pytest.raises(SamplingError):
        SamplePlan(degree_bound=1, points=(QQ(2), QQ(3)), h_points=(QQ(5),), seed=0).grid()
    with pytest.raises(SamplingError):
        SamplePlan(degree_bound=1, points=(QQ(2), QQ(3)), h_points=(QQ(3), QQ(4)), seed=0).grid()
