import pytest
from sympy import QQ

from braided_yangian.core.braiding import builtin_braiding
from braided_yangian.core.errors import BraidingError, ConfigError, PoleError, SamplingError
from braided_yangian.core.gaudin import (abstract_commutativity, braided_sites, check_site_relations,
                                         classical_sites, gaudin_plan, hamiltonians, lax_degree_bound,
                                         load_system_descriptor, residue_check, residue_decomposition,
                                         system_from_descriptor, talalaev_function, verify_gaudin,
                                         verify_hamiltonians, verify_limit_lax, verify_pp, verify_talalaev,
                                         verify_weighted_inversion)
from braided_yangian.core.scalar import SamplePlan, make_grid_plan
from braided_yangian.core.tensor import TensorOperator
from braided_yangian.models.report import CheckStatus
from braided_yangian.models.schemas import SystemDescriptor
from braided_yangian.utils.parallel import ordered_map


def statuses(records):
    return {record.status for record in records}


def test_two_site_hamiltonians(two_sites):
    P = TensorOperator.flip(2)
    H1, H2 = hamiltonians(two_sites)
    assert H1 == -P
    assert H2 == P


def test_site_relations_hold(two_sites):
    assert check_site_relations(two_sites) is None


def test_lax_relations(two_sites):
    assert statuses(verify_pp(two_sites)) == {CheckStatus.PASS}
    assert statuses(verify_limit_lax(two_sites)) == {CheckStatus.PASS}


def test_hamiltonians_commute_and_sum_to_zero():
    system = classical_sites(2, 3, points=["0", "1", "3"])
    records = verify_hamiltonians(system)
    assert {record.check_id for record in records} == {"hamiltonian_commutator", "hamiltonian_sum"}
    assert statuses(records) == {CheckStatus.PASS}


def test_duplicate_points_rejected():
    with pytest.raises(PoleError):
        classical_sites(2, 2, points=[1, 1])


def test_lax_matrix_pole(two_sites):
    with pytest.raises(PoleError):
        two_sites.lax_at(1)


def test_residue_of_second_talalaev_operator(two_sites):
    residue = talalaev_function(two_sites, 2).residue(QQ(0))
    c, s = residue_decomposition(residue, hamiltonians(two_sites)[0])
    assert c == QQ(-1)
    assert s == QQ(-1)
    assert statuses(residue_check(two_sites)) == {CheckStatus.PASS}


def test_residue_decomposition_rejects_other_operators():
    stray = TensorOperator.from_entries({(0, 1): 1}, 2, 2)
    with pytest.raises(ValueError):
        residue_decomposition(stray, TensorOperator.flip(2))


def test_talalaev_order_is_bounded(two_sites):
    with pytest.raises(ValueError):
        talalaev_function(two_sites, 3)


@pytest.mark.slow
def test_talalaev_operators_commute(two_sites):
    records = verify_talalaev(two_sites, kmax=2)
    assert "talalaev_flip_consistency" in {record.check_id for record in records}
    assert statuses(records) == {CheckStatus.PASS}


def test_weighted_inversion():
    system = classical_sites(2, 2, flavor="weighted")
    assert system.points == (QQ(1), QQ(2))
    assert statuses(verify_weighted_inversion(system)) == {CheckStatus.PASS}


def test_weighted_inversion_skips_zero_point(two_sites):
    assert statuses(verify_weighted_inversion(two_sites)) == {CheckStatus.SKIPPED}


def test_conjugated_flip_transports_sites(conj2):
    system = braided_sites(conj2, 2)
    assert system.realization == "transported"
    assert check_site_relations(system) is None
    assert statuses(verify_pp(system)) == {CheckStatus.PASS}


def test_braided_sites_need_involutive_braiding(dj2):
    with pytest.raises(BraidingError):
        braided_sites(dj2, 2)


@pytest.mark.slow
def test_abstract_hamiltonians_commute(flip2):
    system = braided_sites(flip2, 2, realization="abstract")
    assert system.is_abstract
    records = abstract_commutativity(system, D=4)
    assert statuses(records) == {CheckStatus.PASS}


def test_realization_is_reported_first(flip2):
    system = braided_sites(flip2, 2)
    records = verify_gaudin(system)
    assert records[0].check_id == "realization"
    assert records[0].detail == "fundamental"
    assert CheckStatus.FAIL not in statuses(records)


def test_system_from_descriptor():
    descriptor = SystemDescriptor(flavor="braided", m=2, sites=2, points=["1", "5/2"],
                                  braiding="conjugated_flip")
    system = system_from_descriptor(descriptor)
    assert system.realization == "transported"
    assert system.points == (QQ(1), QQ(5, 2))
    assert system.braiding.name == builtin_braiding("conjugated_flip", 2).name


def test_lax_relation_grid_covers_its_degree(two_sites):
    assert lax_degree_bound(two_sites) == 3
    record = verify_pp(two_sites, seed=4)[0]
    assert record.status == CheckStatus.PASS
    assert record.parameters["degree_bound"] == "3"
    assert record.parameters["points"] == "36"


def test_gaudin_plan_axes_are_disjoint_and_avoid_sites(two_sites):
    plan = gaudin_plan(two_sites, degree_bound=3, seed=9)
    assert len(plan.points) == len(plan.h_points) == 6
    assert not set(plan.points) & set(plan.h_points)
    assert not set(plan.points + plan.h_points) & set(two_sites.points)


def test_plan_smaller_than_lax_degree_is_rejected(two_sites):
    with pytest.raises(SamplingError):
        verify_pp(two_sites, make_grid_plan(0, 2, seed=3))


def test_plan_with_overlapping_axes_is_rejected(two_sites):
    plan = SamplePlan(degree_bound=0, points=tuple(QQ(k) for k in range(2, 8)),
                      h_points=tuple(QQ(k) for k in range(7, 13)), seed=0)
    with pytest.raises(SamplingError):
        verify_pp(two_sites, plan)


def test_plan_hitting_a_site_point_is_rejected(two_sites):
    plan = SamplePlan(degree_bound=0, points=tuple(QQ(k) for k in range(1, 7)),
                      h_points=tuple(QQ(k) for k in range(10, 16)), seed=0)
    with pytest.raises(SamplingError):
        verify_limit_lax(two_sites, plan)


def test_cached_operators_are_built_once_across_threads(two_sites):
    results = ordered_map(lambda _: two_sites.lax_function(copy=1, aux_count=2), range(8), workers=4)
    assert all(result is results[0] for result in results)


def test_load_system_descriptor(tmp_path):
    path = tmp_path / "system.json"
    path.write_text('{"flavor": "weighted", "m": 2, "sites": 2, "points": ["1", "3"]}', encoding="utf-8")
    descriptor = load_system_descriptor(path)
    assert descriptor.flavor == "weighted"
    assert system_from_descriptor(descriptor).points == (QQ(1), QQ(3))


def test_unreadable_system_descriptor(tmp_path):
    path = tmp_path / "system.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_system_descriptor(path)
    with pytest.raises(ConfigError):
        load_system_descriptor(tmp_path / "missing.json")
