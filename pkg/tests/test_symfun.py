from braided_yangian.core.freealg import Generator, NCPolynomial, generating_matrix
import pytest

from braided_yangian.core.symfun import (SymSeries, elementary_sym, power_sum, shifted_elementary, tau_combination,
                                         verify_AL_chain, verify_bethe_commutativity, verify_ehat_multiplier,
                                         verify_newton, verify_qdet_central, verify_shift_lemma, verify_tau)
from braided_yangian.models.report import CheckStatus


def test_first_elementary_is_trace(flip2):
    L = generating_matrix(2, 1)
    e1 = elementary_sym(flip2, L, 1)
    trace = NCPolynomial.generator(Generator(1, 0, 0)) + NCPolynomial.generator(Generator(1, 1, 1))
    assert e1.coefficient(0) == NCPolynomial.constant(2)
    assert e1.coefficient(1) == trace
    assert power_sum(flip2, L, 1).coefficient(1) == trace


def test_elementary_vanishes_above_birank(flip2):
    L = generating_matrix(2, 1)
    e3 = elementary_sym(flip2, L, 3)
    assert e3.is_zero()
    assert e3.notes


def test_series_product_truncates():
    x = NCPolynomial.generator(Generator(1, 0, 0))
    series = SymSeries("s", 1, {0: NCPolynomial.constant(1), 1: x}, "rational")
    square = series * series
    assert square.coefficient(1) == x.scale(2)
    assert 2 not in square.coefficients


def test_tau_combination_alternates():
    ones = [SymSeries.constant(value, 1, "h") for value in (1, 2, 3)]
    tau = tau_combination(ones, 2)
    # 1 - 2*2 + 3
    assert tau.coefficient(0) == NCPolynomial.constant(0)
    assert tau.label == "τ_2"


def test_newton_first_order_vanishes(flip2):
    records = verify_newton(flip2, kmax=1, T=1, D=2)
    assert records
    assert all(record.status == CheckStatus.PASS for record in records)


def test_shifted_elementary_low_orders(flip2):
    L = generating_matrix(2, 1)
    # Tr A^(2) on two copies of a plane
    assert shifted_elementary(flip2, L, 0).coefficient(0) == NCPolynomial.constant(1)
    assert shifted_elementary(flip2, L, 3).is_zero()


def test_shifted_elementary_needs_involutive(dj2):
    with pytest.raises(ValueError):
        shifted_elementary(dj2, generating_matrix(2, 1), 1)


def test_tau_leading_names_missing_order(flip2):
    records = verify_tau(flip2, 2, T=1, D=4)
    orders = [r for r in records if r.check_id == "tau_order"]
    assert orders and all(r.status == CheckStatus.PASS for r in orders)
    leading = records[-1]
    assert leading.check_id == "tau_leading"
    assert leading.status == CheckStatus.INCONCLUSIVE
    assert "h^2 first appears at u-order 2 > T = 1" in leading.detail
    assert "raise T to at least 2" in leading.detail


def test_tau_skips_non_involutive(dj2):
    records = verify_tau(dj2, 2, T=1, D=4)
    assert [r.status for r in records] == [CheckStatus.SKIPPED]


@pytest.mark.slow
def test_tau_leading_term_at_default_truncation(flip2):
    records = verify_tau(flip2, 2, T=2, D=4)
    assert all(r.status == CheckStatus.PASS for r in records if r.check_id == "tau_order")
    assert records[-1].status == CheckStatus.PASS
    assert "u-orders [2]" in records[-1].detail


def test_ehat_multiplier_reports_constant_term(flip2, dj2):
    record, = verify_ehat_multiplier(flip2, 2, T=2)
    assert record.status in (CheckStatus.PASS, CheckStatus.INCONCLUSIVE)
    assert "u^-0:" in record.detail
    skipped, = verify_ehat_multiplier(dj2, 2, T=2)
    assert skipped.status == CheckStatus.SKIPPED


def test_shift_lemma_skips_beyond_birank(flip2):
    record, = verify_shift_lemma(flip2, 1, 3, T=1)
    assert record.status == CheckStatus.SKIPPED


@pytest.mark.slow
def test_shift_lemma_holds_exactly(dj2):
    records = verify_shift_lemma(dj2, 2, 1, T=2)
    assert len(records) == 3
    assert all(r.status == CheckStatus.PASS for r in records)
    assert all(r.detail == "exact equality" for r in records)


def test_al_chain_needs_hecke(flip2):
    record, = verify_AL_chain(flip2, 2, T=2, D=4)
    assert record.status == CheckStatus.SKIPPED
    assert record.detail == "stated for Hecke braidings"


@pytest.mark.slow
def test_al_chain_entries_are_members(dj2):
    records = verify_AL_chain(dj2, 2, T=2, D=4)
    assert [r.parameters["order"] for r in records] == ["0", "1", "2"]
    assert all(r.status == CheckStatus.PASS for r in records)


@pytest.mark.slow
def test_bethe_commutativity_certificates_recheck(dj2):
    records = verify_bethe_commutativity(dj2, [(1, 1), (1, 2)], T=2, D=4)
    assert len(records) == 8
    assert all(r.status == CheckStatus.PASS for r in records)
    certified = [c for r in records for c in r.certificates]
    assert certified
    assert all(c.recheck() for c in certified)


def test_bethe_commutativity_skips_beyond_birank(flip2):
    records = verify_bethe_commutativity(flip2, [(1, 3)], T=1, D=2)
    assert [r.status for r in records] == [CheckStatus.SKIPPED]


@pytest.mark.slow
def test_quantum_determinant_is_central(dj2):
    records = verify_qdet_central(dj2, T=2, D=4)
    # one record per generator l_i^j[a], a = 1, 2
    assert len(records) == 8
    assert all(r.status == CheckStatus.PASS for r in records)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["dj2", "flip2"])
def test_newton_second_order(name, request):
    B = request.getfixturevalue(name)
    records = verify_newton(B, kmax=2, T=2, D=4)
    assert records
    assert all(r.status == CheckStatus.PASS for r in records)
