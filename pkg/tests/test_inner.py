"""Unit tests for inner constructors and certification."""

import numpy as np
import pytest

from hardylab.errors import DimensionMismatchError, DomainError, NotInnerError
from hardylab.funcs import make_fn
from hardylab.inner import (
    BlaschkeSpec,
    as_inner,
    blaschke_scalar,
    check_inner,
    diag_inner,
    eval_blaschke,
    monomial_inner,
)
from hardylab.multipliers import apply_multiplier, scalar_symbol


class TestBlaschkeScalar:
    def test_zero_at_origin_is_z(self):
        b = blaschke_scalar(BlaschkeSpec([0]), 4)
        assert np.allclose(b.mats[:, 0, 0], [0, 1, 0, 0, 0])
        assert b.tail_bound == 0.0

    def test_half_zero_coefficients(self):
        # hand expansion of (1/2 - z) sum (z/2)^k
        b = blaschke_scalar(BlaschkeSpec([0.5]), 2)
        assert np.allclose(b.mats[:, 0, 0], [0.5, -0.75, -0.375])

    def test_empty_product(self):
        b = blaschke_scalar(BlaschkeSpec([]), 3)
        assert np.allclose(b.mats[:, 0, 0], [1, 0, 0, 0])

    def test_zero_outside_disc(self):
        with pytest.raises(DomainError):
            BlaschkeSpec([1.0])

    def test_rotation_must_be_unimodular(self):
        with pytest.raises(DomainError):
            BlaschkeSpec([], rotation=2.0)

    def test_positive_at_origin(self):
        b = blaschke_scalar(BlaschkeSpec([0.5 * 1j]), 4)
        assert b.mats[0, 0, 0].real == pytest.approx(0.5)
        assert abs(b.mats[0, 0, 0].imag) < 1e-15

    def test_coefficient_decay(self):
        spec = BlaschkeSpec([0.5, 0.3j])
        b = blaschke_scalar(spec, 40)
        mags = np.abs(b.mats[:, 0, 0])
        rho = 0.5
        assert all(mags[k] <= 4.0 * rho ** k for k in range(5, 41))

    def test_truncation_below_shift_degree_carries_tail(self):
        b = blaschke_scalar(BlaschkeSpec([0, 0]), 1)
        assert b.tail_bound >= 1.0
        assert np.allclose(b.mats[:, 0, 0], [0, 0])

    def test_tail_bound_is_certified(self):
        # the declared bound dominates the actual l1 tail
        spec = BlaschkeSpec([0.5, -0.4, 0.25j])
        long = blaschke_scalar(spec, 220).mats[:, 0, 0]
        for d in (8, 16, 32):
            actual = float(np.sum(np.abs(long[d + 1:])))
            assert blaschke_scalar(spec, d).tail_bound >= actual

    def test_matches_closed_form_on_circle(self):
        spec = BlaschkeSpec([0.5], rotation=1j)
        b = blaschke_scalar(spec, 48)
        for t in np.linspace(0, 2 * np.pi, 17):
            w = np.exp(1j * t)
            series = np.polyval(b.mats[::-1, 0, 0], w)
            assert abs(series - eval_blaschke(spec, w)) <= b.tail_bound + 1e-12


class TestMonomialInner:
    def test_constant(self):
        t = monomial_inner(0, 0)
        assert np.allclose(t.mats[:, 0, 0], [1])

    def test_padded(self):
        t = monomial_inner(2, 4)
        assert np.allclose(t.mats[:, 0, 0], [0, 0, 1, 0, 0])
        assert t.tail_bound == 0.0

    def test_power_above_degree(self):
        with pytest.raises(DimensionMismatchError):
            monomial_inner(5, 4)

    def test_exact_isometry(self):
        t = monomial_inner(3, 3)
        f = make_fn(1, [[1], [2], [3]])
        assert apply_multiplier(t, f).norm() == pytest.approx(f.norm())

    def test_application_is_iterated_shift(self):
        from hardylab.funcs import shift

        f = make_fn(1, [[1], [2j], [3]])
        out = apply_multiplier(monomial_inner(3, 4), f)
        assert np.allclose(out.coeffs, shift(shift(shift(f))).padded(out.deg))


class TestDiagInner:
    def test_shift_diagonal(self):
        t = diag_inner([monomial_inner(1, 1)] * 2, 1)
        assert np.allclose(t.mats[1], np.eye(2))
        assert np.allclose(t.mats[0], 0)

    def test_mixed_entries(self):
        b = blaschke_scalar(BlaschkeSpec([0.5]), 4)
        t = diag_inner([monomial_inner(2, 4), b], 4)
        assert np.allclose(t.mats[:, 0, 0], [0, 0, 1, 0, 0])
        assert np.allclose(t.mats[:, 1, 1], b.mats[:, 0, 0])
        assert t.tail_bound == pytest.approx(b.tail_bound)

    def test_identity_entry(self):
        t = diag_inner([monomial_inner(0, 0)], 0)
        assert np.allclose(t.mats[0], [[1]])

    def test_empty_rejected(self):
        with pytest.raises(DimensionMismatchError):
            diag_inner([], 2)

    def test_non_inner_entry_rejected(self):
        with pytest.raises(NotInnerError):
            diag_inner([scalar_symbol([0.5])], 2)


class TestCheckInner:
    def test_shift_diagonal(self):
        t = diag_inner([monomial_inner(1, 1)] * 2, 1)
        assert check_inner(t, 64) <= 1e-12

    def test_monomial_diag(self):
        t = diag_inner([monomial_inner(2, 3), monomial_inner(3, 3)], 3)
        assert check_inner(t, 64) <= 1e-12

    def test_truncated_blaschke_within_tail(self):
        b = blaschke_scalar(BlaschkeSpec([0.5]), 32)
        assert check_inner(b, 4 * 33) <= 3.0 * b.tail_bound + 1e-10

    def test_grid_too_small(self):
        with pytest.raises(DimensionMismatchError):
            check_inner(monomial_inner(1, 4), 10)


class TestAsInner:
    def test_promotes_genuine_inner(self):
        t = as_inner(scalar_symbol([0, 1]))
        assert t.claimed_inner

    def test_rejects_non_inner(self):
        with pytest.raises(NotInnerError):
            as_inner(scalar_symbol([0.5, 0.5]))
