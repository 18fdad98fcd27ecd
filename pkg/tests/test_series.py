from __future__ import annotations

import mpmath as mp
import numpy as np
import pytest

import convmap as cm
from convmap.series import MIN_ORDER, derivative_table, eval_table

from .oracles import fd_jet


def geometric(order: int, rmax: float = 0.9) -> cm.PowerSeries:
    # 1/(1-z) truncated
    return cm.PowerSeries(np.ones(order + 1), rmax)


class TestPowerSeries:
    def test_pads_to_min_order(self):
        s = cm.PowerSeries([2.0], 0.5)
        assert s.order == MIN_ORDER
        assert s.coeffs[0] == 2.0
        assert np.all(s.coeffs[1:] == 0.0)

    def test_rejects_bad_rmax(self):
        with pytest.raises(ValueError):
            cm.PowerSeries([1.0, 1.0], 0.0)
        with pytest.raises(ValueError):
            cm.PowerSeries([1.0, 1.0], 1.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            cm.PowerSeries([1.0, np.nan], 0.9)

    def test_tail_bound_is_top_term(self):
        s = geometric(40)
        assert s.tail_bound(0.5) == pytest.approx(0.5**40)
        assert s.tail_bound() == pytest.approx(0.9**40)

    def test_tail_warning(self):
        with pytest.warns(cm.TruncationTail):
            geometric(16, 0.9).warn_if_tail_large()
        # tiny tail stays quiet
        cm.PowerSeries([1.0, 1e-16, 0, 0], 0.9).warn_if_tail_large()


class TestArithmetic:
    def test_mul_matches_polynomial_product(self):
        rng = np.random.default_rng(0)
        a = cm.PowerSeries(rng.standard_normal(9) + 1j * rng.standard_normal(9), 0.9)
        b = cm.PowerSeries(rng.standard_normal(9) + 1j * rng.standard_normal(9), 0.8)
        prod = cm.series_mul(a, b)
        full = np.polynomial.polynomial.polymul(a.coeffs, b.coeffs)
        assert prod.rmax == 0.8
        np.testing.assert_allclose(prod.coeffs, full[: len(prod.coeffs)], atol=1e-14)

    def test_inv_of_geometric(self):
        inv = cm.series_inv(geometric(12))
        expect = np.zeros(13)
        expect[0], expect[1] = 1.0, -1.0
        np.testing.assert_allclose(inv.coeffs, expect, atol=1e-15)

    def test_inv_times_self_is_one(self):
        rng = np.random.default_rng(1)
        c = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        c[0] = 1.5 + 0.5j
        a = cm.PowerSeries(c, 0.9)
        unit = cm.series_mul(a, cm.series_inv(a))
        expect = np.zeros(10, dtype=complex)
        expect[0] = 1.0
        np.testing.assert_allclose(unit.coeffs, expect, atol=1e-12)

    def test_inv_requires_nonzero_constant(self):
        with pytest.raises(ZeroDivisionError):
            cm.series_inv(cm.PowerSeries([0.0, 1.0], 0.9))

    def test_exp_of_log_geometric(self):
        # exp(-log(1-z)) = 1/(1-z)
        order = 20
        k = np.arange(1, order + 1)
        log_s = cm.PowerSeries(np.concatenate([[0.0], 1.0 / k]), 0.9)
        np.testing.assert_allclose(cm.series_exp(log_s).coeffs, np.ones(order + 1), atol=1e-13)

    def test_exp_carries_constant_term(self):
        e = cm.series_exp(cm.PowerSeries([2.0, 0.0, 0.0, 0.0], 0.9))
        assert e.coeffs[0] == pytest.approx(np.exp(2.0))
        np.testing.assert_allclose(e.coeffs[1:], 0.0, atol=1e-15)

    def test_derive_integrate_round_trip(self):
        rng = np.random.default_rng(2)
        a = cm.PowerSeries(rng.standard_normal(8), 0.9)
        back = cm.series_integrate(cm.series_derive(a), c0=a.coeffs[0])
        np.testing.assert_allclose(back.coeffs[:8], a.coeffs, atol=1e-15)

    def test_integrate_cap(self):
        a = cm.PowerSeries(np.ones(6), 0.9)
        assert cm.series_integrate(a, cap=4).order == 4


class TestEvaluation:
    def test_derivative_table_shape(self):
        table = derivative_table(np.ones(8))
        assert table.shape == (8, 4)

    def test_jet_matches_stencil_oracle(self):
        # truncated log(1/(1-z)); the tail at |z| = 0.3 is ~1e-22
        order = 40
        k = np.arange(1, order + 1)
        s = cm.PowerSeries(np.concatenate([[0.0], 1.0 / k]), 0.9)
        table = derivative_table(s.coeffs)
        desc = [mp.mpc(c) for c in reversed(s.coeffs)]

        def f(w):
            # evaluate in mpmath so stencil division by h**3 stays clean
            return mp.polyval(desc, w)

        for z in (0.3, -0.2 + 0.1j, 0.25j):
            jet = cm.series_eval_jet(s, z)
            cols = eval_table(table, z)
            oracle = [complex(v) for v in fd_jet(f, z)]
            got = [jet.f0, jet.f1, jet.f2, jet.f3]
            np.testing.assert_allclose(got, oracle, rtol=1e-10)
            np.testing.assert_allclose(np.asarray(cols).ravel(), got, rtol=0, atol=1e-15)

    def test_jet_outside_radius(self):
        s = geometric(10, 0.5)
        with pytest.raises(cm.RadiusExceeded):
            cm.series_eval_jet(s, 0.6)

    def test_jet_tail_estimate(self):
        s = geometric(30)
        jet = cm.series_eval_jet(s, 0.5)
        assert jet.tail == pytest.approx(s.tail_bound(0.5))
