import math

import numpy as np
import pytest

from bergfock.experiments import (
    berezin_suite,
    limit_suite,
    orthogonality_suite,
    sharp_bound_suite,
    szego_suite,
)
from bergfock.experiments.limits import closed_form_norm, dense_window_sweep, integral_sweep
from bergfock.experiments.orthogonality import orthogonality_lhs, orthogonality_rhs
from bergfock.experiments.sharp import (
    bergman_bound,
    bergman_toeplitz_norm,
    concentration,
    concentration_bound,
    lambda_measure,
)
from bergfock.experiments.szego import dense_spot_check, level_set_measure, trace_target
from bergfock.operators import TruncationError
from bergfock.spaces import CoefficientVector, SpaceParams
from bergfock.symbols import SymbolSpec


def _by_tag(records):
    out = {}
    for r in records:
        out.setdefault(r.theorem_tag, []).append(r)
    return out


class TestOrthogonality:
    def test_suite_passes(self):
        recs = orthogonality_suite(n_random=2)
        assert all(r.passed for r in recs), [r.summary_line() for r in recs if not r.passed]

    def test_degree_zero(self):
        recs = orthogonality_suite(alphas=(0.0,), betas=(), degree=0, n_random=1)
        assert recs[0].theorem_tag == "orthogonality_trivial" and recs[0].passed

    def test_space_check(self):
        b, f = SpaceParams.bergman(0.0), SpaceParams.fock(1.0)
        one = CoefficientVector(b, [1.0])
        with pytest.raises(ValueError):
            orthogonality_lhs(f, one, one, one, one)

    def test_rhs(self):
        sp = SpaceParams.bergman(0.0)
        z = CoefficientVector(sp, [0.0, 1.0])
        assert orthogonality_rhs(z, z, z, z) == pytest.approx(0.25)

    def test_degree_range(self):
        with pytest.raises(ValueError):
            orthogonality_suite(degree=5)


class TestLimits:
    def test_suite_passes(self):
        recs = limit_suite()
        assert all(r.passed for r in recs), [r.summary_line() for r in recs if not r.passed]

    def test_constant_exact(self):
        rec = integral_sweep(1.0, 0.0, [2, 4], tests=("constant",))[0]
        assert max(rec.errors) < 1e-12

    def test_closed_form_norm(self):
        assert closed_form_norm(1.0, 2.0, 1.0, 100.0) == pytest.approx(1 - math.exp(-1), abs=2e-3)

    def test_bad_r_list(self):
        with pytest.raises(ValueError, match="r_list must be nonempty increasing"):
            limit_suite(r_list=())
        with pytest.raises(ValueError, match="r_list must be nonempty increasing"):
            limit_suite(r_list=(4, 2))

    @pytest.mark.slow
    def test_dense_windows(self):
        rec = dense_window_sweep(1.0, 0.0, [2, 4, 8])[0]
        assert rec.errors[0] > rec.errors[-1]


class TestSharp:
    def test_suite_passes(self):
        recs = sharp_bound_suite(alpha_list=(0.0, 2.0))
        assert all(r.passed for r in recs), [r.summary_line() for r in recs if not r.passed]

    def test_bergman_equality(self):
        alpha, rho = 2.0, 0.6
        L = rho**2 / (1 - rho**2)
        norm = bergman_toeplitz_norm(SymbolSpec.disc_indicator(rho), alpha)
        assert norm == pytest.approx(1 - (1 + L) ** (-3), abs=1e-10)
        assert bergman_bound(1.0, L, alpha) == pytest.approx(norm, abs=1e-10)

    def test_concentration_equality(self):
        alpha, r1, r2 = 3.0, 0.2, 0.7
        lam = lambda_measure(r1, r2)
        val = concentration(np.array([1.0]), alpha, r1, r2)
        assert val <= concentration_bound(alpha, lam, 1.0) + 1e-12


class TestSzego:
    def test_targets(self):
        f = SymbolSpec.disc_indicator(0.5)
        assert trace_target(f, lambda x: x) == pytest.approx(1 / 3, rel=1e-12)
        assert level_set_measure(f, 0.5) == pytest.approx(1 / 3)
        g = SymbolSpec.radial_profile(lambda r: 1 - r * r, 1.0)
        # {1 - s > 1/2} = {s < 1/2}: lambda = 1
        assert level_set_measure(g, 0.5) == pytest.approx(1.0, rel=1e-10)

    def test_small_suite(self):
        recs = _by_tag(szego_suite(alpha_list=(50.0, 200.0), deltas=(0.5,)))
        assert recs["szego_trace"][0].passed  # h = 1 identity
        assert recs["szego_norm"][0].passed
        assert recs["szego_count"][0].passed

    def test_trace_mpmath_oracle(self):
        # the finite-alpha trace is exact up to rounding: 30-digit incomplete beta sum
        import mpmath
        from bergfock.experiments.szego import szego_diagonal
        alpha = 1000.0
        d, _, _ = szego_diagonal(alpha, SymbolSpec.disc_indicator(0.5))
        with mpmath.workdps(30):
            ref = mpmath.fsum(mpmath.betainc(n + 1, alpha + 1, 0, mpmath.mpf(1) / 4, regularized=True) ** 2
                              for n in range(d.size))
        np.testing.assert_allclose(math.fsum(d * d) / (alpha + 1), float(ref) / (alpha + 1), rtol=1e-12)

    def test_dense_spot_check(self):
        dense, fast, off = dense_spot_check(20.0, SymbolSpec.disc_indicator(0.5), np.array([0.0, 1.0]), N=30)
        assert off < 1e-10
        for k in dense:
            assert dense[k] == pytest.approx(fast[k], abs=1e-9)

    def test_truncation_abort(self):
        with pytest.raises(TruncationError):
            # support touching the boundary makes the tail rule blow past the cap
            szego_suite(alpha_list=(1.0,), symbol=SymbolSpec.disc_indicator(1 - 1e-13))

    def test_window_norm(self):
        with pytest.raises(ValueError):
            szego_suite(alpha_list=(10.0,), window=(1.0, 1.0))


class TestBerezinSuite:
    def test_small_suite(self):
        recs = berezin_suite(alphas=(10.0, 40.0), windows=("1",), ps=(2,))
        assert all(r.passed for r in recs), [r.summary_line() for r in recs if not r.passed]
