import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hml import moments
from hml.gaussian import is_squarefree, GaussianInt
from hml.moments import (
    AdjudicationError,
    central_terms,
    central_fit,
    decomposition_check,
    family_range,
    lhs_moment,
    mellin_phi,
    moment_experiment,
    phi,
    phi_array,
    residue_adjudicate,
    rhs_main_terms,
    squares_sum,
)

# L-values summed with the kernel split moved to 1.6, independent of the default split
LHS_06_2000 = 152.82906945203325


def mp_mellin(z):
    f = lambda t: mpmath.exp(-1 / ((t - 0.5) * (2 - t))) * t ** (z - 1)
    return complex(mpmath.quad(f, [0.5, 1, 2]))


class TestWeight:
    def test_values(self):
        assert phi(1.25) == pytest.approx(math.exp(-16 / 9))
        assert phi(0.5) == phi(2.0) == phi(3.0) == 0.0

    @given(st.lists(st.floats(-1, 4), min_size=1, max_size=20))
    def test_array_matches_scalar(self, ts):
        assert np.allclose(phi_array(np.array(ts)), [phi(t) for t in ts], rtol=1e-15, atol=0)

    @given(st.builds(complex, st.floats(-1, 2), st.floats(-5, 5)))
    @settings(max_examples=20)
    def test_mellin_matches_mpmath(self, z):
        got = mellin_phi(z)
        assert abs(got.value - mp_mellin(z)) <= got.err + 1e-13

    @given(st.floats(-2, 3))
    def test_mellin_positive_and_real(self, x):
        v = mellin_phi(x)
        assert v.re > 0 and v.im == 0


class TestLeftSide:
    def test_family_range(self):
        re_, im_, nrm = family_range(200)
        assert np.all((nrm > 100) & (nrm < 400))
        for a, b in zip(re_, im_):
            d = GaussianInt(int(a), int(b))
            assert d.is_primary() and is_squarefree(d)
        assert list(nrm) == sorted(nrm)

    def test_empty(self):
        m = lhs_moment(0.6, 0.2)
        assert m.d_count == 0 and m.value.value == 0

    def test_frozen_value(self):
        m = lhs_moment(0.6, 2000)
        assert m.d_count == 1041
        assert m.value.re == pytest.approx(LHS_06_2000, rel=1e-12)

    def test_threads_bit_identical(self):
        a = lhs_moment(0.7 + 0.3j, 300).value
        b = lhs_moment(0.7 + 0.3j, 300, threads=3).value
        assert a == b

    def test_conjugate_symmetry(self):
        s = 0.65 + 1.5j
        a = lhs_moment(s, 150).value.value
        b = lhs_moment(s.conjugate(), 150).value.value
        assert abs(a - b.conjugate()) < 1e-10 * abs(a)


class TestRightSide:
    def test_frozen_terms_and_residual(self):
        terms = rhs_main_terms(0.6, 2000)
        assert sum(terms).real == pytest.approx(152.1810251964, rel=1e-9)
        assert abs(LHS_06_2000 - sum(terms).real) / LHS_06_2000 < 0.01

    def test_scaling_in_X(self):
        s = 0.6
        a, b = rhs_main_terms(s, 1000), rhs_main_terms(s, 8000)
        powers = [1, 1.5 - s, 0.5 - s / 3, (2 - 2 * s) / 3]
        for x, y, p in zip(a, b, powers):
            assert y / x == pytest.approx(8**p, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            rhs_main_terms(0.2, 100)
        with pytest.raises(ValueError):
            rhs_main_terms(0.5, 100)

    def test_central_finite_parts_stable_in_eps(self):
        a = sum(central_terms(2000, eps=1e-4))
        b = sum(central_terms(2000, eps=5e-4))
        assert abs(a - b) < 1e-7 * abs(a)

    def test_central_is_limit_of_nearby_values(self):
        c = sum(central_terms(1000))
        near = (sum(rhs_main_terms(0.5 + 1e-3, 1000)) + sum(rhs_main_terms(0.5 - 1e-3, 1000))) / 2
        assert abs(c - near) < 1e-4 * abs(c)

    def test_central_fit(self):
        fit = central_fit((500, 1000, 2000, 4000))
        assert fit.fit_residual < 1e-6
        for X, m, s2 in zip(fit.X, fit.main, fit.secondary):
            assert fit.rhs(X) == pytest.approx((m + s2).real, rel=1e-6)
        with pytest.raises(ValueError):
            central_fit((500,))


class TestAdjudication:
    def test_squares_sum_at_w_large(self):
        # as w -> infinity only the factor at 1+i survives and a_{2w} -> 1,
        # leaving the zeta_K^(2)(2s) series with one Euler factor removed
        from hml.special import zeta_K_euler2

        v = squares_sum(3.0, 40.0, max_norm=4000)
        assert v.re == pytest.approx(zeta_K_euler2(6.0).re, rel=1e-9)

    @pytest.mark.parametrize("s", [2.0, 3.0])
    def test_pi_over_six(self, s):
        r = residue_adjudicate(s)
        assert r.constant == "piOver6"
        assert r.relative_gaps["piOver6"] < 1e-9
        assert r.relative_gaps["piOver4"] == pytest.approx(0.5, rel=1e-6)

    def test_rejects_small_s(self):
        with pytest.raises(ValueError):
            residue_adjudicate(1.0)

    def test_state_file(self, tmp_path, monkeypatch):
        monkeypatch.setenv(moments.STATE_ENV, str(tmp_path))
        moments.adjudicated_variant.cache_clear()
        try:
            assert moments.adjudicated_variant() == "piOver6"
            data = json.loads((tmp_path / "residue_constant.json").read_text())
            assert data["constant"] == "piOver6" and len(data["evidence"]) == 2
        finally:
            moments.adjudicated_variant.cache_clear()

    def test_error_type(self):
        assert issubclass(AdjudicationError, ArithmeticError)


class TestDecomposition:
    def test_matched_box(self):
        r = decomposition_check(2.5, 2.0, 300)
        assert r.defect <= r.tail_bound
        assert r.closed_defect <= r.closed_tail_bound

    def test_defect_shrinks(self):
        a = decomposition_check(2.5, 2.0, 100)
        b = decomposition_check(2.5, 2.0, 1000)
        assert b.defect < a.defect

    def test_domain(self):
        with pytest.raises(ValueError):
            decomposition_check(1.5, 2.0, 100)


class TestExperiment:
    def test_report(self):
        rep = moment_experiment(0.7, [100, 200], prime_bound=10**4)
        for row in rep.rows:
            assert row.residual == pytest.approx(row.lhs.value - sum(row.rhs_terms))
            assert row.relative_residual == pytest.approx(abs(row.residual) / abs(sum(row.rhs_terms)))
        csv = rep.to_csv().splitlines()
        assert csv[0].split(",")[:4] == ["X", "lhs_re", "lhs_im", "term1"]
        assert len(csv) == 3
        assert json.loads(rep.to_json())["rows"][0]["d_count"] == rep.rows[0].d_count

    def test_central_dispatch(self):
        rep = moment_experiment(0.5, [200], prime_bound=10**4)
        assert rep.central
