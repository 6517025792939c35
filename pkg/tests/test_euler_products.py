import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hml.euler_products import (
    B_K,
    E_K,
    G_K,
    P_K_product,
    Q_K,
    R_K1,
    R_K2,
    Y_K,
    a_w,
    chain_expression,
    euler_product,
    zeta_ratio_identity,
)
from hml.gaussian import ONE_PLUS_I, GaussianInt, sieve_primary
from hml.lfunctions import Y

G = GaussianInt
BOUND = 20000
strip = st.floats(0.05, 0.95).filter(lambda s: abs(s - 0.5) > 0.01)


def brute_product(local, bound):
    out = 1.0 + 0j
    for p in sieve_primary(bound):
        out *= 1 + complex(local(np.array([float(p.norm)]))[0])
    return out


class TestAw:
    def test_examples(self):
        assert a_w(2, ONE_PLUS_I).re == pytest.approx(4 / 3)
        assert a_w(1, G(2)).re == pytest.approx(2.0)
        assert a_w(1, G(3)).re == pytest.approx(9 / 8)
        assert a_w(1, G(15)).re == pytest.approx(9 / 8 * 5 / 4 * 5 / 4)
        assert a_w(1, G(1)).re == 1.0

    def test_rejects_left_half(self):
        with pytest.raises(ValueError):
            a_w(0, G(3))


class TestGammaFactors:
    def test_central_values(self):
        assert G_K(0.5) == pytest.approx(1.0)
        assert Y(0.5) == pytest.approx(0.125)
        assert Y_K(0.75) == pytest.approx(Y(0.5) * Y(0.25))

    @given(strip)
    def test_zeta_ratio_identity(self, s):
        lhs, derived, literal = zeta_ratio_identity(s)
        assert lhs == pytest.approx(derived, rel=1e-12)

    @given(strip)
    def test_literal_power_of_two_is_off(self, s):
        lhs, derived, literal = zeta_ratio_identity(s)
        assert literal / lhs == pytest.approx(2 ** (2 * s / 3), rel=1e-12)


class TestProducts:
    def test_generic_product_matches_loop(self):
        local = lambda N: -1 / (N**2 * (N + 1))
        assert euler_product(local, 2.0, 3000).value.close_to(brute_product(local, 3000), 1e-12)

    def test_rejects_divergent(self):
        with pytest.raises(ValueError):
            euler_product(lambda N: 1 / N, 1.0, 100)

    @given(st.floats(0.55, 2.0))
    @settings(max_examples=15)
    def test_B_K_tail_bound(self, s):
        small, large = B_K(s, BOUND), B_K(s, 8 * BOUND)
        assert abs(small.value.value - large.value.value) <= small.tail_bound + large.value.err

    @given(strip)
    @settings(max_examples=15)
    def test_E_K_tail_bound(self, s):
        small, large = E_K(s, BOUND), E_K(s, 8 * BOUND)
        assert abs(small.value.value - large.value.value) <= small.tail_bound + large.value.err

    @given(strip)
    @settings(max_examples=10)
    def test_P_K_tail_bound(self, s):
        w = (3 + 2 * s) / 6
        small, large = P_K_product(2 * s / 3, w, BOUND), P_K_product(2 * s / 3, w, 8 * BOUND)
        assert abs(small.value.value - large.value.value) <= small.tail_bound + large.value.err

    @given(strip)
    @settings(max_examples=10)
    def test_real_for_real_argument(self, s):
        for v in (B_K(s, BOUND).value, E_K(s, BOUND).value, Q_K(s, BOUND, "derived").value):
            assert abs(v.im) <= 1e-12 * abs(v)

    def test_pole(self):
        with pytest.raises(ZeroDivisionError):
            E_K(1.0)
        with pytest.raises(ZeroDivisionError):
            R_K1(0.5, "piOver6")


class TestResidues:
    def test_constant_ratio(self):
        a, b = R_K1(0.7, "piOver4", BOUND), R_K1(0.7, "piOver6", BOUND)
        assert (a / b).re == pytest.approx(1.5)

    def test_default_uses_adjudicated_constant(self):
        assert R_K1(0.7, None, BOUND).value == R_K1(0.7, "piOver6", BOUND).value

    @pytest.mark.parametrize("s", [0.45, 0.55, 0.65, 0.3 + 0.2j])
    def test_chain_matches_derived_Q(self, s):
        chain = chain_expression(s, BOUND).value
        assert R_K2(s, BOUND, "derived").value == pytest.approx(chain, rel=1e-12)

    @pytest.mark.parametrize("s", [0.45, 0.55, 0.65])
    def test_literal_Q_disagrees_with_chain(self, s):
        chain = chain_expression(s, BOUND).value
        literal = R_K2(s, BOUND, "literal").value
        assert abs(literal / chain - 1) > 0.01

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            Q_K(0.6, BOUND, "other")
