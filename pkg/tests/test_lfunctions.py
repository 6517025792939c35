import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import primary
from hml.characters import character_spec, eval_tilde, family_char
from hml.gaussian import I, ONE, ONE_PLUS_I, GaussianInt, enumerate_primary, is_squarefree
from hml.lfunctions import L_afe, L_direct, L_tilde, Y, lambda_completed, gauss_series_rhs, tilde_induction
from hml.special import zeta_K, zeta_K_euler2

G = GaussianInt
TWISTS = [ONE, I, ONE_PLUS_I, I * ONE_PLUS_I]
squarefree_core = primary(12).filter(lambda d: d.norm < 120 and is_squarefree(d))
s_values = st.builds(complex, st.floats(-1.5, 2.5), st.floats(-8, 8)).filter(
    lambda s: min(abs(s - k) for k in range(-2, 3)) > 0.05
)


def test_Y_central_value():
    assert Y(0.5) == pytest.approx(1 / 8)


def test_trivial_character_is_zeta():
    spec = character_spec(ONE, ONE)
    for s in (0.5, 0.3 + 2j, 2.0, -0.7):
        assert L_afe(s, spec).value.close_to(zeta_K(s).value, 1e-10)


@given(squarefree_core, st.sampled_from(TWISTS), st.floats(1.3, 3.0))
@settings(max_examples=25)
def test_afe_matches_dirichlet_series(core, twist, sigma):
    spec = character_spec(core, twist)
    s = complex(sigma, 0.7)
    a = L_afe(s, spec).value
    b = L_direct(s, spec, max_norm=4 * 10**5)
    assert abs(a.value - b.value) <= a.err + b.err + 1e-9


@given(squarefree_core, st.sampled_from(TWISTS), s_values, st.floats(0.6, 1.8))
@settings(max_examples=30)
def test_split_independence(core, twist, s, lam):
    spec = character_spec(core, twist)
    a = L_afe(s, spec).value
    b = L_afe(s, spec, split=lam).value
    assert abs(a.value - b.value) <= 1e-9 * max(1.0, abs(a.value)) + a.err + b.err


def test_split_detects_wrong_conductor():
    spec = family_char(G(-1, 2))
    wrong = dataclasses.replace(spec, conductor_norm=spec.conductor_norm * 2)
    s = 0.3 + 1j
    good = abs(L_afe(s, spec).value.value - L_afe(s, spec, split=1.5).value.value)
    bad = abs(L_afe(s, wrong).value.value - L_afe(s, wrong, split=1.5).value.value)
    assert good < 1e-10
    assert bad > 1e-3


@given(squarefree_core, s_values)
@settings(max_examples=20)
def test_completed_symmetry(core, s):
    spec = family_char(core)
    a = lambda_completed(s, spec)
    b = lambda_completed(1 - s, spec, split=1.3)
    assert abs(a.value - b.value) <= 1e-9 * max(1.0, abs(a.value)) + a.err + b.err


def test_real_on_real_axis():
    for d in enumerate_primary(1, 60):
        if is_squarefree(d):
            assert abs(L_afe(0.5, family_char(d)).value.im) < 1e-12


class TestTilde:
    def test_n_one_is_zeta_without_two(self):
        for s in (0.5, 2.0, 0.2 + 3j):
            assert L_tilde(s, ONE).value.close_to(zeta_K_euler2(s).value, 1e-10)

    @pytest.mark.parametrize("n", [G(3, 2), G(-1, 2), G(9), G(-3) * G(-1, 2) ** 2, G(-7, 4)])
    def test_matches_direct_sum(self, n):
        s = 2.2 + 0.5j
        ref = 0j
        for m in enumerate_primary(1, 2 * 10**5):
            ref += eval_tilde(n, m) * m.norm ** (-s)
        assert abs(L_tilde(s, n).value.value - ref) < 1e-5

    def test_induction_records_missing_primes(self):
        ind = tilde_induction(G(-3) * G(-1, 2) ** 2)
        assert ind.primitive.core == G(-3)
        assert ind.extra_primes == (ONE_PLUS_I, G(-1, 2))

    def test_non_primary_rejected(self):
        with pytest.raises(ValueError):
            L_tilde(0.5, G(2, 1))


@pytest.mark.slow
def test_gauss_series_identity():
    n = G(-1, 2)
    s = -0.6
    lhs = L_tilde(s, n).value
    rhs = gauss_series_rhs(s, n, rel_tol=1e-6)
    assert abs(lhs.value - rhs.value) <= 1e-5 * abs(lhs.value)


def test_gauss_series_rejects_squares_and_right_half():
    with pytest.raises(ValueError):
        gauss_series_rhs(-0.6, G(9))
    with pytest.raises(ValueError):
        gauss_series_rhs(0.2, G(-1, 2))
