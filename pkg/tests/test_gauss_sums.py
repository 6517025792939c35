import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussian, primary
from hml.characters import character_spec, symbol
from hml.gauss_sums import (
    BruteForceCapError,
    e_tilde,
    gauss_brute,
    gauss_brute_batch,
    gauss_closed,
    gauss_multiplicative,
    gauss_primitive_modulus,
    gauss_tilde,
    gauss_tilde_brute,
    gauss_twist,
    phi_i,
    residues,
)
from hml.gaussian import I, ONE, ONE_PLUS_I, GaussianInt, ggcd, sieve_primary

G = GaussianInt
small_primary = primary(25).filter(lambda n: n.norm <= 400)


def test_examples():
    assert gauss_brute(ONE, G(-1, 2)).value.close_to(-math.sqrt(5), 1e-12)
    assert gauss_multiplicative(ONE, G(-1, 2)).real == pytest.approx(-math.sqrt(5))
    assert gauss_brute(ONE, G(-7, 4)).value.close_to(math.sqrt(65), 1e-11)
    assert gauss_multiplicative(ONE, G(-7, 4)).real == pytest.approx(math.sqrt(65))
    assert gauss_tilde(ONE, ONE).real == 0


def test_e_tilde():
    assert e_tilde(ONE, G(2)).value == pytest.approx(1)
    assert e_tilde(I, G(4)).value == pytest.approx(1j)
    with pytest.raises(ZeroDivisionError):
        e_tilde(ONE, G(0))


@pytest.mark.parametrize("n", [G(3, 2), G(2), G(-7, 4), ONE_PLUS_I ** 3, G(6, 1)])
def test_residue_system_complete(n):
    rs = residues(n)
    assert len(rs) == n.norm
    assert rs.is_complete()


def test_residue_cap():
    with pytest.raises(BruteForceCapError):
        residues(G(100), cap=1000)


def test_phi_i():
    assert phi_i(G(-3), 2) == 9 * 8
    assert phi_i(G(-1, 2), 1) == 4


@given(gaussian(50), small_primary)
def test_closed_form_matches_brute_force(r, n):
    assert gauss_multiplicative(r, n).value.close_to(gauss_brute(r, n).value, 1e-9)


@pytest.mark.parametrize("p", list(sieve_primary(60))[:6])
@pytest.mark.parametrize("l", [1, 2, 3])
def test_prime_powers(p, l):
    if p.norm**l > 2 * 10**5:
        pytest.skip("residue system too large")
    for k in (ONE, I, p, p * G(2, 1), p**2, p**3 * G(3)):
        assert gauss_closed(k, p, l).value.close_to(gauss_brute(k, p**l).value, 1e-7)


@given(gaussian(50), gaussian(50), small_primary)
def test_twist_rule(r, s, n):
    if ggcd(s, n).norm != 1 if not s.is_zero() else True:
        return
    assert gauss_twist(r, s, n).value.close_to(gauss_brute(r * s, n).value, 1e-9)
    assert gauss_brute(r * s, n).value.close_to(gauss_brute(r, n).value * symbol(s, n), 1e-9)


@given(primary(40).filter(lambda n: n.norm <= 600), gaussian(30))
def test_tilde_matches_brute_force(n, r):
    assert gauss_tilde(r, n).value.close_to(gauss_tilde_brute(r, n).value, 1e-8)


def test_batch_equals_single():
    n = G(-7, 4)
    rs = [ONE, I, G(2, 1), G(13), n]
    batch = gauss_brute_batch(rs, n)
    for r, g in zip(rs, batch):
        assert g.value.value == gauss_brute(r, n).value.value


@pytest.mark.parametrize(
    "core, twist, expected",
    [(ONE, ONE_PLUS_I, math.sqrt(32)), (G(-3), ONE, 3.0), (G(-1, 2), ONE, math.sqrt(20)), (G(3, 2), ONE, math.sqrt(52)), (ONE, I, 4.0)],
)
def test_primitive_gauss_sums(core, twist, expected):
    g = gauss_primitive_modulus(character_spec(core, twist))
    assert g.value.close_to(expected, 1e-9)


@given(st.sampled_from([ONE, I, ONE_PLUS_I, I * ONE_PLUS_I]), primary(12).filter(lambda n: n.norm < 60))
def test_primitive_gauss_sum_is_sqrt_conductor(twist, core):
    from hml.gaussian import is_squarefree

    if not is_squarefree(core):
        return
    spec = character_spec(core, twist)
    g = gauss_primitive_modulus(spec, check=False)
    assert g.value.close_to(math.sqrt(spec.conductor_norm), 1e-8)
