"""Euler products over primary Gaussian primes, with truncation bounds.

Every local factor here depends on a prime only through its norm, so a
product is evaluated as exp(sum log f(N(p))) over the norms of the primary
primes up to a bound, with the sum of logarithms computed exactly rounded.

Tail bounds: if |log f(N)| <= C N^-sigma for N > B and at most x Gaussian
primes have norm <= x, partial summation gives

    sum_{N(p) > B} |log f(N(p))| <= C sigma / (sigma - 1) B^(1 - sigma).

C is taken as 1.5 times the largest value of |log f(N)| N^sigma seen on a
logarithmic grid of N in [B, 1e15].
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .complexval import EPS, ComplexVal, csum
from .gaussian import GaussianInt, factor, sieve_primary
from .lfunctions import Y
from .special import cgamma, zeta_K, zeta_K_euler2

DEFAULT_PRIME_BOUND = 10**5

RK1_CONSTANTS = {"piOver4": 4, "piOver6": 6}


@dataclass(frozen=True)
class ProductValue:
    value: ComplexVal
    prime_bound: int
    tail_bound: float

    def as_dict(self) -> dict:
        return {**self.value.as_dict(), "prime_bound": self.prime_bound, "tail_bound": self.tail_bound}


LocalFactor = Callable[[np.ndarray], np.ndarray]


def _tail_constant(local: LocalFactor, sigma: float, bound: int) -> float:
    grid = np.geomspace(max(bound, 2), 1e15, 400)
    vals = np.abs(np.log1p(local(grid).astype(complex))) * grid**sigma
    return 1.5 * float(np.max(vals))


def euler_product(local: LocalFactor, sigma: float, prime_bound: int) -> ProductValue:
    """prod over primary primes p with N(p) <= prime_bound of 1 + local(N(p)).

    ``local`` returns the deviation f(N) - 1 so that log1p keeps full accuracy.
    """
    if sigma <= 1:
        raise ValueError(f"local factors decay like N^-{sigma}; the product does not converge absolutely")
    norms = sieve_primary(prime_bound).norms().astype(np.float64)
    delta = local(norms).astype(complex)
    if np.any(delta == -1) or not np.all(np.isfinite(delta)):
        raise ZeroDivisionError("a local factor vanishes or has a pole")
    logs = np.log1p(delta)
    total = csum(logs)
    value = cmath.exp(total)
    C = _tail_constant(local, sigma, prime_bound)
    tail_log = C * sigma / (sigma - 1) * float(prime_bound) ** (1 - sigma)
    rounding = 8 * EPS * (float(np.sum(np.abs(logs))) + 1)
    err = abs(value) * math.expm1(tail_log + rounding)
    return ProductValue(ComplexVal.of(value, err), prime_bound, abs(value) * math.expm1(tail_log))


def _pow(N: np.ndarray, z: complex) -> np.ndarray:
    return np.exp(z * np.log(N))


# ------------------------------------------------------------------ a_w

def a_w(w: complex, n: GaussianInt) -> ComplexVal:
    """prod over primes p | n (including 1+i) of (1 - N(p)^-w)^-1."""
    w = complex(w)
    if w.real <= 0:
        raise ValueError("a_w needs Re(w) > 0")
    f = factor(n)
    norms = [2] if f.e2 else []
    norms += [p.norm for p, _ in f.factors]
    value = ComplexVal(1.0)
    for N in norms:
        local = 1 - cmath.exp(-w * math.log(N))
        value = value / ComplexVal.of(local, 2 * EPS * abs(local))
    return value


# ---------------------------------------------------------- B, B_K, E_K

def B_sw(s: complex, w: complex, prime_bound: int = DEFAULT_PRIME_BOUND) -> ProductValue:
    """prod over primary p of 1 - 1 / (N^2s (N^w + 1))."""
    s, w = complex(s), complex(w)
    sigma = 2 * s.real + max(w.real, 0.0)
    return euler_product(lambda N: -1 / (_pow(N, 2 * s) * (_pow(N, w) + 1)), sigma, prime_bound)


def B_K(s: complex, prime_bound: int = DEFAULT_PRIME_BOUND) -> ProductValue:
    """prod over odd p of 1 - 1 / (N^2s (N + 1))."""
    return B_sw(s, 1.0, prime_bound)


def _E_local(s: complex):
    def f(N):
        Ns, N1s = _pow(N, s), _pow(N, 1 - s)
        return (Ns - N1s + 1) / ((N + 1) * (Ns + 1) * (N1s - 1))

    return f


def E_K(s: complex, prime_bound: int = DEFAULT_PRIME_BOUND) -> ProductValue:
    s = complex(s)
    if s == 1:
        raise ZeroDivisionError("E_K has local poles at s = 1")
    sigma = 1 + min(s.real, 1 - s.real)
    return euler_product(_E_local(s), sigma, prime_bound)


# ---------------------------------------------------------------- P_K

def _P_local(s: complex, w: complex):
    def f(N):
        num = _pow(N, 1 + 2 * s) + _pow(N, 1 + s) - N - _pow(N, 3 * s)
        den = _pow(N, s) * (-_pow(N, 1 + s) - N + _pow(N, 2 * s)) * (_pow(N, 2 * w) - 1)
        return -num / den

    return f


def P_K_product(s: complex, w: complex, prime_bound: int = DEFAULT_PRIME_BOUND) -> ProductValue:
    s, w = complex(s), complex(w)
    return euler_product(_P_local(s, w), 2 * w.real, prime_bound)


def P_K(s: complex, w: complex, prime_bound: int = DEFAULT_PRIME_BOUND) -> ProductValue:
    """zeta_K^(2)(2s + 2w - 1) times the product over primary primes."""
    s, w = complex(s), complex(w)
    prod = P_K_product(s, w, prime_bound)
    z = zeta_K_euler2(2 * s + 2 * w - 1)
    return ProductValue(prod.value * z, prime_bound, prod.tail_bound * abs(z))


# ------------------------------------------------------ Y, Y_K, G_K

def Y_K(s: complex) -> complex:
    s = complex(s)
    return Y(2 * s / 3) * Y(0.5 - s / 3)


def G_K(s: complex) -> complex:
    """(pi^2 / 32)^(s - 1/2) Gamma(1 - s) / Gamma(s)."""
    s = complex(s)
    return cmath.exp((s - 0.5) * math.log(math.pi**2 / 32)) * cgamma(1 - s) / cgamma(s)


X_K = G_K


# ---------------------------------------------------------------- Q_K

Q_K_VARIANTS = ("literal", "derived")


def _Q_local(s: complex, variant: str):
    # "literal": factor N^(1+4s/3) - 1 and power 2^(2+2s).  "derived": N^(1+2s/3) - 1
    # and 2^(2+4s/3), which is what P_K(2s/3, (3+2s)/6) and the zeta ratio produce
    last = 1 + 4 * s / 3 if variant == "literal" else 1 + 2 * s / 3

    def f(N):
        num = _pow(N, 1 + 4 * s / 3) + _pow(N, 1 + 2 * s / 3) - N - _pow(N, 2 * s)
        den = _pow(N, 2 * s / 3) * (_pow(N, 1 + 2 * s / 3) + N - _pow(N, 4 * s / 3)) * (_pow(N, last) - 1)
        return num / den

    return f, 1 + (4 * s.real / 3 if variant == "literal" else 2 * s.real / 3)


def _two_adic_Q(s: complex) -> complex:
    t = 2 ** (2 * s / 3)
    return (
        (1 - 2 ** (-2 * s))
        / (1 - 2 ** (-2 * (0.5 - s / 3)))
        / (1 + 2 / (t * (2 - t)))
        / (1 - 2 ** (-1 - 2 * s / 3))
    )


def Q_K(s: complex, prime_bound: int = DEFAULT_PRIME_BOUND, variant: str = "literal") -> ProductValue:
    if variant not in Q_K_VARIANTS:
        raise ValueError(f"variant must be one of {Q_K_VARIANTS}")
    s = complex(s)
    local, sigma = _Q_local(s, variant)
    prod = euler_product(local, sigma, prime_bound)
    power = 2 + 2 * s if variant == "literal" else 2 + 4 * s / 3
    E = E_K(2 * s / 3, prime_bound)
    front = ComplexVal.of(math.pi * cmath.exp(power * math.log(2)) * _two_adic_Q(s))
    value = front * E.value * prod.value / (zeta_K(4 * s / 3) * zeta_K(2.0))
    tail = abs(value.value) * (E.tail_bound / max(abs(E.value), 1e-300) + prod.tail_bound / max(abs(prod.value), 1e-300))
    return ProductValue(value, prime_bound, tail)


# ----------------------------------------------------------- residues

def R_K1(s: complex, variant: str | None = None, prime_bound: int = DEFAULT_PRIME_BOUND) -> ComplexVal:
    """pi zeta_K^(2)(2s) B_K(s) / (c zeta_K(2)), c = 4 or 6.

    With ``variant`` None the constant settled by the residue adjudication is used.
    """
    s = complex(s)
    if s == 0.5:
        raise ZeroDivisionError("R_K1 has a pole at s = 1/2")
    if variant is None:
        from .moments import adjudicated_variant

        variant = adjudicated_variant()
    c = RK1_CONSTANTS[variant]
    b = B_K(s, prime_bound).value
    return ComplexVal.of(math.pi / c) * zeta_K_euler2(2 * s) * b / zeta_K(2.0)


def R_K2(s: complex, prime_bound: int = DEFAULT_PRIME_BOUND, variant: str = "literal") -> ComplexVal:
    """Y_K(s) zeta_K(2s) Q_K(s)."""
    s = complex(s)
    q = Q_K(s, prime_bound, variant)
    return ComplexVal.of(Y_K(s)) * zeta_K(2 * s) * q.value


def chain_expression(s: complex, prime_bound: int = DEFAULT_PRIME_BOUND) -> ComplexVal:
    """The residue at w = 1/2 - s/3 assembled step by step from E_K, P_K and zeta_K.

    pi Y(1/2 - s/3) / zeta_K(1 - 2s/3) * zeta_K(2s/3) E_K(2s/3) / (zeta_K(4s/3) zeta_K(2))
      * (1 - 2^(-2(1/2 - s/3)))^-1 (1 + 2/(2^(2s/3) (2 - 2^(2s/3))))^-1 (1 - 2^(-1-2s/3))^-1
      * P_K(2s/3, (3 + 2s)/6)
    """
    s = complex(s)
    u = 2 * s / 3
    t = 2**u
    two_adic = 1 / (1 - 2 ** (-2 * (0.5 - s / 3))) / (1 + 2 / (t * (2 - t))) / (1 - 2 ** (-1 - u))
    front = ComplexVal.of(math.pi * Y(0.5 - s / 3) * two_adic)
    zetas = zeta_K(u) / (zeta_K(1 - u) * zeta_K(2 * u) * zeta_K(2.0))
    E = E_K(u, prime_bound).value
    P = P_K(u, (3 + 2 * s) / 6, prime_bound).value
    return front * zetas * E * P


def zeta_ratio_identity(s: complex) -> tuple[complex, complex, complex]:
    """(zeta_K(2s/3)/zeta_K(1-2s/3), 2^(2+4s/3) Y(2s/3), 2^(2+2s) Y(2s/3))."""
    s = complex(s)
    u = 2 * s / 3
    lhs = (zeta_K(u) / zeta_K(1 - u)).value
    return lhs, 2 ** (2 + 2 * u) * Y(u), 2 ** (2 + 2 * s) * Y(u)
