"""Gamma, incomplete gamma and the Dedekind zeta function of Q(i).

Everything here is vectorized over numpy arrays of complex arguments and
accurate to a few ulps times the condition number on the strips used by the
L-function code (|s| <= 50).
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .complexval import EPS, ComplexVal

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients); relative
# error below 2e-15 for Re(z) >= 1/2.
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
EULER_GAMMA = 0.57721566490153286061


class ConvergenceError(ArithmeticError):
    pass


def _lanczos(z: np.ndarray) -> np.ndarray:
    z = z - 1.0
    acc = np.full(z.shape, LANCZOS_COEFFS[0], dtype=complex)
    for k, c in enumerate(LANCZOS_COEFFS[1:], start=1):
        acc = acc + c / (z + k)
    t = z + LANCZOS_G + 0.5
    return _SQRT_2PI * np.exp((z + 0.5) * np.log(t) - t) * acc


def gamma(z):
    """Complex Gamma function; raises at the poles 0, -1, -2, ..."""
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    pole = (arr.imag == 0) & (arr.real <= 0) & (arr.real == np.round(arr.real))
    if pole.any():
        raise ValueError(f"Gamma has a pole at {arr[pole][0]}")
    out = np.empty_like(arr)
    left = arr.real < 0.5
    right = ~left
    out[right] = _lanczos(arr[right])
    if left.any():
        zl = arr[left]
        out[left] = np.pi / (np.sin(np.pi * zl) * _lanczos(1.0 - zl))
    if scalar:
        out = out[0]
        return out.real if np.isrealobj(z) or isinstance(z, (int, float)) else complex(out)
    return out


def cgamma(z) -> complex:
    return complex(gamma(complex(z)))


# ------------------------------------------------------- incomplete gamma

_TINY = 1e-300
_MAX_ITER = 2000


def _lower_series(s, x):
    """gamma(s, x) by its power series; s broadcast against x."""
    term = 1.0 / s * np.ones_like(x, dtype=complex)
    total = term.copy()
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, _MAX_ITER):
        term = term * x / (s + k)
        total = total + np.where(active, term, 0)
        active &= np.abs(term) > EPS * 0.25 * np.abs(total)
        if not active.any():
            break
    else:
        raise ConvergenceError(f"incomplete gamma series did not converge (s={s}, max x={x.max()})")
    return total * np.exp(s * np.log(x) - x)


def _upper_cf(s, x):
    """Gamma(s, x) by the Legendre continued fraction (modified Lentz)."""
    b = x + 1.0 - s
    c = np.full(x.shape, 1.0 / _TINY, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > EPS
        if not active.any():
            break
    else:
        raise ConvergenceError(
            f"incomplete gamma continued fraction did not converge (s={s}, min x={x.min()})"
        )
    return np.exp(s * np.log(x) - x) * h


def _exp1(x: np.ndarray) -> np.ndarray:
    """Exponential integral E1(x) = Gamma(0, x) for x > 0."""
    out = np.empty(x.shape, dtype=complex)
    small = x < 1.0
    if small.any():
        xs = x[small]
        term = np.ones_like(xs)
        acc = np.zeros_like(xs)
        for k in range(1, 60):
            term = term * (-xs) / k
            acc = acc - term / k
        out[small] = -EULER_GAMMA - np.log(xs) + acc
    if (~small).any():
        out[~small] = _upper_cf(np.zeros(int((~small).sum()), dtype=complex), x[~small])
    return out


def _upper_gamma_negint(m: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Gamma(-m, x) by Gamma(a, x) = (Gamma(a+1, x) - x^a e^-x) / a."""
    val = _exp1(x)
    for a in range(-1, -int(m.max()) - 1, -1):
        step = (val - np.exp(a * np.log(x) - x)) / a
        val = np.where(m >= -a, step, val)
    return val


def upper_gamma(s, x):
    """Upper incomplete gamma Gamma(s, x) for x > 0 (array in x, scalar or array s).

    Power series for x < max(Re s + 1, 1), continued fraction beyond.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if (x <= 0).any():
        raise ValueError("upper incomplete gamma needs x > 0")
    s_arr = np.broadcast_to(np.asarray(s, dtype=complex), x.shape)
    out = np.empty(x.shape, dtype=complex)
    small = x < np.maximum(s_arr.real + 1.0, 1.0)
    big = ~small
    # Gamma(s) has a pole at non-positive integers s = -m; recur down from Gamma(0, x)
    pole = small & (s_arr.imag == 0) & (s_arr.real <= 0) & (s_arr.real == np.round(s_arr.real))
    if pole.any():
        out[pole] = _upper_gamma_negint(np.round(-s_arr[pole].real).astype(int), x[pole])
        small &= ~pole
    if small.any():
        ss = s_arr[small]
        g = np.asarray(gamma(ss), dtype=complex).reshape(ss.shape)
        out[small] = g - _lower_series(ss, x[small])
    if big.any():
        out[big] = _upper_cf(s_arr[big], x[big])
    return complex(out[0]) if scalar else out


def upper_incomplete_gamma(s: complex, x: float) -> ComplexVal:
    v = upper_gamma(s, x)
    # series path subtracts from Gamma(s): error scales with |Gamma(s)|
    scale = abs(v)
    s = complex(s)
    at_pole = s.imag == 0 and s.real <= 0 and s.real == round(s.real)
    if x < max(s.real + 1.0, 1.0) and not at_pole:
        scale = max(scale, abs(cgamma(s)))
    return ComplexVal.of(v, 64 * EPS * scale)


# ------------------------------------------------------ zeta and friends

_BORWEIN_N = 60


def _borwein_weights(n: int) -> np.ndarray:
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), computed exactly
    terms = [
        math.factorial(n + i - 1) * 4**i // (math.factorial(n - i) * math.factorial(2 * i))
        for i in range(n + 1)
    ]
    d = np.cumsum(np.array([n * t for t in terms], dtype=object))
    return np.array([float(v) for v in d])


_D = _borwein_weights(_BORWEIN_N)
_SIGNED = np.array([(-1) ** k * (_D[k] - _D[-1]) for k in range(_BORWEIN_N)]) / -_D[-1]


def _alternating(s: complex, bases: np.ndarray) -> tuple[complex, float]:
    """Accelerated alternating sum and the sum of absolute terms (for rounding)."""
    terms = _SIGNED * np.exp(-s * np.log(bases))
    return complex(np.sum(terms)), float(np.sum(np.abs(terms)))


def _borwein_bound(s: complex) -> float:
    t = abs(s.imag)
    return 3.0 * (1 + 2 * t) * math.exp(math.pi * t / 2) / (3 + math.sqrt(8)) ** _BORWEIN_N


def _cexpm1(z: complex) -> complex:
    x, y = z.real, z.imag
    return complex(math.expm1(x) * math.cos(y) - 2 * math.sin(y / 2) ** 2, math.exp(x) * math.sin(y))


_K1 = np.arange(1, _BORWEIN_N + 1, dtype=float)
_ODD = 2 * np.arange(_BORWEIN_N, dtype=float) + 1


def eta(s: complex) -> complex:
    """Dirichlet eta function sum (-1)^k (k+1)^-s, accelerated."""
    return _alternating(complex(s), _K1)[0]


def dirichlet_beta(s: complex) -> complex:
    """L(s, chi_-4) = sum (-1)^k (2k+1)^-s, accelerated."""
    return _alternating(complex(s), _ODD)[0]


def riemann_zeta(s: complex) -> complex:
    s = complex(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    return eta(s) / -_cexpm1((1 - s) * math.log(2.0))


def _zeta_K_right(s: complex) -> ComplexVal:
    e, e_abs = _alternating(s, _K1)
    b, b_abs = _alternating(s, _ODD)
    denom = -_cexpm1((1 - s) * math.log(2.0))
    z = e / denom
    bound = _borwein_bound(s)
    err_e = bound + 4 * EPS * e_abs
    err_b = bound + 4 * EPS * b_abs
    v = z * b
    err = err_e * abs(b) / abs(denom) + err_b * abs(z) + 8 * EPS * abs(v)
    return ComplexVal.of(v, err)


# zeta'(0) L(0, chi_-4) + zeta(0) L'(0, chi_-4), with L'(0) = log(Gamma(1/4)^2 / (2 pi sqrt 2))
_ZETA_K_PRIME_0 = -0.25 * math.log(2 * math.pi) - 0.5 * (
    2 * math.lgamma(0.25) - math.log(2 * math.pi * math.sqrt(2))
)


def zeta_K(s: complex) -> ComplexVal:
    """Dedekind zeta of Q(i): zeta(s) * L(s, chi_-4).

    Left of the critical line the functional equation
    zeta_K(s) = pi^(2s-1) Gamma(1-s)/Gamma(s) zeta_K(1-s) is used.
    """
    s = complex(s)
    if s == 1:
        raise ValueError("zeta_K has a pole at s = 1")
    if s.real >= 0.5:
        return _zeta_K_right(s)
    if abs(s) < 1e-8:
        # 1 - s rounds to 1 here; use the expansion at 0 instead
        return ComplexVal.of(-0.25 + _ZETA_K_PRIME_0 * s, 4 * abs(s) ** 2 + 2 * EPS)
    if s.imag == 0 and s.real < 0 and s.real == round(s.real):
        # trivial zeros at the negative integers
        return ComplexVal(0.0, 0.0, 0.0)
    mirror = _zeta_K_right(1 - s)
    factor = cmath.exp((2 * s - 1) * math.log(math.pi)) * cgamma(1 - s) / cgamma(s)
    v = mirror * ComplexVal.of(factor, 16 * EPS * (1 + abs(s)) * abs(factor))
    # rounding 1 - s moves it relative to the pole at 1 by EPS / |s|
    return ComplexVal.of(v.value, v.err + 4 * EPS * abs(v) * (1 + abs(1 - s)) / abs(s))


def zeta_K_euler2(s: complex) -> ComplexVal:
    """zeta_K with the Euler factor at (1+i) removed: zeta_K(s) (1 - 2^-s)."""
    s = complex(s)
    factor = -_cexpm1(-s * math.log(2.0))
    return zeta_K(s) * factor


ZETA_K_RESIDUE = math.pi / 4
