"""Quadratic Gauss sums over Z[i].

g(r, n) = sum_{x mod n} (x/n) e~(rx/n) with e~(z) = exp(2 pi i Im z).  Note
that (z - conj z)/(2i) = Im z, so the exponential only sees imaginary parts.

Brute-force sums run over the residue system of the ideal lattice n Z[i],
whose Hermite normal form has diagonal (N(n)/g, g) with g = gcd(Re n, Im n).
Phases are computed exactly as integers mod N(n) before the one float
conversion, so rounding does not grow with the size of r or x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characters import CharacterSpec, psi2, spec_values, symbol, symbol_table
from .complexval import EPS, ComplexVal, csum
from .gaussian import (
    I,
    GaussianInt,
    factor,
    primary_type,
)

# largest residue system enumerated by the brute-force routines
BRUTE_CAP = 10**6


class BruteForceCapError(ValueError):
    pass


@dataclass(frozen=True)
class GaussSumValue:
    value: ComplexVal
    modulus_norm: int

    @property
    def real(self) -> float:
        return self.value.re

    def as_dict(self) -> dict:
        return {**self.value.as_dict(), "modulus_norm": self.modulus_norm}


def _phase(t: np.ndarray | int, norm: int):
    return np.exp(2j * np.pi * (np.asarray(t, dtype=np.float64) / norm))


def e_tilde(z: GaussianInt, m: GaussianInt) -> ComplexVal:
    """exp(2 pi i Im(z/m)) for the rational point z/m."""
    if m.is_zero():
        raise ZeroDivisionError("e_tilde modulus is zero")
    n = m.norm
    t = (z.im * m.re - z.re * m.im) % n  # Im(z conj(m)) mod N(m)
    return ComplexVal.of(complex(_phase(t, n)), 4 * EPS)


# ------------------------------------------------------------ residues

@dataclass(frozen=True)
class ResidueSystem:
    """Representatives x + iy, 0 <= x < A, 0 <= y < C, of Z[i]/(modulus)."""

    modulus: GaussianInt
    A: int
    C: int
    shift: int  # x-offset of the lattice vector (shift, C)

    def __len__(self) -> int:
        return self.A * self.C

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.tile(np.arange(self.A, dtype=np.int64), self.C)
        y = np.repeat(np.arange(self.C, dtype=np.int64), self.A)
        return x, y

    @property
    def reps(self) -> list[GaussianInt]:
        x, y = self.arrays()
        return [GaussianInt(int(a), int(b)) for a, b in zip(x, y)]

    def reduce(self, re_, im_) -> tuple[np.ndarray, np.ndarray]:
        """Canonical representative of each input class."""
        re_ = np.asarray(re_, dtype=np.int64)
        im_ = np.asarray(im_, dtype=np.int64)
        q = np.floor_divide(im_, self.C)
        y = im_ - q * self.C
        x = np.mod(re_ - q * self.shift, self.A)
        return x, y

    def reduce_one(self, z: GaussianInt) -> GaussianInt:
        q, y = divmod(z.im, self.C)
        return GaussianInt((z.re - q * self.shift) % self.A, y)

    def is_complete(self) -> bool:
        """Check that the representatives are pairwise incongruent."""
        x, y = self.arrays()
        # shift every representative by a lattice vector, then reduce back
        a, b = self.modulus.re, self.modulus.im
        rx, ry = self.reduce(x + 3 * a - 5 * b, y + 3 * b + 5 * a)
        keys = rx * self.C + ry
        return (
            len(np.unique(keys)) == len(self)
            and np.array_equal(rx, x)
            and np.array_equal(ry, y)
        )


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def residues(n: GaussianInt, cap: int | None = None) -> ResidueSystem:
    if n.is_zero():
        raise ValueError("residue system of 0 is infinite")
    cap = BRUTE_CAP if cap is None else cap
    N = n.norm
    if N > cap:
        raise BruteForceCapError(f"N({n}) = {N} exceeds the brute-force cap {cap}")
    a, b = n.re, n.im
    g, u, v = _ext_gcd(b, a)  # b u + a v = g
    if g < 0:
        g, u, v = -g, -u, -v
    # u n + v (i n) = (a u - b v) + i g
    shift = (a * u - b * v) % (N // g)
    return ResidueSystem(n, N // g, g, shift)


def _sum_phases(values: np.ndarray, t: np.ndarray, norm: int) -> ComplexVal:
    mask = values != 0
    terms = values[mask] * _phase(t[mask], norm)
    total = csum(terms)
    return ComplexVal.of(total, 4 * EPS * max(1, int(mask.sum())))


def _imag_products(r: GaussianInt, mod: GaussianInt, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Im(r x conj(mod)) mod N(mod) for x + iy, with exact integer arithmetic."""
    N = mod.norm
    w = r * mod.conj()
    wr, wi = w.re % N, w.im % N
    return ((wr * y) % N + (wi * x) % N) % N


def gauss_character(r: GaussianInt, values, q: GaussianInt, cap: int | None = None) -> GaussSumValue:
    """sum_{x mod q} chi(x) e~(rx/q) with ``values(re, im)`` giving chi."""
    rs = residues(q, cap)
    x, y = rs.arrays()
    vals = np.asarray(values(x, y))
    return GaussSumValue(_sum_phases(vals, _imag_products(r, q, x, y), q.norm), q.norm)


def gauss_brute(r: GaussianInt, n: GaussianInt, cap: int | None = None) -> GaussSumValue:
    """g(r, n) by summing over a complete residue system mod n."""
    if not n.is_odd():
        raise ValueError(f"g(r, n) needs odd n, got {n}")
    f = factor(n)
    return gauss_character(r, lambda x, y: symbol_table(x, y, f), n, cap)


def gauss_brute_batch(rs, n: GaussianInt, cap: int | None = None) -> list[GaussSumValue]:
    """g(r, n) for several r, sharing the residue system and symbol table."""
    if not n.is_odd():
        raise ValueError(f"g(r, n) needs odd n, got {n}")
    system = residues(n, cap)
    x, y = system.arrays()
    vals = symbol_table(x, y, factor(n))
    return [GaussSumValue(_sum_phases(vals, _imag_products(r, n, x, y), n.norm), n.norm) for r in rs]


def phi_i(p: GaussianInt, l: int) -> int:
    """Size of (Z[i]/(p^l))^* for a prime p."""
    N = p.norm
    return N ** (l - 1) * (N - 1)


def valuation(k: GaussianInt, p: GaussianInt) -> int | float:
    if k.is_zero():
        return math.inf
    h = 0
    while p.divides(k):
        k = k.exact_div(p)
        h += 1
    return h


def gauss_closed_exact(k: GaussianInt, p: GaussianInt, l: int) -> tuple[int, int]:
    """g(k, p^l) as (c, e) meaning c * sqrt(N(p))^e with c an integer."""
    if l < 1:
        raise ValueError("l must be >= 1")
    N = p.norm
    h = valuation(k, p)
    if l <= h:
        return (0, 0) if l % 2 else (phi_i(p, l), 0)
    if l == h + 1:
        if l % 2 == 0:
            return (-(N ** (l - 1)), 0)
        unit_part = I * k.exact_div(p ** int(h))
        return (symbol(unit_part, p), 2 * l - 1)
    return (0, 0)


def gauss_closed(k: GaussianInt, p: GaussianInt, l: int) -> GaussSumValue:
    """g(k, p^l) for a primary prime p by the prime-power evaluation."""
    if not p.is_primary():
        raise ValueError(f"{p} is not primary")
    c, e = gauss_closed_exact(k, p, l)
    N = p.norm
    v = c * float(N) ** (e // 2) * (math.sqrt(N) if e % 2 else 1.0)
    return GaussSumValue(ComplexVal.of(v, 4 * EPS * abs(v)), N**l)


def gauss_multiplicative(k: GaussianInt, n: GaussianInt, factorization=None) -> GaussSumValue:
    """g(k, n) for primary n as the product of its prime-power Gauss sums."""
    if not n.is_primary():
        raise ValueError(f"{n} is not primary")
    f = factorization if factorization is not None else factor(n)
    value = ComplexVal(1.0)
    for p, l in f.factors:
        value = value * gauss_closed(k, p, l).value
    return GaussSumValue(value, n.norm)


def gauss_twist(r: GaussianInt, s: GaussianInt, n: GaussianInt) -> GaussSumValue:
    """g(rs, n) from g(r, n): multiply by the conjugate of (s/n), for (s, n) = 1."""
    chi = symbol(s, n)
    if chi == 0:
        raise ValueError(f"{s} and {n} are not coprime")
    g = gauss_multiplicative(r, n)
    return GaussSumValue(g.value * chi, g.modulus_norm)


def tilde_parity_factor(r: GaussianInt, n: GaussianInt) -> int:
    j = primary_type(n)
    return symbol(I, n) * ((-1) ** (r.im % 2) + (-1) ** ((r.re + j - 1) % 2))


def gauss_tilde(r: GaussianInt, n: GaussianInt) -> GaussSumValue:
    """g(r, chi~_n), the Gauss sum of chi~_n viewed modulo 2n."""
    if not n.is_primary():
        raise ValueError(f"{n} is not primary")
    c = tilde_parity_factor(r, n)
    g = gauss_multiplicative(r, n)
    return GaussSumValue(g.value * c, 4 * n.norm)


def tilde_values(n: GaussianInt):
    """Vectorized chi~_n = chi_j (./n) on arbitrary arguments (zero on even ones)."""
    f = factor(n)
    type2 = primary_type(n) == 2

    def values(x, y):
        odd = (x - y) % 2 != 0
        v = symbol_table(x, y, f).astype(np.int64)
        if type2:
            # psi2: +1 on the class of 1 mod 2, -1 on the class of i
            v = v * np.where(x % 2 == 1, 1, -1)
        return np.where(odd, v, 0)

    return values


def gauss_tilde_brute(r: GaussianInt, n: GaussianInt, cap: int | None = None) -> GaussSumValue:
    return gauss_character(r, tilde_values(n), n * 2, cap)


def gauss_primitive_modulus(spec: CharacterSpec, cap: int | None = None, check: bool = True) -> GaussSumValue:
    """g(chi) = sum_{x mod q} chi(x) e~(x/q) for the primitive character ``spec``."""
    g = gauss_character(GaussianInt(1), lambda x, y: spec_values(spec, x, y), spec.conductor, cap)
    if check:
        expected = math.sqrt(spec.conductor_norm)
        if not g.value.close_to(expected, 1e-9 * expected):
            raise ArithmeticError(f"g({spec.label()}) = {g.value.value}, expected {expected}")
    return g


__all__ = [
    "BRUTE_CAP",
    "BruteForceCapError",
    "GaussSumValue",
    "ResidueSystem",
    "e_tilde",
    "residues",
    "gauss_brute",
    "gauss_brute_batch",
    "gauss_character",
    "gauss_closed",
    "gauss_closed_exact",
    "gauss_multiplicative",
    "gauss_twist",
    "gauss_tilde",
    "gauss_tilde_brute",
    "gauss_primitive_modulus",
    "phi_i",
    "psi2",
    "tilde_parity_factor",
    "tilde_values",
    "valuation",
]
