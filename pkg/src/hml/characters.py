"""Quadratic residue symbols and quadratic Hecke characters over Z[i].

Two independent routes to the symbol (a/n):

* ``symbol_euler`` -- Euler's criterion, a^((N(p)-1)/2) mod p, for prime p;
* ``symbol`` -- a Jacobi-style loop that never factors n. It reduces a mod n,
  strips the unit and (1+i)-power of the remainder with the supplementary
  laws and flips the two (primary) arguments by quadratic reciprocity.

For bulk evaluation over many top arguments, ``symbol_table`` reduces each
Gaussian prime p | n to a Legendre symbol over Z (via Z[i]/(p) = F_N(p) for
split p, and (x/q) = (N(x)/q) for inert q).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import isprime

from .gaussian import (
    I,
    ONE,
    ONE_PLUS_I,
    Factorization,
    GaussianInt,
    _is_primary,
    _mod,
    _mul,
    _primary_associate,
    _strip_one_plus_i,
    factor,
    primary_type,
)

TWISTS = (ONE, I, ONE_PLUS_I, I * ONE_PLUS_I)
TWIST_NAMES = {ONE: "1", I: "i", ONE_PLUS_I: "1+i", I * ONE_PLUS_I: "i(1+i)"}


# ------------------------------------------------------------- scalar symbols

def _supp_i(a: int, b: int) -> int:
    """(i/n) for primary n = a+bi."""
    return 1 if a % 4 == 1 else -1


def _supp_1pi(a: int, b: int) -> int:
    """((1+i)/n) for primary n = a+bi."""
    return -1 if ((a - b - 1 - b * b) // 4) & 1 else 1


def supplement_i(n: GaussianInt) -> int:
    if not n.is_primary():
        raise ValueError(f"{n} is not primary")
    return _supp_i(n.re, n.im)


def supplement_one_plus_i(n: GaussianInt) -> int:
    if not n.is_primary():
        raise ValueError(f"{n} is not primary")
    return _supp_1pi(n.re, n.im)


def _symbol(ar: int, ai: int, nr: int, ni: int) -> int:
    _, nr, ni = _primary_associate(nr, ni)
    sign = 1
    while nr != 1 or ni != 0:
        ar, ai = _mod(ar, ai, nr, ni)
        if ar == 0 and ai == 0:
            return 0
        e, ar, ai = _strip_one_plus_i(ar, ai)
        k, ar, ai = _primary_associate(ar, ai)
        if e & 1:
            sign *= _supp_1pi(nr, ni)
        if k & 1:
            sign *= _supp_i(nr, ni)
        ar, ai, nr, ni = nr, ni, ar, ai
    return sign


def symbol(a: GaussianInt, n: GaussianInt) -> int:
    """Quadratic residue symbol (a/n) for odd n, computed without factoring n."""
    if n.is_zero() or not n.is_odd():
        raise ValueError(f"symbol needs an odd modulus, got {n}")
    return _symbol(a.re, a.im, n.re, n.im)


def symbol_euler(a: GaussianInt, p: GaussianInt) -> int:
    """(a/p) by Euler's criterion; p must be an odd Gaussian prime."""
    if p.is_zero() or not p.is_odd():
        raise ValueError(f"{p} is not an odd prime")
    n = p.norm
    if not (isprime(n) or (_is_square(n) and isprime(_isqrt(n)) and _isqrt(n) % 4 == 3)):
        raise ValueError(f"{p} is not a Gaussian prime")
    pr, pi = p.re, p.im
    base = _mod(a.re, a.im, pr, pi)
    if base == (0, 0):
        return 0
    e = (n - 1) // 2
    acc = (1, 0)
    while e:
        if e & 1:
            acc = _mod(*_mul(*acc, *base), pr, pi)
        e >>= 1
        if e:
            base = _mod(*_mul(*base, *base), pr, pi)
    if _mod(acc[0] - 1, acc[1], pr, pi) == (0, 0):
        return 1
    if _mod(acc[0] + 1, acc[1], pr, pi) == (0, 0):
        return -1
    raise ArithmeticError(f"Euler criterion gave a non-sign residue mod {p}")


def _isqrt(n: int) -> int:
    from math import isqrt

    return isqrt(n)


def _is_square(n: int) -> bool:
    r = _isqrt(n)
    return r * r == n


def symbol_by_factoring(a: GaussianInt, n: GaussianInt) -> int:
    """Multiplicative extension of ``symbol_euler`` over the factorization of n."""
    if not n.is_odd():
        raise ValueError(f"symbol needs an odd modulus, got {n}")
    out = 1
    for p, k in factor(n).factors:
        v = symbol_euler(a, p)
        if v == 0:
            return 0
        if k & 1:
            out *= v
    return out


def psi2(n: GaussianInt) -> int:
    """The primitive quadratic character modulo 2: +1 on n = 1, -1 on n = i (mod 2).

    Only the value at i is pinned down directly; +1 on the class of 1 is the
    only choice compatible with a character.
    """
    if not n.is_odd():
        raise ValueError(f"psi2 is defined on odd elements only, got {n}")
    if (n.re - 1) % 2 == 0 and n.im % 2 == 0:
        return 1
    return -1


# ----------------------------------------------------------- character specs

@dataclass(frozen=True)
class CharacterSpec:
    """Primitive quadratic Hecke character of trivial infinite type.

    It is the character induced by chi_core * chi_twist, with ``core`` a
    primary square-free element and ``twist`` one of 1, i, 1+i, i(1+i).
    """

    core: GaussianInt
    twist: GaussianInt
    type: int
    conductor: GaussianInt
    conductor_norm: int

    @property
    def odd_conductor(self) -> bool:
        return self.conductor_norm % 2 == 1

    def __call__(self, x: GaussianInt) -> int:
        if self.odd_conductor:
            # type-1 core, trivial twist: the symbol (x/core) is already
            # trivial on units, so it is the primitive character mod core.
            return symbol(x, self.core)
        if not x.is_odd():
            return 0
        return symbol(self.core * self.twist, x)

    def label(self) -> str:
        return f"chi[{self.core}; {TWIST_NAMES[self.twist]}]"


@lru_cache(maxsize=4096)
def character_spec(core: GaussianInt, twist: GaussianInt = ONE) -> CharacterSpec:
    if twist not in TWIST_NAMES:
        raise ValueError(f"twist must be one of 1, i, 1+i, i(1+i); got {twist}")
    if not core.is_primary():
        raise ValueError(f"core {core} is not primary")
    if any(k > 1 for _, k in factor(core).factors):
        raise ValueError(f"core {core} is not square-free")
    t = primary_type(core)
    unit_part = {
        ONE: GaussianInt(1) if t == 1 else GaussianInt(2),
        I: GaussianInt(4),
    }.get(twist, ONE_PLUS_I ** 5)
    cond = unit_part * core
    return CharacterSpec(core, twist, t, cond, cond.norm)


def family_char(d: GaussianInt) -> CharacterSpec:
    """The character chi_{(1+i)^5 d}, primitive modulo (1+i)^5 d."""
    return character_spec(d, ONE_PLUS_I)


_ONE_PLUS_I_5 = ONE_PLUS_I ** 5


def eval_family(d: GaussianInt, n: GaussianInt) -> int:
    if not n.is_odd():
        return 0
    return symbol(_ONE_PLUS_I_5 * d, n)


def _type_twist(n: GaussianInt, m: GaussianInt) -> int:
    # chi_j for the type j of n: trivial for type 1, psi2 for type 2
    return 1 if primary_type(n) == 1 else psi2(m)


def eval_tilde(n: GaussianInt, m: GaussianInt) -> int:
    """The character chi_j * (./n) of modulus 2n attached to primary n of type j."""
    if not n.is_primary():
        raise ValueError(f"{n} is not primary")
    if not m.is_odd():
        return 0
    return _type_twist(n, m) * symbol(m, n)


def tilde_chi(n: GaussianInt):
    if not n.is_primary():
        raise ValueError(f"{n} is not primary")
    return lambda m: eval_tilde(n, m)


# -------------------------------------------------------- vectorized tables

@lru_cache(maxsize=2048)
def legendre_table(p: int) -> np.ndarray:
    """table[t] = Legendre symbol (t/p) for 0 <= t < p."""
    t = np.full(p, -1, dtype=np.int8)
    k = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    t[(k * k) % p] = 1
    t[0] = 0
    t.setflags(write=False)
    return t


def _prime_symbol_array(p: GaussianInt, re_: np.ndarray, im_: np.ndarray) -> np.ndarray:
    """(x/p) for x = re_ + i im_ and a single odd Gaussian prime p."""
    n = p.norm
    if p.im == 0 or p.re == 0:
        q = abs(p.re + p.im)
        tab = legendre_table(q)
        return tab[(re_ % q * (re_ % q) + im_ % q * (im_ % q)) % q]
    # i = r (mod p) with r = -re * im^-1 (mod N(p))
    r = (-p.re * pow(p.im, -1, n)) % n
    tab = legendre_table(n)
    return tab[(re_ % n + (im_ % n) * r) % n]


def symbol_table(re_: np.ndarray, im_: np.ndarray, n: GaussianInt | Factorization) -> np.ndarray:
    """Vectorized (x/n) for arrays of top arguments and a fixed odd bottom n."""
    f = n if isinstance(n, Factorization) else factor(n)
    if f.e2:
        raise ValueError("symbol needs an odd modulus")
    out = np.ones(np.shape(re_), dtype=np.int8)
    for p, k in f.factors:
        v = _prime_symbol_array(p, re_, im_)
        if k & 1:
            out *= v
        else:
            out *= v * v
    return out


def primary_associate_arrays(re_: np.ndarray, im_: np.ndarray):
    """For odd entries: (k, x, y) with x + iy = i^k (re + i im) primary."""
    k = np.full(re_.shape, -1, dtype=np.int8)
    x = np.zeros_like(re_)
    y = np.zeros_like(im_)
    for j, (cx, cy) in enumerate(((re_, im_), (-im_, re_), (-re_, -im_), (im_, -re_))):
        hit = (k < 0) & (((cx % 4 == 1) & (cy % 4 == 0)) | ((cx % 4 == 3) & (cy % 4 == 2)))
        k[hit] = j
        x[hit] = cx[hit]
        y[hit] = cy[hit]
    return k, x, y


def supplement_arrays(x: np.ndarray, y: np.ndarray):
    """((i/n), ((1+i)/n)) for arrays of primary n = x + iy."""
    s_i = np.where(x % 4 == 1, 1, -1).astype(np.int8)
    s_1pi = np.where(((x - y - 1 - y * y) // 4) % 2 == 1, -1, 1).astype(np.int8)
    return s_i, s_1pi


def twist_array(twist: GaussianInt, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(twist / n) for arrays of primary n = x + iy."""
    s_i, s_1pi = supplement_arrays(x, y)
    if twist == ONE:
        return np.ones(x.shape, dtype=np.int8)
    if twist == I:
        return s_i
    if twist == ONE_PLUS_I:
        return s_1pi
    return s_i * s_1pi


def spec_values(spec: CharacterSpec, re_: np.ndarray, im_: np.ndarray) -> np.ndarray:
    """Values of the primitive character ``spec`` at arbitrary x = re_ + i im_."""
    re_ = np.asarray(re_, dtype=np.int64)
    im_ = np.asarray(im_, dtype=np.int64)
    if spec.odd_conductor:
        return symbol_table(re_, im_, spec.core)
    odd = (re_ - im_) % 2 != 0
    _, x, y = primary_associate_arrays(re_, im_)
    # for primary x' coprime to the core: (core/x') = (x'/core)
    vals = symbol_table(x, y, spec.core) * twist_array(spec.twist, x, y)
    return np.where(odd, vals, 0).astype(np.int8)


def primary_values(spec: CharacterSpec, re_: np.ndarray, im_: np.ndarray) -> np.ndarray:
    """``spec`` at primary arguments only (skips the associate search)."""
    if spec.odd_conductor:
        return symbol_table(re_, im_, spec.core)
    return symbol_table(re_, im_, spec.core) * twist_array(spec.twist, re_, im_)
