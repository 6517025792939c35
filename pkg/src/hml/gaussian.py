"""Exact arithmetic in the Gaussian integers Z[i].

Elements are stored as pairs of Python ints, but every value built through
the public constructor is checked against ``NORM_CAP`` so that the library
never relies on more than 128-bit intermediates.

The hot loops (symbol evaluation, residue systems) call the tuple-level
helpers ``_divmod``/``_mul`` directly instead of going through the class.
"""
from __future__ import annotations

import csv
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np
from sympy import factorint

NORM_CAP = 1 << 60


class GaussianOverflowError(ValueError):
    """Raised when an element's norm exceeds ``NORM_CAP``."""


@dataclass(frozen=True, slots=True)
class GaussianInt:
    re: int
    im: int = 0

    def __post_init__(self):
        if self.re * self.re + self.im * self.im > NORM_CAP:
            raise GaussianOverflowError(f"norm of {self.re}+{self.im}i exceeds 2^60")

    @classmethod
    def parse(cls, text: str) -> "GaussianInt":
        return parse_gaussian(text)

    @property
    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm == 1

    def is_odd(self) -> bool:
        # (1+i) | a+bi  iff  a = b (mod 2)
        return (self.re - self.im) % 2 != 0

    def is_primary(self) -> bool:
        return _is_primary(self.re, self.im)

    def __iter__(self):
        yield self.re
        yield self.im

    def __add__(self, other):
        other = _coerce(other)
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce(other)
        return GaussianInt(*_mul(self.re, self.im, other.re, other.im))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not Gaussian integers")
        result = (1, 0)
        base = (self.re, self.im)
        while k:
            if k & 1:
                result = _mul(*result, *base)
            k >>= 1
            if k:
                base = _mul(*base, *base)
        return GaussianInt(*result)

    def __divmod__(self, other):
        return gdivmod(self, _coerce(other))

    def __floordiv__(self, other):
        return gdivmod(self, _coerce(other))[0]

    def __mod__(self, other):
        return gdivmod(self, _coerce(other))[1]

    def divides(self, other: "GaussianInt") -> bool:
        """True if ``self`` divides ``other`` exactly."""
        if self.is_zero():
            return other.is_zero()
        return _divides(self.re, self.im, other.re, other.im)

    def exact_div(self, other: "GaussianInt") -> "GaussianInt":
        q, r = gdivmod(self, other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    def __str__(self) -> str:
        return format_gaussian(self.re, self.im)

    def __repr__(self) -> str:
        return f"GaussianInt({self})"


def _coerce(x) -> GaussianInt:
    if isinstance(x, GaussianInt):
        return x
    if isinstance(x, int):
        return GaussianInt(x, 0)
    if isinstance(x, complex) and x.real.is_integer() and x.imag.is_integer():
        return GaussianInt(int(x.real), int(x.imag))
    raise TypeError(f"cannot interpret {x!r} as a Gaussian integer")


ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
ONE_PLUS_I = GaussianInt(1, 1)
UNITS = (GaussianInt(1, 0), GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1))


_LITERAL = re.compile(
    r"^(?P<first>[+-]?\d*)(?P<first_i>i?)(?:(?P<sign>[+-])(?P<second>\d*)i)?$"
)


def parse_gaussian(text: str) -> GaussianInt:
    """Parse literals such as ``3+2i``, ``-1+2i``, ``7``, ``-i`` or ``4i``."""
    s = re.sub(r"\s+", "", text)
    m = _LITERAL.match(s)
    if not m or s in ("", "+", "-"):
        raise ValueError(f"not a Gaussian integer literal: {text!r}")
    first, first_i, sign, second = m.group("first", "first_i", "sign", "second")
    if first_i:
        if sign is not None:
            raise ValueError(f"not a Gaussian integer literal: {text!r}")
        return GaussianInt(0, _coefficient(first))
    if first in ("", "+", "-"):
        raise ValueError(f"not a Gaussian integer literal: {text!r}")
    re_part = int(first)
    im_part = 0
    if sign is not None:
        im_part = _coefficient(sign + second)
    return GaussianInt(re_part, im_part)


def _coefficient(text: str) -> int:
    if text in ("", "+"):
        return 1
    if text == "-":
        return -1
    return int(text)


def format_gaussian(a: int, b: int) -> str:
    if b == 0:
        return str(a)
    if b == 1:
        tail = "i"
    elif b == -1:
        tail = "-i"
    else:
        tail = f"{b}i"
    if a == 0:
        return tail
    if b > 0:
        return f"{a}+{tail}"
    return f"{a}{tail}"


# ---------------------------------------------------------------- tuple level

def _mul(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    return a * c - b * d, a * d + b * c


def _round_half_even(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), ties to even."""
    q, r = divmod(num, den)
    twice = 2 * r
    if twice > den or (twice == den and q & 1):
        q += 1
    return q


def _divmod(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    """Euclidean division of a+bi by c+di; returns (q_re, q_im, r_re, r_im)."""
    n = c * c + d * d
    # (a+bi)(c-di) = (ac+bd) + (bc-ad)i
    qr = _round_half_even(a * c + b * d, n)
    qi = _round_half_even(b * c - a * d, n)
    rr = a - (qr * c - qi * d)
    ri = b - (qr * d + qi * c)
    return qr, qi, rr, ri


def _mod(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    return _divmod(a, b, c, d)[2:]


def _divides(c: int, d: int, a: int, b: int) -> bool:
    """True if c+di divides a+bi."""
    n = c * c + d * d
    return (a * c + b * d) % n == 0 and (b * c - a * d) % n == 0


def _is_primary(a: int, b: int) -> bool:
    am, bm = a % 4, b % 4
    return (am == 1 and bm == 0) or (am == 3 and bm == 2)


def _primary_associate(a: int, b: int) -> tuple[int, int, int]:
    """Return (k, x, y) with x+yi = i^k (a+bi) primary; a+bi must be odd."""
    for k, (x, y) in enumerate(((a, b), (-b, a), (-a, -b), (b, -a))):
        if _is_primary(x, y):
            return k, x, y
    raise ValueError(f"{format_gaussian(a, b)} is not odd")


def _strip_one_plus_i(a: int, b: int) -> tuple[int, int, int]:
    """Write a+bi = (1+i)^e (x+yi) with x+yi odd; returns (e, x, y)."""
    e = 0
    while (a - b) % 2 == 0:
        # (a+bi)/(1+i) = ((a+b) + (b-a)i)/2
        a, b = (a + b) // 2, (b - a) // 2
        e += 1
    return e, a, b


# -------------------------------------------------------------- public ops

def norm(z: GaussianInt) -> int:
    return z.norm


def gdivmod(a: GaussianInt, b: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Euclidean division with N(r) <= N(b)/2, quotient rounded half-to-even."""
    if b.is_zero():
        raise ZeroDivisionError("Gaussian division by zero")
    qr, qi, rr, ri = _divmod(a.re, a.im, b.re, b.im)
    return GaussianInt(qr, qi), GaussianInt(rr, ri)


class PrimaryDecomposition(NamedTuple):
    """``unit * (1+i)**e2 * core`` reproduces the decomposed element."""

    unit: GaussianInt
    e2: int
    core: GaussianInt

    def value(self) -> GaussianInt:
        return self.unit * ONE_PLUS_I ** self.e2 * self.core


_INV_UNIT = {0: (1, 0), 1: (0, -1), 2: (-1, 0), 3: (0, 1)}  # i^-k


def decompose(z: GaussianInt) -> PrimaryDecomposition:
    """Split any nonzero z into unit, (1+i)-power and primary core."""
    if z.is_zero():
        raise ValueError("cannot decompose 0")
    e, a, b = _strip_one_plus_i(z.re, z.im)
    k, x, y = _primary_associate(a, b)
    return PrimaryDecomposition(GaussianInt(*_INV_UNIT[k]), e, GaussianInt(x, y))


def primary_normalize(z: GaussianInt) -> PrimaryDecomposition:
    """The unique primary associate of an odd z, with ``unit * core == z``."""
    if z.is_zero() or not z.is_odd():
        raise ValueError(f"{z} is not odd; only odd elements have a primary associate")
    return decompose(z)


def primary_type(z: GaussianInt) -> int:
    """1 if z = 1+0i (mod 4), 2 if z = 3+2i (mod 4)."""
    if not z.is_primary():
        raise ValueError(f"{z} is not primary")
    return 1 if z.re % 4 == 1 else 2


def normalize(z: GaussianInt) -> GaussianInt:
    """Canonical ideal generator: (1+i)^e times the primary core."""
    d = decompose(z)
    return ONE_PLUS_I ** d.e2 * d.core


def ggcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    """Generator of the ideal (a, b), normalized via ``normalize``."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    x, y, u, v = a.re, a.im, b.re, b.im
    while u or v:
        x, y, (u, v) = u, v, _mod(x, y, u, v)
    return normalize(GaussianInt(x, y))


# ------------------------------------------------------------ factorization

def sqrt_minus_one(p: int) -> int:
    """Some x with x^2 = -1 (mod p), for a rational prime p = 1 (mod 4)."""
    if p % 4 != 1:
        raise ValueError(f"-1 is not a square modulo {p}")
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    return pow(c, (p - 1) // 4, p)


@lru_cache(maxsize=1 << 16)
def split_prime(p: int) -> tuple[GaussianInt, GaussianInt]:
    """The two primary primes above a rational prime p = 1 (mod 4), sorted."""
    # Cornacchia: Euclid on (p, sqrt(-1) mod p) stops at the first remainder below sqrt(p)
    a, b = p, sqrt_minus_one(p)
    r = isqrt(p)
    while b > r:
        a, b = b, a % b
    c = isqrt(p - b * b)
    g = primary_normalize(GaussianInt(b, c)).core
    pair = sorted((g, g.conj()), key=lambda z: (z.re, z.im))
    return pair[0], pair[1]


@dataclass(frozen=True)
class Factorization:
    unit: GaussianInt
    e2: int
    factors: tuple[tuple[GaussianInt, int], ...]

    def value(self) -> GaussianInt:
        out = self.unit * ONE_PLUS_I ** self.e2
        for p, k in self.factors:
            out = out * p ** k
        return out

    def odd_part(self) -> GaussianInt:
        out = ONE
        for p, k in self.factors:
            out = out * p ** k
        return out

    @property
    def primes(self) -> tuple[GaussianInt, ...]:
        return tuple(p for p, _ in self.factors)


@lru_cache(maxsize=1 << 16)
def factor(z: GaussianInt) -> Factorization:
    """Complete factorization into unit, (1+i)-power and primary primes."""
    if z.is_zero():
        raise ValueError("cannot factor 0")
    e, a, b = _strip_one_plus_i(z.re, z.im)
    rest = GaussianInt(a, b)
    found: list[tuple[GaussianInt, int]] = []
    for p, k in factorint(rest.norm).items():
        if p % 4 == 3:
            q = GaussianInt(-p)
            m = k // 2
            for _ in range(m):
                rest = rest.exact_div(q)
            found.append((q, m))
            continue
        for prime in split_prime(p):
            m = 0
            while prime.divides(rest):
                rest = rest.exact_div(prime)
                m += 1
            if m:
                found.append((prime, m))
    if not rest.is_unit():
        raise ArithmeticError(f"factorization of {z} left cofactor {rest}")
    found.sort(key=lambda pk: (pk[0].norm, pk[0].re, pk[0].im))
    return Factorization(rest, e, tuple(found))


def _require_odd_primary(z: GaussianInt) -> None:
    if not z.is_primary():
        raise ValueError(f"{z} is not primary")


def mobius(z: GaussianInt) -> int:
    _require_odd_primary(z)
    f = factor(z)
    if any(k > 1 for _, k in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def is_squarefree(z: GaussianInt) -> bool:
    _require_odd_primary(z)
    return mobius(z) != 0


def omega(z: GaussianInt) -> int:
    """Number of distinct primary prime divisors."""
    _require_odd_primary(z)
    return len(factor(z).factors)


def squarefree_split(z: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Primary z = core * m^2 with core square-free; returns (core, m)."""
    _require_odd_primary(z)
    core, m = ONE, ONE
    for p, k in factor(z).factors:
        if k % 2:
            core = core * p
        m = m * p ** (k // 2)
    # both products of primary primes are primary
    return core, m


# ------------------------------------------------------- primes and sieving

@dataclass(frozen=True)
class PrimeTable:
    """Primary Gaussian primes of odd norm up to ``bound``, sorted by (norm, re, im)."""

    bound: int
    primes: tuple[GaussianInt, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def norms(self) -> np.ndarray:
        return np.fromiter((p.norm for p in self.primes), dtype=np.float64, count=len(self))

    def restrict(self, bound: int) -> "PrimeTable":
        if bound > self.bound:
            raise ValueError("cannot extend a prime table by restriction")
        return PrimeTable(bound, tuple(p for p in self.primes if p.norm <= bound))

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(f"# bound={self.bound}\n")
            w = csv.writer(fh)
            w.writerow(["re", "im", "norm"])
            for p in self.primes:
                w.writerow([p.re, p.im, p.norm])

    @classmethod
    def load(cls, path: str | os.PathLike) -> "PrimeTable":
        with open(path, newline="") as fh:
            header = fh.readline().strip()
            if not header.startswith("# bound="):
                raise ValueError(f"{path}: missing bound header")
            bound = int(header.split("=", 1)[1])
            rows = csv.DictReader(fh)
            primes = []
            for row in rows:
                p = GaussianInt(int(row["re"]), int(row["im"]))
                if p.norm != int(row["norm"]):
                    raise ValueError(f"{path}: corrupt row {row}")
                primes.append(p)
        return cls(bound, tuple(primes))


def rational_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


def _sieve(bound: int) -> PrimeTable:
    if bound > NORM_CAP:
        raise GaussianOverflowError("prime bound exceeds 2^60")
    primes: list[GaussianInt] = []
    for p in rational_primes(bound).tolist():
        if p % 4 == 1:
            primes.extend(split_prime(p))
        elif p % 4 == 3 and p * p <= bound:
            primes.append(GaussianInt(-p))
    primes.sort(key=lambda z: (z.norm, z.re, z.im))
    return PrimeTable(bound, tuple(primes))


@lru_cache(maxsize=8)
def sieve_primary(bound: int) -> PrimeTable:
    """Prime table for ``bound``, read from / written to ``$HML_PRIME_CACHE`` if set."""
    cache_dir = os.environ.get("HML_PRIME_CACHE")
    if not cache_dir:
        return _sieve(bound)
    path = Path(cache_dir) / f"primes_{bound}.csv"
    if path.exists():
        return PrimeTable.load(path)
    table = _sieve(bound)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.save(path)
    return table


@lru_cache(maxsize=16)
def primary_arrays(max_norm: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(re, im, norm) int64 arrays of all primary elements with norm <= max_norm.

    Sorted by (norm, re, im). Arrays are read-only since they are cached.
    """
    if max_norm > NORM_CAP:
        raise GaussianOverflowError("norm bound exceeds 2^60")
    r = isqrt(max_norm)
    b = np.arange(-r, r + 1, dtype=np.int64)
    b = b[(b % 2) == 0]
    # b = 0 (mod 4) needs a = 1 (mod 4); b = 2 (mod 4) needs a = 3 (mod 4)
    res = []
    for bm, am in ((0, 1), (2, 3)):
        bb = b[(b % 4) == bm]
        a0 = -r + ((am + r) % 4)  # smallest a >= -r with a = am (mod 4)
        a = np.arange(a0, r + 1, 4, dtype=np.int64)
        A, B = np.meshgrid(a, bb, indexing="ij")
        A, B = A.ravel(), B.ravel()
        keep = A * A + B * B <= max_norm
        res.append((A[keep], B[keep]))
    re_ = np.concatenate([res[0][0], res[1][0]])
    im_ = np.concatenate([res[0][1], res[1][1]])
    nrm = re_ * re_ + im_ * im_
    order = np.lexsort((im_, re_, nrm))
    out = tuple(x[order] for x in (re_, im_, nrm))
    for x in out:
        x.setflags(write=False)
    return out


def squarefree_mask(re_: np.ndarray, im_: np.ndarray) -> np.ndarray:
    """Boolean mask of square-free entries among odd elements re+i*im."""
    nrm = re_ * re_ + im_ * im_
    ok = np.ones(re_.shape, dtype=bool)
    if nrm.size == 0:
        return ok
    limit = isqrt(int(nrm.max()))
    for p in sieve_primary(max(limit, 1)).primes:
        sq = p * p
        c, d, n = sq.re, sq.im, sq.norm
        # sq | x  iff  x * conj(sq) = 0 (mod N(sq))
        hit = ((re_ * c + im_ * d) % n == 0) & ((im_ * c - re_ * d) % n == 0)
        ok &= ~hit
    return ok


def enumerate_primary(lo: int, hi: int) -> Iterator[GaussianInt]:
    """Primary elements with lo <= N(z) <= hi, in (norm, re, im) order."""
    re_, im_, nrm = primary_arrays(hi)
    start = int(np.searchsorted(nrm, lo, side="left"))
    for a, b in zip(re_[start:].tolist(), im_[start:].tolist()):
        yield GaussianInt(a, b)


def enumerate_primary_squarefree(lo: int, hi: int) -> Iterator[GaussianInt]:
    re_, im_, nrm = primary_arrays(hi)
    start = int(np.searchsorted(nrm, lo, side="left"))
    re_, im_ = re_[start:], im_[start:]
    mask = squarefree_mask(re_, im_)
    for a, b in zip(re_[mask].tolist(), im_[mask].tolist()):
        yield GaussianInt(a, b)
