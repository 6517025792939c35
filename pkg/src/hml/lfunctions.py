"""Hecke L-functions of quadratic characters over Z[i].

``L_afe`` evaluates L(s, chi) for a primitive character by the smoothed
approximate functional equation with incomplete-gamma kernels.  With
Q = sqrt(4 N(q)) / (2 pi) and root number 1,

    L(s) = sum_a chi(a) N(a)^-s Gamma(s, N(a)/Q) / Gamma(s)
         + Q^(1-2s) / Gamma(s) * sum_a chi(a) N(a)^(s-1) Gamma(1-s, N(a)/Q),

the sums running over nonzero ideals a.  Terms are grouped by norm, so each
kernel is evaluated once per distinct norm and the character enters through
exact integer coefficient sums.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characters import CharacterSpec, character_spec, primary_values, spec_values, symbol
from .complexval import EPS, ComplexVal, csum
from .gauss_sums import gauss_tilde, residues
from .gaussian import ONE, ONE_PLUS_I, GaussianInt, factor, primary_arrays, squarefree_split
from .special import cgamma, upper_gamma, zeta_K

AFE_CUTOFF = 40.0


@dataclass(frozen=True)
class LValue:
    s: complex
    character: str
    value: ComplexVal
    terms_used: int

    def as_dict(self) -> dict:
        return {
            "s": [self.s.real, self.s.imag],
            "character": self.character,
            **self.value.as_dict(),
            "terms_used": self.terms_used,
        }


def _check_gamma_args(s: complex) -> None:
    if s.imag == 0 and s.real <= 0 and s.real == round(s.real):
        raise ValueError(f"Gamma(s) has a pole at s = {s}")


def Y(s: complex) -> complex:
    """2^(-2-2s) pi^(2s-1) Gamma(1-s) / Gamma(s)."""
    s = complex(s)
    return cmath.exp((-2 - 2 * s) * math.log(2) + (2 * s - 1) * math.log(math.pi)) * cgamma(1 - s) / cgamma(s)


# ------------------------------------------------------ coefficient arrays

@lru_cache(maxsize=8)
def _norm_runs(max_norm: int):
    """Distinct norms of primary elements up to max_norm and where each run starts."""
    _, _, nrm = primary_arrays(max_norm)
    uniq, starts = np.unique(nrm, return_index=True)
    return uniq, starts


def _coefficients(spec: CharacterSpec, max_norm: int) -> tuple[np.ndarray, np.ndarray]:
    """(norms, c) with c[N] = sum of chi over ideals of norm N, for N <= max_norm."""
    re_, im_, nrm = primary_arrays(max_norm)
    uniq, starts = _norm_runs(max_norm)
    vals = primary_values(spec, re_, im_).astype(np.int64)
    coeff = np.add.reduceat(vals, starts) if len(vals) else np.zeros(0, dtype=np.int64)
    if not spec.odd_conductor:
        return uniq, coeff
    # odd conductor: ideals (1+i)^k m with m odd contribute chi(1+i)^k chi(m)
    c2 = symbol(ONE_PLUS_I, spec.core)
    parts_n, parts_c = [uniq], [coeff]
    k, w = 1, c2
    while 2**k <= max_norm and w != 0:
        keep = uniq * 2**k <= max_norm
        parts_n.append(uniq[keep] * 2**k)
        parts_c.append(coeff[keep] * w)
        k += 1
        w *= c2
    norms = np.concatenate(parts_n)
    coeffs = np.concatenate(parts_c)
    uniq2, inv = np.unique(norms, return_inverse=True)
    return uniq2, np.bincount(inv, weights=coeffs).astype(np.int64)


def _kernel_tail(s: complex, Q: float, cutoff: float) -> float:
    """Bound on sum_{N(a) > cutoff Q} |N^-s Gamma(s, N/Q)|.

    For x >= 2|s-1| + 2, |Gamma(s, x)| <= 2 x^(sigma-1) e^-x; at most 2x ideals
    have norm <= x, and the sum is dominated by twice the integral.
    """
    return 8.0 * Q ** (1 - s.real) * math.exp(-cutoff) / cutoff


def afe_cutoff(s: complex) -> float:
    return AFE_CUTOFF + 2 * abs(s) + 2


def L_afe(s: complex, spec: CharacterSpec, split: float = 1.0) -> LValue:
    """L(s, chi) for a primitive character ``spec`` (root number 1).

    ``split`` moves the kernel arguments to N lam / Q and N / (lam Q).  The
    result is independent of lam exactly when the functional equation holds,
    so comparing two splits tests it.
    """
    s = complex(s)
    if spec.conductor_norm == 1:
        # trivial character: the L-function is zeta_K itself (poles at 0, 1)
        return LValue(s, spec.label(), zeta_K(s), 0)
    if split <= 0:
        raise ValueError("split must be positive")
    _check_gamma_args(s)
    Q = math.sqrt(spec.conductor_norm) / math.pi
    Q1, Q2 = Q / split, Q * split
    cut = afe_cutoff(s)
    max_norm = int(cut * max(Q1, Q2))
    norms, coeff = _coefficients(spec, max_norm)
    mask = coeff != 0
    norms, coeff = norms[mask].astype(np.float64), coeff[mask].astype(np.float64)
    terms_used = int(len(norms))
    if terms_used == 0:
        return LValue(s, spec.label(), ComplexVal(0.0), 0)
    logn = np.log(norms)
    g_s = cgamma(s)
    t1 = coeff * np.exp(-s * logn) * upper_gamma(s, norms / Q1) / g_s
    t2 = coeff * np.exp((s - 1) * logn) * upper_gamma(1 - s, norms / Q2)
    pref = cmath.exp((1 - 2 * s) * math.log(Q)) / g_s
    v1, v2 = csum(t1), csum(t2) * pref
    mag = float(np.sum(np.abs(t1)) + abs(pref) * np.sum(np.abs(t2)))
    tail = _kernel_tail(s, Q1, cut) / abs(g_s) + abs(pref) * _kernel_tail(1 - s, Q2, cut)
    err = 64 * EPS * mag + tail
    return LValue(s, spec.label(), ComplexVal.of(v1 + v2, err), terms_used)


def lambda_completed(s: complex, spec: CharacterSpec, split: float = 1.0) -> ComplexVal:
    """(4 N(q))^(s/2) (2 pi)^-s Gamma(s) L(s, chi)."""
    s = complex(s)
    _check_gamma_args(s)
    L = L_afe(s, spec, split).value
    factor_ = cmath.exp(s * (0.5 * math.log(4 * spec.conductor_norm) - math.log(2 * math.pi))) * cgamma(s)
    return L * ComplexVal.of(factor_, 16 * EPS * (1 + abs(s)) * abs(factor_))


def L_direct(s: complex, spec: CharacterSpec, max_norm: int = 10**6) -> ComplexVal:
    """Truncated Dirichlet series sum_{N(a) <= max_norm} chi(a) N(a)^-s (Re s > 1).

    The error bound covers rounding and the crude tail sum_{N > M} 2 N^-sigma.
    """
    s = complex(s)
    if s.real <= 1:
        raise ValueError("the Dirichlet series needs Re(s) > 1")
    norms, coeff = _coefficients(spec, max_norm)
    terms = coeff * np.exp(-s * np.log(norms.astype(np.float64)))
    tail = 2.0 * max_norm ** (1 - s.real) / (s.real - 1)
    return ComplexVal.of(csum(terms), tail + 16 * EPS * float(np.sum(np.abs(terms))))


# ------------------------------------------------------------ chi~_n

@dataclass(frozen=True)
class TildeInduction:
    """chi~_n as its primitive character times the missing local factors."""

    n: GaussianInt
    primitive: CharacterSpec
    extra_primes: tuple[GaussianInt, ...]  # primes of 2n not dividing the conductor


@lru_cache(maxsize=4096)
def tilde_induction(n: GaussianInt) -> TildeInduction:
    if not n.is_primary():
        raise ValueError(f"{n} is not primary")
    core, _ = squarefree_split(n)
    # n and its square-free part have the same type, so chi_j * (./core) is
    # the (unit-trivial) primitive character with twist 1
    spec = character_spec(core, ONE)
    core_primes = set(factor(core).primes) if core != ONE else set()
    extra = [p for p in factor(n).primes if p not in core_primes]
    if spec.odd_conductor:
        extra.insert(0, ONE_PLUS_I)
    return TildeInduction(n, spec, tuple(extra))


def L_tilde(s: complex, n: GaussianInt) -> LValue:
    """L(s, chi~_n) with chi~_n regarded modulo 2n."""
    s = complex(s)
    ind = tilde_induction(n)
    base = L_afe(s, ind.primitive)
    value = base.value
    for p in ind.extra_primes:
        chi_p = ind.primitive(p)
        if chi_p:
            local = 1 - chi_p * cmath.exp(-s * math.log(p.norm))
            value = value * ComplexVal.of(local, 4 * EPS * abs(local))
    return LValue(s, f"chi~[{n}]", value, base.terms_used)


# ------------------------------------------- Gauss-sum series at Re(s) < 0

@dataclass(frozen=True)
class SeriesValue:
    value: ComplexVal
    cells: int
    points: int
    tail_bound: float


def _cell_representatives(modulus: GaussianInt) -> tuple[np.ndarray, np.ndarray]:
    """Lattice points of Z[i] in the cell {modulus * (u + iv) : 0 <= u, v < 1}."""
    rs = residues(modulus)
    x, y = rs.arrays()
    N = modulus.norm
    # coordinates of k / modulus are Re, Im of k conj(modulus) / N
    pr = x * modulus.re + y * modulus.im
    pi_ = y * modulus.re - x * modulus.im
    mr, mi = np.floor_divide(pr, N), np.floor_divide(pi_, N)
    # subtract modulus * (mr + i mi)
    x0 = x - (mr * modulus.re - mi * modulus.im)
    y0 = y - (mr * modulus.im + mi * modulus.re)
    return x0, y0


def _gauss_tilde_table(n: GaussianInt, x0: np.ndarray, y0: np.ndarray) -> np.ndarray:
    return np.array(
        [gauss_tilde(GaussianInt(int(a), int(b)), n).value.re for a, b in zip(x0, y0)],
        dtype=np.float64,
    )


def _cell_tail(G1: float, a: float, w: complex, R: int) -> float:
    """Bound for the cells outside modulus * [-R, R)^2 of sum G(k) f(k), f(k) = N(k)^w.

    Expand f around each cell centre c.  The constant term vanishes because G
    sums to zero over a cell.  The linear term is v . grad f(c) with the same
    vector v for every cell; grad f is odd and the excluded centres form a set
    symmetric under c -> -c, so these terms cancel in total.  What is left is
    the Taylor remainder, at most G1 * delta^2 / 2 * |D^2 f| per cell, where
    delta = a / sqrt 2 is the cell radius and, for the radial power r^p with
    p = 2w, |D^2 f| <= max(|p (p - 1)|, |p|) r^(Re p - 2).
    """
    p = 2 * w
    q = 2 - p.real
    delta = a / math.sqrt(2)
    u0 = a * (R + 0.5) - 3 * delta
    if u0 <= 0 or q <= 2:
        return math.inf
    hess = max(abs(p * (p - 1)), abs(p))
    integral = 2 * math.pi * (u0 ** (2 - q) / (q - 2) + 2 * delta * u0 ** (1 - q) / (q - 1))
    return G1 * 0.5 * delta**2 * hess * integral / a**2


def gauss_series(n: GaussianInt, s: complex, R: int, chunk: int = 1 << 21) -> SeriesValue:
    """sum_{k != 0} g(k, chi~_n) / N(k)^(1-s) over the cells modulus * [-R, R)^2, modulus 2n."""
    s = complex(s)
    mod = n * 2
    x0, y0 = _cell_representatives(mod)
    G = _gauss_tilde_table(n, x0, y0)
    nz = G != 0
    x0, y0, G = x0[nz], y0[nz], G[nz]
    w = s - 1
    a = math.sqrt(mod.norm)
    tail = _cell_tail(float(np.sum(np.abs(G))), a, w, R)
    cells = np.arange(-R, R, dtype=np.int64)
    parts: list[complex] = []
    mag = 0.0
    rows_per_chunk = max(1, chunk // max(1, len(G) * len(cells)))
    for start in range(0, len(cells), rows_per_chunk):
        mr = cells[start:start + rows_per_chunk]
        MR, MI = np.meshgrid(mr, cells, indexing="ij")
        MR, MI = MR.ravel(), MI.ravel()
        shift_re = MR * mod.re - MI * mod.im
        shift_im = MR * mod.im + MI * mod.re
        kr = (shift_re[:, None] + x0[None, :]).ravel()
        ki = (shift_im[:, None] + y0[None, :]).ravel()
        gk = np.broadcast_to(G[None, :], (len(MR), len(G))).ravel()
        nk = (kr * kr + ki * ki).astype(np.float64)
        keep = nk > 0
        terms = gk[keep] * np.exp(w * np.log(nk[keep]))
        parts.append(csum(terms))
        mag += float(np.sum(np.abs(terms)))
    total = csum(parts)
    npts = (2 * R) ** 2 * len(G)
    return SeriesValue(ComplexVal.of(total, tail + 16 * EPS * mag), (2 * R) ** 2, npts, tail)


def gauss_series_rhs(
    s: complex,
    n: GaussianInt,
    rel_tol: float = 2e-6,
    max_points: int = 4 * 10**7,
) -> ComplexVal:
    """N(n)^-s Y(s) sum_{k != 0} g(k, chi~_n) N(k)^(s-1) for non-square primary n.

    The k-sum is grouped into complete period cells of 2n Z[i]; the cell count
    grows until the rigorous tail bound is below ``rel_tol`` of the value.
    """
    s = complex(s)
    if s.real > -0.5:
        raise ValueError("the Gauss-sum series is only used with Re(s) <= -0.5")
    core, _ = squarefree_split(n)
    if core == ONE:
        raise ValueError(f"{n} is a square")
    pref = cmath.exp(-s * math.log(n.norm)) * Y(s)
    R = 4
    series = gauss_series(n, s, R)
    while series.tail_bound > rel_tol * max(abs(series.value), 1e-300):
        # tail ~ R^(2 Re(w)): solve for the R that meets the target
        p = -2 * (s.real - 1)
        ratio = series.tail_bound / (rel_tol * 0.5 * abs(series.value))
        R_new = max(R + 1, int(math.ceil(R * ratio ** (1 / p))))
        if (2 * R_new) ** 2 * 4 * n.norm > max_points:
            raise RuntimeError(
                f"series for n={n} needs {R_new} cells per side; tail bound {series.tail_bound:.3e}"
            )
        R = R_new
        series = gauss_series(n, s, R)
    return series.value * ComplexVal.of(pref, 16 * EPS * abs(pref) * (1 + abs(s)))
