"""Smoothed first moment of L(s, chi_{(1+i)^5 d}) over square-free primary d.

The left side is summed directly with the approximate functional equation;
the right side is the four residue terms

    X Phi^(1) R1(s) + X^(3/2-s) Phi^(3/2-s) X_K(s) R1(1-s)
      + X^(1/2-s/3) Phi^(1/2-s/3) R2(s) + X^((2-2s)/3) Phi^((2-2s)/3) X_K(s) R2(1-s),

with Phi^ the Mellin transform of the weight.  At s = 1/2 the terms have
poles that cancel in pairs; each term is then replaced by its finite part,
the symmetric average over 1/2 +- eps, extrapolated in eps.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import integrate

from .characters import family_char, supplement_one_plus_i, symbol_table
from .complexval import EPS, ComplexVal, csum
from .euler_products import DEFAULT_PRIME_BOUND, RK1_CONSTANTS, B_sw, R_K1, R_K2, X_K, a_w
from .gaussian import GaussianInt, factor, primary_arrays, squarefree_mask
from .lfunctions import L_afe, L_tilde
from .special import zeta_K, zeta_K_euler2

SUPPORT = (0.5, 2.0)
CENTRAL_EPS = 1e-4
RESIDUE_TOL = 1e-6
STATE_ENV = "HML_STATE_DIR"


# ------------------------------------------------------------------ weight

def phi(t: float) -> float:
    """exp(-1/((t - 1/2)(2 - t))) on (1/2, 2), zero elsewhere."""
    a, b = SUPPORT
    if not a < t < b:
        return 0.0
    return math.exp(-1.0 / ((t - a) * (b - t)))


def phi_array(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    a, b = SUPPORT
    inside = (t > a) & (t < b)
    out = np.zeros(t.shape)
    ti = t[inside]
    out[inside] = np.exp(-1.0 / ((ti - a) * (b - ti)))
    return out


@lru_cache(maxsize=256)
def _mellin(s: complex, limit: int) -> tuple[complex, float]:
    a, b = SUPPORT

    def part(fn):
        return integrate.quad(fn, a, b, epsabs=1e-14, epsrel=1e-12, limit=limit)

    re_, e1 = part(lambda t: phi(t) * (t ** (s - 1)).real)
    im_, e2 = part(lambda t: phi(t) * (t ** (s - 1)).imag)
    return complex(re_, im_), e1 + e2


def mellin_phi(s: complex, limit: int = 200) -> ComplexVal:
    """Phi^(s) = int_0^oo Phi(t) t^(s-1) dt by adaptive quadrature on the support."""
    s = complex(s)
    v, err = _mellin(s, limit)
    return ComplexVal.of(v, err + 8 * EPS * abs(v))


# --------------------------------------------------------------- left side

def family_range(X: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Square-free primary d with X/2 < N(d) < 2X as (re, im, norm), sorted."""
    lo, hi = SUPPORT[0] * X, SUPPORT[1] * X
    re_, im_, nrm = primary_arrays(int(math.floor(hi)))
    keep = (nrm > lo) & (nrm < hi)
    re_, im_, nrm = re_[keep], im_[keep], nrm[keep]
    sq = squarefree_mask(re_, im_)
    return re_[sq], im_[sq], nrm[sq]


def _family_term(args) -> tuple[tuple[int, int, int], complex, float]:
    s, a, b, weight = args
    d = GaussianInt(a, b)
    L = L_afe(s, family_char(d)).value
    return (d.norm, a, b), L.value * weight, L.err * weight


@dataclass(frozen=True)
class MomentSum:
    value: ComplexVal
    d_count: int


def lhs_moment(s: complex, X: float, threads: int = 1) -> MomentSum:
    """sum over square-free primary d of L(s, chi_{(1+i)^5 d}) Phi(N(d)/X)."""
    s = complex(s)
    if X > 1e5:
        raise ValueError("lhs_moment is limited to X <= 1e5")
    re_, im_, nrm = family_range(X)
    weights = phi_array(nrm / X)
    jobs = [(s, int(a), int(b), float(w)) for a, b, w in zip(re_, im_, weights) if w > 0]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_family_term, jobs))
    else:
        parts = [_family_term(j) for j in jobs]
    parts.sort(key=lambda p: p[0])  # reduce in (norm, re, im) order
    values = [p[1] for p in parts]
    total = csum(values)
    err = math.fsum(p[2] for p in parts) + 4 * EPS * math.fsum(abs(v) for v in values)
    return MomentSum(ComplexVal.of(total, err), len(parts))


# -------------------------------------------------------------- right side

TERM_NAMES = ("term1", "term2", "term3", "term4")


def _terms_at(s: complex, X: float, prime_bound: int, q_variant: str, r1_variant: str | None) -> list[complex]:
    lx = math.log(X)
    xk = X_K(s)

    def mel(z):
        return mellin_phi(z).value

    return [
        X * mel(1.0) * R_K1(s, r1_variant, prime_bound).value,
        np.exp((1.5 - s) * lx) * mel(1.5 - s) * xk * R_K1(1 - s, r1_variant, prime_bound).value,
        np.exp((0.5 - s / 3) * lx) * mel(0.5 - s / 3) * R_K2(s, prime_bound, q_variant).value,
        np.exp((2 - 2 * s) / 3 * lx) * mel((2 - 2 * s) / 3) * xk * R_K2(1 - s, prime_bound, q_variant).value,
    ]


def rhs_main_terms(
    s: complex,
    X: float,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    q_variant: str = "derived",
    r1_variant: str | None = None,
) -> list[complex]:
    """The four main terms at s with 1/3 < Re(s) < 1, s != 1/2."""
    s = complex(s)
    if not 1 / 3 < s.real < 1:
        raise ValueError("the main terms are stated for 1/3 < Re(s) < 1")
    if s == 0.5:
        raise ValueError("s = 1/2 is a removable singularity; use central_terms")
    return [complex(t) for t in _terms_at(s, X, prime_bound, q_variant, r1_variant)]


def _symmetric(X: float, eps: float, prime_bound: int, q_variant: str, r1_variant: str | None) -> np.ndarray:
    up = _terms_at(complex(0.5 + eps), X, prime_bound, q_variant, r1_variant)
    down = _terms_at(complex(0.5 - eps), X, prime_bound, q_variant, r1_variant)
    return (np.array(up) + np.array(down)) / 2


def central_terms(
    X: float,
    eps: float = CENTRAL_EPS,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    q_variant: str = "derived",
    r1_variant: str | None = None,
) -> list[complex]:
    """Finite parts of the four terms at s = 1/2.

    Each term has a simple pole at 1/2 whose residues cancel within the pairs
    (1, 2) and (3, 4); the symmetric average removes the pole and odd orders,
    and one Richardson step in eps removes the eps^2 error.
    """
    f1 = _symmetric(X, eps, prime_bound, q_variant, r1_variant)
    f2 = _symmetric(X, 2 * eps, prime_bound, q_variant, r1_variant)
    return [complex(v) for v in (4 * f1 - f2) / 3]


@dataclass(frozen=True)
class CentralFit:
    X: list[float]
    main: list[complex]  # term1 + term2 at s = 1/2
    secondary: list[complex]  # term3 + term4 at s = 1/2
    q1: tuple[float, float]  # main / X = q1[0] + q1[1] log X
    q2: tuple[float, float]  # secondary / X^(1/3) = q2[0] + q2[1] log X
    fit_residual: float

    def rhs(self, X: float) -> float:
        lx = math.log(X)
        return X * (self.q1[0] + self.q1[1] * lx) + X ** (1 / 3) * (self.q2[0] + self.q2[1] * lx)


def _linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[tuple[float, float], float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(intercept + slope * x - y)) / np.max(np.abs(y)))
    return (float(intercept), float(slope)), resid


def central_fit(
    X_values=(500.0, 1000.0, 2000.0, 4000.0),
    eps: float = CENTRAL_EPS,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    q_variant: str = "derived",
) -> CentralFit:
    """Central value of the main terms and the linear polynomials Q1, Q2 in log X."""
    X_values = [float(x) for x in X_values]
    if len(X_values) < 2:
        raise ValueError("need at least two X values to fit a line")
    main, secondary = [], []
    for X in X_values:
        t = central_terms(X, eps, prime_bound, q_variant)
        main.append(t[0] + t[1])
        secondary.append(t[2] + t[3])
    lx = np.log(X_values)
    q1, r1 = _linear_fit(lx, np.array([m.real for m in main]) / np.array(X_values))
    q2, r2 = _linear_fit(lx, np.array([m.real for m in secondary]) / np.array(X_values) ** (1 / 3))
    return CentralFit(X_values, main, secondary, q1, q2, max(r1, r2))


# ---------------------------------------------------- residue adjudication

def _residue_factor(w: complex) -> complex:
    """(w - 1) zeta_K(w) / zeta_K(2w)."""
    return (w - 1) * (zeta_K(w) / zeta_K(2 * w)).value


def squares_sum(s: complex, w: complex, max_norm: int = 4000) -> ComplexVal:
    """sum over primary m of prod_{p | 2m} (1 - N(p)^-w) a_{2w}(2m^2) / N(m)^2s.

    This is the coefficient of zeta_K(w)/zeta_K(2w) in the square part of A(s, w),
    summed term by term rather than through its Euler product.
    """
    s, w = complex(s), complex(w)
    re_, im_, nrm = primary_arrays(max_norm)
    terms = []
    for a, b, n in zip(re_.tolist(), im_.tolist(), nrm.tolist()):
        m = GaussianInt(a, b)
        norms = [2] + [p.norm for p in factor(m).primes]
        local = 1.0
        for N in norms:
            local *= 1 - N ** (-w)
        m2 = m * m
        terms.append(local * a_w(2 * w, m2 * 2).value * n ** (-2 * s))
    sigma = 2 * s.real
    tail = 2.0 * sigma / (sigma - 1) * max_norm ** (1 - sigma)
    return ComplexVal.of(csum(terms), tail + 16 * EPS * len(terms))


@dataclass
class Adjudication:
    s: float
    constant: str
    limit: complex  # lim (w-1) A1(s, w) from the term-by-term sum
    closed_form_limit: complex  # same limit from the product B(s, w) with zeta_K's pi/4
    candidates: dict = field(default_factory=dict)
    relative_gaps: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = asdict(self)
        for k in ("limit", "closed_form_limit"):
            d[k] = [d[k].real, d[k].imag]
        d["candidates"] = {k: [v.real, v.imag] for k, v in self.candidates.items()}
        return d


class AdjudicationError(ArithmeticError):
    pass


def residue_adjudicate(s: float, h: float = 1e-5, prime_bound: int = DEFAULT_PRIME_BOUND) -> Adjudication:
    """Decide which constant (pi/4 or pi/6) gives Res_{w=1} A1(s, w).

    The limit is taken from the term-by-term square sum with w = 1 +- h
    averaged, so the linear error in h cancels.
    """
    if s < 2:
        raise ValueError("adjudication runs at real s >= 2")
    vals = []
    closed = []
    for w in (1 + h, 1 - h):
        rf = _residue_factor(w)
        vals.append(rf * squares_sum(s, w).value)
        closed.append(rf * (zeta_K_euler2(2 * s).value * B_sw(s, w, prime_bound).value.value))
    limit = (vals[0] + vals[1]) / 2
    closed_limit = (closed[0] + closed[1]) / 2
    cands = {name: complex(R_K1(s, name, prime_bound).value) for name in RK1_CONSTANTS}
    gaps = {name: abs(v - limit) / abs(limit) for name, v in cands.items()}
    matches = [n for n, g in gaps.items() if g <= RESIDUE_TOL]
    if len(matches) != 1:
        raise AdjudicationError(f"expected exactly one matching constant at s = {s}, gaps {gaps}")
    return Adjudication(float(s), matches[0], limit, closed_limit, cands, gaps)


def _state_path() -> Path | None:
    d = os.environ.get(STATE_ENV)
    return Path(d) / "residue_constant.json" if d else None


@lru_cache(maxsize=1)
def adjudicated_variant() -> str:
    """The R_K1 constant settled at s = 2 and s = 3 (cached, optionally on disk)."""
    path = _state_path()
    if path is not None and path.exists():
        return json.loads(path.read_text())["constant"]
    results = [residue_adjudicate(s) for s in (2.0, 3.0)]
    if len({r.constant for r in results}) != 1:
        raise AdjudicationError("the adjudicated constant depends on s")
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"constant": results[0].constant, "evidence": [r.as_dict() for r in results]}, indent=2))
    return results[0].constant


# ------------------------------------------------- decomposition identity

@dataclass(frozen=True)
class DecompositionReport:
    s: complex
    w: complex
    T: int
    lhs: ComplexVal  # sum over d of L(s, chi_{(1+i)^5 d}) / N(d)^w
    rhs: ComplexVal  # sum over n of ((1+i)/n) N(n)^-s sum_d mu^2(d) (d/n) N(d)^-w
    rhs_closed: ComplexVal  # same with the inner d-sum in closed form
    defect: float
    tail_bound: float
    closed_defect: float
    closed_tail_bound: float

    def as_dict(self) -> dict:
        return {
            "s": [self.s.real, self.s.imag],
            "w": [self.w.real, self.w.imag],
            "T": self.T,
            "lhs": self.lhs.as_dict(),
            "rhs": self.rhs.as_dict(),
            "rhs_closed": self.rhs_closed.as_dict(),
            "defect": self.defect,
            "tail_bound": self.tail_bound,
            "closed_defect": self.closed_defect,
            "closed_tail_bound": self.closed_tail_bound,
        }


def _tail_sum(sigma: float, T: float) -> float:
    """Bound on sum over primary n with N(n) > T of N(n)^-sigma (count <= x)."""
    return sigma / (sigma - 1) * T ** (1 - sigma)


def decomposition_check(s: complex, w: complex, T: int) -> DecompositionReport:
    """Compare the two expressions for A(s, w) truncated to the same (d, n) box.

    The left side takes d up to T with the full L(s, chi_{(1+i)^5 d}); the right
    side takes n up to T and the inner d-sum over the same d, so the two differ
    only by the n > T part of the left side.  A third value replaces the inner
    sum by L^(2)(w, chi_n) a_{2w}(2n) / zeta_K(2w), which adds the d > T tail.
    """
    s, w = complex(s), complex(w)
    if s.real < 2 or w.real < 2:
        raise ValueError("decomposition_check needs Re(s) >= 2 and Re(w) >= 2")
    d_re, d_im, d_n = primary_arrays(T)
    sq = squarefree_mask(d_re, d_im)
    d_re, d_im, d_n = d_re[sq], d_im[sq], d_n[sq].astype(float)
    d_pow = np.exp(-w * np.log(d_n))

    lhs_terms, lhs_err = [], 0.0
    for a, b, p in zip(d_re.tolist(), d_im.tolist(), d_pow):
        L = L_afe(s, family_char(GaussianInt(a, b))).value
        lhs_terms.append(L.value * p)
        lhs_err += L.err * abs(p)
    lhs = ComplexVal.of(csum(lhs_terms), lhs_err + 4 * EPS * len(lhs_terms))

    n_re, n_im, n_n = primary_arrays(T)
    inv_z2w = 1 / zeta_K(2 * w).value
    rhs_terms, closed_terms, closed_err = [], [], 0.0
    for a, b, N in zip(n_re.tolist(), n_im.tolist(), n_n.tolist()):
        n = GaussianInt(a, b)
        c = supplement_one_plus_i(n) * N ** (-s)
        chi = symbol_table(d_re, d_im, factor(n)) if N > 1 else np.ones(len(d_re), dtype=np.int64)
        rhs_terms.append(c * csum(chi * d_pow))
        Lt = L_tilde(w, n).value * a_w(2 * w, n * 2) * inv_z2w
        closed_terms.append(c * Lt.value)
        closed_err += abs(c) * Lt.err
    rhs = ComplexVal.of(csum(rhs_terms), 8 * EPS * len(rhs_terms))
    rhs_closed = ComplexVal.of(csum(closed_terms), closed_err + 8 * EPS * len(closed_terms))

    # |L(s, chi)| <= zeta(sigma)^2 termwise, and |sum_d| <= sum_d N(d)^-Re w
    d_abs = float(np.sum(np.abs(d_pow)))
    n_abs = float(np.sum(n_n.astype(float) ** (-s.real)))
    tail = d_abs * _tail_sum(s.real, T)
    closed_tail = n_abs * _tail_sum(w.real, T)
    return DecompositionReport(
        s, w, T, lhs, rhs, rhs_closed,
        abs(lhs.value - rhs.value), tail + lhs.err + rhs.err,
        abs(rhs_closed.value - rhs.value), closed_tail + rhs_closed.err + rhs.err,
    )


# ------------------------------------------------------------- experiment

@dataclass
class MomentRow:
    X: float
    lhs: ComplexVal
    rhs_terms: list[complex]
    residual: complex
    relative_residual: float
    d_count: int
    seconds: float


@dataclass
class MomentReport:
    s: complex
    rows: list[MomentRow]
    r1_variant: str
    q_variant: str
    central: bool

    def as_dict(self) -> dict:
        return {
            "s": [self.s.real, self.s.imag],
            "r1_variant": self.r1_variant,
            "q_variant": self.q_variant,
            "central": self.central,
            "rows": [
                {
                    "X": r.X,
                    "lhs": r.lhs.as_dict(),
                    **{name: [t.real, t.imag] for name, t in zip(TERM_NAMES, r.rhs_terms)},
                    "residual": [r.residual.real, r.residual.imag],
                    "relative_residual": r.relative_residual,
                    "d_count": r.d_count,
                    "seconds": r.seconds,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["X", "lhs_re", "lhs_im", *TERM_NAMES, "residual", "relative_residual", "d_count", "seconds"])
        for r in self.rows:
            out.writerow([
                r.X, repr(r.lhs.re), repr(r.lhs.im),
                *(_fmt(t) for t in r.rhs_terms),
                _fmt(r.residual), repr(r.relative_residual), r.d_count, f"{r.seconds:.3f}",
            ])
        return buf.getvalue()


def _fmt(z: complex) -> str:
    return repr(z.real) if z.imag == 0 else repr(complex(z))


def moment_experiment(
    s: complex,
    X_grid,
    threads: int = 1,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    q_variant: str = "derived",
    r1_variant: str | None = None,
) -> MomentReport:
    """Left side, the four main terms and their residual for each X in the grid."""
    s = complex(s)
    X_grid = [float(x) for x in X_grid]
    if X_grid != sorted(X_grid):
        raise ValueError("X grid must be ascending")
    variant = r1_variant if r1_variant is not None else adjudicated_variant()
    central = s == 0.5
    rows = []
    for X in X_grid:
        t0 = time.perf_counter()
        lhs = lhs_moment(s, X, threads)
        if central:
            terms = central_terms(X, prime_bound=prime_bound, q_variant=q_variant, r1_variant=variant)
        else:
            terms = rhs_main_terms(s, X, prime_bound, q_variant, variant)
        rhs = math.fsum(t.real for t in terms) + 1j * math.fsum(t.imag for t in terms)
        residual = lhs.value.value - rhs
        rows.append(MomentRow(X, lhs.value, terms, residual, abs(residual) / abs(rhs), lhs.d_count, time.perf_counter() - t0))
    return MomentReport(s, rows, variant, q_variant, central)


__all__ = [
    "Adjudication",
    "AdjudicationError",
    "CENTRAL_EPS",
    "CentralFit",
    "DecompositionReport",
    "MomentReport",
    "MomentRow",
    "MomentSum",
    "SUPPORT",
    "TERM_NAMES",
    "adjudicated_variant",
    "central_terms",
    "central_fit",
    "decomposition_check",
    "family_range",
    "lhs_moment",
    "mellin_phi",
    "moment_experiment",
    "phi",
    "phi_array",
    "residue_adjudicate",
    "rhs_main_terms",
    "squares_sum",
]
