# Copyright (C) 2024 twyleg
"""
Twisted exponential sums sum_{n <= X} w(n) e(alpha P(n)) with e(x) = exp(2 pi i x).

The phase frac(beta * n^k) is reduced before any trigonometric evaluation: beta mod 1 is
split as k / 2^26 + lo, the high part is reduced with exact integer arithmetic modulo
2^26 and only the tiny low part is multiplied in floating point.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from twisted_sums import TwistedSumsError
from twisted_sums.arith import ArithTable, Kind, dirichlet_convolve, r_fold, sieve
from twisted_sums.diophantine import convergents
from twisted_sums.summation import DEFAULT_CHUNK_SIZE, chunk_sum, parallel_sum, tree_combine


logm = logging.getLogger(__name__)

SPLIT_BITS = 26
SPLIT = 1 << SPLIT_BITS


class ExpSumError(TwistedSumsError):
    pass


@dataclass(frozen=True)
class ExpSumResult:
    value: complex
    X: int
    alpha: float
    kind: str
    n_terms: int
    weight_l1: float

    @property
    def abs(self) -> float:
        return abs(self.value)

    def within_trivial_bound(self, rtol: float = 1e-12) -> bool:
        return self.abs <= self.weight_l1 * (1 + rtol) + rtol


def split_frequency(beta: float) -> Tuple[int, float]:
    """beta = k / 2^26 + lo (mod 1) with 0 <= k < 2^26 and |lo| <= 2^-27."""
    b = math.fmod(beta, 1.0)
    k = round(b * SPLIT)
    lo = b - k / SPLIT
    return k % SPLIT, lo


def _monomial(n: np.ndarray, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """(n^degree mod 2^26 as exact integers, n^degree as floats)."""
    n_mod = n % SPLIT
    m_mod = np.ones_like(n_mod)
    for _ in range(degree):
        m_mod = (m_mod * n_mod) % SPLIT
    return m_mod, n.astype(np.float64) ** degree


def reduced_phase(monomials: Sequence[Tuple[float, int]], n: np.ndarray) -> np.ndarray:
    """frac(sum_i beta_i n^degree_i) in [0, 1) for integer n."""
    phase = np.zeros(n.shape, dtype=np.float64)
    for beta, degree in monomials:
        if beta == 0:
            continue
        k, lo = split_frequency(beta)
        m_mod, m_float = _monomial(n, degree)
        phase += ((k * m_mod) % SPLIT) / SPLIT
        if lo:
            phase += np.fmod(lo * m_float, 1.0)
    return phase - np.floor(phase)


def cis(phase: np.ndarray) -> np.ndarray:
    angle = 2 * np.pi * phase
    return np.cos(angle) + 1j * np.sin(angle)


def _check_range(weights: ArithTable, X: int) -> None:
    if X < 1:
        raise ExpSumError(f"Summation range must be at least 1, got X={X}")
    if X > weights.limit:
        raise ExpSumError(f"X={X} exceeds the weight table ({weights.name}, limit {weights.limit})")


def twisted_sum(
    weights: ArithTable,
    monomials: Sequence[Tuple[float, int]],
    alpha: float,
    X: int,
    kind: str,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int | None = None,
) -> ExpSumResult:
    """sum_{n <= X} w(n) e(sum_i beta_i n^degree_i) over the nonzero weights."""
    _check_range(weights, X)
    w = weights.data[: X + 1]
    support = np.flatnonzero(w[1:]) + 1
    w_support = w[support].astype(np.float64)

    def terms(lo: int, hi: int) -> np.ndarray:
        return w_support[lo:hi] * cis(reduced_phase(monomials, support[lo:hi]))

    value = parallel_sum(terms, support.size, chunk_size, workers)
    logm.debug("%s: X=%d alpha=%.17g terms=%d |S|=%.6g", kind, X, alpha, support.size, abs(value))
    return ExpSumResult(value, X, alpha, kind, int(support.size), float(np.abs(w_support).sum()))


def exp_sum_linear(weights: ArithTable, alpha: float, X: int, chunk_size: int = DEFAULT_CHUNK_SIZE, workers: int | None = None) -> ExpSumResult:
    return twisted_sum(weights, [(alpha, 1)], alpha, X, f"{weights.name}:linear", chunk_size, workers)


def exp_sum_quadratic(weights: ArithTable, alpha: float, X: int, chunk_size: int = DEFAULT_CHUNK_SIZE, workers: int | None = None) -> ExpSumResult:
    return twisted_sum(weights, [(alpha, 2)], alpha, X, f"{weights.name}:quadratic", chunk_size, workers)


def exp_sum_poly(
    weights: ArithTable,
    coeffs: Sequence[float],
    alpha: float,
    X: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int | None = None,
) -> ExpSumResult:
    """
    Phase e(alpha * P(n)) with P(n) = sum_i coeffs[i] n^i; alpha multiplies the whole polynomial.
    """
    if len(coeffs) == 0:
        raise ExpSumError("Polynomial phase needs at least one coefficient")
    if len(coeffs) < 2 or not any(coeffs[1:]):
        raise ExpSumError("Polynomial phase must have degree at least 1")
    monomials = [(alpha * c, i) for i, c in enumerate(coeffs)]
    return twisted_sum(weights, monomials, alpha, X, f"{weights.name}:poly{len(coeffs) - 1}", chunk_size, workers)


def exp_sum_primes_r(r: int, alpha: float, X: int, chunk_size: int = DEFAULT_CHUNK_SIZE, workers: int | None = None) -> ExpSumResult:
    """Sum over ordered r-tuples of primes with p_1 ... p_r <= X."""
    if r < 1:
        raise ExpSumError(f"Number of prime factors must be at least 1, got r={r}")
    if X < 2:
        raise ExpSumError(f"Prime sums need X >= 2, got X={X}")
    weights = r_fold(sieve(Kind.ONE_P, X, workers=workers), r)
    return twisted_sum(weights, [(alpha, 1)], alpha, X, f"primes_{r}:linear", chunk_size, workers)


def exp_sum_von_mangoldt_r(r: int, alpha: float, X: int, chunk_size: int = DEFAULT_CHUNK_SIZE, workers: int | None = None) -> ExpSumResult:
    """Prime-power weighted variant with weights Lambda^{*r}."""
    if r < 1:
        raise ExpSumError(f"Number of factors must be at least 1, got r={r}")
    weights = r_fold(sieve(Kind.LAMBDA, X, workers=workers), r)
    return twisted_sum(weights, [(alpha, 1)], alpha, X, f"lambda_{r}:linear", chunk_size, workers)


@dataclass(frozen=True)
class HyperbolaSplit:
    s1: complex
    s2: complex
    s3: complex
    s4: complex

    @property
    def recombined(self) -> complex:
        return self.s1 + self.s2 + self.s3 - self.s4


def _bilinear(outer: ArithTable, inner: ArithTable, alpha: float, outer_lo: int, outer_hi: int, inner_lo: int, inner_hi: int, X: int) -> complex:
    """sum_{outer_lo <= u <= outer_hi} outer(u) sum_{inner_lo <= v <= min(inner_hi, X // u)} inner(v) e(alpha u v)."""
    partials = []
    for u in range(max(outer_lo, 1), outer_hi + 1):
        if outer[u] == 0:
            continue
        top = min(inner_hi, X // u)
        if top < inner_lo:
            continue
        v = np.arange(inner_lo, top + 1, dtype=np.int64)
        w = inner.data[inner_lo : top + 1].astype(np.float64)
        mask = w != 0
        terms = float(outer[u]) * w[mask] * cis(reduced_phase([(alpha, 1)], u * v[mask]))
        partials.append(chunk_sum(terms))
    return tree_combine(partials)


def hyperbola_split(f: ArithTable, g: ArithTable, alpha: float, X: int, M: float, N: float) -> HyperbolaSplit:
    """
    Split sum_{mn <= X} f(m) g(n) e(alpha m n) into
    S1 (m > M, n > N), S2 (n <= N), S3 (m <= M), S4 (m <= M, n <= N).
    """
    if M < 1 or N < 1:
        raise ExpSumError(f"Split parameters must be at least 1, got M={M}, N={N}")
    if M * N > X:
        raise ExpSumError(f"Split rectangle M*N={M * N} exceeds X={X}")
    _check_range(f, X)
    _check_range(g, X)
    m_cap, n_cap = int(math.floor(M)), int(math.floor(N))

    s1 = _bilinear(f, g, alpha, m_cap + 1, X // (n_cap + 1), n_cap + 1, X, X)
    s2 = _bilinear(g, f, alpha, 1, n_cap, 1, X, X)
    s3 = _bilinear(f, g, alpha, 1, m_cap, 1, X, X)
    s4 = _bilinear(f, g, alpha, 1, m_cap, 1, n_cap, X)
    return HyperbolaSplit(s1, s2, s3, s4)


def direct_convolution_sum(f: ArithTable, g: ArithTable, alpha: float, X: int, workers: int | None = None) -> ExpSumResult:
    return exp_sum_linear(dirichlet_convolve(f.truncated(X), g.truncated(X)), alpha, X, workers=workers)


def exp_sum_convergent_sweep(
    weights: ArithTable,
    alpha: float,
    X: int,
    q_min: int,
    q_max: int,
    phase_degree: int = 1,
    workers: int | None = None,
) -> List[Tuple[int, int, ExpSumResult]]:
    """The sum evaluated at every convergent a/q of alpha with q_min <= q <= q_max."""
    rows = []
    for a, q in convergents(alpha):
        if q > q_max:
            break
        if q < q_min:
            continue
        point = float(Fraction(a, q))
        rows.append((a, q, twisted_sum(weights, [(point, phase_degree)], point, X, f"{weights.name}:sweep", workers=workers)))
    return rows
