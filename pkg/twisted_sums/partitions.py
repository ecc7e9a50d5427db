# Copyright (C) 2024 twyleg
"""
Partitions into squarefree parts (or into squares of squarefree integers) and the
saddle-point description of their generating function

    Psi(z) = prod_{n allowed} (1 - z^n)^(-1) = exp(Phi(z)),  Phi(z) = sum_k c(k)/k z^k,

with c(k) = sum_{d | k} d w(d) for the indicator w of the allowed parts.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from twisted_sums import TwistedSumsError
from twisted_sums.arith import ArithTable, Kind, dirichlet_convolve, mobius, sieve, squarefree_density_factor
from twisted_sums.bounds import BracketError, bisect_decreasing
from twisted_sums.diophantine import ArcDissection, classify_grid
from twisted_sums.expsum import cis, reduced_phase
from twisted_sums.summation import compensated_sum


logm = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-15
RECURRENCE_LIMIT = 2000
MAX_BRACKET_DOUBLINGS = 40
# block slices pay off once the shift step is this large
BLOCK_STEP = 32


class PartitionError(TwistedSumsError):
    pass


class SaddleBracketError(PartitionError):
    pass


class InexactDivisionError(PartitionError):
    pass


class PartitionKind(str, Enum):
    SQUAREFREE = "squarefree"
    SQUARES = "squares"

    @property
    def weight_kind(self) -> Kind:
        return Kind.MU_ABS if self is PartitionKind.SQUAREFREE else Kind.SQUARES_OF_SQUAREFREE


class CountMethod(str, Enum):
    AUTO = "auto"
    RECURRENCE = "recurrence"
    PRODUCT = "product"
    PARTS = "parts"


@dataclass(frozen=True)
class PartitionSeries:
    kind: PartitionKind
    n_max: int
    counts: Tuple[int, ...] = field(repr=False)
    method: CountMethod = CountMethod.RECURRENCE

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    def log_count(self, n: int) -> float:
        return math.log(self.counts[n])


def c_weights(kind: "PartitionKind | str", n_max: int) -> ArithTable:
    """c(k) = sum_{d | k} d w(d), exact."""
    kind = PartitionKind(kind)
    w = sieve(kind.weight_kind, n_max)
    identity_weighted = ArithTable.from_values(np.arange(1, n_max + 1, dtype=np.int64) * w.values, f"id*{w.name}")
    return dirichlet_convolve(identity_weighted, sieve(Kind.ONE, n_max), "c")


def allowed_parts(kind: "PartitionKind | str", n_max: int) -> np.ndarray:
    kind = PartitionKind(kind)
    return np.flatnonzero(sieve(kind.weight_kind, n_max).values) + 1


def _counts_recurrence(kind: PartitionKind, n_max: int) -> List[int]:
    # n p(n) = sum_{m=1}^{n} c(m) p(n - m)
    c = np.array([int(v) for v in c_weights(kind, n_max).data.tolist()], dtype=object)
    p = np.zeros(n_max + 1, dtype=object)
    p[0] = 1
    for n in range(1, n_max + 1):
        total = np.dot(c[1 : n + 1], p[n - 1 :: -1]) if n > 1 else c[1] * p[0]
        value, remainder = divmod(int(total), n)
        if remainder:
            raise InexactDivisionError(f"Recurrence at n={n} is not divisible: {total} mod {n} = {remainder}")
        p[n] = value
    return [int(v) for v in p.tolist()]


def _counts_parts(kind: PartitionKind, n_max: int) -> List[int]:
    p = np.zeros(n_max + 1, dtype=object)
    p[0] = 1
    for s in allowed_parts(kind, n_max).tolist():
        # p_new[k] = p[k] + p_new[k - s]: cumulative sums along each residue class mod s
        padded = np.concatenate([p, np.zeros((-len(p)) % s, dtype=object)])
        p = padded.reshape(-1, s).cumsum(axis=0).reshape(-1)[: n_max + 1]
    return [int(v) for v in p.tolist()]


def _pentagonal(limit: int) -> Tuple[np.ndarray, np.ndarray]:
    """Generalised pentagonal numbers 0 < g <= limit with the signs of prod (1 - z^k)."""
    gs, signs = [], []
    j = 1
    while j * (3 * j - 1) // 2 <= limit:
        sign = -1 if j % 2 else 1
        for g in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if g <= limit:
                gs.append(g)
                signs.append(sign)
        j += 1
    return np.array(gs, dtype=np.int64), np.array(signs, dtype=object)


def _times_euler(series: np.ndarray, step: int) -> np.ndarray:
    """series * prod_k (1 - z^(step k)), truncated."""
    n = len(series) - 1
    out = series.copy()
    gs, signs = _pentagonal(n // step)
    for g, sign in zip(gs.tolist(), signs.tolist()):
        shift = g * step
        out[shift:] += sign * series[: n + 1 - shift]
    return out


def _over_euler(series: np.ndarray, step: int) -> np.ndarray:
    """series / prod_k (1 - z^(step k)), truncated."""
    n = len(series) - 1
    out = series.copy()
    gs, signs = _pentagonal(n // step)
    if step >= BLOCK_STEP:
        for lo in range(step, n + 1, step):
            hi = min(lo + step, n + 1)
            for g, sign in zip(gs.tolist(), signs.tolist()):
                shift = g * step
                if shift > lo:
                    break
                out[lo:hi] -= sign * out[lo - shift : hi - shift]
        return out
    shifts = gs * step
    for k in range(step, n + 1):
        usable = int(np.searchsorted(shifts, k, side="right"))
        out[k] -= np.dot(signs[:usable], out[k - shifts[:usable]])
    return out


def _counts_product(n_max: int) -> List[int]:
    # prod over squarefree n of 1/(1 - z^n) = prod_m P(z^(m^2))^mu(m), P = 1/prod(1 - z^k)
    series = np.zeros(n_max + 1, dtype=object)
    series[0] = 1
    root = math.isqrt(n_max)
    mu = mobius(max(root, 1))
    for m in range(1, root + 1):
        if mu[m] == 1:
            series = _over_euler(series, m * m)
        elif mu[m] == -1:
            series = _times_euler(series, m * m)
    return [int(v) for v in series.tolist()]


def partition_counts(kind: "PartitionKind | str", n_max: int, method: "CountMethod | str" = CountMethod.AUTO) -> PartitionSeries:
    """Exact counts p(0..n_max)."""
    kind = PartitionKind(kind)
    method = CountMethod(method)
    if n_max < 0:
        raise PartitionError(f"n_max must be nonnegative, got {n_max}")
    if method is CountMethod.AUTO:
        if n_max <= RECURRENCE_LIMIT:
            method = CountMethod.RECURRENCE
        else:
            method = CountMethod.PRODUCT if kind is PartitionKind.SQUAREFREE else CountMethod.PARTS
    if method is CountMethod.PRODUCT and kind is not PartitionKind.SQUAREFREE:
        raise PartitionError("The product method is implemented for squarefree parts only")

    logm.debug("Counting %s partitions up to %d with the %s method", kind.value, n_max, method.value)
    if n_max == 0:
        counts = [1]
    elif method is CountMethod.RECURRENCE:
        counts = _counts_recurrence(kind, n_max)
    elif method is CountMethod.PARTS:
        counts = _counts_parts(kind, n_max)
    else:
        counts = _counts_product(n_max)
    return PartitionSeries(kind, n_max, tuple(counts), method)


def generating_identity_holds(series: PartitionSeries) -> bool:
    """sum p(n) z^n * prod_{allowed k <= n_max} (1 - z^k) == 1 modulo z^(n_max + 1)."""
    product = np.array(series.counts, dtype=object)
    n = series.n_max
    if n == 0:
        return product[0] == 1
    for k in allowed_parts(series.kind, n).tolist():
        shifted = product.copy()
        shifted[k:] -= product[: n + 1 - k]
        product = shifted
    return product[0] == 1 and not any(product[1:].tolist())


def truncation_length(m: int, X_param: float, tol: float = DEFAULT_TOLERANCE) -> int:
    """Smallest K with X K^m (1 + log K) exp(-K/X) <= tol X^(m+1)."""
    if X_param <= 0:
        raise PartitionError(f"X_param must be positive, got {X_param}")
    if not 0 < tol < 1:
        raise PartitionError(f"Tolerance must lie in (0, 1), got {tol}")
    target = math.log(tol) + m * math.log(X_param)
    K = max(int(math.ceil((m + 1) * X_param)), 2)
    while m * math.log(K) + math.log1p(math.log(K)) - K / X_param > target:
        K = int(K * 1.1) + 1
    return K


def phi_derivative(
    m: int,
    X_param: float,
    tol: float = DEFAULT_TOLERANCE,
    kind: "PartitionKind | str" = PartitionKind.SQUAREFREE,
    c: ArithTable | None = None,
) -> float:
    """(rho d/drho)^m Phi(rho) = sum_k k^(m-1) c(k) rho^k at rho = exp(-1/X_param)."""
    if m not in (0, 1, 2):
        raise PartitionError(f"Derivative order must be 0, 1 or 2, got {m}")
    K = truncation_length(m, X_param, tol)
    if c is None or c.limit < K:
        c = c_weights(kind, K)
    k = np.arange(1, K + 1, dtype=np.float64)
    terms = c.data[1 : K + 1].astype(np.float64) * k ** (m - 1) * np.exp(-k / X_param)
    return compensated_sum(terms).real


@dataclass(frozen=True)
class SaddleState:
    x: float
    X_param: float
    rho: float
    phi: float
    phi1: float
    phi2: float
    k_max: int

    @property
    def residual(self) -> float:
        return abs(self.phi1 - self.x) / self.x

    @property
    def sqrt_gap(self) -> float:
        """X_param - sqrt(x), of order x^(1/4 + eps)."""
        return self.X_param - math.sqrt(self.x)


def solve_saddle(x: float, tol: float = DEFAULT_TOLERANCE, kind: "PartitionKind | str" = PartitionKind.SQUAREFREE, rtol: float = 1e-13) -> SaddleState:
    """X_param with rho Phi'(rho) = x by bisection, starting from [1, 4 sqrt(x)] and widening while needed."""
    if x < 1:
        raise PartitionError(f"Saddle point target must be at least 1, got {x}")
    kind = PartitionKind(kind)
    hi = 4 * math.sqrt(x)
    for _ in range(MAX_BRACKET_DOUBLINGS):
        c = c_weights(kind, truncation_length(2, hi, tol))
        if phi_derivative(1, hi, tol, kind, c) > x:
            break
        hi *= 2
    else:
        raise SaddleBracketError(f"No upper bracket for x={x}: rho Phi'(rho) stays below x up to X_param={hi}")

    def h(X: float) -> float:
        return x - phi_derivative(1, X, tol, kind, c)

    lo = 1.0
    while h(lo) <= 0:
        lo /= 2
        if lo < 1e-3:
            raise SaddleBracketError(f"No lower bracket for x={x}: rho Phi'(rho) exceeds x at X_param={lo}")
    try:
        X = bisect_decreasing(h, lo, hi, rtol)
    except BracketError as e:
        raise SaddleBracketError(f"Saddle point for x={x} not bracketed in [{lo}, {hi}]: {e}") from e

    state = SaddleState(
        x=x,
        X_param=X,
        rho=math.exp(-1 / X),
        phi=phi_derivative(0, X, tol, kind, c),
        phi1=phi_derivative(1, X, tol, kind, c),
        phi2=phi_derivative(2, X, tol, kind, c),
        k_max=truncation_length(2, X, tol),
    )
    logm.debug("Saddle point x=%.6g: X_param=%.12g (sqrt gap %.4g, residual %.2e)", x, X, state.sqrt_gap, state.residual)
    return state


def asymptotic_count(n: int, tol: float = DEFAULT_TOLERANCE, kind: "PartitionKind | str" = PartitionKind.SQUAREFREE) -> Tuple[float, SaddleState]:
    """log(rho^-n Psi(rho) / sqrt(2 pi Phi_2(rho))) at the saddle point rho(n)."""
    if n < 2:
        raise PartitionError(f"The asymptotic count needs n >= 2, got {n}")
    state = solve_saddle(n, tol, kind)
    return n / state.X_param + state.phi - 0.5 * math.log(2 * math.pi * state.phi2), state


def leading_law(n: int, series: PartitionSeries | None = None) -> float:
    """log p(n) / (2 sqrt(n)), tending to 1."""
    series = series if series is not None and series.n_max >= n else partition_counts(PartitionKind.SQUAREFREE, n)
    return series.log_count(n) / (2 * math.sqrt(n))


def _circle_coefficients(X_param: float, tol: float, kind: PartitionKind, j_max: int | None) -> np.ndarray:
    """Coefficients c(k)/k rho^k for k <= K, restricted to j <= j_max when given."""
    K = truncation_length(0, X_param, tol)
    if j_max is None:
        c = c_weights(kind, K).data.astype(np.float64)
    else:
        w = sieve(kind.weight_kind, K).data.astype(np.float64)
        n = np.arange(K + 1, dtype=np.float64)
        c = np.zeros(K + 1, dtype=np.float64)
        for j in range(1, j_max + 1):
            top = K // j
            c[j : top * j + 1 : j] += n[1 : top + 1] * w[1 : top + 1]
    k = np.arange(1, K + 1, dtype=np.float64)
    return c[1:] / k * np.exp(-k / X_param)


def _phi_at(coeffs: np.ndarray, alpha: float) -> complex:
    k = np.arange(1, len(coeffs) + 1, dtype=np.int64)
    return compensated_sum(coeffs * cis(reduced_phase([(alpha, 1)], k)))


def phi_on_circle(
    alpha: float,
    X_param: float,
    tol: float = DEFAULT_TOLERANCE,
    kind: "PartitionKind | str" = PartitionKind.SQUAREFREE,
    j_max: int | None = None,
) -> complex:
    """Phi(rho e(alpha)) = sum_{j, n} w(n)/j rho^(jn) e(jn alpha), optionally with j <= j_max."""
    if X_param <= 0:
        raise PartitionError(f"X_param must be positive, got {X_param}")
    return _phi_at(_circle_coefficients(X_param, tol, PartitionKind(kind), j_max), alpha)


def phi_on_grid(
    alphas: Sequence[float],
    X_param: float,
    tol: float = DEFAULT_TOLERANCE,
    kind: "PartitionKind | str" = PartitionKind.SQUAREFREE,
    j_max: int | None = None,
    workers: int | None = None,
) -> np.ndarray:
    coeffs = _circle_coefficients(X_param, tol, PartitionKind(kind), j_max)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return np.array(list(executor.map(lambda a: _phi_at(coeffs, a), alphas)), dtype=np.complex128)


@dataclass(frozen=True)
class ArcReport:
    X_param: float
    A: float
    grid: int
    phi_rho: float
    principal_max: float | None
    major_max: float
    minor_max: float | None
    major_q_ratio_max: float
    minor_threshold: float
    j_cut: int
    j_truncation_error: float
    overlap_count: int
    alphas: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    abs_phi: np.ndarray = field(repr=False)

    @property
    def three_quarters(self) -> float:
        return 0.75 * self.phi_rho

    @property
    def j_truncation_bound(self) -> float:
        return self.X_param / self.j_cut

    def summary(self) -> dict:
        return {
            "X_param": self.X_param,
            "A": self.A,
            "grid": self.grid,
            "phi_rho": self.phi_rho,
            "principal_max": self.principal_max,
            "major_max": self.major_max,
            "minor_max": self.minor_max,
            "major_q_ratio_max": self.major_q_ratio_max,
            "three_quarters": self.three_quarters,
            "minor_threshold": self.minor_threshold,
            "j_cut": self.j_cut,
            "j_truncation_error": self.j_truncation_error,
            "j_truncation_bound": self.j_truncation_bound,
            "overlap_count": self.overlap_count,
        }


def arc_diagnostics(
    X_param: float,
    A: float,
    grid: int,
    tol: float = DEFAULT_TOLERANCE,
    kind: "PartitionKind | str" = PartitionKind.SQUAREFREE,
    workers: int | None = None,
) -> ArcReport:
    """|Phi(rho e(alpha))| on the grid alpha_i = -1/2 + i/grid, split by arc; empty arcs report None."""
    if grid < 10:
        raise PartitionError(f"Arc diagnostics need a grid of at least 10 points, got {grid}")
    dissection = ArcDissection(X_param, A)
    alphas = -0.5 + np.arange(grid, dtype=np.float64) / grid
    classes = classify_grid(alphas, dissection)

    values = phi_on_grid(alphas.tolist(), X_param, tol, kind, workers=workers)
    abs_phi = np.abs(values)
    j_cut = max(1, math.ceil(math.log(X_param) ** 2))
    truncated = phi_on_grid(alphas.tolist(), X_param, tol, kind, j_max=j_cut, workers=workers)
    phi_rho = phi_derivative(0, X_param, tol, kind)

    principal = classes.principal
    major = classes.major
    minor = classes.minor
    if not principal.any():
        logm.warning("No grid point of %d falls in the principal arc at X=%.6g, A=%g", grid, X_param, A)
    report = ArcReport(
        X_param=X_param,
        A=A,
        grid=grid,
        phi_rho=phi_rho,
        principal_max=float(abs_phi[principal].max()) if principal.any() else None,
        major_max=float(abs_phi[major].max()) if major.any() else 0.0,
        minor_max=float(abs_phi[minor].max()) if minor.any() else None,
        major_q_ratio_max=float((abs_phi[major] * classes.q[major] / X_param).max()) if major.any() else 0.0,
        minor_threshold=X_param * math.log(X_param) ** (10 - A / 4),
        j_cut=j_cut,
        j_truncation_error=float(np.abs(values - truncated).max()),
        overlap_count=classes.overlap_count,
        alphas=alphas,
        q=classes.q,
        abs_phi=abs_phi,
    )
    logm.info(
        "Arcs at X=%.6g, A=%g: Phi(rho)=%.6g principal %s major %.6g minor %s",
        X_param,
        A,
        phi_rho,
        "n/a" if report.principal_max is None else f"{report.principal_max:.6g}",
        report.major_max,
        "n/a" if report.minor_max is None else f"{report.minor_max:.6g}",
    )
    if report.minor_max is not None and report.major_max and report.minor_max > report.major_max:
        logm.info("Minor-arc maximum exceeds the non-principal major-arc maximum at this scale")
    return report


@dataclass(frozen=True)
class ProgressionSum:
    value: complex
    main_term: complex

    @property
    def ratio(self) -> complex:
        return self.value / self.main_term


def progression_exponential_sum(gamma: complex, l: int, q: int, tol: float = DEFAULT_TOLERANCE) -> ProgressionSum:
    """U = sum_{n = l mod q} |mu(n)| exp(-n gamma) against 1 / (zeta(2) phi(q) prod_{p | q}(1 + 1/p) gamma)."""
    if gamma.real <= 0:
        raise PartitionError(f"Re(gamma) must be positive, got {gamma}")
    if q < 1 or math.gcd(l, q) != 1:
        raise PartitionError(f"Need q >= 1 and gcd(l, q) = 1, got l={l}, q={q}")
    N = int(math.ceil(math.log(1 / tol) / gamma.real)) + q
    mu_abs = sieve(Kind.MU_ABS, N)
    start = l % q or q
    n = np.arange(start, N + 1, q, dtype=np.int64)
    terms = mu_abs.data[n].astype(np.float64) * np.exp(-n * complex(gamma))
    return ProgressionSum(compensated_sum(terms), 1 / (squarefree_density_factor(q) * gamma))
