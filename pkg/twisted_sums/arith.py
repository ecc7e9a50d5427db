# Copyright (C) 2024 twyleg
"""
Sieved arithmetic functions on a contiguous range [1, X] and their Dirichlet convolutions.

Every table stores its values in a numpy array padded with a leading zero so that
``table[n]`` is the value at ``n``. Counting and {-1, 0, 1}-valued functions are kept
as exact int64, only the inherently transcendental kinds (lambda, log) are float64.
"""
import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List

import numpy as np

from twisted_sums import TwistedSumsError


logm = logging.getLogger(__name__)

SEGMENTED_THRESHOLD = 10**7
SEGMENT_SIZE = 1 << 20
ZETA_2 = math.pi**2 / 6


class ArithError(TwistedSumsError):
    pass


class UnsupportedKindError(ArithError):
    pass


class TableLimitError(ArithError):
    pass


class PreconditionError(ArithError):
    pass


class Kind(str, Enum):
    MU = "mu"
    MU_ABS = "mu_abs"
    LAMBDA = "lambda"
    ONE_P = "one_p"
    ONE = "one"
    LOG = "log"
    TAU_K = "tau_k"
    MU_PRIME = "mu_prime"
    OMEGA = "omega"
    SQUARES_OF_SQUAREFREE = "squares_of_squarefree"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, kind: "str | Kind") -> "Kind":
        try:
            return cls(kind)
        except ValueError:
            raise UnsupportedKindError(f"Unsupported arithmetic function kind: {kind!r}") from None


@dataclass(frozen=True)
class ArithTable:
    """
    Values of one arithmetic function on [1, limit].

    Attributes:
        kind: Function identifier
        limit: Largest argument X
        data: Array of length limit + 1, data[0] is padding and always 0
        label: Free-form description, used for derived (convolved) tables
    """

    kind: Kind
    limit: int
    data: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise TableLimitError(f"Table limit must be at least 1, got {self.limit}")
        if self.data.shape != (self.limit + 1,):
            raise ArithError(f"Table data has shape {self.data.shape}, expected ({self.limit + 1},)")
        self.data.setflags(write=False)

    @classmethod
    def from_values(cls, values: "np.ndarray | List[int] | List[float]", label: str = "custom") -> "ArithTable":
        """Build a custom table from values indexed 1..X."""
        arr = np.asarray(values)
        if arr.ndim != 1 or arr.size == 0:
            raise TableLimitError("Custom tables need a non-empty one-dimensional value sequence")
        dtype = np.int64 if arr.dtype.kind in "iub" else np.float64
        data = np.zeros(arr.size + 1, dtype=dtype)
        data[1:] = arr
        return cls(Kind.CUSTOM, int(arr.size), data, label)

    @property
    def values(self) -> np.ndarray:
        return self.data[1:]

    @property
    def is_exact(self) -> bool:
        return self.data.dtype.kind in "iu"

    @property
    def name(self) -> str:
        return self.label or self.kind.value

    def __getitem__(self, n):
        return self.data[n]

    def __len__(self) -> int:
        return self.limit

    def restricted(self, upper: int) -> "ArithTable":
        """Copy with every value above ``upper`` set to zero (f_{<=V} in the identities)."""
        data = self.data.copy()
        data[upper + 1 :] = 0
        return ArithTable(Kind.CUSTOM, self.limit, data, f"{self.name}_le_{upper}")

    def truncated(self, limit: int) -> "ArithTable":
        if not 1 <= limit <= self.limit:
            raise TableLimitError(f"Cannot truncate table of limit {self.limit} to {limit}")
        return ArithTable(self.kind, limit, self.data[: limit + 1].copy(), self.label)

    def absolute_sum(self, X: int | None = None) -> float:
        upper = self.limit if X is None else X
        return float(np.abs(self.data[1 : upper + 1]).sum())


def small_primes(n: int) -> np.ndarray:
    """Eratosthenes up to n (inclusive)."""
    if n < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _prime_segment(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    flags = np.ones(hi - lo, dtype=bool)
    for p in primes.tolist():
        if p * p >= hi:
            break
        start = max(p * p, (lo + p - 1) // p * p)
        flags[start - lo :: p] = False
    for n in (0, 1):
        if lo <= n < hi:
            flags[n - lo] = False
    return flags


def _mobius_segment(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    mu = np.ones(hi - lo, dtype=np.int64)
    rem = np.arange(lo, hi, dtype=np.int64)
    for p in primes.tolist():
        if p * p >= hi:
            break
        start = (-lo) % p
        mu[start::p] *= -1
        rem[start::p] //= p
        pp = p * p
        mu[(-lo) % pp :: pp] = 0
    # at most one prime factor above sqrt(hi) survives in rem
    mu[rem > 1] *= -1
    if lo == 0:
        mu[0] = 0
    return mu


def _segmented(limit: int, segment: Callable[[int, int, np.ndarray], np.ndarray], dtype, workers: int | None) -> np.ndarray:
    primes = small_primes(math.isqrt(limit) + 1)
    if limit <= SEGMENTED_THRESHOLD:
        return segment(0, limit + 1, primes)

    out = np.empty(limit + 1, dtype=dtype)
    bounds = [(lo, min(lo + SEGMENT_SIZE, limit + 1)) for lo in range(0, limit + 1, SEGMENT_SIZE)]
    logm.debug("Segmented sieve up to %d: %d segments of %d", limit, len(bounds), SEGMENT_SIZE)

    def fill(bound: tuple[int, int]) -> None:
        lo, hi = bound
        out[lo:hi] = segment(lo, hi, primes)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        list(executor.map(fill, bounds))
    return out


def prime_flags(limit: int, workers: int | None = None) -> np.ndarray:
    return _segmented(limit, _prime_segment, bool, workers)


def mobius(limit: int, workers: int | None = None) -> np.ndarray:
    return _segmented(limit, _mobius_segment, np.int64, workers)


def _von_mangoldt(limit: int, workers: int | None) -> np.ndarray:
    lam = np.zeros(limit + 1, dtype=np.float64)
    primes = np.flatnonzero(prime_flags(limit, workers))
    lam[primes] = np.log(primes.astype(np.float64))
    for p in primes[primes <= math.isqrt(limit)].tolist():
        log_p = math.log(p)
        pk = p * p
        while pk <= limit:
            lam[pk] = log_p
            pk *= p
    return lam


def _squares_of_squarefree(limit: int) -> np.ndarray:
    data = np.zeros(limit + 1, dtype=np.int64)
    root = math.isqrt(limit)
    squarefree = np.flatnonzero(mobius(root)) if root >= 1 else np.array([], dtype=np.int64)
    data[squarefree * squarefree] = 1
    return data


def sieve(kind: "str | Kind", X: int, k: int | None = None, workers: int | None = None) -> ArithTable:
    """
    Sieve one arithmetic function on [1, X].

    ``k`` is the number of factors for ``tau_k``. Results are cached, tables are immutable.
    """
    kind = Kind.parse(kind)
    if X < 1:
        raise TableLimitError(f"Sieve limit must be at least 1, got {X}")
    if kind is Kind.TAU_K and (k is None or k < 1):
        raise PreconditionError("tau_k needs a number of factors k >= 1")
    if kind is Kind.CUSTOM:
        raise UnsupportedKindError("Custom tables are built with ArithTable.from_values()")
    return _sieve_cached(kind, int(X), k if kind is Kind.TAU_K else None, workers)


@functools.lru_cache(maxsize=32)
def _sieve_cached(kind: Kind, X: int, k: int | None, workers: int | None) -> ArithTable:
    logm.debug("Sieving %s up to %d", kind.value, X)

    if kind is Kind.MU:
        return ArithTable(kind, X, mobius(X, workers))
    if kind is Kind.MU_ABS:
        return ArithTable(kind, X, np.abs(mobius(X, workers)))
    if kind is Kind.ONE_P:
        return ArithTable(kind, X, prime_flags(X, workers).astype(np.int64))
    if kind is Kind.ONE:
        data = np.ones(X + 1, dtype=np.int64)
        data[0] = 0
        return ArithTable(kind, X, data)
    if kind is Kind.LAMBDA:
        return ArithTable(kind, X, _von_mangoldt(X, workers))
    if kind is Kind.LOG:
        data = np.zeros(X + 1, dtype=np.float64)
        data[1:] = np.log(np.arange(1, X + 1, dtype=np.float64))
        return ArithTable(kind, X, data)
    if kind is Kind.SQUARES_OF_SQUAREFREE:
        return ArithTable(kind, X, _squares_of_squarefree(X))
    if kind is Kind.TAU_K:
        assert k is not None
        table = r_fold(sieve(Kind.ONE, X), k)
        return ArithTable(kind, X, table.data.copy(), f"tau_{k}")
    if kind is Kind.MU_PRIME:
        table = dirichlet_convolve(sieve(Kind.MU, X, workers=workers), sieve(Kind.ONE_P, X, workers=workers))
        return ArithTable(kind, X, table.data.copy())
    if kind is Kind.OMEGA:
        table = dirichlet_convolve(sieve(Kind.ONE, X), sieve(Kind.ONE_P, X, workers=workers))
        return ArithTable(kind, X, table.data.copy())
    raise UnsupportedKindError(f"Unsupported arithmetic function kind: {kind.value!r}")


def dirichlet_convolve(f: ArithTable, g: ArithTable, label: str | None = None) -> ArithTable:
    """
    (f * g)(n) = sum_{d | n} f(d) g(n / d) by iterating over multiples of every d with f(d) != 0.
    """
    if f.limit != g.limit:
        raise TableLimitError(f"Cannot convolve tables of limits {f.limit} and {g.limit}")
    X = f.limit
    dtype = np.int64 if (f.is_exact and g.is_exact) else np.float64
    a = f.data.astype(dtype, copy=False)
    b = g.data.astype(dtype, copy=False)
    # iterate over the sparser factor, convolution is commutative
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a

    out = np.zeros(X + 1, dtype=dtype)
    for d in (np.flatnonzero(a[1:]) + 1).tolist():
        out[d::d] += a[d] * b[1 : X // d + 1]
    return ArithTable(Kind.CUSTOM, X, out, label or f"{f.name}*{g.name}")


def r_fold(f: ArithTable, r: int) -> ArithTable:
    if r < 1:
        raise PreconditionError(f"r-fold convolution needs r >= 1, got {r}")
    result = ArithTable(f.kind, f.limit, f.data.copy(), f.label)
    for _ in range(r - 1):
        result = dirichlet_convolve(result, f)
    if r > 1:
        result = ArithTable(Kind.CUSTOM, f.limit, result.data.copy(), f"{f.name}^*{r}")
    return result


def weights_table(spec: str, X: int, workers: int | None = None) -> ArithTable:
    """
    Resolve a weight specification ``kind`` or ``kind:r`` (r-fold convolution of kind) on [1, X].
    """
    kind, _, fold = spec.partition(":")
    if not fold:
        return sieve(kind, X, workers=workers)
    try:
        r = int(fold)
    except ValueError:
        raise UnsupportedKindError(f"Invalid convolution power in weight specification {spec!r}") from None
    return r_fold(sieve(kind, X, workers=workers), r)


def partial_sums(table: ArithTable) -> np.ndarray:
    return np.cumsum(table.values)


def prime_divisors(q: int) -> List[int]:
    divisors = []
    p = 2
    while p * p <= q:
        if q % p == 0:
            divisors.append(p)
            while q % p == 0:
                q //= p
        p += 1
    if q > 1:
        divisors.append(q)
    return divisors


def euler_phi(q: int) -> int:
    result = q
    for p in prime_divisors(q):
        result -= result // p
    return result


def squarefree_density_factor(q: int) -> float:
    """zeta(2) * phi(q) * prod_{p | q} (1 + 1/p): the denominator of the progression main terms."""
    return ZETA_2 * euler_phi(q) * math.prod(1 + 1 / p for p in prime_divisors(q))


def mu_squared_identity_check(X: int) -> bool:
    """|mu(n)| == sum_{b^2 | n} mu(b) for every n <= X."""
    mu = sieve(Kind.MU, X)
    rhs = np.zeros(X + 1, dtype=np.int64)
    for b in range(1, math.isqrt(X) + 1):
        if mu[b]:
            rhs[b * b :: b * b] += mu[b]
    return bool(np.array_equal(np.abs(mu.values), rhs[1:]))


def heath_brown_identity_check(k: int, x: int, V: int) -> bool:
    """
    1_P = sum_{j=1}^{k} (-1)^{j-1} C(k, j) mu_{<=V}^{*j} * 1^{*(j-1)} * omega on n <= x.

    Requires V >= x^(1/k); the identity is not evaluated otherwise.
    """
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}")
    if V < 1 or V**k < x:
        raise PreconditionError(f"V={V} is below x^(1/k) for x={x}, k={k}")

    mu_v = sieve(Kind.MU, x).restricted(V)
    one = sieve(Kind.ONE, x)
    omega = sieve(Kind.OMEGA, x)

    total = np.zeros(x + 1, dtype=np.int64)
    mu_power = mu_v
    one_power: ArithTable | None = None
    for j in range(1, k + 1):
        if j > 1:
            mu_power = dirichlet_convolve(mu_power, mu_v)
            one_power = one if one_power is None else dirichlet_convolve(one_power, one)
        inner = mu_power if one_power is None else dirichlet_convolve(mu_power, one_power)
        term = dirichlet_convolve(inner, omega)
        total += (-1) ** (j - 1) * math.comb(k, j) * term.data
        logm.debug("Heath-Brown analogue: term j=%d of %d accumulated", j, k)

    return bool(np.array_equal(total[1:], sieve(Kind.ONE_P, x).values))


def squares_of_squarefree_factorization_check(X: int) -> bool:
    """[n = m^2, m squarefree] == (g * h)(n), g the square indicator, h(l) = mu(l^(1/4)) on fourth powers."""
    g = np.zeros(X, dtype=np.int64)
    roots = np.arange(1, math.isqrt(X) + 1)
    g[roots * roots - 1] = 1

    h = np.zeros(X, dtype=np.int64)
    fourth_root = math.isqrt(math.isqrt(X))
    mu = sieve(Kind.MU, max(fourth_root, 1))
    for t in range(1, fourth_root + 1):
        h[t**4 - 1] = mu[t]

    rhs = dirichlet_convolve(ArithTable.from_values(g, "squares"), ArithTable.from_values(h, "mu_fourth_root"))
    return bool(np.array_equal(sieve(Kind.SQUARES_OF_SQUAREFREE, X).values, rhs.values))


@dataclass(frozen=True)
class ProgressionCount:
    count: int
    main_term: float

    @property
    def ratio(self) -> float:
        return self.count / self.main_term


def count_in_ap(kind: "str | Kind", X: int, q: int, l: int) -> ProgressionCount:
    """sum_{n <= X, n = l mod q} |mu(n)| against X / (zeta(2) phi(q) prod_{p | q}(1 + 1/p))."""
    if Kind.parse(kind) is not Kind.MU_ABS:
        raise UnsupportedKindError(f"Progression counts are implemented for mu_abs only, got {kind!r}")
    if q < 1:
        raise PreconditionError(f"Modulus must be positive, got {q}")
    if math.gcd(l, q) != 1:
        raise PreconditionError(f"Residue {l} is not coprime to modulus {q}")

    table = sieve(Kind.MU_ABS, X)
    start = l % q or q
    count = int(table.data[start::q].sum())
    return ProgressionCount(count, X / squarefree_density_factor(q))


def divisor_moment_ratio(r: int, X: int) -> float:
    """sum_{n <= X} tau_r(n)^2 / (X (log X)^(r^2 - 1))."""
    tau = sieve(Kind.TAU_K, X, k=r)
    moment = float(np.square(tau.values.astype(np.float64)).sum())
    return moment / (X * math.log(X) ** (r * r - 1))
