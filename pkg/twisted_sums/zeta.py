# Copyright (C) 2024 twyleg
"""
Special functions, the zeros table and the explicit formula for the generating function
Phi(rho e(theta)) = sum_{j, n} |mu(n)| / j exp(-j n (1/X - 2 pi i theta)).

All special functions go through mpmath at a configurable working precision. mpmath keeps
its precision in a process-wide context, so every zero- and residue-dependent constant is
computed once, serially, and the per-X work is done in numpy afterwards.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple

import mpmath
import numpy as np

from twisted_sums import TwistedSumsError
from twisted_sums.arith import ArithTable, Kind, sieve
from twisted_sums.summation import compensated_sum


logm = logging.getLogger(__name__)

FILE_DIR = Path(__file__).parent
DEFAULT_ZEROS_FILE = FILE_DIR / "resources/zeros.txt"
DEFAULT_DPS = 30
RESIDUE_RADIUS = 0.25
# exp(-x) is exactly 0.0 in double precision beyond this
EXP_UNDERFLOW = 746.0


class ZetaError(TwistedSumsError):
    pass


class ZetaPoleError(ZetaError):
    pass


class ZeroTableError(ZetaError):
    pass


def _check_not_pole(s: complex) -> None:
    if s == 1:
        raise ZetaPoleError("zeta has a pole at s = 1")


def zeta_complex(s: complex, dps: int = DEFAULT_DPS) -> complex:
    _check_not_pole(s)
    with mpmath.workdps(dps):
        return complex(mpmath.zeta(s))


def zeta_derivative(s: complex, order: int = 1, dps: int = DEFAULT_DPS) -> complex:
    if order not in (1, 2):
        raise ZetaError(f"Only first and second derivatives are supported, got order={order}")
    _check_not_pole(s)
    with mpmath.workdps(dps):
        return complex(mpmath.zeta(s, 1, order))


def zeta_derivative_numeric(s: complex, order: int = 1, dps: int = DEFAULT_DPS) -> complex:
    """Independent check of zeta_derivative by extrapolated finite differences."""
    _check_not_pole(s)
    with mpmath.workdps(dps):
        return complex(mpmath.diff(mpmath.zeta, mpmath.mpmathify(s), order))


def gamma_complex(s: complex, dps: int = DEFAULT_DPS) -> complex:
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real):
        raise ZetaPoleError(f"Gamma has a pole at s = {s.real:g}")
    with mpmath.workdps(dps):
        return complex(mpmath.gamma(s))


def digamma(x: float, dps: int = DEFAULT_DPS) -> float:
    if x <= 0 and x == math.floor(x):
        raise ZetaPoleError(f"digamma has a pole at x = {x:g}")
    with mpmath.workdps(dps):
        return float(mpmath.digamma(x))


def functional_equation_residual(s: complex, dps: int = DEFAULT_DPS) -> float:
    """|chi(s) zeta(1 - s) - zeta(s)| / |zeta(s)| with chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s)."""
    with mpmath.workdps(dps):
        s_mp = mpmath.mpmathify(s)
        chi = mpmath.power(2, s_mp) * mpmath.power(mpmath.pi, s_mp - 1) * mpmath.sin(mpmath.pi * s_mp / 2) * mpmath.gamma(1 - s_mp)
        lhs = chi * mpmath.zeta(1 - s_mp)
        rhs = mpmath.zeta(s_mp)
        return float(abs(lhs - rhs) / abs(rhs))


@dataclass(frozen=True)
class ZeroTable:
    """Ordinates t_k of the nontrivial zeros 1/2 + i t_k, strictly increasing."""

    ordinates: np.ndarray = field(repr=False)
    source: str = ""

    def __post_init__(self) -> None:
        if self.ordinates.size == 0:
            raise ZeroTableError(f"Zero table from {self.source or 'memory'} is empty")
        if self.ordinates[0] <= 0 or np.any(np.diff(self.ordinates) <= 0):
            raise ZeroTableError(f"Zero ordinates from {self.source or 'memory'} are not strictly increasing and positive")
        self.ordinates.setflags(write=False)

    def __len__(self) -> int:
        return int(self.ordinates.size)

    @property
    def max_ordinate(self) -> float:
        return float(self.ordinates[-1])

    def count_below(self, T: float) -> int:
        """Number of zeros with ordinate below T (the |Im| < T cutoff)."""
        return int(np.searchsorted(self.ordinates, T))

    def zeros(self, count: int) -> np.ndarray:
        if count > len(self):
            raise ZeroTableError(f"Requested {count} zeros but the table from {self.source} holds {len(self)}")
        return 0.5 + 1j * self.ordinates[:count]


def load_zeros(path: Path | str) -> ZeroTable:
    path = Path(path)
    ordinates: List[float] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ZeroTableError(f"Unable to read zeros file {path}: {e}") from e

    for number, line in enumerate(lines, start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        try:
            ordinates.append(float(content))
        except ValueError:
            raise ZeroTableError(f"{path}:{number}: cannot parse ordinate {content!r}") from None

    table = ZeroTable(np.array(ordinates, dtype=np.float64), str(path))
    logm.debug("Loaded %d zeros from %s (max ordinate %.6f)", len(table), path, table.max_ordinate)
    return table


def default_zeros() -> ZeroTable:
    return load_zeros(DEFAULT_ZEROS_FILE)


def generate_zeros(count: int, dps: int = DEFAULT_DPS) -> ZeroTable:
    """First ``count`` ordinates located by mpmath."""
    if count < 1:
        raise ZeroTableError(f"Zero count must be positive, got {count}")
    with mpmath.workdps(dps):
        ordinates = [float(mpmath.zetazero(k).imag) for k in range(1, count + 1)]
    return ZeroTable(np.array(ordinates), f"mpmath.zetazero(1..{count})")


def write_zeros(table: ZeroTable, path: Path | str) -> None:
    lines = [f"# {len(table)} ordinates of nontrivial zeta zeros, source: {table.source}"]
    lines += [f"{t:.15f}" for t in table.ordinates.tolist()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def trivial_coeffs(n: int, dps: int = DEFAULT_DPS) -> Tuple[float, float]:
    """(c1(n), c2(n)) with residue (c1 log y + c2) y^(-n) at s = -n; the product zeta(1-n) zeta(-n) stays finite at trivial zeros."""
    if n < 1:
        raise ZetaError(f"Trivial residues are indexed from n = 1, got {n}")
    with mpmath.workdps(dps):
        z1, z0 = mpmath.zeta(1 - n), mpmath.zeta(-n)
        d1, d0 = mpmath.zeta(1 - n, 1, 1), mpmath.zeta(-n, 1, 1)
        zp = mpmath.zeta(-2 * n, 1, 1)
        zpp = mpmath.zeta(-2 * n, 1, 2)
        pref = (-1) ** n / (2 * mpmath.factorial(n) * zp)
        product = z1 * z0
        product_derivative = d1 * z0 + z1 * d0
        c1 = pref * product
        c2 = pref * (product * (mpmath.digamma(n + 1) - zpp / zp) + product_derivative)
        return float(c1), float(c2)


def trivial_residue(n: int, m: int, y: complex, dps: int = DEFAULT_DPS) -> complex:
    """
    Residue at s = -n of Gamma(s + m) zeta(s + 1) zeta(s) / zeta(2s) y^(s + m), by quadrature on a small circle.
    """
    if n < 1 or m < 0:
        raise ZetaError(f"Need n >= 1 and m >= 0, got n={n}, m={m}")
    with mpmath.workdps(dps):
        y_mp = mpmath.mpmathify(y)
        center = mpmath.mpf(-n)

        def integrand(phi):
            w = mpmath.expj(phi) * RESIDUE_RADIUS
            s = center + w
            value = mpmath.gamma(s + m) * mpmath.zeta(s + 1) * mpmath.zeta(s) / mpmath.zeta(2 * s) * mpmath.power(y_mp, s + m)
            return value * w

        return complex(mpmath.quad(integrand, [0, mpmath.pi / 2, mpmath.pi, 3 * mpmath.pi / 2, 2 * mpmath.pi]) / (2 * mpmath.pi))


def trivial_coeffs_m(n: int, m: int, dps: int = DEFAULT_DPS) -> Tuple[float, float]:
    """
    (a, b) with residue (a log y + b) y^(m - n) at s = -n of the m-th derivative integrand.
    """
    if m == 0:
        return trivial_coeffs(n, dps)
    at_one = trivial_residue(n, m, 1.0, dps)
    at_e = trivial_residue(n, m, math.e, dps) / math.e ** (m - n)
    return (at_e - at_one).real, at_one.real


def theta_of_X(X: float | np.ndarray) -> float | np.ndarray:
    """The angle theta(X) = (1/2pi) sqrt(X^(-4/3) - X^(-2)) placing X Delta^3 = 1."""
    return np.sqrt(np.maximum(np.power(X, -4.0 / 3.0) - np.power(X, -2.0), 0.0)) / (2 * np.pi)


def delta_of(X: float | np.ndarray, theta: float | np.ndarray) -> float | np.ndarray:
    return 1.0 / np.sqrt(1.0 + 4 * np.pi**2 * np.square(X) * np.square(theta))


def y_of(X: float | np.ndarray, theta: float | np.ndarray) -> complex | np.ndarray:
    return X / (1 - 2j * np.pi * X * theta)


@dataclass(frozen=True)
class ExplicitEval:
    X: float
    theta: float
    J: int
    N_arith: int
    T_count: int
    N_trivial: int
    phi1: complex
    phi2: complex
    phi20: complex
    zero_part: complex
    delta: float

    @property
    def constraint_ok(self) -> bool:
        """X Delta^3 >= 1, the regime of the explicit formula."""
        return self.X * self.delta**3 >= 1 - 1e-9

    @property
    def residual(self) -> float:
        return abs(self.phi1 - self.phi2) / abs(self.phi20)


class ExplicitFormula:
    """(rho d/drho)^m Phi at rho e(theta) summed over residues, zero-dependent constants precomputed."""

    def __init__(self, zeros: ZeroTable, T_count: int = 25, N_trivial: int = 1, m: int = 0, dps: int = DEFAULT_DPS) -> None:
        if m not in (0, 1, 2):
            raise ZetaError(f"Derivative order must be 0, 1 or 2, got {m}")
        if T_count < 0 or N_trivial < 0:
            raise ZetaError(f"Truncations must be nonnegative, got T_count={T_count}, N_trivial={N_trivial}")
        self.m = m
        self.T_count = T_count
        self.N_trivial = N_trivial
        self.varpi = zeros.zeros(T_count)
        self.zero_coeffs = self.__zero_coefficients(self.varpi, m, dps)
        self.trivial = np.array([trivial_coeffs_m(n, m, dps) for n in range(1, N_trivial + 1)]).reshape(-1, 2)
        logm.debug("Explicit formula m=%d prepared with %d zeros and %d trivial residues", m, T_count, N_trivial)

    @staticmethod
    def __zero_coefficients(varpi: np.ndarray, m: int, dps: int) -> np.ndarray:
        coeffs = []
        with mpmath.workdps(dps):
            for w in varpi.tolist():
                half = mpmath.mpc(w) / 2
                value = mpmath.gamma(m + half) * mpmath.zeta(1 + half) * mpmath.zeta(half) / (2 * mpmath.zeta(mpmath.mpc(w), 1, 1))
                coeffs.append(complex(value))
        return np.array(coeffs, dtype=np.complex128)

    def main_term(self, y: np.ndarray) -> np.ndarray:
        m = self.m
        main = math.gamma(1 + m) * y ** (1 + m)
        if m == 0:
            return main + np.log(y / (2 * np.pi))
        return main + math.gamma(m) * y**m

    def zero_term(self, y: np.ndarray) -> np.ndarray:
        if self.T_count == 0:
            return np.zeros_like(y)
        log_y = np.log(y)[..., None]
        exponent = self.m + self.varpi / 2
        pairs = self.zero_coeffs * np.exp(exponent * log_y) + np.conj(self.zero_coeffs) * np.exp(np.conj(exponent) * log_y)
        return pairs.sum(axis=-1)

    def trivial_term(self, y: np.ndarray) -> np.ndarray:
        total = np.zeros_like(y)
        log_y = np.log(y)
        for n, (a, b) in enumerate(self.trivial.tolist(), start=1):
            total = total + (a * log_y + b) * y ** (self.m - n)
        return total

    def __call__(self, X: float | np.ndarray, theta: float | np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(full value, leading part, zero contribution)."""
        y = np.asarray(y_of(np.asarray(X, dtype=np.float64), np.asarray(theta, dtype=np.float64)), dtype=np.complex128)
        leading = self.main_term(y)
        zeros = self.zero_term(y)
        return leading + zeros + self.trivial_term(y), leading, zeros


def phi20(X: float, theta: float) -> complex:
    y = complex(y_of(X, theta))
    return y + complex(np.log(y / (2 * np.pi)))


def phi2_explicit(X: float, theta: float, T_count: int, N_trivial: int, zeros: ZeroTable, dps: int = DEFAULT_DPS) -> complex:
    if X < 1:
        raise ZetaError(f"The explicit formula needs X >= 1, got {X}")
    value, _, _ = ExplicitFormula(zeros, T_count, N_trivial, 0, dps)(X, theta)
    return complex(value)


def phi_m_explicit(X: float, theta: float, m: int, T_count: int, N_trivial: int, zeros: ZeroTable, dps: int = DEFAULT_DPS) -> complex:
    if X < 1:
        raise ZetaError(f"The explicit formula needs X >= 1, got {X}")
    value, _, _ = ExplicitFormula(zeros, T_count, N_trivial, m, dps)(X, theta)
    return complex(value)


def _coefficients_from(J: int, N: int, K: int, mu_abs: ArithTable) -> np.ndarray:
    """a_k = sum_{jn = k, j <= J, n <= N} w(n) / j for k <= K."""
    a = np.zeros(K + 1, dtype=np.float64)
    w = mu_abs.data.astype(np.float64)
    for j in range(1, min(J, K) + 1):
        top = min(N, K // j)
        a[j : top * j + 1 : j] += w[1 : top + 1] / j
    a.flags.writeable = False
    return a


@lru_cache(maxsize=8)
def _arith_coefficients(J: int, N: int, K: int) -> np.ndarray:
    return _coefficients_from(J, N, K, sieve(Kind.MU_ABS, min(N, K)))


def _coefficient_length(J: int, N: int, X: float) -> int:
    """Terms with j n beyond EXP_UNDERFLOW X vanish; rounded up to a power of two to share cache entries."""
    needed = int(EXP_UNDERFLOW * X) + 1
    return min(J * N, 1 << (needed - 1).bit_length())


def phi1_arithmetic(X: float, theta: float, J: int, N: int, mu_abs: ArithTable | None = None) -> complex:
    """
    sum_{j <= J} sum_{n <= N} |mu(n)| / j exp(-j n (1/X - 2 pi i theta)). Coefficients are cached
    for the sieved |mu| only, a caller-supplied table is used as given.
    """
    if J < 1 or N < 1:
        raise ZetaError(f"Truncations must be positive, got J={J}, N={N}")
    K = _coefficient_length(J, N, X)
    if mu_abs is None:
        a = _arith_coefficients(J, N, K)
    elif N > mu_abs.limit:
        raise ZetaError(f"N={N} exceeds the |mu| table limit {mu_abs.limit}")
    else:
        a = _coefficients_from(J, N, K, mu_abs)
    k_max = min(K, int(EXP_UNDERFLOW * X) + 1)
    k = np.arange(1, k_max + 1, dtype=np.float64)
    terms = a[1 : k_max + 1] * np.exp(-k * (1.0 / X - 2j * np.pi * theta))
    return compensated_sum(terms)


def explicit_eval(
    X: float,
    theta: float | None = None,
    J: int = 1500,
    N_arith: int = 1500,
    T_count: int = 25,
    N_trivial: int = 1,
    zeros: ZeroTable | None = None,
    formula: ExplicitFormula | None = None,
    dps: int = DEFAULT_DPS,
) -> ExplicitEval:
    theta = float(theta_of_X(X)) if theta is None else theta
    if formula is None:
        formula = ExplicitFormula(zeros if zeros is not None else default_zeros(), T_count, N_trivial, 0, dps)
    phi2, leading, zero_part = formula(X, theta)
    phi1 = phi1_arithmetic(X, theta, J, N_arith)
    return ExplicitEval(
        X, theta, J, N_arith, formula.T_count, formula.N_trivial, phi1, complex(phi2), complex(leading), complex(zero_part), float(delta_of(X, theta))
    )


def explicit_sweep(
    xs: Iterable[float],
    J: int = 1500,
    N_arith: int = 1500,
    T_count: int = 25,
    N_trivial: int = 1,
    zeros: ZeroTable | None = None,
    dps: int = DEFAULT_DPS,
    workers: int | None = None,
) -> List[ExplicitEval]:
    """explicit_eval along theta(X) for every X, zero-dependent constants computed once."""
    formula = ExplicitFormula(zeros if zeros is not None else default_zeros(), T_count, N_trivial, 0, dps)
    xs = list(xs)
    for K in sorted({_coefficient_length(J, N_arith, X) for X in xs}):
        _arith_coefficients(J, N_arith, K)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda X: explicit_eval(X, None, J, N_arith, formula=formula), xs))


def residual_profile(evals: Sequence[ExplicitEval]) -> float:
    """Largest |Phi1 - Phi2| / |Phi2,0| over a sweep."""
    return max(e.residual for e in evals)
