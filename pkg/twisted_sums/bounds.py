# Copyright (C) 2024 twyleg
"""
Bound envelopes for twisted exponential sums.

An envelope is a sum of monomials coeff * X^beta * max{1, Upsilon}^gamma * q^delta * (log X)^lam
with exact rational exponents. Envelopes are addressed by descriptive identifiers, see
``ENVELOPE_IDS``, or by theorem identifiers, see ``THEOREM_IDS``. The min-max optimiser
balances one decreasing against several increasing functions by multiplicative bisection.
"""
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from twisted_sums import TwistedSumsError
from twisted_sums.arith import weights_table
from twisted_sums.diophantine import best_approx
from twisted_sums.expsum import twisted_sum


logm = logging.getLogger(__name__)

BRACKET_LO = 1e-12
BRACKET_HI = 1e18
MAX_BISECTION_STEPS = 200
BISECTION_RTOL = 1e-13


class BoundsError(TwistedSumsError):
    pass


class UnknownEnvelopeError(BoundsError):
    pass


class BracketError(BoundsError):
    pass


class ToleranceError(BoundsError):
    pass


F = Fraction


@dataclass(frozen=True)
class EnvelopeTerm:
    """
    coeff * X^(beta + eps * epsilon) * max{1, upsilon_scale * Upsilon}^gamma * q^delta
    * (log X)^lam * max{log q, 1}^lam_q * max{log log X, 1}^kappa
    """

    beta: Fraction
    gamma: Fraction
    delta: Fraction
    lam: Fraction
    coeff: float = 1.0
    lam_q: Fraction = F(0)
    eps: int = 0
    kappa: Fraction = F(0)
    upsilon_scale: float = 1.0

    def evaluate(self, X: float, q: float, upsilon: float, epsilon: float = 0.0) -> float:
        log_x = math.log(X)
        value = self.coeff * X ** (float(self.beta) + self.eps * epsilon)
        value *= max(1.0, self.upsilon_scale * upsilon) ** float(self.gamma)
        value *= q ** float(self.delta) * log_x ** float(self.lam)
        if self.lam_q:
            value *= max(math.log(q), 1.0) ** float(self.lam_q)
        if self.kappa:
            value *= max(math.log(log_x), 1.0) ** float(self.kappa)
        return value

    def exponents(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.beta, self.gamma, self.delta, self.lam


def term(beta, gamma, delta, lam, **kwargs) -> EnvelopeTerm:
    return EnvelopeTerm(F(beta), F(gamma), F(delta), F(lam), **{k: (F(v) if k in ("lam_q", "kappa") else v) for k, v in kwargs.items()})


@dataclass(frozen=True)
class Validity:
    q_le_x: bool = True
    upsilon_min: float | None = None
    upsilon_max: float | None = None
    description: str = "q <= X, Upsilon > 0"

    def violations(self, X: float, q: float, upsilon: float) -> Tuple[str, ...]:
        found = []
        if self.q_le_x and q > X:
            found.append(f"q={q} exceeds X={X}")
        if self.upsilon_min is not None and upsilon < self.upsilon_min:
            found.append(f"Upsilon={upsilon} below {self.upsilon_min}")
        if self.upsilon_max is not None and upsilon > self.upsilon_max:
            found.append(f"Upsilon={upsilon} above {self.upsilon_max}")
        return tuple(found)


@dataclass(frozen=True)
class BoundEnvelope:
    """
    Sum of terms, optionally raised to ``outer_power`` and multiplied by ``prefactor``
    (Weyl-type bounds).
    """

    name: str
    terms: Tuple[EnvelopeTerm, ...]
    validity: Validity = field(default_factory=Validity)
    description: str = ""
    weights: str = "one_p"
    phase_degree: int = 1
    outer_power: Fraction = F(1)
    prefactor: EnvelopeTerm | None = None
    r: int | None = None

    def __post_init__(self) -> None:
        if not self.terms:
            raise BoundsError(f"Envelope {self.name} has no terms")

    @property
    def monotone_in_x(self) -> bool:
        return self.prefactor is None and all(t.beta >= 0 and t.lam >= 0 for t in self.terms)


@dataclass(frozen=True)
class EnvelopeValue:
    value: float
    dominant_term: int
    term_values: Tuple[float, ...]
    violations: Tuple[str, ...] = ()

    @property
    def in_regime(self) -> bool:
        return not self.violations


def evaluate(env: BoundEnvelope, X: float, q: int, upsilon: float, epsilon: float = 0.0) -> EnvelopeValue:
    """Envelope value with the index of the largest term; out-of-regime input is flagged, not rejected."""
    if X < 2:
        raise BoundsError(f"Envelopes are defined for X >= 2, got {X}")
    if q < 1:
        raise BoundsError(f"q must be positive, got {q}")
    if upsilon < 0:
        raise BoundsError(f"Upsilon must be nonnegative, got {upsilon}")

    term_values = tuple(t.evaluate(X, q, upsilon, epsilon) for t in env.terms)
    value = math.fsum(term_values)
    if env.outer_power != 1:
        value = value ** float(env.outer_power)
    if env.prefactor is not None:
        value *= env.prefactor.evaluate(X, q, upsilon, epsilon)

    violations = env.validity.violations(X, q, upsilon)
    if violations:
        logm.warning("Envelope %s evaluated out of regime: %s", env.name, "; ".join(violations))
    dominant = max(range(len(term_values)), key=term_values.__getitem__)
    return EnvelopeValue(value, dominant, term_values, violations)


@dataclass(frozen=True)
class ExponentSchedule:
    """The triples (beta_j(r), gamma_j(r), delta_j(r)), j = 0, 1, 2."""

    r: int

    def __post_init__(self) -> None:
        if self.r < 1:
            raise BoundsError(f"Schedules start at r = 1, got {self.r}")

    @property
    def betas(self) -> Tuple[Fraction, Fraction, Fraction]:
        r = self.r
        return F(1), F(2 + 2 * r, 3 + 2 * r), F(2 * r - 1, 2 * r)

    @property
    def gammas(self) -> Tuple[Fraction, Fraction, Fraction]:
        return F(1, 2 * self.r), F(0), F(0)

    @property
    def deltas(self) -> Tuple[Fraction, Fraction, Fraction]:
        return F(-1, 2 * self.r), F(0), F(1, 2 * self.r)

    def triples(self) -> List[Tuple[Fraction, Fraction, Fraction]]:
        return list(zip(self.betas, self.gammas, self.deltas))

    @staticmethod
    def recurrence(beta: Fraction, gamma: Fraction) -> Fraction:
        return (2 + 2 * gamma - beta) / (3 + 2 * gamma - 2 * beta)

    def recurrence_holds(self) -> bool:
        # gamma_j only enters through j = 0, where beta_0 = 1 is a fixed point for any gamma
        following = ExponentSchedule(self.r + 1).betas
        return all(self.recurrence(b, g) == nb for b, g, nb in zip(self.betas, self.gammas, following))


def _schedule_terms(r: int, lam: Fraction, middle_eps: int = 0) -> Tuple[EnvelopeTerm, ...]:
    s = ExponentSchedule(r)
    return tuple(
        EnvelopeTerm(b, g, d, lam, eps=(middle_eps if j == 1 else 0)) for j, (b, g, d) in enumerate(s.triples())
    )


S2_TERMS = (term(1, F(1, 4), F(-1, 4), F(5, 2)), term(F(6, 7), 0, 0, F(19, 7)), term(F(3, 4), 0, F(1, 4), F(5, 2)))
S2_TERMS_EPS = (S2_TERMS[0], term(F(6, 7), 0, 0, 0, eps=1), S2_TERMS[2])
VINOGRADOV_TERMS = (term(1, 0, F(-1, 2), 3), term(F(4, 5), 0, 0, 3), term(F(1, 2), 0, F(1, 2), 3))
RATIONAL_APPROX = Validity(upsilon_max=1.0, description="|alpha - a/q| <= 1/q^2, q <= X")
UPSILON_AT_LEAST_ONE = Validity(upsilon_min=1.0, description="Upsilon >= 1, q <= X")


def _require(value: int | None, what: str, name: str, minimum: int = 1) -> int:
    if value is None:
        raise BoundsError(f"Envelope {name} needs the parameter {what}")
    if value < minimum:
        raise BoundsError(f"Envelope {name} needs {what} >= {minimum}, got {value}")
    return value


def _primes_r(r, eta, k):
    r = _require(r, "r", "primes_r")
    return BoundEnvelope("primes_r", _schedule_terms(r, F(3)), description="S_r over products of r primes", weights=f"one_p:{r}", r=r)


def _general(r, eta, k):
    r = _require(r, "r", "general")
    if eta is None or eta < 0:
        raise BoundsError(f"Envelope general needs a growth exponent eta >= 0, got {eta}")
    lam = 3 + r * F(eta)
    return BoundEnvelope("general", _schedule_terms(r, lam), description=f"f^(*r) twisted sums, eta={eta}", weights=f"lambda:{r}", r=r)


def _general_weak(r, eta, k):
    r = _require(r, "r", "general_weak")
    return BoundEnvelope(
        "general_weak",
        _schedule_terms(r, F(max(r * r, 3)), middle_eps=1),
        description="bounded f^(*r), weaker log power",
        weights=f"mu:{r}",
        r=r,
    )


def _weyl(r, eta, k):
    k = _require(k if k is not None else r, "k", "weyl")
    inner = (term(0, 1, -1, 0), term(-1, 0, 0, 0), term(1 - k, 0, 0, 0), term(-k, 0, 1, 0))
    return BoundEnvelope(
        "weyl",
        inner,
        Validity(q_le_x=False, description="Upsilon > 0"),
        description=f"degree {k} polynomial phase over n <= N",
        weights="one",
        phase_degree=k,
        outer_power=F(2) ** (1 - k),
        prefactor=term(1, 0, 0, 0, eps=1),
        r=k,
    )


def _squarefree_poly(r, eta, k):
    k = _require(k if k is not None else r, "k", "squarefree_poly", minimum=3)
    power = F(2) ** (1 - k)
    return BoundEnvelope(
        "squarefree_poly",
        (term(F(1, 2) + 2 * power, 0, -power, 0, eps=1), term(F(1, 2), 0, power, 0, eps=1)),
        RATIONAL_APPROX,
        description=f"|mu| with a degree {k} polynomial phase",
        weights="mu_abs",
        phase_degree=k,
        r=k,
    )


_FIXED: Dict[str, BoundEnvelope] = {
    "vinogradov": BoundEnvelope("vinogradov", VINOGRADOV_TERMS, RATIONAL_APPROX, "primes, classical form"),
    "vinogradov_historic": BoundEnvelope(
        "vinogradov_historic",
        tuple(replace(t, gamma=F(1)) for t in VINOGRADOV_TERMS),
        UPSILON_AT_LEAST_ONE,
        "primes, global Upsilon prefactor",
    ),
    "dirichlet_vinogradov": BoundEnvelope(
        "dirichlet_vinogradov",
        (term(1, F(1, 2), F(-1, 2), 3, upsilon_scale=2.0), term(F(4, 5), 0, 0, 3), term(F(1, 2), 0, F(1, 2), 3)),
        description="primes, Upsilon > 0 through a Dirichlet approximation",
    ),
    "semiprimes": BoundEnvelope("semiprimes", S2_TERMS, description="products of two primes", weights="one_p:2", r=2),
    "triprimes": BoundEnvelope(
        "triprimes",
        (term(1, F(1, 6), F(-1, 6), F(7, 3)), term(F(8, 9), 0, 0, F(23, 9)), term(F(5, 6), 0, F(1, 6), F(7, 3))),
        description="products of three primes",
        weights="one_p:3",
        r=3,
    ),
    "mobius_convolution": BoundEnvelope("mobius_convolution", S2_TERMS_EPS, description="mu * mu", weights="mu:2"),
    "mobius_prime": BoundEnvelope("mobius_prime", S2_TERMS_EPS, description="mu * 1_P", weights="mu_prime"),
    "prime_divisors": BoundEnvelope("prime_divisors", S2_TERMS, description="omega = 1 * 1_P", weights="omega"),
    "squarefree": BoundEnvelope(
        "squarefree",
        (term(1, 0, -1, 1), term(F(8, 13), 0, 0, F(37, 13)), term(0, 0, 1, 1)),
        RATIONAL_APPROX,
        "squarefree indicator",
        weights="mu_abs",
    ),
    "squarefree_quadratic": BoundEnvelope(
        "squarefree_quadratic",
        (term(1, 0, F(-1, 4), 0), term(F(1, 2), 0, 0, 1, lam_q=F(1, 2)), term(F(1, 2), 0, F(1, 4), 0, lam_q=F(1, 4))),
        RATIONAL_APPROX,
        "squarefree indicator, quadratic phase",
        weights="mu_abs",
        phase_degree=2,
    ),
    "weyl_quadratic": BoundEnvelope(
        "weyl_quadratic",
        (term(1, F(1, 2), F(-1, 2), 0), term(F(1, 2), 0, 0, 0, lam_q=F(1, 2)), term(0, 0, F(1, 2), 0, lam_q=F(1, 2))),
        Validity(q_le_x=False, description="Upsilon > 0"),
        "quadratic phase over n <= N",
        weights="one",
        phase_degree=2,
    ),
    "squarefree_cubic": BoundEnvelope(
        "squarefree_cubic",
        (term(F(1, 2), 0, F(1, 6), 0, eps=1), term(1, 0, F(-1, 4), 0, eps=1)),
        RATIONAL_APPROX,
        "squarefree indicator, cubic phase",
        weights="mu_abs",
        phase_degree=3,
    ),
    "semiprimes_previous": BoundEnvelope(
        "semiprimes_previous",
        (term(1, 0, F(-1, 6), F(7, 3)), term(F(16, 17), 0, 0, F(39, 17)), term(F(7, 8), 0, F(1, 8), F(9, 4))),
        RATIONAL_APPROX,
        "products of two primes, earlier hyperbola estimate",
        weights="one_p:2",
        r=2,
    ),
    "triprimes_previous": BoundEnvelope(
        "triprimes_previous",
        (
            term(F(1, 2), 1, F(1, 2), 2),
            term(1, 1, F(-1, 18), F(19, 9)),
            term(F(52, 53), 1, 0, F(111, 53)),
            term(F(25, 26), 1, F(1, 26), F(27, 13)),
            term(1, 1, F(-1, 6), F(7, 3), kappa=1),
            term(F(7, 8), 1, F(1, 8), F(9, 4), kappa=1),
        ),
        UPSILON_AT_LEAST_ONE,
        "products of three primes via the global-prefactor estimate",
        weights="one_p:3",
        r=3,
    ),
    "squarefree_previous": BoundEnvelope(
        "squarefree_previous",
        (term(1, 0, F(-1, 6), 10), term(F(33, 38), 0, 0, 10), term(F(5, 6), 0, F(1, 6), 10)),
        RATIONAL_APPROX,
        "squarefree indicator, hyperbola estimate",
        weights="mu_abs",
    ),
}

_PARAMETRIC: Dict[str, Callable[[int | None, float | None, int | None], BoundEnvelope]] = {
    "primes_r": _primes_r,
    "general": _general,
    "general_weak": _general_weak,
    "weyl": _weyl,
    "squarefree_poly": _squarefree_poly,
}

ENVELOPE_IDS = tuple(sorted([*_FIXED, *_PARAMETRIC]))

# numbered result identifiers resolve to the descriptive ones
THEOREM_IDS: Dict[str, str] = {
    "thm_1_1": "primes_r",
    "thm_1_2": "vinogradov",
    "thm_1_3": "vinogradov_historic",
    "thm_1_4_S2": "semiprimes",
    "thm_1_4_S3": "triprimes",
    "thm_1_5": "mobius_convolution",
    "thm_1_6": "mobius_prime",
    "thm_1_7": "prime_divisors",
    "thm_1_8": "squarefree",
    "thm_1_9": "squarefree_quadratic",
    "thm_2_4": "general",
}


def theorem_id(text: str) -> str:
    """``1.4-S2``, ``1_4_S2`` and ``thm_1_4_S2`` all name the same envelope."""
    key = re.sub(r"[.\-]", "_", text.strip())
    if not key.startswith("thm_"):
        key = f"thm_{key}"
    key = re.sub(r"_s(\d)$", r"_S\1", key)
    if key not in THEOREM_IDS:
        raise UnknownEnvelopeError(f"Unknown theorem {text!r}, expected one of {', '.join(THEOREM_IDS)}")
    return key


def envelope_for(envelope_id: str, r: int | None = None, eta: float | None = None, k: int | None = None) -> BoundEnvelope:
    """
    Build an envelope by descriptive or theorem identifier. ``r`` is the convolution length of
    the r-parametric families, ``eta`` the log-growth exponent of ``general``, ``k`` the polynomial degree.
    """
    envelope_id = THEOREM_IDS.get(envelope_id, envelope_id)
    if envelope_id in _FIXED:
        return _FIXED[envelope_id]
    if envelope_id in _PARAMETRIC:
        return _PARAMETRIC[envelope_id](r, eta, k)
    raise UnknownEnvelopeError(
        f"Unknown envelope {envelope_id!r}, expected one of {', '.join(ENVELOPE_IDS)} or {', '.join(THEOREM_IDS)}"
    )


def exponent_improvements(new: BoundEnvelope, old: BoundEnvelope) -> List[Fraction]:
    """Exact gain old.beta - new.beta per term."""
    if len(new.terms) != len(old.terms):
        raise BoundsError(f"Cannot compare {new.name} ({len(new.terms)} terms) with {old.name} ({len(old.terms)} terms)")
    return [o.beta - n.beta for n, o in zip(new.terms, old.terms)]


@dataclass(frozen=True)
class MinMaxResult:
    x_star: float
    value: float
    roots: Tuple[float, ...]
    cap_binding: bool = False

    @property
    def argmin_index(self) -> int:
        return min(range(len(self.roots)), key=self.roots.__getitem__)


def bisect_decreasing(
    h: Callable[[float], float],
    lo: float = BRACKET_LO,
    hi: float = BRACKET_HI,
    rtol: float = BISECTION_RTOL,
    max_steps: int = MAX_BISECTION_STEPS,
) -> float:
    """
    Root of a decreasing function h on [lo, hi] by bisection on the logarithmic scale.
    """
    h_lo, h_hi = h(lo), h(hi)
    if not (h_lo > 0 > h_hi):
        raise BracketError(f"Root not bracketed in [{lo:.3g}, {hi:.3g}]: h(lo)={h_lo:.3g}, h(hi)={h_hi:.3g}")
    for _ in range(max_steps):
        mid = math.sqrt(lo) * math.sqrt(hi)
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            return math.sqrt(lo) * math.sqrt(hi)
    raise ToleranceError(f"Bisection did not reach rtol={rtol} within {max_steps} steps (bracket [{lo!r}, {hi!r}])")


def minmax_optimize(F_: Callable[[float], float], Gs: Sequence[Callable[[float], float]], x_cap: float | None = None) -> MinMaxResult:
    """
    min over x of max{F(x), G_0(x), ..., G_n(x)} for strictly decreasing F and increasing G_i.

    Attained at the smallest crossing U_i of F and G_i. When that crossing exceeds ``x_cap``
    the cap is used instead and ``cap_binding`` is set.
    """
    if not Gs:
        raise BoundsError("minmax_optimize needs at least one increasing function")

    roots = []
    for i, G in enumerate(Gs):

        def h(x: float, G=G) -> float:
            return math.log(F_(x)) - math.log(G(x))

        roots.append(bisect_decreasing(h))
        logm.debug("minmax: crossing U_%d = %.17g", i, roots[-1])

    x_star = min(roots)
    if x_cap is not None and x_star > x_cap:
        logm.debug("minmax: crossing %.6g exceeds cap %.6g", x_star, x_cap)
        value = max(F_(x_cap), *(G(x_cap) for G in Gs))
        return MinMaxResult(x_cap, value, tuple(roots), cap_binding=True)
    return MinMaxResult(x_star, F_(x_star), tuple(roots))


def balance_system(env: BoundEnvelope, X: float, q: float, upsilon: float = 1.0) -> Tuple[Callable[[float], float], List[Callable[[float], float]]]:
    """
    The splitting-parameter balance of the hyperbola step: F(U) = X U^(-1/2) / log X against
    G_j(U) = coeff X^beta q^delta max{1, Upsilon}^gamma U^(1 + gamma - beta) (log X)^(lam - 3).
    """
    log_x = math.log(X)
    ups = max(1.0, upsilon)

    def decreasing(U: float) -> float:
        return X / math.sqrt(U) / log_x

    def make(t: EnvelopeTerm) -> Callable[[float], float]:
        scale = t.coeff * X ** float(t.beta) * q ** float(t.delta) * ups ** float(t.gamma) * log_x ** float(t.lam - 3)
        power = float(1 + t.gamma - t.beta)

        def increasing(U: float) -> float:
            return scale * U**power

        return increasing

    return decreasing, [make(t) for t in env.terms]


def balance_point(t: EnvelopeTerm, X: float, q: float, upsilon: float = 1.0) -> float:
    """Closed-form crossing U = (X^(1-beta) q^(-delta) max{1,Upsilon}^(-gamma) (log X)^(2-lam) / coeff)^(2/(3+2gamma-2beta))."""
    base = X ** float(1 - t.beta) * q ** float(-t.delta) * max(1.0, upsilon) ** float(-t.gamma) * math.log(X) ** float(2 - t.lam) / t.coeff
    return base ** float(F(2) / (3 + 2 * t.gamma - 2 * t.beta))


def induction_step(env: BoundEnvelope) -> BoundEnvelope:
    """
    Envelope for one more convolution factor: each term balanced against X (log X)^2 U^(-1/2).
    """
    terms = []
    for t in env.terms:
        if t.eps or t.lam_q or t.kappa:
            raise BoundsError(f"Induction step needs plain monomial terms, {env.name} has extra factors")
        e = F(2) / (3 + 2 * t.gamma - 2 * t.beta)
        terms.append(
            EnvelopeTerm(
                beta=1 - (1 - t.beta) * e / 2,
                gamma=t.gamma * e / 2,
                delta=t.delta * e / 2,
                lam=2 - (2 - t.lam) * e / 2,
            )
        )
    r = None if env.r is None else env.r + 1
    return BoundEnvelope(f"{env.name}+1", tuple(terms), env.validity, f"one convolution step beyond {env.name}", env.weights, r=r)


def sample_alphas(seed: int, count: int) -> List[float]:
    if count < 0:
        raise BoundsError(f"Sample count must be nonnegative, got {count}")
    return np.random.default_rng(seed).uniform(0.0, 1.0, count).tolist()


@dataclass(frozen=True)
class RatioSample:
    alpha: float
    X: int
    a: int
    q: int
    upsilon: float
    abs_sum: float
    envelope: float
    in_regime: bool

    @property
    def ratio(self) -> float:
        return self.abs_sum / self.envelope


@dataclass(frozen=True)
class RatioStatistics:
    samples: Tuple[RatioSample, ...]

    @property
    def ratios(self) -> np.ndarray:
        return np.array([s.ratio for s in self.samples])

    @property
    def max(self) -> float:
        return float(self.ratios.max())

    @property
    def median(self) -> float:
        return float(np.median(self.ratios))

    @property
    def mean(self) -> float:
        return float(self.ratios.mean())


def empirical_ratio(
    weights: str | None,
    env: BoundEnvelope,
    sample: Sequence[Tuple[float, int]],
    epsilon: float = 0.0,
    workers: int | None = None,
) -> RatioStatistics:
    """
    |S| / envelope for each (alpha, X), with (a, q, Upsilon) from best_approx(alpha, X).
    ``weights`` defaults to the envelope's own weight specification.
    """
    if not sample:
        raise BoundsError("empirical_ratio needs at least one (alpha, X) sample")
    spec = weights or env.weights
    tables = {X: weights_table(spec, X, workers) for X in sorted({X for _, X in sample})}
    monomials_degree = env.phase_degree

    def measure(point: Tuple[float, int]) -> RatioSample:
        alpha, X = point
        approx = best_approx(alpha, X)
        result = twisted_sum(tables[X], [(alpha, monomials_degree)], alpha, X, f"{spec}:{env.name}", workers=1)
        bound = evaluate(env, X, approx.q, approx.upsilon, epsilon)
        return RatioSample(alpha, X, approx.a, approx.q, approx.upsilon, result.abs, bound.value, bound.in_regime)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        samples = tuple(executor.map(measure, sample))
    stats = RatioStatistics(samples)
    logm.info("Envelope %s on %s: %d samples, max ratio %.4g, median %.4g", env.name, spec, len(samples), stats.max, stats.median)
    return stats
