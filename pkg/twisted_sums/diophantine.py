# Copyright (C) 2024 twyleg
"""
Rational approximation a/q of alpha with its quality certificate upsilon,
|alpha - a/q| <= upsilon / q^2, and the major/minor arc dissection of [-1/2, 1/2).

Continued fractions are expanded on the exact rational value of alpha (a float is
converted to its exact binary fraction), so convergents never depend on float rounding.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Tuple

import numpy as np

from twisted_sums import TwistedSumsError
from twisted_sums.arith import euler_phi


logm = logging.getLogger(__name__)

Real = float | int | Fraction


class DiophantineError(TwistedSumsError):
    pass


class OverlappingArcsError(DiophantineError):
    pass


class ApproxMode(str, Enum):
    DIRICHLET = "dirichlet"
    CLOSEST = "closest"


@dataclass(frozen=True)
class RationalApprox:
    a: int
    q: int
    upsilon: float

    def __post_init__(self) -> None:
        if self.q < 1:
            raise DiophantineError(f"Denominator must be positive, got {self.q}")
        if math.gcd(self.a, self.q) != 1:
            raise DiophantineError(f"{self.a}/{self.q} is not in lowest terms")
        if self.upsilon < 0:
            raise DiophantineError(f"Upsilon must be nonnegative, got {self.upsilon}")

    def certifies(self, alpha: Real, rtol: float = 1e-12) -> bool:
        """True when |alpha - a/q| <= upsilon / q^2 (up to a relative rounding slack)."""
        error = abs(Fraction(alpha) - Fraction(self.a, self.q))
        bound = Fraction(self.upsilon) / (self.q * self.q)
        return error <= bound * (1 + Fraction(rtol))


def convergents(alpha: Real) -> Iterator[Tuple[int, int]]:
    """Successive convergents p_k/q_k of the exact continued fraction of alpha."""
    x = Fraction(alpha)
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def _certificate(x: Fraction, a: int, q: int) -> RationalApprox:
    return RationalApprox(a, q, float(abs(x - Fraction(a, q)) * q * q))


def best_approx(alpha: Real, q_max: int, mode: "ApproxMode | str" = ApproxMode.DIRICHLET) -> RationalApprox:
    """
    Rational approximation of alpha with denominator at most q_max.

    ``dirichlet`` returns the last convergent with q <= q_max, which satisfies
    upsilon <= q / q_max. ``closest`` also considers the intermediate fraction below the
    next convergent and returns whichever is nearer to alpha, ties going to the smaller q.
    """
    if q_max < 1:
        raise DiophantineError(f"q_max must be at least 1, got {q_max}")
    mode = ApproxMode(mode)
    x = Fraction(alpha)

    prev: Tuple[int, int] = (1, 0)
    last: Tuple[int, int] | None = None
    for p, q in convergents(x):
        if q > q_max:
            break
        prev, last = (last if last is not None else (1, 0)), (p, q)
    assert last is not None

    if mode is ApproxMode.DIRICHLET or Fraction(*last) == x:
        return _certificate(x, *last)

    p0, q0 = prev
    p1, q1 = last
    k = (q_max - q0) // q1
    candidates = [(p1, q1)]
    if k >= 1:
        candidates.append((p0 + k * p1, q0 + k * q1))
    a, q = min(candidates, key=lambda c: (abs(x - Fraction(*c)), c[1]))
    return _certificate(x, a, q)


def transform_by_factor(r: RationalApprox, u: int) -> RationalApprox:
    """Certificate for u * alpha derived from a certificate for alpha."""
    if u < 1:
        raise DiophantineError(f"Factor must be a positive integer, got {u}")
    g = math.gcd(u, r.q)
    return RationalApprox(u * r.a // g, r.q // g, r.upsilon * u / (g * g))


class ArcKind(str, Enum):
    PRINCIPAL_MAJOR = "principal_major"
    MAJOR = "major"
    MINOR = "minor"


@dataclass(frozen=True)
class ArcDissection:
    X: float
    A: float

    def __post_init__(self) -> None:
        if self.X < 2:
            raise DiophantineError(f"Arc dissection needs X >= 2, got {self.X}")
        if self.A <= 0:
            raise DiophantineError(f"Arc parameter A must be positive, got {self.A}")

    @property
    def Q(self) -> float:
        return math.log(self.X) ** self.A

    @property
    def q_limit(self) -> int:
        return int(math.floor(self.Q))

    def delta(self, q: int) -> float:
        return self.Q / (q * self.X)


@dataclass(frozen=True)
class ArcClassification:
    kind: ArcKind
    a: int
    q: int
    delta_q: float
    others: Tuple[Tuple[int, int], ...] = field(default=())

    @property
    def overlapping(self) -> bool:
        return len(self.others) > 0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "a": self.a,
            "q": self.q,
            "delta_q": self.delta_q,
            "overlapping": [list(o) for o in self.others],
        }


def _arcs_containing(alpha: float, d: ArcDissection) -> List[Tuple[int, int]]:
    hits = []
    for q in range(1, d.q_limit + 1):
        delta = d.delta(q)
        seen = set()
        for a in range(math.ceil((alpha - delta) * q), math.floor((alpha + delta) * q) + 1):
            if math.gcd(a, q) != 1 or a % q in seen:
                continue
            if abs(alpha - a / q) < delta:
                seen.add(a % q)
                hits.append((a, q))
    return hits


def classify(alpha: float, d: ArcDissection, strict: bool = False) -> ArcClassification:
    """
    Classify alpha in [-1/2, 1/2) as principal major, major or minor.

    Arcs containing alpha are listed, the one with the smallest q is reported and all
    others are returned in ``others``; with ``strict`` any overlap raises.
    """
    if not -0.5 <= alpha < 0.5:
        raise DiophantineError(f"alpha must lie in [-1/2, 1/2), got {alpha}")

    hits = _arcs_containing(alpha, d)
    if not hits:
        return ArcClassification(ArcKind.MINOR, 0, 0, 0.0)

    a, q = hits[0]
    others = tuple(hits[1:])
    if others:
        if strict:
            raise OverlappingArcsError(f"alpha={alpha} lies on overlapping major arcs {hits}")
        logm.warning("alpha=%.17g lies on %d overlapping major arcs, reporting %d/%d", alpha, len(hits), a, q)
    kind = ArcKind.PRINCIPAL_MAJOR if q == 1 else ArcKind.MAJOR
    return ArcClassification(kind, a, q, d.delta(q), others)


@dataclass(frozen=True)
class GridClassification:
    """Per-point classification of a grid; q = 0 marks minor-arc points."""

    a: np.ndarray
    q: np.ndarray
    hits: np.ndarray

    @property
    def principal(self) -> np.ndarray:
        return self.q == 1

    @property
    def major(self) -> np.ndarray:
        return self.q > 1

    @property
    def minor(self) -> np.ndarray:
        return self.q == 0

    @property
    def overlap_count(self) -> int:
        return int(np.count_nonzero(self.hits > 1))


def classify_grid(alphas: np.ndarray, d: ArcDissection) -> GridClassification:
    """
    Vectorised classify() over many points, smallest q wins on overlaps (counted in ``hits``).
    """
    alphas = np.asarray(alphas, dtype=np.float64)
    a_out = np.zeros(alphas.shape, dtype=np.int64)
    q_out = np.zeros(alphas.shape, dtype=np.int64)
    hits = np.zeros(alphas.shape, dtype=np.int64)

    if d.Q / d.X >= 0.5:
        # delta_q * q = Q / X: arcs admit several numerators per point, use the scalar scan
        for i, alpha in enumerate(alphas.tolist()):
            found = _arcs_containing(alpha, d)
            hits[i] = len(found)
            if found:
                a_out[i], q_out[i] = found[0]
        return GridClassification(a_out, q_out, hits)

    for q in range(1, d.q_limit + 1):
        delta = d.delta(q)
        a = np.rint(alphas * q).astype(np.int64)
        inside = (np.abs(alphas - a / q) < delta) & (np.gcd(a, q) == 1)
        hits += inside
        fresh = inside & (q_out == 0)
        a_out[fresh] = a[fresh]
        q_out[fresh] = q

    logm.debug("classify_grid: %d points, %d on overlapping arcs", alphas.size, int(np.count_nonzero(hits > 1)))
    return GridClassification(a_out, q_out, hits)


def major_arc_measure(d: ArcDissection) -> Tuple[float, float]:
    """(sum_{q <= Q} phi(q) 2 delta_q, union bound 2 Q^2 max delta_q)."""
    q_limit = max(d.q_limit, 1)
    measure = math.fsum(euler_phi(q) * 2 * d.delta(q) for q in range(1, q_limit + 1))
    return measure, 2 * d.Q**2 * d.delta(1)
