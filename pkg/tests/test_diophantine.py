# Copyright (C) 2024 twyleg
# fmt: off
import math
from fractions import Fraction

import numpy as np
import pytest

from twisted_sums.diophantine import (
    ArcDissection,
    ArcKind,
    DiophantineError,
    OverlappingArcsError,
    RationalApprox,
    best_approx,
    classify,
    classify_grid,
    convergents,
    major_arc_measure,
    transform_by_factor,
)

#
# General naming convention for unit tests:
#               test_INITIALSTATE_ACTION_EXPECTATION
#


class TestBestApprox:
    def test_ExactRational_BestApprox_ZeroUpsilon(self):
        r = best_approx(Fraction(3, 8), 10)
        assert (r.a, r.q, r.upsilon) == (3, 8, 0.0)

    def test_Pi_BestApprox_DirichletConvergent(self):
        r = best_approx(math.pi, 100)
        assert (r.a, r.q) == (22, 7)
        assert r.upsilon == pytest.approx(abs(math.pi - 22 / 7) * 49)
        assert r.upsilon == pytest.approx(0.0619, abs=1e-4)

    def test_Pi_BestApproxClosest_IntermediateFraction(self):
        r = best_approx(math.pi, 100, mode="closest")
        assert (r.a, r.q) == (311, 99)
        assert abs(math.pi - 311 / 99) < abs(math.pi - 22 / 7)

    def test_JustAboveOneHalf_BestApprox_OneHalf(self):
        r = best_approx(0.5 + 1 / 200, 2)
        assert (r.a, r.q) == (1, 2)
        assert r.upsilon == pytest.approx(0.02)

    @pytest.mark.parametrize("alpha", [0.123456789, math.sqrt(2) - 1, 1 - math.e / 3, 0.999])
    def test_RandomAlpha_BestApprox_DirichletBoundHolds(self, alpha):
        q_max = 1000
        r = best_approx(alpha, q_max)
        assert 1 <= r.q <= q_max
        assert math.gcd(r.a, r.q) == 1
        assert r.certifies(alpha)
        assert r.upsilon <= r.q / q_max * (1 + 1e-12)

    def test_ZeroDenominatorBound_BestApprox_Rejected(self):
        with pytest.raises(DiophantineError):
            best_approx(0.3, 0)

    def test_GoldenRatio_Convergents_FibonacciQuotients(self):
        phi = (1 + math.sqrt(5)) / 2
        pairs = [pair for _, pair in zip(range(8), convergents(phi))]
        assert pairs == [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8), (21, 13), (34, 21)]


class TestRationalApprox:
    def test_NotLowestTerms_Construct_Rejected(self):
        with pytest.raises(DiophantineError):
            RationalApprox(2, 4, 0.1)

    def test_NegativeUpsilon_Construct_Rejected(self):
        with pytest.raises(DiophantineError):
            RationalApprox(1, 3, -0.5)

    def test_FactorSharesDenominator_TransformByFactor_DenominatorReduced(self):
        r = transform_by_factor(RationalApprox(1, 3, 1.0), 3)
        assert (r.a, r.q) == (1, 1)
        assert r.upsilon == pytest.approx(1 / 3)

    def test_CoprimeFactor_TransformByFactor_UpsilonScaled(self):
        r = transform_by_factor(RationalApprox(1, 5, 1.0), 2)
        assert (r.a, r.q, r.upsilon) == (2, 5, 2.0)

    def test_UnitFactor_TransformByFactor_Unchanged(self):
        r = RationalApprox(3, 7, 0.25)
        assert transform_by_factor(r, 1) == r

    def test_CertificateForAlpha_TransformByFactor_CertifiesMultiple(self):
        alpha = 0.3183098861837907
        r = best_approx(alpha, 500)
        for u in (2, 3, 6, 10):
            assert transform_by_factor(r, u).certifies(Fraction(alpha) * u)


class TestArcs:
    def test_AlphaZero_Classify_PrincipalMajor(self):
        result = classify(0.0, ArcDissection(1e6, 2))
        assert (result.kind, result.a, result.q) == (ArcKind.PRINCIPAL_MAJOR, 0, 1)

    def test_NearOneHalf_Classify_MajorArcOfTwo(self):
        d = ArcDissection(1e4, 2)
        alpha = -0.5 + 1 / 1e4
        assert abs(alpha + 0.5) < d.delta(2)
        result = classify(alpha, d)
        assert result.kind is ArcKind.MAJOR
        assert (abs(result.a), result.q) == (1, 2)

    def test_ThirdExactly_Classify_MajorArcOfThree(self):
        result = classify(1 / 3, ArcDissection(1e6, 2))
        assert (result.kind, result.a, result.q) == (ArcKind.MAJOR, 1, 3)
        assert not result.overlapping

    def test_IrrationalInGap_Classify_Minor(self):
        d = ArcDissection(1e6, 1)
        alpha = 1 / math.sqrt(2) - 0.5
        for q in range(1, d.q_limit + 1):
            a = round(alpha * q)
            assert abs(alpha - a / q) >= d.delta(q)
        result = classify(alpha, d)
        assert result.kind is ArcKind.MINOR
        assert result.q == 0

    def test_SmallX_Classify_OverlapReported(self, caplog):
        result = classify(0.25, ArcDissection(3, 10))
        assert (result.a, result.q) == (0, 1)
        assert result.others == ((1, 2),)
        assert "overlapping" in caplog.text

    def test_SmallXStrict_Classify_OverlapRaises(self):
        with pytest.raises(OverlappingArcsError):
            classify(0.25, ArcDissection(3, 10), strict=True)

    def test_AlphaOutsideWindow_Classify_Rejected(self):
        with pytest.raises(DiophantineError):
            classify(0.5, ArcDissection(1e6, 2))

    @pytest.mark.parametrize("X, A", [(1.5, 2), (100, 0)])
    def test_InvalidParameters_ArcDissection_Rejected(self, X, A):
        with pytest.raises(DiophantineError):
            ArcDissection(X, A)

    def test_Grid_ClassifyGrid_AgreesWithPointwiseClassify(self):
        d = ArcDissection(1e4, 2)
        alphas = -0.5 + np.arange(997) / 997
        grid = classify_grid(alphas, d)
        pointwise = [classify(float(alpha), d) for alpha in alphas]
        assert grid.q.tolist() == [p.q for p in pointwise]
        assert grid.a.tolist() == [p.a for p in pointwise]
        assert grid.principal.sum() == sum(p.kind is ArcKind.PRINCIPAL_MAJOR for p in pointwise)

    def test_ArcDissection_MajorArcMeasure_BelowUnionBound(self):
        measure, union_bound = major_arc_measure(ArcDissection(1e6, 2))
        assert 0 < measure <= union_bound
