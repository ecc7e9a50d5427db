# Copyright (C) 2024 twyleg
# fmt: off
import math
from fractions import Fraction as F

import pytest

from twisted_sums.bounds import (
    ENVELOPE_IDS,
    THEOREM_IDS,
    BoundsError,
    BracketError,
    ExponentSchedule,
    UnknownEnvelopeError,
    balance_point,
    balance_system,
    bisect_decreasing,
    empirical_ratio,
    envelope_for,
    evaluate,
    exponent_improvements,
    induction_step,
    minmax_optimize,
    sample_alphas,
    theorem_id,
)

#
# General naming convention for unit tests:
#               test_INITIALSTATE_ACTION_EXPECTATION
#


def betas(env):
    return [t.beta for t in env.terms]


def exponents(env):
    return [t.exponents() for t in env.terms]


class TestEnvelopeCatalogue:
    def test_SinglePrime_EnvelopeFor_ScheduleExponents(self):
        env = envelope_for("primes_r", r=1)
        assert betas(env) == [F(1), F(4, 5), F(1, 2)]
        assert [t.gamma for t in env.terms] == [F(1, 2), 0, 0]
        assert [t.delta for t in env.terms] == [F(-1, 2), 0, F(1, 2)]
        assert all(t.lam == 3 for t in env.terms)

    def test_Semiprimes_EnvelopeFor_KnownExponents(self):
        assert betas(envelope_for("semiprimes")) == [F(1), F(6, 7), F(3, 4)]

    def test_Squarefree_EnvelopeFor_KnownExponents(self):
        env = envelope_for("squarefree")
        assert betas(env) == [F(1), F(8, 13), F(0)]
        assert env.weights == "mu_abs"

    def test_Weyl_EnvelopeFor_OuterPowerFromDegree(self):
        env = envelope_for("weyl", k=3)
        assert env.outer_power == F(1, 4)
        assert env.phase_degree == 3
        assert not env.monotone_in_x

    def test_UnknownIdentifier_EnvelopeFor_Rejected(self):
        with pytest.raises(UnknownEnvelopeError):
            envelope_for("goldbach")

    def test_PrimesWithoutR_EnvelopeFor_Rejected(self):
        with pytest.raises(BoundsError):
            envelope_for("primes_r")

    def test_GeneralWithoutEta_EnvelopeFor_Rejected(self):
        with pytest.raises(BoundsError):
            envelope_for("general", r=2)

    def test_CatalogueIdentifiers_EnvelopeFor_AllConstructible(self):
        for envelope_id in ENVELOPE_IDS:
            env = envelope_for(envelope_id, r=2, eta=1.0, k=3)
            assert evaluate(env, 1e6, 10, 0.5).value > 0


    @pytest.mark.parametrize("theorem, name", sorted(THEOREM_IDS.items()))
    def test_TheoremIdentifier_EnvelopeFor_SameAsDescriptiveName(self, theorem, name):
        assert envelope_for(theorem, r=2, eta=1.0) == envelope_for(name, r=2, eta=1.0)

    def test_SemiprimeTheorem_EnvelopeFor_KnownTerms(self):
        env = envelope_for("thm_1_4_S2")
        assert exponents(env) == [(1, F(1, 4), F(-1, 4), F(5, 2)), (F(6, 7), 0, 0, F(19, 7)), (F(3, 4), 0, F(1, 4), F(5, 2))]

    def test_SquarefreeTheorem_EnvelopeFor_KnownTerms(self):
        env = envelope_for("thm_1_8")
        assert exponents(env) == [(1, 0, -1, 1), (F(8, 13), 0, 0, F(37, 13)), (0, 0, 1, 1)]

    def test_SinglePrimeAtUpsilonOne_EnvelopeFor_MatchesClassicalTermByTerm(self):
        general = evaluate(envelope_for("thm_1_1", r=1), 1e6, 997, 1.0)
        classical = evaluate(envelope_for("thm_1_2"), 1e6, 997, 1.0)
        assert general.term_values == pytest.approx(classical.term_values, rel=1e-15)

    def test_UnknownTheorem_TheoremId_Rejected(self):
        with pytest.raises(UnknownEnvelopeError):
            theorem_id("1.11")


class TestEvaluate:
    def test_SmallDenominator_Evaluate_LeadingTermDominates(self):
        result = evaluate(envelope_for("vinogradov"), 1e6, 10, 1.0)
        assert result.dominant_term == 0
        assert result.in_regime
        assert result.value == pytest.approx(math.fsum(result.term_values))

    def test_DenominatorAtX_Evaluate_LastTermDominates(self):
        assert evaluate(envelope_for("vinogradov"), 1e6, 10**6, 1.0).dominant_term == 2

    def test_UpsilonBelowOne_Evaluate_SameAsUpsilonOne(self):
        env = envelope_for("primes_r", r=1)
        assert evaluate(env, 1e6, 10, 0.3).value == evaluate(env, 1e6, 10, 1.0).value

    def test_UpsilonAboveOne_Evaluate_GrowsWithUpsilon(self):
        env = envelope_for("primes_r", r=1)
        assert evaluate(env, 1e6, 10, 4.0).term_values[0] == pytest.approx(2 * evaluate(env, 1e6, 10, 1.0).term_values[0])

    def test_OutOfRegime_Evaluate_ViolationsFlagged(self, caplog):
        result = evaluate(envelope_for("vinogradov"), 100, 1000, 2.0)
        assert not result.in_regime
        assert len(result.violations) == 2
        assert "out of regime" in caplog.text

    def test_XBelowTwo_Evaluate_Rejected(self):
        with pytest.raises(BoundsError):
            evaluate(envelope_for("vinogradov"), 1.5, 1, 1.0)


class TestExponentSchedule:
    def test_RTwo_Betas_SemiprimeExponents(self):
        assert ExponentSchedule(2).betas == (F(1), F(6, 7), F(3, 4))

    @pytest.mark.parametrize("r", range(1, 65))
    def test_AnyR_Recurrence_Holds(self, r):
        assert ExponentSchedule(r).recurrence_holds()

    def test_GrowingR_Betas_Nondecreasing(self):
        schedules = [ExponentSchedule(r) for r in range(1, 65)]
        for smaller, larger in zip(schedules, schedules[1:]):
            assert all(b <= nb for b, nb in zip(smaller.betas, larger.betas))
            assert all(b < 1 for b in larger.betas[1:])

    def test_SinglePrime_InductionStep_MatchesScheduleUpToSixtyFour(self):
        env = envelope_for("primes_r", r=1)
        for r in range(2, 65):
            env = induction_step(env)
            assert betas(env) == list(ExponentSchedule(r).betas)
            assert [t.gamma for t in env.terms] == list(ExponentSchedule(r).gammas)
            assert [t.delta for t in env.terms] == list(ExponentSchedule(r).deltas)

    def test_RZero_ExponentSchedule_Rejected(self):
        with pytest.raises(BoundsError):
            ExponentSchedule(0)

    def test_SemiprimesAgainstPrevious_ExponentImprovements_ExactGains(self):
        gains = exponent_improvements(envelope_for("semiprimes"), envelope_for("semiprimes_previous"))
        assert gains == [F(0), F(10, 119), F(1, 8)]

    def test_DifferentTermCounts_ExponentImprovements_Rejected(self):
        with pytest.raises(BoundsError):
            exponent_improvements(envelope_for("semiprimes"), envelope_for("triprimes_previous"))


class TestInductionStep:
    def test_SinglePrime_InductionStep_SemiprimeEnvelope(self):
        step = induction_step(envelope_for("primes_r", r=1))
        assert exponents(step) == exponents(envelope_for("semiprimes"))
        assert step.r == 2

    def test_SinglePrime_InductionStepTwice_TriprimeEnvelope(self):
        step = induction_step(induction_step(envelope_for("primes_r", r=1)))
        assert exponents(step) == exponents(envelope_for("triprimes"))
        assert betas(step) == betas(envelope_for("primes_r", r=3))

    def test_EpsilonTerms_InductionStep_Rejected(self):
        with pytest.raises(BoundsError):
            induction_step(envelope_for("mobius_prime"))


class TestMinMax:
    def test_ReciprocalAgainstIdentity_MinMax_CrossingAtOne(self):
        result = minmax_optimize(lambda x: 1 / x, [lambda x: x])
        assert result.x_star == pytest.approx(1.0, rel=1e-12)
        assert result.value == pytest.approx(1.0, rel=1e-12)
        assert not result.cap_binding

    def test_CrossingBeyondCap_MinMax_CapBinding(self):
        result = minmax_optimize(lambda x: 1 / x, [lambda x: x], x_cap=0.5)
        assert result.cap_binding
        assert result.x_star == 0.5
        assert result.value == pytest.approx(2.0)

    def test_SeveralIncreasing_MinMax_SmallestCrossingWins(self):
        result = minmax_optimize(lambda x: 1 / x, [lambda x: x, lambda x: 4 * x])
        assert result.argmin_index == 1
        assert result.x_star == pytest.approx(0.5, rel=1e-12)

    def test_NoIncreasingFunction_MinMax_Rejected(self):
        with pytest.raises(BoundsError):
            minmax_optimize(lambda x: 1 / x, [])

    def test_NoSignChange_BisectDecreasing_BracketError(self):
        with pytest.raises(BracketError):
            bisect_decreasing(lambda x: -1.0)

    def test_SinglePrimeSystem_MinMax_SemiprimeSplittingPoint(self):
        X = 1e6
        F_, Gs = balance_system(envelope_for("thm_1_2"), X, 997)
        expected = X ** (2 / 7) * math.log(X) ** (-10 / 7)
        assert minmax_optimize(F_, Gs).roots[1] == pytest.approx(expected, rel=1e-6)

    def test_SemiprimeSystem_MinMax_TriprimeSplittingPoint(self):
        X = 1e6
        F_, Gs = balance_system(envelope_for("thm_1_4_S2"), X, 997)
        expected = X ** (2 / 9) * math.log(X) ** (-10 / 9)
        assert minmax_optimize(F_, Gs).roots[1] == pytest.approx(expected, rel=1e-6)

    def test_SchedulePrimes_BalanceSystem_RootsMatchClosedForm(self):
        env = envelope_for("primes_r", r=1)
        F_, Gs = balance_system(env, 1e6, 10)
        result = minmax_optimize(F_, Gs)
        expected = [balance_point(t, 1e6, 10) for t in env.terms]
        assert result.roots == pytest.approx(expected, rel=1e-10)
        assert result.argmin_index == 0


class TestEmpiricalRatio:
    def test_SameSeed_SampleAlphas_Reproducible(self):
        assert sample_alphas(3, 5) == sample_alphas(3, 5)
        assert all(0 <= alpha < 1 for alpha in sample_alphas(3, 5))

    def test_NegativeCount_SampleAlphas_Rejected(self):
        with pytest.raises(BoundsError):
            sample_alphas(3, -1)

    def test_AlphaZero_EmpiricalRatio_BelowOne(self):
        stats = empirical_ratio(None, envelope_for("vinogradov"), [(0.0, 1000)])
        sample = stats.samples[0]
        assert (sample.a, sample.q, sample.upsilon) == (0, 1, 0.0)
        assert sample.abs_sum == pytest.approx(168)
        assert stats.max <= 1.0

    def test_WorkerCounts_EmpiricalRatio_IdenticalRatios(self):
        sample = [(alpha, 2000) for alpha in sample_alphas(5, 6)]
        env = envelope_for("semiprimes")
        serial = empirical_ratio(None, env, sample, workers=1)
        threaded = empirical_ratio(None, env, sample, workers=4)
        assert serial.ratios.tolist() == threaded.ratios.tolist()
        assert all(s.in_regime for s in serial.samples)

    @pytest.mark.parametrize("theorem, weights", [("thm_1_2", "one_p"), ("thm_1_4_S2", "one_p:2"), ("thm_1_8", "mu_abs")])
    def test_SeededSweep_EmpiricalRatio_BelowFrozenConstant(self, theorem, weights):
        # implied constant 1 suffices: the middle term alone exceeds X on this range
        alphas = sample_alphas(2024, 67)
        sample = [(alpha, X) for X in (10**4, 10**5, 10**6) for alpha in alphas]
        stats = empirical_ratio(weights, envelope_for(theorem), sample)
        assert len(stats.samples) == 201
        assert stats.max <= 1.0
        assert all(s.q <= s.X for s in stats.samples)

    def test_EmptySample_EmpiricalRatio_Rejected(self):
        with pytest.raises(BoundsError):
            empirical_ratio(None, envelope_for("vinogradov"), [])
