# Copyright (C) 2024 twyleg
# fmt: off
import math

import numpy as np
import pytest

from twisted_sums import arith
from twisted_sums.arith import (
    ArithTable,
    Kind,
    PreconditionError,
    TableLimitError,
    UnsupportedKindError,
    count_in_ap,
    dirichlet_convolve,
    divisor_moment_ratio,
    euler_phi,
    heath_brown_identity_check,
    mobius,
    mu_squared_identity_check,
    partial_sums,
    r_fold,
    sieve,
    squares_of_squarefree_factorization_check,
    weights_table,
)

#
# General naming convention for unit tests:
#               test_INITIALSTATE_ACTION_EXPECTATION
#


def brute_mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result



def factorise(n: int) -> dict:
    factors, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


class TestSieve:
    def test_MobiusOfOne_Sieve_One(self):
        assert sieve("mu", 1).values.tolist() == [1]

    def test_MobiusSmallRange_Sieve_MatchesFactorisation(self):
        assert sieve(Kind.MU, 300).values.tolist() == [brute_mobius(n) for n in range(1, 301)]

    def test_SquarefreeIndicator_SieveToMillion_CountMatches(self):
        assert int(sieve("mu_abs", 10**6).values.sum()) == 607926

    def test_VonMangoldt_Sieve_LogOnPrimePowersOnly(self):
        lam = sieve("lambda", 9)
        assert lam[8] == pytest.approx(math.log(2))
        assert lam[9] == pytest.approx(math.log(3))
        assert lam[6] == 0.0
        assert lam[1] == 0.0

    def test_PrimeIndicator_Sieve_PrimesBelowThirty(self):
        assert (np.flatnonzero(sieve("one_p", 30).values) + 1).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_SquaresOfSquarefree_Sieve_SixteenExcluded(self):
        assert (np.flatnonzero(sieve("squares_of_squarefree", 40).values) + 1).tolist() == [1, 4, 9, 25, 36]

    def test_DistinctPrimeFactors_Sieve_Omega(self):
        omega = sieve("omega", 30)
        assert [omega[n] for n in (1, 2, 12, 30)] == [0, 1, 2, 3]

    def test_DivisorFunction_Sieve_Tau3(self):
        assert sieve("tau_k", 12, k=3)[12] == 18

    def test_SegmentedPath_Sieve_EqualsSinglePass(self, monkeypatch):
        expected = mobius(5000)
        monkeypatch.setattr(arith, "SEGMENTED_THRESHOLD", 100)
        monkeypatch.setattr(arith, "SEGMENT_SIZE", 333)
        assert np.array_equal(mobius(5000, workers=4), expected)

    def test_MobiusPrime_SieveToTenThousand_MatchesFactorisation(self):
        expected = [sum(brute_mobius(n // p) for p in factorise(n)) for n in range(1, 10**4 + 1)]
        assert sieve("mu_prime", 10**4).values.tolist() == expected

    def test_DistinctPrimeFactors_SieveToTenThousand_MatchesFactorisation(self):
        assert sieve("omega", 10**4).values.tolist() == [len(factorise(n)) for n in range(1, 10**4 + 1)]

    def test_UnknownKind_Sieve_Rejected(self):
        with pytest.raises(UnsupportedKindError):
            sieve("liouville", 10)

    def test_ZeroLimit_Sieve_Rejected(self):
        with pytest.raises(TableLimitError):
            sieve("mu", 0)

    def test_DivisorKindWithoutK_Sieve_Rejected(self):
        with pytest.raises(PreconditionError):
            sieve("tau_k", 10)

    def test_SieveResult_Modify_ReadOnly(self):
        with pytest.raises(ValueError):
            sieve("mu", 10).data[1] = 5


class TestConvolution:
    def test_MobiusTimesOne_Convolve_Identity(self):
        result = dirichlet_convolve(sieve("mu", 100), sieve("one", 100))
        assert result[1] == 1
        assert not result.values[1:].any()

    def test_OneTimesOne_Convolve_DivisorCount(self):
        assert dirichlet_convolve(sieve("one", 12), sieve("one", 12))[12] == 6

    def test_MobiusTimesLog_Convolve_VonMangoldt(self):
        result = dirichlet_convolve(sieve("mu", 10**5), sieve("log", 10**5))
        np.testing.assert_allclose(result.values, sieve("lambda", 10**5).values, rtol=0, atol=1e-12)

    def test_MismatchedLimits_Convolve_Rejected(self):
        with pytest.raises(TableLimitError):
            dirichlet_convolve(sieve("mu", 10), sieve("one", 11))

    def test_PrimeIndicator_TwoFold_OrderedPairs(self):
        assert r_fold(sieve("one_p", 10), 2)[6] == 2

    def test_Mobius_OneFold_Unchanged(self):
        table = sieve("mu", 50)
        assert np.array_equal(r_fold(table, 1).values, table.values)

    def test_ZeroFold_RFold_Rejected(self):
        with pytest.raises(PreconditionError):
            r_fold(sieve("mu", 10), 0)

    def test_ConvolutionSpecification_WeightsTable_SemiprimeCount(self):
        assert int(weights_table("one_p:2", 10).values.sum()) == 6

    def test_CustomValues_FromValues_IndexedFromOne(self):
        table = ArithTable.from_values([3, 0, 7])
        assert table.kind is Kind.CUSTOM
        assert (table[1], table[3], len(table)) == (3, 7, 3)

    def test_Restricted_RestrictedTable_ZeroAboveBound(self):
        restricted = sieve("mu", 20).restricted(5)
        assert restricted.values[5:].tolist() == [0] * 15
        assert restricted.values[:5].tolist() == [1, -1, -1, 0, -1]

    def test_MobiusPrime_PartialSums_Cumulative(self):
        mu_p = sieve("mu_prime", 6)
        assert mu_p.values.tolist() == [0, 1, 1, -1, 1, -2]
        assert partial_sums(mu_p).tolist() == [0, 1, 2, 1, 2, 0]


class TestIdentities:
    @pytest.mark.parametrize("X", [1, 100, 10**6])
    def test_Range_MuSquaredIdentity_Holds(self, X):
        assert mu_squared_identity_check(X)

    @pytest.mark.parametrize("k, x, V", [(1, 50, 50), (2, 10**4, 100), (3, 10**3, 10)])
    def test_ValidCutoff_HeathBrownAnalogue_Holds(self, k, x, V):
        assert heath_brown_identity_check(k, x, V)

    def test_CutoffTooSmall_HeathBrownAnalogue_Rejected(self):
        with pytest.raises(PreconditionError):
            heath_brown_identity_check(2, 10**4, 50)

    def test_Range_SquaresOfSquarefreeFactorisation_Holds(self):
        assert squares_of_squarefree_factorization_check(10**5)


class TestProgressions:
    def test_TrivialModulus_CountInAp_SquarefreeCount(self):
        result = count_in_ap("mu_abs", 10**6, 1, 1)
        assert result.count == 607926
        assert result.main_term == pytest.approx(10**6 * 6 / math.pi**2)

    def test_OddResidues_CountInAp_RatioNearOne(self):
        assert 0.98 <= count_in_ap("mu_abs", 10**4, 2, 1).ratio <= 1.02

    def test_ModulusFour_CountInAp_RatioNearOne(self):
        assert count_in_ap(Kind.MU_ABS, 10**5, 4, 1).ratio == pytest.approx(1.0, abs=0.01)

    def test_SmallModuli_CountInApAtTenMillion_WithinOnePercent(self):
        for q in range(1, 21):
            for l in range(1, q + 1):
                if math.gcd(l, q) == 1:
                    assert count_in_ap("mu_abs", 10**7, q, l).ratio == pytest.approx(1.0, abs=0.01), (q, l)

    def test_ResidueNotCoprime_CountInAp_Rejected(self):
        with pytest.raises(PreconditionError):
            count_in_ap("mu_abs", 100, 4, 2)

    def test_OtherKind_CountInAp_Rejected(self):
        with pytest.raises(UnsupportedKindError):
            count_in_ap("mu", 100, 3, 1)

    def test_SmallModuli_EulerPhi_Totients(self):
        assert [euler_phi(q) for q in (1, 2, 9, 12, 97)] == [1, 1, 6, 4, 96]

    @pytest.mark.parametrize("X", [10**3, 10**4, 10**5, 10**6])
    def test_DivisorSquares_MomentRatio_Bounded(self, X):
        # sum tau(n)^2 ~ X (log X)^3 / pi^2
        assert 0.05 < divisor_moment_ratio(2, X) < 1.0

    @pytest.mark.parametrize("X", [10**3, 10**4, 10**5, 10**6])
    def test_ThreeFoldDivisorSquares_MomentRatio_Bounded(self, X):
        assert 0 < divisor_moment_ratio(3, X) < 1.0
