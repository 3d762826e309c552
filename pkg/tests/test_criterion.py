import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import D5_NO_WITNESS, KLEIN4, random_f_type, random_set
from gbslocc.clifford import transform_set
from gbslocc.criterion import (
    CyclotomicInt,
    FWitness,
    Status,
    Verdict,
    classify,
    classify_prime,
    cyclotomic_poly,
    difference_pairs,
    distinct_vanishing_character,
    f_equivalence_witness,
    is_f_type,
    kappa,
    lemma2_check,
    poly_divmod,
    vanishing_sum_is_zero,
    vanishing_table,
    witness_is_valid,
    yu_oh_indistinguishable,
)
from gbslocc.weyl import GbsSet
from gbslocc.zmod import DomainError, random_affine


def brute_witness(pairs, d):
    for a in range(d):
        for b in range(d):
            vals = [(m * a + n * b) % d for m, n in pairs]
            if len(set(vals)) == len(vals):
                return (a, b)
    return None


def column(d):
    return GbsSet.of([(0, j) for j in range(d)], d)


class TestFType:
    def test_examples(self):
        assert is_f_type(GbsSet.of([(0, 0), (1, 0)], 2))
        assert not is_f_type(GbsSet.of([(0, 0), (0, 1)], 2))
        assert not is_f_type(KLEIN4)


class TestWitness:
    def test_column(self):
        assert f_equivalence_witness(column(5)) == FWitness(0, 1)

    def test_klein4_has_none(self):
        assert f_equivalence_witness(KLEIN4) is None
        assert all(not witness_is_valid(KLEIN4, FWitness(a, b)) for a in range(4) for b in range(4))

    def test_d5_no_witness_set(self):
        assert f_equivalence_witness(D5_NO_WITNESS) is None

    def test_d5_no_witness_count(self):
        # brute-force scan, frozen: 36000 of the 53130 5-subsets have no witness
        pts = [(m, n) for m in range(5) for n in range(5)]
        none = sum(f_equivalence_witness(GbsSet.of(c, 5)) is None for c in itertools.combinations(pts, 5))
        assert none == 36000

    @pytest.mark.parametrize("d, ell", [(3, 3), (4, 3), (4, 4), (6, 4), (6, 6), (7, 5), (8, 8)])
    def test_matches_brute_force(self, d, ell, rng):
        for _ in range(300):
            s = random_set(rng, d, ell)
            w = f_equivalence_witness(s)
            expected = brute_witness(s.pairs, d)
            assert (None if w is None else (w.alpha, w.beta)) == expected

    @pytest.mark.parametrize("d", [2, 3, 4, 6])
    def test_no_witness_when_too_many_states(self, d):
        s = GbsSet.of([(m, n) for m in range(d) for n in range(2)][: d + 1], d)
        assert f_equivalence_witness(s) is None

    @pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
    def test_invariant_under_affine_actions(self, d, rng):
        for _ in range(100):
            s = random_set(rng, d, int(rng.integers(2, d + 1)))
            t = transform_set(s, random_affine(d, rng))
            assert (f_equivalence_witness(s) is None) == (f_equivalence_witness(t) is None)


class TestCyclotomic:
    @pytest.mark.parametrize(
        "n, coeffs",
        [
            (1, (-1, 1)),
            (2, (1, 1)),
            (3, (1, 1, 1)),
            (4, (1, 0, 1)),
            (5, (1, 1, 1, 1, 1)),
            (6, (1, -1, 1)),
            (8, (1, 0, 0, 0, 1)),
            (12, (1, 0, -1, 0, 1)),
        ],
    )
    def test_known(self, n, coeffs):
        assert cyclotomic_poly(n) == coeffs

    @pytest.mark.parametrize("n", range(1, 31))
    def test_product_over_divisors(self, n):
        prod = [1]
        for e in range(1, n + 1):
            if n % e == 0:
                prod = np.polynomial.polynomial.polymul(prod, cyclotomic_poly(e))
        assert list(np.rint(prod).astype(int)) == [-1] + [0] * (n - 1) + [1]

    def test_divmod(self):
        q, r = poly_divmod([-1, 0, 0, 1], [-1, 1])
        assert (q, r) == ([1, 1, 1], [0])

    @pytest.mark.parametrize(
        "d, coeffs, zero",
        [(3, (1, 1, 1), True), (3, (3, 0, 0), False), (4, (1, 0, 2, 0), False), (4, (1, 0, 1, 0), True)],
    )
    def test_vanishing_examples(self, d, coeffs, zero):
        assert vanishing_sum_is_zero(CyclotomicInt(d, coeffs)) is zero

    @settings(max_examples=200, deadline=None)
    @given(d=st.integers(2, 12), data=st.data())
    def test_exact_agrees_with_float(self, d, data):
        coeffs = data.draw(st.lists(st.integers(0, 4), min_size=d, max_size=d))
        c = CyclotomicInt(d, tuple(coeffs))
        value = abs(complex(c))
        # nonzero values in Z[omega] with small coefficients are far from 0
        assert c.is_zero() == (value < 1e-9)


class TestKappa:
    def test_origin(self, rng):
        s = random_set(rng, 6, 4)
        k = kappa(s, 0, 0)
        assert k.coeffs[0] == 4 and not k.is_zero()

    def test_column(self):
        assert kappa(column(5), 1, 0).is_zero()
        assert kappa(column(5), 1, 0).coeffs == (1, 1, 1, 1, 1)

    def test_klein4(self):
        k = kappa(KLEIN4, 1, 0)
        assert k.coeffs == (2, 0, 2, 0) and k.is_zero()


class TestRootSumCheck:
    def test_examples(self):
        assert lemma2_check([0, 1, 2, 3, 4], 5)
        assert not lemma2_check([0, 0, 1, 2, 3], 5)

    def test_composite_rejected(self):
        with pytest.raises(DomainError):
            lemma2_check([0, 0, 2, 2], 4)

    def test_wrong_length(self):
        with pytest.raises(DomainError):
            lemma2_check([0, 1], 3)

    @pytest.mark.parametrize("d", [2, 3, 5, 7, 11])
    def test_permutation_iff_vanishing(self, d, rng):
        for _ in range(500):
            ex = rng.integers(0, d, size=d)
            if rng.random() < 0.3:
                ex = rng.permutation(d)
            assert lemma2_check(ex.tolist(), d) == (sorted(ex.tolist()) == list(range(d)))


class TestYuOh:
    def test_column_d3(self):
        assert not yu_oh_indistinguishable(column(3))

    def test_klein4(self):
        assert not yu_oh_indistinguishable(KLEIN4)
        table = vanishing_table(KLEIN4)
        diffs = difference_pairs(KLEIN4)
        outside = [(m, n) for m in range(4) for n in range(4) if table[m, n] and (m, n) not in diffs]
        assert (1, 0) in outside

    def test_d5_no_witness(self):
        assert yu_oh_indistinguishable(D5_NO_WITNESS)

    def test_size_checked(self):
        with pytest.raises(DomainError):
            yu_oh_indistinguishable(GbsSet.of([(0, 0), (1, 1)], 3))


class TestVanishingTable:
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 8])
    def test_matches_exact_kappa(self, d, rng):
        for _ in range(30):
            s = random_set(rng, d, int(rng.integers(1, d + 1)))
            table = vanishing_table(s)
            expected = [[kappa(s, m, n).is_zero() for n in range(d)] for m in range(d)]
            assert table.astype(bool).tolist() == expected


def _chain_disagreements(d):
    pts = [(m, n) for m in range(d) for n in range(d)]
    bad = []
    for c in itertools.combinations(pts, d):
        s = GbsSet.of(c, d)
        a = f_equivalence_witness(s) is not None
        b = distinct_vanishing_character(s) is not None
        y = not yu_oh_indistinguishable(s)
        if not a == b == y:
            bad.append(c)
    return bad


class TestEquivalenceChain:
    @pytest.mark.parametrize("d", [2, 3])
    def test_exhaustive_small(self, d):
        assert _chain_disagreements(d) == []

    def test_exhaustive_d5(self):
        assert _chain_disagreements(5) == []

    def test_random_d7(self, rng):
        for _ in range(10_000):
            s = random_set(rng, 7, 7)
            a = f_equivalence_witness(s) is not None
            assert a == (distinct_vanishing_character(s) is not None)
            assert a == (not yu_oh_indistinguishable(s))


class TestClassify:
    def test_d3_example(self):
        v = classify_prime(GbsSet.of([(0, 0), (1, 0), (0, 1)], 3))
        assert v.status is Status.DISTINGUISHABLE
        assert witness_is_valid(GbsSet.of([(0, 0), (1, 0), (0, 1)], 3), v.witness)
        assert witness_is_valid(GbsSet.of([(0, 0), (1, 0), (0, 1)], 3), FWitness(1, 2))

    def test_all_d3(self):
        pts = [(m, n) for m in range(3) for n in range(3)]
        statuses = {classify_prime(GbsSet.of(c, 3)).status for c in itertools.combinations(pts, 3)}
        assert statuses == {Status.DISTINGUISHABLE}

    def test_d5_indistinguishable(self):
        v = classify_prime(D5_NO_WITNESS)
        assert v.status is Status.INDISTINGUISHABLE and v.witness is None

    @pytest.mark.parametrize("s", [KLEIN4, GbsSet.of([(0, 0), (1, 1)], 5)])
    def test_prime_classifier_domain(self, s):
        with pytest.raises(DomainError):
            classify_prime(s)

    def test_composite_is_sufficiency_only(self):
        assert classify(KLEIN4).status is Status.UNKNOWN
        v = classify(GbsSet.of([(0, 0), (1, 0)], 4))
        assert v.status is Status.ONE_WAY_CERTIFIED and "sufficiency only" in v.detail

    def test_more_than_d_states(self):
        assert classify(GbsSet.of([(0, 0), (1, 0), (0, 1), (1, 1)], 3)).status is Status.UNKNOWN

    def test_verdict_round_trip(self):
        for v in (classify(KLEIN4), classify(column(5))):
            assert Verdict.from_dict(v.to_dict()) == v

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7])
    def test_f_type_always_certified(self, d, rng):
        for _ in range(20):
            s = random_f_type(rng, d, int(rng.integers(1, d + 1)))
            assert classify(s).status in (Status.DISTINGUISHABLE, Status.ONE_WAY_CERTIFIED)
