"""Group element types: SU(1,1), Sp(2n), free words, p-adics, measures."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoact.errors import BadGeneratorIndex, ConstraintViolation, GroupMismatch
from isoact.exact import QComplex
from isoact.groups import (
    FiniteMeasure,
    FreeWord,
    PAdicScalar,
    delta_measure,
    free_reduce,
    measure_convolve,
    measure_from_json,
    measure_to_json,
    padic_valuation,
    random_rational_weights,
    random_word,
    sp_boost,
    sp_form,
    sp_from_entries,
    sp_identity,
    sp_random,
    sp_rotation,
    su_boost,
    su_from_json,
    su_from_params,
    su_identity,
    su_random,
    su_rational_boost,
    su_rational_rotation,
    su_rotation,
    su_to_json,
    word_from_json,
    word_to_json,
)


class TestSuMatrix:
    def test_constraint_enforced(self):
        with pytest.raises(ConstraintViolation):
            su_from_params(complex(1.0), complex(0.5))
        with pytest.raises(ConstraintViolation):
            su_from_params(QComplex(2, 0), QComplex(1, 0))

    def test_boost_moves_origin(self):
        g = su_boost(0.7)
        assert g.mobius(0.0) == pytest.approx(math.tanh(0.7))

    def test_rotation_fixes_origin(self):
        g = su_rotation(1.1)
        assert g.mobius(0.0) == 0.0
        assert g.mobius(0.3) == pytest.approx(0.3 * np.exp(2.2j))

    def test_inverse_exact(self):
        g = su_rational_boost(Fraction(1, 3)) * su_rational_rotation(Fraction(1, 2))
        gi = g.inverse()
        assert (g * gi).is_identity()
        assert (gi * g).is_identity()

    def test_inverse_float(self):
        rng = np.random.default_rng(5)
        g = su_random(rng)
        prod = (g * g.inverse()).matrix()
        assert np.allclose(prod, np.eye(2), atol=1e-12)

    def test_product_stays_in_group(self):
        rng = np.random.default_rng(6)
        g, h = su_random(rng), su_random(rng)
        assert abs((g * h).defect()) < 1e-10

    def test_exact_product_constraint(self):
        g = su_rational_boost(Fraction(2, 5)) * su_rational_boost(Fraction(-1, 7))
        assert g.a.abs2() - g.b.abs2() == 1

    def test_mixed_backend_product_rejected(self):
        with pytest.raises(GroupMismatch):
            su_boost(0.3) * su_rational_boost(Fraction(1, 2))

    def test_mobius_composition_is_left_action(self):
        # Fractional linear maps compose covariantly with the matrix
        # product: z^[g1 g2] = (z^[g2])^[g1].
        rng = np.random.default_rng(7)
        g1, g2 = su_random(rng), su_random(rng)
        z = 0.2 + 0.1j
        assert (g1 * g2).mobius(z) == pytest.approx(g1.mobius(g2.mobius(z)))

    def test_mobius_preserves_disc(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            g = su_random(rng)
            z = 0.95 * np.exp(1j * rng.uniform(0, 2 * np.pi))
            assert abs(g.mobius(z)) < 1.0

    def test_json_round_trip_float(self):
        g = su_boost(0.4) * su_rotation(0.9)
        h = su_from_json(su_to_json(g))
        assert h.a == g.a and h.b == g.b

    def test_json_round_trip_exact(self):
        g = su_rational_boost(Fraction(3, 8))
        h = su_from_json(su_to_json(g))
        assert h.exact and h.a == g.a and h.b == g.b

    def test_json_malformed(self):
        with pytest.raises(ConstraintViolation):
            su_from_json({"a": [1, 0]})

    def test_identity(self):
        assert su_identity().is_identity()
        assert su_identity(exact=True).is_identity()
        assert not su_boost(0.1).is_identity()


class TestSpMatrix:
    def test_form_residual_enforced(self):
        with pytest.raises(ConstraintViolation):
            sp_from_entries(np.diag([2.0, 1.0]))

    def test_rotation_boost_valid(self):
        assert sp_rotation(0.8).defect() < 1e-14
        assert sp_boost(1.2).defect() < 1e-14

    def test_random_is_symplectic(self):
        rng = np.random.default_rng(11)
        for n in (1, 2):
            g = sp_random(rng, n)
            assert g.defect() < 1e-10

    def test_inverse(self):
        rng = np.random.default_rng(12)
        g = sp_random(rng, 2)
        assert np.allclose((g * g.inverse()).entries, np.eye(4), atol=1e-10)

    def test_size_mismatch(self):
        with pytest.raises(GroupMismatch):
            sp_identity(1) * sp_identity(2)

    def test_form_matrix(self):
        J = sp_form(2)
        assert np.array_equal(J @ J, -np.eye(4))


words = st.lists(st.integers(min_value=-2, max_value=2).filter(lambda x: x != 0), max_size=12)


class TestFreeWord:
    def test_reduction(self):
        assert free_reduce([1, -1], 2).letters == ()
        assert free_reduce([1, 2, -2, -1, 1], 2).letters == (1,)

    def test_reduction_matches_single_step_fixpoint(self):
        # Oracle: repeatedly remove one adjacent cancelling pair until none
        # remain, which must agree with the stack scan.
        def slow(letters):
            letters = list(letters)
            changed = True
            while changed:
                changed = False
                for i in range(len(letters) - 1):
                    if letters[i] == -letters[i + 1]:
                        del letters[i : i + 2]
                        changed = True
                        break
            return tuple(letters)

        rng = np.random.default_rng(13)
        for _ in range(200):
            raw = [int(x) for x in rng.choice([-2, -1, 1, 2], size=rng.integers(0, 14))]
            assert free_reduce(raw, 2).letters == slow(raw)

    def test_bad_letter(self):
        with pytest.raises(BadGeneratorIndex):
            free_reduce([1, 3], 2)
        with pytest.raises(BadGeneratorIndex):
            free_reduce([0], 2)

    @given(words, words)
    def test_product_associative_with_inverse(self, u, v):
        a = free_reduce(u, 2)
        b = free_reduce(v, 2)
        assert (a * b).inverse() == b.inverse() * a.inverse()

    def test_powers(self):
        w = free_reduce([1, 2], 2)
        assert (w**3).letters == (1, 2, 1, 2, 1, 2)
        assert (w**-2) == (w * w).inverse()
        assert (w**0).is_identity()

    def test_cyclic_reduce(self):
        w = free_reduce([1, 2, -1], 2)
        core, c = w.cyclic_reduce()
        assert core.letters == (2,)
        assert c.letters == (1,)
        assert c * core * c.inverse() == w

    def test_cyclic_reduce_already_reduced(self):
        w = free_reduce([1, 2], 2)
        core, c = w.cyclic_reduce()
        assert core == w and c.is_identity()

    @given(words)
    def test_cyclic_reduce_conjugation_identity(self, u):
        w = free_reduce(u, 2)
        core, c = w.cyclic_reduce()
        assert c * core * c.inverse() == w
        if len(core) >= 2:
            assert core.letters[0] != -core.letters[-1]

    def test_random_word_length_and_reduced(self):
        rng = np.random.default_rng(14)
        for L in (0, 1, 5, 9):
            w = random_word(rng, 2, L)
            assert len(w) == L
            assert free_reduce(w.letters, 2) == w

    def test_json(self):
        w = word_from_json([1, -2, 1], 2)
        assert word_to_json(w) == [1, -2, 1]


class TestPAdic:
    def test_valuations(self):
        assert padic_valuation(PAdicScalar(Fraction(12), 2)) == 2
        assert padic_valuation(PAdicScalar(Fraction(5, 27), 3)) == -3
        assert padic_valuation(PAdicScalar(Fraction(0), 5)) == math.inf

    def test_valuation_additive_under_product(self):
        x = PAdicScalar(Fraction(18, 5), 3)
        y = PAdicScalar(Fraction(3, 7), 3)
        assert padic_valuation(x * y) == padic_valuation(x) + padic_valuation(y)

    def test_prime_required(self):
        with pytest.raises(ConstraintViolation):
            PAdicScalar(Fraction(1), 6)


class TestFiniteMeasure:
    def test_weights_sum_enforced(self):
        with pytest.raises(ConstraintViolation):
            FiniteMeasure.from_atoms([(free_reduce([1], 2), Fraction(1, 2))])

    def test_float_weight_rejected(self):
        with pytest.raises(ConstraintViolation):
            FiniteMeasure.from_atoms([(free_reduce([1], 2), 0.5), (free_reduce([2], 2), 0.5)])

    def test_duplicates_merged(self):
        w = free_reduce([1], 2)
        mu = FiniteMeasure.from_atoms([(w, Fraction(1, 3)), (w, Fraction(2, 3))])
        assert len(mu.atoms) == 1
        assert mu.atoms[0][1] == 1

    def test_convolution_free_words(self):
        a = free_reduce([1], 2)
        mu = FiniteMeasure.from_atoms([(a, Fraction(1, 2)), (a.inverse(), Fraction(1, 2))])
        nu = measure_convolve(mu, mu)
        # a*a, a*a^-1 = e (twice), a^-1*a^-1
        weights = dict((tuple(word_to_json(e)), w) for e, w in nu.atoms)
        assert weights[()] == Fraction(1, 2)
        assert weights[(1, 1)] == Fraction(1, 4)
        assert weights[(-1, -1)] == Fraction(1, 4)

    def test_convolution_total_mass(self):
        rng = np.random.default_rng(15)
        ws = random_rational_weights(rng, 4)
        mu = FiniteMeasure.from_atoms(
            [(random_word(rng, 2, k + 1), w) for k, w in enumerate(ws)]
        )
        nu = measure_convolve(mu, mu)
        assert sum((w for _, w in nu.atoms), Fraction(0)) == 1

    def test_type_mismatch(self):
        mu = delta_measure(free_reduce([1], 2))
        nu = delta_measure(su_boost(0.1))
        with pytest.raises(GroupMismatch):
            measure_convolve(mu, nu)

    def test_json_round_trip(self):
        mu = FiniteMeasure.from_atoms(
            [(free_reduce([1], 2), Fraction(1, 3)), (free_reduce([-2], 2), Fraction(2, 3))]
        )
        data = measure_to_json(mu, word_to_json)
        back = measure_from_json(data, lambda d: word_from_json(d, 2))
        assert back == mu

    def test_json_float_weights_rejected(self):
        with pytest.raises(ConstraintViolation):
            measure_from_json(
                [{"elem": [1], "num": 0.5, "den": 1}], lambda d: word_from_json(d, 2)
            )
