"""Exponential-operator tests: frozen special cases, unitarity of the
truncations where truncation cannot interfere, and the projective
multiplication law with its phase."""

import cmath
import math

import numpy as np
import pytest

from isoact import fock as fo
from isoact.errors import PreconditionViolation, TruncationOverflow


def test_multi_index_counts():
    # total degree <= N in d variables: binomial(N + d, d)
    assert len(fo.multi_indices(1, 12)) == 13
    assert len(fo.multi_indices(2, 10)) == 66
    assert len(fo.multi_indices(3, 8)) == 165


def test_multi_index_order():
    idx = fo.multi_indices(2, 2)
    assert idx[0] == (0, 0)
    assert idx[1:3] == [(0, 1), (1, 0)]
    assert sum(idx[-1]) == 2


def test_scale_guards():
    rng = np.random.default_rng(0)
    with pytest.raises(TruncationOverflow):
        fo.check_scale(4, 8)
    with pytest.raises(TruncationOverflow):
        fo.check_scale(2, 15)
    with pytest.raises(PreconditionViolation):
        fo.exp_matrix(np.array([[1.2]]), np.array([0.0]), 8)
    with pytest.raises(PreconditionViolation):
        fo.exp_matrix(fo.haar_unitary(rng, 2), np.zeros(3), 8)


def test_rotation_is_diagonal():
    theta = 0.7
    mat = fo.exp_matrix(np.array([[cmath.exp(1j * theta)]]), np.array([0.0]), 8)
    expected = np.diag([cmath.exp(1j * k * theta) for k in range(9)])
    assert np.abs(mat - expected).max() < 1e-14


def test_pure_translation_vacuum_column():
    # Exp(I, gamma) applied to the vacuum is the normalised coherent
    # vector at -gamma: coefficients (-conj(gamma))^k / k! times the
    # gaussian factor, here in the orthonormal basis
    gamma = 0.3 - 0.2j
    mat = fo.exp_matrix(np.eye(1), np.array([gamma]), 12)
    scalar = math.exp(-0.5 * abs(gamma) ** 2)
    for k in range(10):
        expected = scalar * (-gamma.conjugate()) ** k / math.sqrt(math.factorial(k))
        assert abs(mat[k, 0] - expected) < 1e-14


def test_vacuum_norm_is_one():
    rng = np.random.default_rng(3)
    for dimension, degree in [(1, 12), (2, 10), (3, 8)]:
        t = fo.haar_unitary(rng, dimension)
        gamma = fo.random_translation(rng, dimension)
        assert abs(fo.vacuum_column_norm(t, gamma, degree) - 1.0) < 1e-10


def test_truncation_is_isometric_on_low_degrees():
    rng = np.random.default_rng(7)
    for _ in range(5):
        t = fo.haar_unitary(rng, 2)
        gamma = fo.random_translation(rng, 2)
        mat = fo.exp_matrix(t, gamma, 10)
        indices = fo.multi_indices(2, 10)
        keep = [i for i, idx in enumerate(indices) if sum(idx) <= 4]
        block = mat[:, keep]
        assert np.abs(block.conj().T @ block - np.eye(len(keep))).max() < 1e-9


def test_weyl_relation_for_translations():
    # two pure translations commute up to the symplectic phase of their
    # pairing; this is the product law with both linear parts trivial
    g1, g2 = np.array([0.25 + 0.1j]), np.array([-0.1 + 0.3j])
    lhs = fo.exp_matrix(np.eye(1), g1, 12) @ fo.exp_matrix(np.eye(1), g2, 12)
    pairing = complex(g1[0] * g2[0].conjugate())
    rhs = np.exp(-1j * pairing.imag) * fo.exp_matrix(np.eye(1), g1 + g2, 12)
    indices = fo.multi_indices(1, 12)
    keep = [i for i, idx in enumerate(indices) if 2 * sum(idx) <= 12]
    assert np.abs((lhs - rhs)[np.ix_(keep, keep)]).max() < 1e-8


def test_composition_phase_value():
    t2 = np.eye(1)
    g1, g2 = np.array([0.4]), np.array([0.4j])
    # <g1, g2> = 0.4 * conj(0.4 i) = -0.16 i, so the phase is exp(0.16 i)
    assert abs(fo.composition_phase(t2, g1, g2) - cmath.exp(0.16j)) < 1e-14


def test_product_law_random_cases():
    largest = 0.0
    phase_spread = 0.0
    for i in range(20):
        rng = np.random.default_rng([5, i])
        dimension, degree = (1, 12) if i % 2 == 0 else (2, 10)
        t1 = fo.haar_unitary(rng, dimension)
        t2 = fo.haar_unitary(rng, dimension)
        g1 = fo.random_translation(rng, dimension)
        g2 = fo.random_translation(rng, dimension)
        largest = max(largest, fo.exp_compose_residual(t1, g1, t2, g2, degree))
        phase_spread = max(phase_spread, abs(fo.composition_phase(t2, g1, g2) - 1.0))
    assert largest <= 1e-6
    # the law is only confirmed if its phase is doing visible work
    assert phase_spread > 1e-3


def test_product_law_wrong_conventions_fail():
    rng = np.random.default_rng([5, 3])
    t1, t2 = fo.haar_unitary(rng, 2), fo.haar_unitary(rng, 2)
    g1 = fo.random_translation(rng, 2, scale=0.4)
    g2 = fo.random_translation(rng, 2, scale=0.4)
    degree = 10
    indices = fo.multi_indices(2, degree)
    keep = [i for i, idx in enumerate(indices) if 2 * sum(idx) <= degree]
    block = np.ix_(keep, keep)
    product = fo.exp_matrix(t1, g1, degree) @ fo.exp_matrix(t2, g2, degree)
    phase = fo.composition_phase(t2, g1, g2)

    without_phase = product - fo.exp_matrix(t2 @ t1, t2 @ g1 + g2, degree)
    assert float(np.linalg.norm(without_phase[block])) > 1e-3

    swapped_order = product - phase * fo.exp_matrix(t1 @ t2, t2 @ g1 + g2, degree)
    assert float(np.linalg.norm(swapped_order[block])) > 1e-3


def test_three_fold_associativity():
    # the phases of a triple product must agree whichever way the
    # product is bracketed; this is the cocycle property of the phase
    for seed in range(5):
        rng = np.random.default_rng([9, seed])
        ts = [fo.haar_unitary(rng, 1) for _ in range(3)]
        gs = [fo.random_translation(rng, 1) for _ in range(3)]
        degree = 12

        mats = [fo.exp_matrix(t, g, degree) for t, g in zip(ts, gs)]
        left = (mats[0] @ mats[1]) @ mats[2]
        right = mats[0] @ (mats[1] @ mats[2])
        indices = fo.multi_indices(1, degree)
        keep = [i for i, idx in enumerate(indices) if 3 * sum(idx) <= degree]
        assert np.abs((left - right)[np.ix_(keep, keep)]).max() < 1e-8


def test_haar_unitary_is_unitary():
    rng = np.random.default_rng(13)
    for dimension in (1, 2, 3):
        u = fo.haar_unitary(rng, dimension)
        assert np.abs(u.conj().T @ u - np.eye(dimension)).max() < 1e-12


def test_random_translation_scale():
    rng = np.random.default_rng(17)
    for _ in range(20):
        vec = fo.random_translation(rng, 2, scale=0.3)
        assert float(np.linalg.norm(vec)) <= 0.3 + 1e-12
