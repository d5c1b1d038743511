"""Scalar cocycles: the symplectic phase, measure averages, and the
step-function group over the interval.

Three constructions share a file because they share a shape: each one is
a two-argument scalar on a group (or on measures over it) whose defining
identity

    ``c(g1, g2) + c(g1 g2, g3) = c(g2, g3) + c(g1, g2 g3)``

holds exactly, up to principal-branch bookkeeping that the guards here
make explicit rather than silent.

* For ``Sp(2n, R)`` the scalar is the argument of the determinant of the
  phase factor ``Phi(g) = ((A + D) + i (C - B)) / 2``; its absolute
  determinant is at least one, so ``Phi`` is always invertible for a
  genuine symplectic matrix and a singular value collapse means the
  input was not one.
* For measures on the disc group the scalar integrates the argument of
  the multiplier ratio ``a(gh) / (a(g) a(h))``, which telescopes
  exactly over triple products because the ratio depends only on
  top-left entries.
* The step-function group composes interval rearrangements with
  cell-wise group values; any two-argument scalar on the value group
  integrates to one on the step group, cell by cell.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .errors import (
    BranchGuard,
    ConstraintViolation,
    GroupMismatch,
    IllConditionedPhi,
)
from .exact import QComplex
from .groups import FiniteMeasure, FreeWord, SpMatrix, SuMatrix
from .mobius import gamma_vector, orthonormal_frame, pi_matrix

# ---------------------------------------------------------------------------
# Symplectic phase cocycle
# ---------------------------------------------------------------------------

PHI_SINGULAR_TOL = 1e-6
TAU_BRANCH_MARGIN = 1e-9


def phase_factor(g: SpMatrix) -> np.ndarray:
    """``Phi(g) = ((A + D) + i (C - B)) / 2`` in n x n blocks.

    Sends the planar rotation by ``theta`` to ``exp(-i theta)`` and the
    boost ``diag(e^t, e^{-t})`` to ``cosh t``.
    """
    n = g.n
    e = g.entries
    a, b = e[:n, :n], e[:n, n:]
    c, d = e[n:, :n], e[n:, n:]
    return 0.5 * ((a + d) + 1j * (c - b))


def _checked_phase(g: SpMatrix) -> np.ndarray:
    p = phase_factor(g)
    smallest = float(np.linalg.svd(p, compute_uv=False)[-1])
    if smallest < PHI_SINGULAR_TOL:
        raise IllConditionedPhi(
            f"phase factor has singular value {smallest:.3e}; "
            "the input cannot be symplectic"
        )
    return p


def tau(g1: SpMatrix, g2: SpMatrix, margin: float = TAU_BRANCH_MARGIN) -> float:
    """Phase defect ``Im tr Log(Phi(g1)^-1 Phi(g1 g2) Phi(g2)^-1)``.

    Identity arguments return exactly ``0.0``: the phase factor of the
    identity is the identity matrix, so the defect matrix is too, and
    short-circuiting avoids spending float error on a known value.

    Raises :class:`BranchGuard` when the defect matrix strays far enough
    from the identity that an eigenvalue could reach the branch cut.
    """
    if g1.n != g2.n:
        raise GroupMismatch("size mismatch between symplectic matrices")
    if g1.is_identity() or g2.is_identity():
        return 0.0
    p1 = _checked_phase(g1)
    p2 = _checked_phase(g2)
    p12 = _checked_phase(g1 * g2)
    defect = np.linalg.solve(p1, p12) @ np.linalg.inv(p2)
    distance = float(np.linalg.norm(defect - np.eye(g1.n), 2))
    if distance >= 1.0 - margin:
        raise BranchGuard(
            f"defect matrix sits {distance:.6f} from the identity; "
            "principal logarithms are not trustworthy"
        )
    eigenvalues = np.linalg.eigvals(defect)
    return float(np.sum(np.angle(eigenvalues)))


def tau_det_arg(g1: SpMatrix, g2: SpMatrix) -> float:
    """Independent route to the same scalar through determinants.

    ``arg det`` of the defect matrix agrees with the eigenvalue sum
    modulo ``2 pi``; under the branch guard they agree on the nose.
    """
    if g1.is_identity() or g2.is_identity():
        return 0.0
    p1 = _checked_phase(g1)
    p2 = _checked_phase(g2)
    p12 = _checked_phase(g1 * g2)
    value = np.linalg.det(p12) / (np.linalg.det(p1) * np.linalg.det(p2))
    return float(cmath.phase(value))


def tau_cocycle_residual(g1: SpMatrix, g2: SpMatrix, g3: SpMatrix) -> float:
    """Two-cocycle defect of ``tau``, reduced modulo ``2 pi``."""
    lhs = tau(g1, g2) + tau(g1 * g2, g3)
    rhs = tau(g2, g3) + tau(g1, g2 * g3)
    wrapped = abs(lhs - rhs) % (2.0 * math.pi)
    return min(wrapped, 2.0 * math.pi - wrapped)


# ---------------------------------------------------------------------------
# Multiplier ratio and the measure cocycle
# ---------------------------------------------------------------------------


def multiplier_ratio(g: SuMatrix, h: SuMatrix):
    """``W(g, h) = a(gh) / (a(g) a(h))``; exact for exact inputs.

    Satisfies ``|W - 1| = |b(g) b(h) / (a(g) a(h))| < 1``, so W never
    leaves the right half plane and its argument is always principal.
    Telescopes over triples: ``W(g, h) W(gh, k) = W(h, k) W(g, hk)``,
    both sides being ``a(ghk) / (a(g) a(h) a(k))``.
    """
    prod = g * h
    if g.exact and h.exact:
        return prod.a / (g.a * h.a)
    a_g = g.a.to_complex() if g.exact else complex(g.a)
    a_h = h.a.to_complex() if h.exact else complex(h.a)
    a_gh = prod.a.to_complex() if prod.exact else complex(prod.a)
    return a_gh / (a_g * a_h)


def sigma_pair(g: SuMatrix, h: SuMatrix) -> float:
    """``-Im Log W(g, h)``: the angular part of the multiplier defect."""
    w = multiplier_ratio(g, h)
    if isinstance(w, QComplex):
        w = w.to_complex()
    return -cmath.phase(w)


def sigma_pair_orthogonal(g: FreeWord, h: FreeWord) -> Fraction:
    """Angular part for isometric actions on real spaces: identically zero.

    On a real Hilbert space there is no rotation angle to accumulate, so
    the scalar vanishes atom by atom; keeping the function lets the
    convolution identity be checked in exact arithmetic.
    """
    if not isinstance(g, FreeWord) or not isinstance(h, FreeWord):
        raise GroupMismatch("orthogonal pairing expects reduced words")
    return Fraction(0)


def sigma_measures(mu: FiniteMeasure, nu: FiniteMeasure, pair=sigma_pair):
    """Expectation ``sum_j sum_k p_j q_k sigma(g_j, h_k)``.

    The first argument contributes the left factor of each pair.  Exact
    weights multiply whatever scalar ``pair`` returns, so a Fraction-
    valued pairing yields an exact result.
    """
    total = None
    for g, p in mu.atoms:
        for h, q in nu.atoms:
            term = pair(g, h)
            if isinstance(term, Fraction):
                contribution = p * q * term
            else:
                contribution = float(p * q) * term
            total = contribution if total is None else total + contribution
    if total is None:
        raise ConstraintViolation("measures must have at least one atom")
    return total


def sigma_convolution_residual(
    mu: FiniteMeasure,
    nu: FiniteMeasure,
    rho: FiniteMeasure,
    pair=sigma_pair,
):
    """Defect of the convolution identity; zero up to float rounding.

    ``sigma(mu, nu) + sigma(mu * nu, rho) - sigma(nu, rho) - sigma(mu, nu * rho)``
    cancels pointwise because the multiplier ratio telescopes and each
    factor's argument stays principal.
    """
    from .groups import measure_convolve

    lhs = sigma_measures(mu, nu, pair) + sigma_measures(measure_convolve(mu, nu), rho, pair)
    rhs = sigma_measures(nu, rho, pair) + sigma_measures(mu, measure_convolve(nu, rho), pair)
    return abs(lhs - rhs)


def sigma_gram_form(mu: FiniteMeasure, nu: FiniteMeasure) -> float:
    """The same expectation through closed-form grams.

    Each pair contributes ``Im <gamma(h^{-1}), gamma(g)>``, so the whole
    sum is the imaginary pairing of the two averaged cocycle vectors.
    """
    from .mobius import gamma_gram

    total = 0.0
    for g, p in mu.atoms:
        for h, q in nu.atoms:
            total += float(p * q) * gamma_gram(h.inverse(), g).imag
    return total


def average_operator(mu: FiniteMeasure, degree: int = 60) -> np.ndarray:
    """Average of the function-space operators over the measure.

    Returned in the orthonormal frame, where each summand is a corner of
    a unitary; the convex combination therefore has operator norm at
    most one, up to truncation rounding.
    """
    out = None
    for g, p in mu.atoms:
        block = float(p) * orthonormal_frame(pi_matrix(g, degree))
        out = block if out is None else out + block
    if out is None:
        raise ConstraintViolation("measure must have at least one atom")
    return out


def average_displacement_vector(mu: FiniteMeasure, degree: int = 60) -> np.ndarray:
    """Average of the cocycle coefficient vectors over the measure."""
    out = None
    for g, p in mu.atoms:
        vec = float(p) * gamma_vector(g, degree)
        out = vec if out is None else out + vec
    if out is None:
        raise ConstraintViolation("measure must have at least one atom")
    return out


# ---------------------------------------------------------------------------
# Exact symplectic pairing on complex lattices
# ---------------------------------------------------------------------------

LatticeCombo = Sequence[Tuple[Fraction, Tuple[QComplex, ...]]]


def lattice_sigma(first: LatticeCombo, second: LatticeCombo) -> Fraction:
    """``sum alpha alpha' Im <v, v'>`` over two formal combinations.

    The hermitian pairing of coordinate tuples has an exact imaginary
    part in rational arithmetic; the basis vectors ``(1,)`` and ``(i,)``
    pair to ``-1``.
    """
    total = Fraction(0)
    for alpha, vec in first:
        for beta, wec in second:
            if len(vec) != len(wec):
                raise ConstraintViolation("lattice vectors must share a dimension")
            inner = QComplex(0, 0)
            for x, y in zip(vec, wec):
                inner = inner + x * y.conj()
            total += Fraction(alpha) * Fraction(beta) * inner.im
    return total


# ---------------------------------------------------------------------------
# Step-function group over dyadic partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepAutomorphism:
    """Dyadic rearrangement of ``[0, 1)`` with a group value per cell.

    ``perm`` sends source cell index to target cell index among the
    ``2**level`` equal cells; ``values`` attaches a group element to each
    source cell.  The element acts on pairs ``(x, g)`` by moving ``x``
    to its permuted cell and multiplying ``g`` by the cell's value.
    """

    level: int
    perm: Tuple[int, ...]
    values: Tuple[object, ...]

    def __post_init__(self):
        cells = 2**self.level
        if sorted(self.perm) != list(range(cells)):
            raise ConstraintViolation(
                f"perm must permute {cells} cells, got {self.perm!r}"
            )
        if len(self.values) != cells:
            raise ConstraintViolation(
                f"expected {cells} values, got {len(self.values)}"
            )

    def refine(self, levels: int = 1) -> "StepAutomorphism":
        """Split every cell in half ``levels`` times, preserving the map.

        Each child follows its parent with order preserved inside the
        cell, and inherits the parent's value.
        """
        out = self
        for _ in range(levels):
            perm = []
            values = []
            for i, target in enumerate(out.perm):
                perm.extend((2 * target, 2 * target + 1))
                values.extend((out.values[i], out.values[i]))
            out = StepAutomorphism(out.level + 1, tuple(perm), tuple(values))
        return out

    def at_level(self, level: int) -> "StepAutomorphism":
        if level < self.level:
            raise ConstraintViolation(
                f"cannot coarsen from level {self.level} to {level}"
            )
        return self.refine(level - self.level)

    def compose(self, other: "StepAutomorphism", convention: str = "left") -> "StepAutomorphism":
        """Product acting second-then-first, like function composition.

        ``convention`` fixes which side the value group multiplies on:
        ``"left"`` gives cell value ``v1(p2 x) v2(x)``, ``"right"`` gives
        ``v2(x) v1(p2 x)``.  Both choices are associative; they present
        the same abstract group with the value group's order reversed.
        """
        if convention not in ("left", "right"):
            raise ConstraintViolation(f"unknown convention {convention!r}")
        level = max(self.level, other.level)
        f1 = self.at_level(level)
        f2 = other.at_level(level)
        perm = tuple(f1.perm[f2.perm[i]] for i in range(2**level))
        if convention == "left":
            values = tuple(
                f1.values[f2.perm[i]] * f2.values[i] for i in range(2**level)
            )
        else:
            values = tuple(
                f2.values[i] * f1.values[f2.perm[i]] for i in range(2**level)
            )
        return StepAutomorphism(level, perm, values)

    def __mul__(self, other: "StepAutomorphism") -> "StepAutomorphism":
        return self.compose(other, "left")


def identity_step(level: int, unit) -> StepAutomorphism:
    cells = 2**level
    return StepAutomorphism(level, tuple(range(cells)), (unit,) * cells)


def step_cocycle(
    f1: StepAutomorphism,
    f2: StepAutomorphism,
    pair: Callable[[object, object], float],
) -> float:
    """Integrate a two-argument scalar over the common refinement.

    Cell ``i`` of the product sees the pair ``(v1(p2 i), v2(i))``; each
    cell carries its length ``2**-level``.
    """
    level = max(f1.level, f2.level)
    g1 = f1.at_level(level)
    g2 = f2.at_level(level)
    weight = Fraction(1, 2**level)
    total = None
    for i in range(2**level):
        term = pair(g1.values[g2.perm[i]], g2.values[i])
        if isinstance(term, Fraction):
            contribution = weight * term
        else:
            contribution = float(weight) * term
        total = contribution if total is None else total + contribution
    return total


def step_cocycle_residual(
    f1: StepAutomorphism,
    f2: StepAutomorphism,
    f3: StepAutomorphism,
    pair: Callable[[object, object], float],
) -> float:
    """Two-cocycle defect of the integrated scalar.

    Reduces cell by cell to the defect of ``pair`` on the value group,
    so it vanishes whenever the underlying scalar's identity holds on
    every triple of cell values.
    """
    lhs = step_cocycle(f1, f2, pair) + step_cocycle(f1 * f2, f3, pair)
    rhs = step_cocycle(f2, f3, pair) + step_cocycle(f1, f2 * f3, pair)
    return abs(lhs - rhs)


def random_step_automorphism(
    rng: np.random.Generator,
    level: int,
    value_factory: Callable[[np.random.Generator], object],
) -> StepAutomorphism:
    cells = 2**level
    perm = tuple(int(i) for i in rng.permutation(cells))
    values = tuple(value_factory(rng) for _ in range(cells))
    return StepAutomorphism(level, perm, values)


def step_to_json(f: StepAutomorphism, value_encoder: Callable[[object], object]) -> dict:
    return {
        "cells": 2**f.level,
        "perm": list(f.perm),
        "values": [value_encoder(v) for v in f.values],
    }


def step_from_json(data: dict, value_decoder: Callable[[object], object]) -> StepAutomorphism:
    cells = data.get("cells")
    if not isinstance(cells, int) or cells < 1 or cells & (cells - 1):
        raise ConstraintViolation(f"cells must be a power of two, got {cells!r}")
    level = cells.bit_length() - 1
    perm = data.get("perm")
    values = data.get("values")
    if not isinstance(perm, list) or not isinstance(values, list):
        raise ConstraintViolation("step descriptor needs 'perm' and 'values' lists")
    return StepAutomorphism(
        level,
        tuple(int(i) for i in perm),
        tuple(value_decoder(v) for v in values),
    )
