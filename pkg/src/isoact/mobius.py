"""The affine action on the weighted analytic function space of the disc.

A matrix ``g = (a b; conj(b) conj(a))`` acts on the disc by fractional
linear maps.  On functions, the weight-two action

    ``(pi(g) f)(z) = f(z^[g]) (conj(b) z + conj(a))^{-2}``

composes contravariantly, ``pi(g1) pi(g2) = pi(g2 g1)``, because the point
map itself composes covariantly.  The logarithmic-derivative cocycle

    ``gamma(g)(z) = conj(b) / (conj(b) z + conj(a))``

satisfies ``gamma(g1 g2) = pi(g2) gamma(g1) + gamma(g2)`` on the nose, a
chain-rule identity that the tests probe both pointwise and in coefficient
space.  Monomials are orthogonal with ``<z^n, z^m> = delta / (n + 1)``,
which makes every norm and gram here a closed form:

* ``|gamma(g)|^2 = 2 log |a|``,
* ``<gamma(g1), gamma(g2)> = -Log(1 - conj(b1) b2 / (conj(a1) a2))``,

with the principal branch always applicable since ``|b| < |a|``.

Matrix truncations of ``pi(g)`` are computed by a column recurrence: the
k-th column is the previous one convolved with the power series of the
point map.  Rows up to the truncation degree come out exactly (the series
are lower-degree-closed), avoiding the violent cancellation a direct
binomial expansion would produce at high degree.
"""

from __future__ import annotations

import cmath
import math
from typing import List, Sequence, Tuple

import numpy as np

from .errors import (
    BranchGuard,
    ConstraintViolation,
    IllConditionedPhi,
    OutsideDisc,
)
from .exact import QComplex
from .groups import SuMatrix

# ---------------------------------------------------------------------------
# Disc geometry
# ---------------------------------------------------------------------------


def poincare_distance(z1: complex, z2: complex) -> float:
    """Hyperbolic distance in the unit disc (curvature -1 normalisation
    with ``d(0, tanh t) = t``)."""
    if abs(z1) >= 1 or abs(z2) >= 1:
        raise OutsideDisc(f"points must lie strictly inside the disc: {z1}, {z2}")
    num = abs(1 - z1.conjugate() * z2)
    sep = abs(z2 - z1)
    return 0.5 * math.log((num + sep) / (num - sep))


def displacement(g: SuMatrix) -> float:
    """``d(0, g 0) = log(|a| + |b|)``."""
    a = g.a.to_complex() if g.exact else complex(g.a)
    b = g.b.to_complex() if g.exact else complex(g.b)
    return math.log(abs(a) + abs(b))


def phi(g: SuMatrix) -> float:
    """Squared cocycle norm ``|gamma(g)|^2 = 2 log |a|``."""
    a = g.a.to_complex() if g.exact else complex(g.a)
    return math.log(a.real * a.real + a.imag * a.imag)


def gram_ratio(g1: SuMatrix, g2: SuMatrix):
    """``u = conj(b1) b2 / (conj(a1) a2)``; exact when both inputs are.

    Always ``|u| < 1``, so ``1 - u`` stays in the principal branch domain.
    """
    if g1.exact and g2.exact:
        return g1.b.conj() * g2.b / (g1.a.conj() * g2.a)
    a1, b1 = complex(g1.a), complex(g1.b)
    a2, b2 = complex(g2.a), complex(g2.b)
    return b1.conjugate() * b2 / (a1.conjugate() * a2)


def gamma_gram(g1: SuMatrix, g2: SuMatrix) -> complex:
    """Closed form ``<gamma(g1), gamma(g2)> = -Log(1 - u)``."""
    u = gram_ratio(g1, g2)
    if isinstance(u, QComplex):
        u = u.to_complex()
    return -cmath.log(1 - u)


def asymptotic_error(g: SuMatrix) -> float:
    """``|gamma(g)|^2 - 2 d(0, g0) + 2 log 2``, nonnegative and -> 0.

    The squared norm tracks twice the displacement up to the additive
    constant ``-2 log 2``; the error equals ``2 log(2|a| / (|a| + |b|))``.
    """
    a = abs(g.a.to_complex() if g.exact else complex(g.a))
    b = abs(g.b.to_complex() if g.exact else complex(g.b))
    return 2.0 * math.log(2.0 * a / (a + b))


# ---------------------------------------------------------------------------
# Coefficient space
# ---------------------------------------------------------------------------


def bergman_inner(f: Sequence[complex], g: Sequence[complex]) -> complex:
    """``sum f_k conj(g_k) / (k + 1)`` over the shorter length."""
    return sum(fk * complex(gk).conjugate() / (k + 1) for k, (fk, gk) in enumerate(zip(f, g)))

def bergman_norm2(f: Sequence[complex]) -> float:
    return sum(abs(fk) ** 2 / (k + 1) for k, fk in enumerate(f))


def gamma_vector(g: SuMatrix, degree: int) -> np.ndarray:
    """Monomial coefficients of ``gamma(g)`` up to ``z^degree``.

    The geometric expansion gives ``c_k = (conj(b)/conj(a))dot
    (-conj(b)/conj(a))^k``.
    """
    a = g.a.to_complex() if g.exact else complex(g.a)
    b = g.b.to_complex() if g.exact else complex(g.b)
    base = b.conjugate() / a.conjugate()
    out = np.empty(degree + 1, dtype=complex)
    val = base
    for k in range(degree + 1):
        out[k] = val
        val *= -base
    return out


def gamma_eval(g: SuMatrix, z: complex) -> complex:
    a = g.a.to_complex() if g.exact else complex(g.a)
    b = g.b.to_complex() if g.exact else complex(g.b)
    return b.conjugate() / (b.conjugate() * z + a.conjugate())


def pi_eval(g: SuMatrix, f, z: complex) -> complex:
    """Pointwise weight-two action on a callable function."""
    a = g.a.to_complex() if g.exact else complex(g.a)
    b = g.b.to_complex() if g.exact else complex(g.b)
    denom = b.conjugate() * z + a.conjugate()
    return f((a * z + b) / denom) / (denom * denom)


def pi_matrix(g: SuMatrix, degree: int) -> np.ndarray:
    """Truncation of ``pi(g)`` on monomial coefficients up to ``z^degree``.

    Column ``k`` holds the coefficients of ``pi(g) z^k``.  The recurrence
    multiplies by the point-map series, so every retained row is free of
    truncation error; only columns beyond ``degree`` are missing.
    """
    a = g.a.to_complex() if g.exact else complex(g.a)
    b = g.b.to_complex() if g.exact else complex(g.b)
    ac, bc = a.conjugate(), b.conjugate()
    n = degree + 1
    ratio = -bc / ac
    geom = np.power(ratio, np.arange(n))
    # (conj(b) z + conj(a))^{-2} and the point-map series T(z)
    col = (np.arange(1, n + 1) * geom) / (ac * ac)
    tser = (b * geom + np.concatenate(([0], a * geom[:-1]))) / ac
    mat = np.empty((n, n), dtype=complex)
    mat[:, 0] = col
    for k in range(1, n):
        col = np.convolve(col, tser)[:n]
        mat[:, k] = col
    return mat


def orthonormal_frame(mat: np.ndarray) -> np.ndarray:
    """Rescale a monomial-coefficient matrix to the orthonormal basis
    ``sqrt(k+1) z^k``, in which ``pi(g)`` is unitary."""
    n = mat.shape[0]
    scale = np.sqrt(np.arange(1, n + 1))
    return mat * (scale[None, :] / scale[:, None])


def affine_cocycle_residual(g1: SuMatrix, g2: SuMatrix, degree: int = 120, rows: int | None = None) -> float:
    """Norm of ``gamma(g1 g2) - pi(g2) gamma(g1) - gamma(g2)``.

    Computed on coefficients up to ``degree`` and measured in the true
    weighted norm over rows up to ``rows`` (default half the degree).  The
    only inexactness is the missing columns beyond ``degree``, which decay
    geometrically in the moduli ratio of ``g1``.
    """
    if rows is None:
        rows = degree // 2
    v12 = gamma_vector(g1 * g2, degree)
    v1 = gamma_vector(g1, degree)
    v2 = gamma_vector(g2, degree)
    defect = v12 - pi_matrix(g2, degree) @ v1 - v2
    return math.sqrt(bergman_norm2(defect[: rows + 1]))


def inverse_cocycle_residual(g: SuMatrix, degree: int = 120, rows: int | None = None) -> float:
    """Norm of ``gamma(g^{-1}) + pi(g^{-1}) gamma(g)``; zero in theory."""
    if rows is None:
        rows = degree // 2
    gi = g.inverse()
    defect = gamma_vector(gi, degree) + pi_matrix(gi, degree) @ gamma_vector(g, degree)
    return math.sqrt(bergman_norm2(defect[: rows + 1]))


# ---------------------------------------------------------------------------
# Translation lengths in the disc
# ---------------------------------------------------------------------------

PARABOLIC_TOL = 1e-9


def hyperbolic_length(g: SuMatrix, tol: float = PARABOLIC_TOL) -> float:
    """Minimal displacement ``inf_z d(z, g z)``.

    Positive exactly when ``|trace| > 2``: the multiplier ``lambda`` is the
    larger root of ``x^2 - |tr| x + 1`` and the length is ``log lambda``.
    Elliptic and parabolic (within ``tol`` of ``|trace| = 2``) give zero.
    """
    tr = abs(g.trace())
    if tr <= 2.0 + tol:
        return 0.0
    half = tr / 2.0
    return math.log(half + math.sqrt(half * half - 1.0))


def min_displacement_grid(g: SuMatrix, r_max: float = 0.95, nr: int = 40, ntheta: int = 160) -> float:
    """Brute-force displacement minimum over a polar grid, for cross-checks.

    Never below the true length; exceeds it only by the grid resolution
    around the axis.
    """
    best = math.inf
    for i in range(1, nr + 1):
        r = r_max * i / nr
        for j in range(ntheta):
            z = r * cmath.exp(2j * math.pi * j / ntheta)
            best = min(best, poincare_distance(z, g.mobius(z)))
    return min(best, poincare_distance(0.0, g.mobius(0.0)))


def conjugated_boost(u: SuMatrix, t: float) -> SuMatrix:
    """``u boost(t) u^{-1}``: a hyperbolic element with translated axis."""
    from .groups import su_boost

    return u * su_boost(t) * u.inverse()


def axis_distance_from_origin(u: SuMatrix) -> float:
    """Distance from the origin to the axis of ``u boost u^{-1}``.

    The axis is the image of the real diameter under ``u``.  In the
    normalisation ``d(0, tanh t) = t`` the distance satisfies
    ``sinh(2 d) = 2 |Im(conj(p) q)|`` for ``u = (p, q)``.
    """
    p = u.a.to_complex() if u.exact else complex(u.a)
    q = u.b.to_complex() if u.exact else complex(u.b)
    return 0.5 * math.asinh(2.0 * abs((p.conjugate() * q).imag))


def length_deviation_sequence(g: SuMatrix, n_max: int) -> List[float]:
    """``|gamma(g^n)|^2 - 2 n length(g)`` for ``n = 1 .. n_max``.

    Stays bounded for hyperbolic ``g``: every term lies within
    ``2 log 2 + 2 log cosh(2 d)`` of zero, where ``d`` is the distance
    from the origin to the axis.
    """
    ell = hyperbolic_length(g)
    out = []
    power = g
    for n in range(1, n_max + 1):
        out.append(phi(power) - 2.0 * n * ell)
        power = power * g
    return out


def power_growth(norms: Sequence[float]) -> Tuple[float, float]:
    """``(sup, slope)`` of a sequence: the slope is fitted over the last
    half, distinguishing linear growth from boundedness."""
    vals = list(map(float, norms))
    if len(vals) < 4:
        raise ConstraintViolation("need at least 4 samples to estimate growth")
    half = len(vals) // 2
    xs = np.arange(half, len(vals), dtype=float)
    ys = np.array(vals[half:])
    slope = float(np.polyfit(xs, ys, 1)[0])
    return max(vals), slope


# ---------------------------------------------------------------------------
# Conditionally negative kernels and the induced gram
# ---------------------------------------------------------------------------


def square_displacement(g: SuMatrix) -> float:
    """``d(0, g 0)^2``; a kernel that fails conditional negativity."""
    return displacement(g) ** 2


def kernel_matrix(elements: Sequence[SuMatrix], kernel) -> np.ndarray:
    """``Q[i, j] = kernel(g_i^{-1} g_j)``."""
    m = len(elements)
    out = np.empty((m, m))
    for i, gi in enumerate(elements):
        for j, gj in enumerate(elements):
            out[i, j] = kernel(gi.inverse() * gj)
    return out


def centered_max_eigenvalue(q: np.ndarray) -> float:
    """Largest eigenvalue of ``P Q P`` for the mean-centering projector P.

    Nonpositive (up to rounding) exactly when Q is conditionally negative
    definite on the zero-sum hyperplane.
    """
    m = q.shape[0]
    p = np.eye(m) - np.full((m, m), 1.0 / m)
    sym = p @ ((q + q.T) / 2.0) @ p
    return float(np.max(np.linalg.eigvalsh(sym)))


def gns_gram(elements: Sequence[SuMatrix]) -> np.ndarray:
    """``G[i, j] = (phi(g_i) + phi(g_j) - phi(g_i g_j^{-1})) / 2``.

    Equals the real part of the closed-form gram entry for entry: both
    sides compute ``Re <gamma(g_i), gamma(g_j)>``.
    """
    m = len(elements)
    phis = [phi(g) for g in elements]
    out = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            out[i, j] = 0.5 * (phis[i] + phis[j] - phi(elements[i] * elements[j].inverse()))
    return out


def gns_vectors(gram: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Rows are vectors realising the gram; fails loudly off the cone.

    Raises :class:`IllConditionedPhi` when the gram has an eigenvalue more
    negative than ``tol`` times the largest, which would mean the kernel
    arithmetic upstream produced something that is not a gram at all.
    """
    sym = (gram + gram.T) / 2.0
    vals, vecs = np.linalg.eigh(sym)
    top = max(float(vals[-1]), 1.0)
    if float(vals[0]) < -tol * top:
        raise IllConditionedPhi(f"gram eigenvalue {vals[0]:.3e} is negative beyond tolerance")
    clipped = np.clip(vals, 0.0, None)
    return vecs @ np.diag(np.sqrt(clipped))


def branch_guard_ratio(g1: SuMatrix, g2: SuMatrix, margin: float = 1e-9) -> None:
    """Assert the gram ratio keeps a margin from the branch cut.

    The constraint makes ``|u| < 1`` automatic; this guard rejects inputs
    so extreme that float rounding could push ``|u|`` to 1.
    """
    u = gram_ratio(g1, g2)
    if isinstance(u, QComplex):
        u = u.to_complex()
    if abs(u) >= 1.0 - margin:
        raise BranchGuard(f"|u| = {abs(u):.12f} leaves no branch margin")
