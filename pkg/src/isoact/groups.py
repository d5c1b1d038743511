"""Group elements used across the package.

Four families of elements appear in the affine-action constructions:

* :class:`SuMatrix` - pseudo-unitary 2x2 matrices ``(a b; conj(b) conj(a))``
  with ``|a|^2 - |b|^2 = 1``, acting on the unit disc.
* :class:`SpMatrix` - real ``2n x 2n`` matrices preserving the standard
  skew form.
* :class:`FreeWord` - reduced words in a finitely generated free group.
* :class:`PAdicScalar` - exact rationals carrying a prime valuation.

plus :class:`FiniteMeasure`, a finitely supported probability measure with
exact rational weights over any of the above.

Entries of :class:`SuMatrix` come in two backends: Python ``complex`` for
asymptotic work and :class:`~isoact.exact.QComplex` for identities that must
hold with zero residual.  Operations never mix backends silently.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BadGeneratorIndex,
    ConstraintViolation,
    GroupMismatch,
)
from .exact import QComplex, format_fraction, parse_fraction

ComplexLike = Union[complex, QComplex]

SU_CONSTRAINT_TOL = 1e-12


def _conj(z: ComplexLike) -> ComplexLike:
    return z.conj() if isinstance(z, QComplex) else z.conjugate()


def _abs2(z: ComplexLike):
    return z.abs2() if isinstance(z, QComplex) else (z.real * z.real + z.imag * z.imag)


def _to_complex(z: ComplexLike) -> complex:
    return z.to_complex() if isinstance(z, QComplex) else complex(z)


# ---------------------------------------------------------------------------
# SU(1,1)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuMatrix:
    """An element ``(a b; conj(b) conj(a))`` with ``|a|^2 - |b|^2 = 1``.

    The two entries fully determine the matrix.  ``exact`` entries are
    :class:`QComplex`; float entries are Python ``complex``.
    """

    a: ComplexLike
    b: ComplexLike

    @property
    def exact(self) -> bool:
        return isinstance(self.a, QComplex)

    def defect(self) -> float:
        """``|a|^2 - |b|^2 - 1`` as a float (0.0 for valid exact entries)."""
        return float(_abs2(self.a) - _abs2(self.b) - 1)

    def __mul__(self, other: "SuMatrix") -> "SuMatrix":
        if self.exact != other.exact:
            raise GroupMismatch("cannot multiply exact and float SuMatrix values")
        a = self.a * other.a + self.b * _conj(other.b)
        b = self.a * other.b + self.b * _conj(other.a)
        return SuMatrix(a, b)

    def inverse(self) -> "SuMatrix":
        """Structure-preserving inverse ``(conj(a), -b)``."""
        return SuMatrix(_conj(self.a), -self.b)

    def matrix(self) -> np.ndarray:
        """The full 2x2 complex matrix."""
        a, b = _to_complex(self.a), _to_complex(self.b)
        return np.array([[a, b], [b.conjugate(), a.conjugate()]], dtype=complex)

    def mobius(self, z: complex) -> complex:
        """Disc automorphism ``z -> (a z + b) / (conj(b) z + conj(a))``."""
        a, b = _to_complex(self.a), _to_complex(self.b)
        return (a * z + b) / (b.conjugate() * z + a.conjugate())

    def ratio(self) -> float:
        """``|b/a|``, always ``< 1``."""
        return math.sqrt(float(_abs2(self.b)) / float(_abs2(self.a)))

    def trace(self) -> float:
        return 2.0 * _to_complex(self.a).real

    def to_float(self) -> "SuMatrix":
        return SuMatrix(_to_complex(self.a), _to_complex(self.b))

    def is_identity(self) -> bool:
        if self.exact:
            return self.a == QComplex(1, 0) and self.b.is_zero()
        return self.a == 1 and self.b == 0


def su_from_params(a: ComplexLike, b: ComplexLike) -> SuMatrix:
    """Build an :class:`SuMatrix`, enforcing ``|a|^2 - |b|^2 = 1``.

    Exact entries must satisfy the constraint exactly; float entries within
    ``1e-12``.  Raises :class:`ConstraintViolation` otherwise.
    """
    a_exact = isinstance(a, QComplex)
    b_exact = isinstance(b, QComplex)
    if a_exact != b_exact:
        raise ConstraintViolation("entries must share a backend (both exact or both float)")
    g = SuMatrix(a, b)
    if a_exact:
        if _abs2(a) - _abs2(b) != 1:
            raise ConstraintViolation(
                f"|a|^2 - |b|^2 = {_abs2(a) - _abs2(b)} != 1 (exact entries)"
            )
    else:
        defect = g.defect()
        if abs(defect) > SU_CONSTRAINT_TOL:
            raise ConstraintViolation(f"|a|^2 - |b|^2 - 1 = {defect:.3e} exceeds 1e-12")
    return g


def su_identity(exact: bool = False) -> SuMatrix:
    if exact:
        return SuMatrix(QComplex(1, 0), QComplex(0, 0))
    return SuMatrix(complex(1.0), complex(0.0))


def su_boost(t: float) -> SuMatrix:
    """Hyperbolic element ``(cosh t, sinh t)`` moving 0 to ``tanh t``."""
    return SuMatrix(complex(math.cosh(t)), complex(math.sinh(t)))


def su_rotation(theta: float) -> SuMatrix:
    """Elliptic element ``(e^{i theta}, 0)`` fixing the disc centre."""
    return SuMatrix(cmath.exp(1j * theta), complex(0.0))


def su_random(rng: np.random.Generator, max_ratio: float = 0.8) -> SuMatrix:
    """Random float element with ``|b/a| <= max_ratio``.

    Draws the modulus ratio uniformly in ``[0, max_ratio]`` and both phases
    uniformly, then solves the constraint for the moduli.
    """
    w = float(rng.uniform(0.0, max_ratio))
    phase_a = float(rng.uniform(0.0, 2.0 * math.pi))
    phase_b = float(rng.uniform(0.0, 2.0 * math.pi))
    mod_a = 1.0 / math.sqrt(1.0 - w * w)
    mod_b = w * mod_a
    return SuMatrix(mod_a * cmath.exp(1j * phase_a), mod_b * cmath.exp(1j * phase_b))


def su_rational_boost(t: Fraction) -> SuMatrix:
    """Exact boost-like element ``a = (1+t^2)/(1-t^2)``, ``b = 2t/(1-t^2)``."""
    t = Fraction(t)
    if abs(t) >= 1:
        raise ConstraintViolation("rational boost parameter must satisfy |t| < 1")
    d = 1 - t * t
    return su_from_params(QComplex((1 + t * t) / d, 0), QComplex(2 * t / d, 0))


def su_rational_rotation(t: Fraction) -> SuMatrix:
    """Exact elliptic element with ``a = ((1-t^2) + 2ti)/(1+t^2)``, ``b = 0``."""
    t = Fraction(t)
    d = 1 + t * t
    return su_from_params(QComplex((1 - t * t) / d, 2 * t / d), QComplex(0, 0))


def su_to_json(g: SuMatrix) -> dict:
    if g.exact:
        return {
            "a": [format_fraction(g.a.re), format_fraction(g.a.im)],
            "b": [format_fraction(g.b.re), format_fraction(g.b.im)],
        }
    return {
        "a": [g.a.real, g.a.imag],
        "b": [g.b.real, g.b.imag],
    }


def su_from_json(data: dict) -> SuMatrix:
    """Parse ``{"a": [re, im], "b": [re, im]}``.

    Entries given as strings (or integers) are read as exact rationals;
    float entries produce a float-backend matrix.
    """
    try:
        a_re, a_im = data["a"]
        b_re, b_im = data["b"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConstraintViolation(f"malformed SuMatrix JSON: {data!r}") from exc
    parts = [a_re, a_im, b_re, b_im]
    if all(isinstance(p, (str, int)) for p in parts):
        vals = [parse_fraction(p) for p in parts]
        return su_from_params(QComplex(vals[0], vals[1]), QComplex(vals[2], vals[3]))
    return su_from_params(complex(float(a_re), float(a_im)), complex(float(b_re), float(b_im)))


# ---------------------------------------------------------------------------
# Sp(2n, R)
# ---------------------------------------------------------------------------


SP_CONSTRAINT_TOL = 1e-10


def sp_form(n: int) -> np.ndarray:
    """The block skew form ``(0 I; -I 0)`` on R^{2n}."""
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


@dataclass(frozen=True)
class SpMatrix:
    """A real ``2n x 2n`` matrix with ``g J g^T = J``."""

    entries: np.ndarray
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=float))
        self.entries.setflags(write=False)

    def defect(self) -> float:
        J = sp_form(self.n)
        return float(np.max(np.abs(self.entries @ J @ self.entries.T - J)))

    def __mul__(self, other: "SpMatrix") -> "SpMatrix":
        if self.n != other.n:
            raise GroupMismatch("size mismatch between symplectic matrices")
        return SpMatrix(self.entries @ other.entries, self.n)

    def inverse(self) -> "SpMatrix":
        """Structure-preserving inverse ``-J g^T J``."""
        J = sp_form(self.n)
        return SpMatrix(-J @ self.entries.T @ J, self.n)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, np.eye(2 * self.n)))


def sp_from_entries(entries, n: int | None = None) -> SpMatrix:
    arr = np.asarray(entries, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2 != 0:
        raise ConstraintViolation(f"expected a square even-sized matrix, got shape {arr.shape}")
    if n is None:
        n = arr.shape[0] // 2
    if arr.shape[0] != 2 * n:
        raise ConstraintViolation(f"shape {arr.shape} does not match n={n}")
    g = SpMatrix(arr, n)
    defect = g.defect()
    if defect > SP_CONSTRAINT_TOL:
        raise ConstraintViolation(f"skew-form residual {defect:.3e} exceeds 1e-10")
    return g


def sp_identity(n: int) -> SpMatrix:
    return SpMatrix(np.eye(2 * n), n)


def sp_rotation(theta: float) -> SpMatrix:
    """Planar rotation ``(cos, sin; -sin, cos)`` in Sp(2, R)."""
    c, s = math.cos(theta), math.sin(theta)
    return SpMatrix(np.array([[c, s], [-s, c]]), 1)


def sp_boost(t: float) -> SpMatrix:
    """Diagonal element ``diag(e^t, e^{-t})`` in Sp(2, R)."""
    return SpMatrix(np.diag([math.exp(t), math.exp(-t)]), 1)


def sp_random(rng: np.random.Generator, n: int, scale: float = 0.4) -> SpMatrix:
    """Random element ``expm(J S)`` with S symmetric of size 2n.

    ``scale`` controls how far from the identity the sample sits; moderate
    values keep principal-branch guards comfortably satisfied downstream.
    """
    import scipy.linalg

    raw = rng.normal(0.0, scale, size=(2 * n, 2 * n))
    S = (raw + raw.T) / 2.0
    g = scipy.linalg.expm(sp_form(n) @ S)
    return SpMatrix(g, n)


# ---------------------------------------------------------------------------
# Free groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreeWord:
    """A reduced word in the free group on ``rank`` generators.

    Letters are nonzero integers: ``k`` stands for the k-th generator and
    ``-k`` for its inverse.  The tuple is always fully reduced.

    Examples
    --------
    >>> w = free_reduce([1, 2, -2, 1], rank=2)
    >>> w.letters
    (1, 1)
    >>> (w * w.inverse()).letters
    ()
    """

    letters: Tuple[int, ...]
    rank: int

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if self.rank != other.rank:
            raise GroupMismatch("free words over different ranks")
        return free_reduce(self.letters + other.letters, self.rank)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(-l for l in reversed(self.letters)), self.rank)

    def __pow__(self, k: int) -> "FreeWord":
        if k < 0:
            return self.inverse() ** (-k)
        out = FreeWord((), self.rank)
        for _ in range(k):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def cyclic_reduce(self) -> Tuple["FreeWord", "FreeWord"]:
        """Return ``(core, c)`` with ``self = c * core * c.inverse()``.

        ``core`` is cyclically reduced (its first letter is not the inverse
        of its last).  ``c`` is the stripped prefix, possibly empty.
        """
        letters = list(self.letters)
        prefix: list[int] = []
        while len(letters) >= 2 and letters[0] == -letters[-1]:
            prefix.append(letters[0])
            letters = letters[1:-1]
        return FreeWord(tuple(letters), self.rank), FreeWord(tuple(prefix), self.rank)


def free_reduce(letters: Iterable[int], rank: int) -> FreeWord:
    """Fully reduce a raw letter sequence.

    Reduction by a stack scan; the result is independent of cancellation
    order (free-group words have unique reduced forms).  Raises
    :class:`BadGeneratorIndex` for letters outside ``1..rank`` in modulus.
    """
    stack: list[int] = []
    for letter in letters:
        if not isinstance(letter, int) or letter == 0 or abs(letter) > rank:
            raise BadGeneratorIndex(f"letter {letter!r} outside generators 1..{rank}")
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return FreeWord(tuple(stack), rank)


def word_from_json(data: Sequence[int], rank: int) -> FreeWord:
    return free_reduce(tuple(int(x) for x in data), rank)


def word_to_json(w: FreeWord) -> list:
    return list(w.letters)


def random_word(rng: np.random.Generator, rank: int, length: int) -> FreeWord:
    """Uniform random reduced word of exactly ``length`` letters."""
    if length == 0:
        return FreeWord((), rank)
    alphabet = [k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)]
    letters = [alphabet[int(rng.integers(0, len(alphabet)))]]
    while len(letters) < length:
        choices = [l for l in alphabet if l != -letters[-1]]
        letters.append(choices[int(rng.integers(0, len(choices)))])
    return FreeWord(tuple(letters), rank)


# ---------------------------------------------------------------------------
# p-adic scalars
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PAdicScalar:
    """An exact rational together with a prime for valuation questions."""

    value: Fraction
    p: int

    def __post_init__(self) -> None:
        if self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p**0.5) + 1)):
            raise ConstraintViolation(f"{self.p} is not prime")
        object.__setattr__(self, "value", Fraction(self.value))

    def __mul__(self, other: "PAdicScalar") -> "PAdicScalar":
        if self.p != other.p:
            raise GroupMismatch("p-adic scalars over different primes")
        return PAdicScalar(self.value * other.value, self.p)


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(x: PAdicScalar) -> Union[int, float]:
    """Exact valuation ``v_p``; ``+inf`` for zero.

    >>> padic_valuation(PAdicScalar(Fraction(9, 4), 3))
    2
    """
    if x.value == 0:
        return math.inf
    return _int_valuation(x.value.numerator, x.p) - _int_valuation(x.value.denominator, x.p)


# ---------------------------------------------------------------------------
# Finitely supported probability measures
# ---------------------------------------------------------------------------


def _default_key(elem) -> str:
    if isinstance(elem, SuMatrix):
        a, b = _to_complex(elem.a), _to_complex(elem.b)
        return f"su:{a.real!r}:{a.imag!r}:{b.real!r}:{b.imag!r}"
    if isinstance(elem, FreeWord):
        return f"fw:{elem.letters}"
    return repr(elem)


@dataclass(frozen=True)
class FiniteMeasure:
    """Probability measure with finitely many atoms and rational weights.

    Atoms are stored sorted by a canonical key so that equal measures have
    equal representations.  Weights are nonnegative Fractions summing to
    exactly 1; duplicate atoms are merged at construction.
    """

    atoms: Tuple[Tuple[object, Fraction], ...]

    @staticmethod
    def from_atoms(pairs: Iterable[Tuple[object, Union[Fraction, int]]]) -> "FiniteMeasure":
        merged: dict[str, list] = {}
        for elem, weight in pairs:
            if isinstance(weight, float):
                raise ConstraintViolation("measure weights must be exact rationals, not floats")
            weight = Fraction(weight)
            if weight < 0:
                raise ConstraintViolation(f"negative weight {weight}")
            key = _default_key(elem)
            if key in merged:
                merged[key][1] += weight
            else:
                merged[key] = [elem, weight]
        atoms = tuple(
            (elem, weight)
            for _, (elem, weight) in sorted(merged.items(), key=lambda kv: kv[0])
            if weight != 0
        )
        total = sum((w for _, w in atoms), Fraction(0))
        if total != 1:
            raise ConstraintViolation(f"weights sum to {total}, expected exactly 1")
        return FiniteMeasure(atoms)

    def support(self) -> Tuple[object, ...]:
        return tuple(elem for elem, _ in self.atoms)


def delta_measure(elem) -> FiniteMeasure:
    """Point mass at ``elem``."""
    return FiniteMeasure.from_atoms([(elem, Fraction(1))])


def measure_convolve(
    mu: FiniteMeasure,
    nu: FiniteMeasure,
    op: Callable[[object, object], object] | None = None,
) -> FiniteMeasure:
    """Convolution: atoms ``op(g, h)`` with weights ``p q``, merged exactly.

    ``op`` defaults to ``*``.  Raises :class:`GroupMismatch` when atom types
    differ or lack a product.
    """
    if mu.atoms and nu.atoms:
        t1 = type(mu.atoms[0][0])
        t2 = type(nu.atoms[0][0])
        if t1 is not t2:
            raise GroupMismatch(f"cannot convolve atoms of types {t1.__name__} and {t2.__name__}")
    pairs = []
    for g, p in mu.atoms:
        for h, q in nu.atoms:
            try:
                gh = op(g, h) if op is not None else g * h
            except TypeError as exc:
                raise GroupMismatch(f"atoms of type {type(g).__name__} have no product") from exc
            pairs.append((gh, p * q))
    return FiniteMeasure.from_atoms(pairs)


def measure_to_json(mu: FiniteMeasure, elem_to_json: Callable[[object], object]) -> list:
    return [
        {"elem": elem_to_json(elem), "num": w.numerator, "den": w.denominator}
        for elem, w in mu.atoms
    ]


def measure_from_json(data: Iterable[dict], elem_from_json: Callable[[object], object]) -> FiniteMeasure:
    pairs = []
    for entry in data:
        if not isinstance(entry.get("num"), int) or not isinstance(entry.get("den"), int):
            raise ConstraintViolation(f"measure weights must be integer num/den pairs: {entry!r}")
        pairs.append((elem_from_json(entry["elem"]), Fraction(entry["num"], entry["den"])))
    return FiniteMeasure.from_atoms(pairs)


def random_rational_weights(rng: np.random.Generator, count: int) -> list[Fraction]:
    """Random positive rationals summing to exactly 1."""
    raw = [int(rng.integers(1, 10)) for _ in range(count)]
    total = sum(raw)
    return [Fraction(r, total) for r in raw]
