"""The registered verification suites behind ``isoact run``.

Each suite draws its own reproducible samples, runs one family of
identity checks, and returns rows for the report layer.  Randomness is
seeded per trial as ``default_rng([seed, stream, trial])``, so adding
trials never changes earlier rows and any failing trial can be rerun in
isolation.  Exact checks emit rational residuals with tolerance 0;
floating checks emit measured residuals against the configured
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import mobius as mo
from .cocycles import (
    sigma_convolution_residual,
    sigma_pair_orthogonal,
    tau,
    tau_cocycle_residual,
)
from .errors import BranchGuard, ConfigError, IllConditionedPhi
from .fock import exp_compose_residual, haar_unitary, random_translation
from .groups import (
    FiniteMeasure,
    FreeWord,
    random_word,
    sp_identity,
    sp_random,
    su_boost,
    su_random,
)
from .harmonic import (
    divergence,
    edge_inner,
    gradient,
    harmonic_decompose,
    mean_value_laplacian,
    subtree_flow_norms,
    tree_ball_graph,
    vertex_inner,
)
from .report import (
    CheckRow,
    Report,
    SuiteConfig,
    check_row,
    digest_of,
    make_report,
    map_trials,
    unresolved_row,
)
from .rtree import (
    cocycle_defect,
    power_norm_deviation,
    random_metric_tree,
    translation_length,
)
from .traintrack import CORPUS, TrackMetric, grid_metric, track_from_json, track_to_json
from .treeball import TreeBall

ZERO = Fraction(0)


@dataclass(frozen=True)
class ResolvedConfig:
    """A suite config with every default filled in."""

    suite: str
    mode: str
    seed: int
    trials: int
    tolerance: float
    params: Dict[str, object]

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "mode": self.mode,
            "seed": self.seed,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
        }


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    run: Callable[[ResolvedConfig], List[CheckRow]]
    description: str
    default_mode: str
    default_trials: int
    default_tolerance: float
    allowed_params: Tuple[str, ...]


def _rng(rc: ResolvedConfig, stream: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([rc.seed, stream, trial])


def _rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8)))


# ---------------------------------------------------------------------------
# tree-identities: divergence of gradient vs mean-value laplacian, adjointness
# ---------------------------------------------------------------------------


def _suite_tree_identities(rc: ResolvedConfig) -> List[CheckRow]:
    n_values = rc.params.get("n_values", (2, 3, 5))
    default_radii = {2: 5, 3: 4, 5: 3}
    rows: List[CheckRow] = []
    for n in n_values:
        n = int(n)
        radius = int(rc.params.get("radius", default_radii.get(n, 3)))
        ball = TreeBall(n, radius)
        graph = tree_ball_graph(ball)
        size = len(graph.vertices)
        p = n + 1
        exact = rc.mode == "exact"
        one = Fraction(1) if exact else 1.0
        zero = ZERO if exact else 0.0

        # operator identity column by column on the standard basis
        worst = zero
        for i in range(size):
            basis = [zero] * size
            basis[i] = one
            dg = divergence(graph, gradient(graph, basis))
            mv = mean_value_laplacian(ball, graph, basis)
            for j, val in mv.items():
                worst = max(worst, abs(dg[j] - p * val))
        inputs = {"n": n, "radius": radius, "mode": rc.mode}
        tol = ZERO if exact else rc.tolerance
        rows.append(check_row(f"matrix-n{n}", inputs, f"{size}x{size}", worst, tol))

        def adjoint_trial(k: int, n=n, ball=ball, graph=graph, exact=exact):
            rng = _rng(rc, n, k)
            if exact:
                f = [_rational(rng) for _ in graph.vertices]
                h = [_rational(rng) for _ in graph.edges]
            else:
                f = list(rng.normal(size=len(graph.vertices)))
                h = list(rng.normal(size=len(graph.edges)))
            lhs = edge_inner(gradient(graph, f), h)
            rhs = vertex_inner(f, divergence(graph, h))
            tol = ZERO if exact else rc.tolerance
            return check_row(
                f"adjoint-n{n}-{k:03d}",
                {"n": n, "seed": rc.seed, "trial": k},
                lhs,
                abs(lhs - rhs),
                tol,
            )

        rows.extend(map_trials(adjoint_trial, rc.trials))
    return rows


# ---------------------------------------------------------------------------
# bergman: truncated pairing series against the closed-form gram
# ---------------------------------------------------------------------------


def _suite_bergman(rc: ResolvedConfig) -> List[CheckRow]:
    degree = int(rc.params.get("degree", 100))
    max_ratio = float(rc.params.get("max_ratio", 0.8))

    def trial(k: int) -> List[CheckRow]:
        rng = _rng(rc, 0, k)
        g1 = su_random(rng, max_ratio)
        g2 = su_random(rng, max_ratio)
        inputs = {"seed": rc.seed, "trial": k, "degree": degree}
        series = mo.bergman_inner(mo.gamma_vector(g1, degree), mo.gamma_vector(g2, degree))
        closed = mo.gamma_gram(g1, g2)
        self_series = mo.bergman_norm2(mo.gamma_vector(g1, degree))
        return [
            check_row(f"pair-{k:03d}", inputs, series, abs(series - closed), rc.tolerance),
            check_row(
                f"self-{k:03d}", inputs, self_series, abs(self_series - mo.phi(g1)), rc.tolerance
            ),
        ]

    return [row for rows in map_trials(trial, rc.trials) for row in rows]


# ---------------------------------------------------------------------------
# asymptotic: norm vs displacement error for boosts, small and decreasing
# ---------------------------------------------------------------------------


def _suite_asymptotic(rc: ResolvedConfig) -> List[CheckRow]:
    t_min = int(rc.params.get("t_min", 5))
    t_max = int(rc.params.get("t_max", 15))
    if t_max <= t_min:
        raise ConfigError(f"t_max must exceed t_min, got {t_min} .. {t_max}")
    errors = {t: mo.asymptotic_error(su_boost(float(t))) for t in range(t_min, t_max + 1)}
    rows = [
        check_row(f"boost-t{t:02d}", {"t": t}, errors[t], errors[t], rc.tolerance)
        for t in sorted(errors)
    ]
    worst_rise = max(
        max(0.0, errors[t] - errors[t - 1]) for t in range(t_min + 1, t_max + 1)
    )
    rows.append(check_row("monotone", {"t_min": t_min, "t_max": t_max}, worst_rise, worst_rise, 0.0))
    return rows


# ---------------------------------------------------------------------------
# cocycle-law: exact on the Cayley tree, truncated on the disc
# ---------------------------------------------------------------------------


def _suite_cocycle_law(rc: ResolvedConfig) -> List[CheckRow]:
    word_length = int(rc.params.get("word_length", 6))
    su_trials = int(rc.params.get("su_trials", 50))
    degree = int(rc.params.get("degree", 80))
    max_ratio = float(rc.params.get("max_ratio", 0.8))

    def tree_trial(k: int) -> CheckRow:
        rng = _rng(rc, 0, k)
        g1 = random_word(rng, 2, int(rng.integers(0, word_length + 1)))
        g2 = random_word(rng, 2, int(rng.integers(0, word_length + 1)))
        defect = cocycle_defect(g1, g2).norm2()
        inputs = {"seed": rc.seed, "trial": k, "g1": list(g1.letters), "g2": list(g2.letters)}
        return check_row(f"tree-{k:03d}", inputs, defect, defect, ZERO)

    def su_trial(k: int) -> CheckRow:
        rng = _rng(rc, 1, k)
        g1 = su_random(rng, max_ratio)
        g2 = su_random(rng, max_ratio)
        residual = mo.affine_cocycle_residual(g1, g2, degree=degree)
        inputs = {"seed": rc.seed, "trial": k, "degree": degree}
        return check_row(f"su-{k:03d}", inputs, residual, residual, rc.tolerance)

    rows = map_trials(tree_trial, rc.trials)
    rows.extend(map_trials(su_trial, su_trials))
    return rows


# ---------------------------------------------------------------------------
# translation-length: formula vs window minimum, homogeneity on powers
# ---------------------------------------------------------------------------


def _window_words(rank: int, radius: int) -> List[FreeWord]:
    words = [FreeWord((), rank)]
    frontier = [FreeWord((), rank)]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            last = x.letters[-1] if x.letters else 0
            for letter in range(-rank, rank + 1):
                if letter == 0 or letter == -last:
                    continue
                nxt.append(FreeWord(x.letters + (letter,), rank))
        words.extend(nxt)
        frontier = nxt
    return words


def _suite_translation_length(rc: ResolvedConfig) -> List[CheckRow]:
    radius = int(rc.params.get("radius", 8))
    word_length = int(rc.params.get("word_length", 6))
    window = _window_words(2, radius)

    def trial(k: int) -> CheckRow:
        rng = _rng(rc, 0, k)
        g = random_word(rng, 2, int(rng.integers(1, word_length + 1)))
        ell = translation_length(g)
        brute = min(len(x.inverse() * g * x) for x in window)
        power_defect = max(abs(translation_length(g**j) - j * ell) for j in range(1, 6))
        residual = Fraction(abs(brute - ell) + power_defect)
        inputs = {"seed": rc.seed, "trial": k, "g": list(g.letters), "radius": radius}
        return check_row(f"word-{k:03d}", inputs, ell, residual, ZERO)

    return map_trials(trial, rc.trials)


# ---------------------------------------------------------------------------
# length-recovery: power norms minus n * l(g) stay at twice the axis distance
# ---------------------------------------------------------------------------


def _suite_length_recovery(rc: ResolvedConfig) -> List[CheckRow]:
    n_max = int(rc.params.get("n_max", 50))
    word_length = int(rc.params.get("word_length", 6))

    def trial(k: int) -> CheckRow:
        rng = _rng(rc, 0, k)
        g = random_word(rng, 2, int(rng.integers(1, word_length + 1)))
        scale = Fraction(1 + int(rng.integers(0, 4)), 1 + int(rng.integers(0, 3)))
        _, conj = g.cyclic_reduce()
        expected = 2 * scale * scale * len(conj)
        worst = max(
            abs(power_norm_deviation(g, n, scale) - expected) for n in range(2, n_max + 1)
        )
        inputs = {"seed": rc.seed, "trial": k, "g": list(g.letters), "scale": str(scale)}
        return check_row(f"power-{k:02d}", inputs, expected, worst, ZERO)

    return map_trials(trial, rc.trials)


# ---------------------------------------------------------------------------
# sp-tau: scalar 2-cocycle identity for the metaplectic phase
# ---------------------------------------------------------------------------


def _suite_sp_tau(rc: ResolvedConfig) -> List[CheckRow]:
    scale = float(rc.params.get("scale", 0.4))
    attempts = 5
    rows: List[CheckRow] = []
    for stream, half_dim in ((0, 1), (1, 2)):
        label = f"sp{2 * half_dim}"

        def trial(k: int, stream=stream, half_dim=half_dim, label=label) -> CheckRow:
            rng = _rng(rc, stream, k)
            inputs = {"seed": rc.seed, "trial": k, "dim": 2 * half_dim}
            for _ in range(attempts):
                triple = [sp_random(rng, half_dim, scale) for _ in range(3)]
                try:
                    residual = tau_cocycle_residual(*triple)
                except (BranchGuard, IllConditionedPhi):
                    continue
                return check_row(f"{label}-{k:04d}", inputs, residual, residual, rc.tolerance)
            return unresolved_row(f"{label}-{k:04d}", inputs, "branch guards exhausted")

        rows.extend(map_trials(trial, rc.trials))
        rng = _rng(rc, stream + 10, 0)
        g = sp_random(rng, half_dim, scale)
        e = sp_identity(half_dim)
        defect = abs(tau(e, g)) + abs(tau(g, e)) + abs(tau(e, e))
        rows.append(
            check_row(f"{label}-identity", {"dim": 2 * half_dim}, defect, defect, 0.0)
        )
    return rows


# ---------------------------------------------------------------------------
# measure-cocycle: convolution identity for averaged actions
# ---------------------------------------------------------------------------


def _random_weights(rng: np.random.Generator, count: int) -> List[Fraction]:
    nums = [1 + int(rng.integers(0, 5)) for _ in range(count)]
    total = sum(nums)
    return [Fraction(v, total) for v in nums]


def _random_su_measure(rng: np.random.Generator, max_ratio: float) -> FiniteMeasure:
    count = 1 + int(rng.integers(0, 3))
    weights = _random_weights(rng, count)
    return FiniteMeasure.from_atoms(
        [(su_random(rng, max_ratio), w) for w in weights]
    )


def _random_word_measure(rng: np.random.Generator) -> FiniteMeasure:
    count = 1 + int(rng.integers(0, 3))
    weights = _random_weights(rng, count)
    return FiniteMeasure.from_atoms(
        [(random_word(rng, 2, int(rng.integers(0, 5))), w) for w in weights]
    )


def _suite_measure_cocycle(rc: ResolvedConfig) -> List[CheckRow]:
    max_ratio = float(rc.params.get("max_ratio", 0.6))

    def su_trial(k: int) -> CheckRow:
        rng = _rng(rc, 0, k)
        mu, nu, rho = (_random_su_measure(rng, max_ratio) for _ in range(3))
        residual = sigma_convolution_residual(mu, nu, rho)
        inputs = {"seed": rc.seed, "trial": k, "atoms": [len(m.atoms) for m in (mu, nu, rho)]}
        return check_row(f"su-{k:03d}", inputs, residual, residual, rc.tolerance)

    def tree_trial(k: int) -> CheckRow:
        rng = _rng(rc, 1, k)
        mu, nu, rho = (_random_word_measure(rng) for _ in range(3))
        residual = sigma_convolution_residual(mu, nu, rho, pair=sigma_pair_orthogonal)
        inputs = {"seed": rc.seed, "trial": k, "atoms": [len(m.atoms) for m in (mu, nu, rho)]}
        return check_row(f"tree-{k:03d}", inputs, residual, residual, ZERO)

    rows = map_trials(su_trial, rc.trials)
    rows.extend(map_trials(tree_trial, rc.trials))
    return rows


# ---------------------------------------------------------------------------
# cpd-gns: conditional negativity of the squared norm, gram reconstruction
# ---------------------------------------------------------------------------


def _suite_cpd_gns(rc: ResolvedConfig) -> List[CheckRow]:
    sample_size = int(rc.params.get("sample_size", 6))
    max_ratio = float(rc.params.get("max_ratio", 0.8))

    def trial(k: int) -> List[CheckRow]:
        rng = _rng(rc, 0, k)
        els = [su_random(rng, max_ratio) for _ in range(sample_size)]
        inputs = {"seed": rc.seed, "trial": k, "size": sample_size}
        eig = mo.centered_max_eigenvalue(mo.kernel_matrix(els, mo.phi))
        gram = mo.gns_gram(els)
        closed = np.array([[mo.gamma_gram(a, b).real for b in els] for a in els])
        gram_dev = float(np.abs(gram - closed).max())
        return [
            check_row(f"cpd-{k:02d}", inputs, eig, max(eig, 0.0), rc.tolerance),
            check_row(f"gns-{k:02d}", inputs, gram_dev, gram_dev, rc.tolerance),
        ]

    return [row for rows in map_trials(trial, rc.trials) for row in rows]


# ---------------------------------------------------------------------------
# h1: coboundaries wash out, the half-tree flow survives every radius
# ---------------------------------------------------------------------------


def _suite_h1(rc: ResolvedConfig) -> List[CheckRow]:
    radii = tuple(int(r) for r in rc.params.get("radii", (6, 8, 10)))
    floor = float(rc.params.get("floor", 0.1))
    drift = float(rc.params.get("drift", 0.05))
    ball = TreeBall(2, 5)
    graph = tree_ball_graph(ball)
    boundary = {i for i, v in enumerate(graph.vertices) if len(v) == ball.radius}

    def coboundary_trial(k: int) -> CheckRow:
        rng = _rng(rc, 0, k)
        r = [
            ZERO if i in boundary else _rational(rng) for i in range(len(graph.vertices))
        ]
        _, remainder = harmonic_decompose(graph, gradient(graph, r), method="exact")
        norm2 = edge_inner(remainder, remainder)
        inputs = {"seed": rc.seed, "trial": k}
        return check_row(f"coboundary-{k:02d}", inputs, norm2, norm2, rc.tolerance)

    rows = map_trials(coboundary_trial, min(rc.trials, 10))
    norms = subtree_flow_norms(3, radii, method="float")
    for radius, norm2 in zip(radii, norms):
        rows.append(
            check_row(
                f"halftree-r{radius:02d}",
                {"radius": radius},
                norm2,
                max(0.0, floor - norm2),
                0.0,
            )
        )
    spread = max(abs(a - b) for a, b in zip(norms, norms[1:]))
    rows.append(check_row("halftree-stability", {"radii": list(radii)}, norms, spread, drift))
    return rows


# ---------------------------------------------------------------------------
# traintrack: exact strip metric vs grid metric, validator sensitivity
# ---------------------------------------------------------------------------


def _grid_point(track, rng: np.random.Generator, step: Fraction):
    edge = int(rng.integers(0, len(track.edge_ends)))
    units = int(track.width(edge) / step)
    return (edge, Fraction(int(rng.integers(0, units + 1))) * step)


def _suite_traintrack(rc: ResolvedConfig) -> List[CheckRow]:
    step = Fraction(str(rc.params.get("step", "1/1000")))
    rows: List[CheckRow] = []
    for stream, name in enumerate(sorted(CORPUS)):
        track = CORPUS[name]()
        rng = _rng(rc, stream, 0)
        points = [_grid_point(track, rng, step) for _ in range(2 * rc.trials)]
        metric = TrackMetric(track, points)
        grid = grid_metric(track, points, step=step)
        for k in range(rc.trials):
            p, q = points[2 * k], points[2 * k + 1]
            exact = metric.distance(p, q)
            residual = abs(float(exact - grid[2 * k][2 * k + 1]))
            inputs = {"seed": rc.seed, "track": name, "trial": k}
            rows.append(
                check_row(f"dist-{name}-{k:02d}", inputs, float(exact), residual, 5 * float(step))
            )
        data = track_to_json(track)
        slot = sorted(data["widths"])[0]
        data["widths"][slot] = str(Fraction(data["widths"][slot]) + Fraction(1, 7))
        try:
            track_from_json(data)
            caught = 0
        except Exception:
            caught = 1
        rows.append(
            check_row(f"validator-{name}", {"track": name, "slot": slot}, caught, 1 - caught, ZERO)
        )
    return rows


# ---------------------------------------------------------------------------
# fock-mult: truncated product law for the exponential-type operators
# ---------------------------------------------------------------------------


def _suite_fock_mult(rc: ResolvedConfig) -> List[CheckRow]:
    cases = rc.params.get("cases", ((1, 12), (2, 10)))
    scale = float(rc.params.get("scale", 0.3))
    rows: List[CheckRow] = []
    for stream, (dimension, degree) in enumerate(cases):
        dimension, degree = int(dimension), int(degree)

        def trial(k: int, stream=stream, dimension=dimension, degree=degree) -> CheckRow:
            rng = _rng(rc, stream, k)
            t1 = haar_unitary(rng, dimension)
            t2 = haar_unitary(rng, dimension)
            g1 = random_translation(rng, dimension, scale)
            g2 = random_translation(rng, dimension, scale)
            residual = exp_compose_residual(t1, g1, t2, g2, degree)
            inputs = {"seed": rc.seed, "trial": k, "dimension": dimension, "degree": degree}
            return check_row(
                f"d{dimension}n{degree:02d}-{k:02d}", inputs, residual, residual, rc.tolerance
            )

        rows.extend(map_trials(trial, rc.trials))
    return rows


# ---------------------------------------------------------------------------
# triangle: cyclic geodesic flows cancel in random metric trees
# ---------------------------------------------------------------------------


def _suite_triangle(rc: ResolvedConfig) -> List[CheckRow]:
    size = int(rc.params.get("size", 40))

    def trial(k: int) -> CheckRow:
        rng = _rng(rc, 0, k)
        tree = random_metric_tree(rng, size)
        x, y, z = (int(v) for v in rng.integers(0, size, size=3))
        flow = tree.triangle_flow(x, y, z)
        norm2 = tree.pairing(flow, flow)
        inputs = {"seed": rc.seed, "trial": k, "size": size, "triple": [x, y, z]}
        return check_row(f"triple-{k:03d}", inputs, norm2, norm2, ZERO)

    return map_trials(trial, rc.trials)


# ---------------------------------------------------------------------------
# registry and runner
# ---------------------------------------------------------------------------

REGISTRY: Dict[str, SuiteEntry] = {}


def _register(
    name: str,
    run: Callable[[ResolvedConfig], List[CheckRow]],
    description: str,
    default_mode: str,
    default_trials: int,
    default_tolerance: float,
    allowed_params: Tuple[str, ...],
) -> None:
    REGISTRY[name] = SuiteEntry(
        name, run, description, default_mode, default_trials, default_tolerance, allowed_params
    )


_register(
    "tree-identities",
    _suite_tree_identities,
    "divergence-of-gradient equals the mean-value laplacian; gradient and divergence are adjoint",
    "exact",
    100,
    1e-9,
    ("n_values", "radius"),
)
_register(
    "bergman",
    _suite_bergman,
    "truncated disc pairing series matches the closed-form gram and norm",
    "float",
    50,
    1e-6,
    ("degree", "max_ratio"),
)
_register(
    "asymptotic",
    _suite_asymptotic,
    "norm-versus-displacement error of boosts is small at t=5 and decreasing",
    "float",
    1,
    1e-3,
    ("t_min", "t_max"),
)
_register(
    "cocycle-law",
    _suite_cocycle_law,
    "affine cocycle identity: exact on tree flows, truncated on the disc",
    "float",
    100,
    1e-6,
    ("word_length", "su_trials", "degree", "max_ratio"),
)
_register(
    "translation-length",
    _suite_translation_length,
    "two-step length formula equals the brute-force window minimum; lengths are homogeneous",
    "exact",
    100,
    1e-9,
    ("radius", "word_length"),
)
_register(
    "length-recovery",
    _suite_length_recovery,
    "power cocycle norms recover n times the length plus twice the axis distance",
    "exact",
    20,
    1e-9,
    ("n_max", "word_length"),
)
_register(
    "sp-tau",
    _suite_sp_tau,
    "metaplectic phase satisfies the scalar 2-cocycle identity with guards",
    "float",
    1000,
    1e-9,
    ("scale",),
)
_register(
    "measure-cocycle",
    _suite_measure_cocycle,
    "averaged-action scalar satisfies the convolution identity; vanishes for tree actions",
    "float",
    100,
    1e-8,
    ("max_ratio",),
)
_register(
    "cpd-gns",
    _suite_cpd_gns,
    "squared displacement is conditionally negative; its GNS gram matches closed form",
    "float",
    20,
    1e-9,
    ("sample_size", "max_ratio"),
)
_register(
    "h1",
    _suite_h1,
    "coboundary flows have zero harmonic part; the half-tree flow keeps norm across radii",
    "float",
    10,
    1e-9,
    ("radii", "floor", "drift"),
)
_register(
    "traintrack",
    _suite_traintrack,
    "strip-space metric agrees with the grid metric; validator rejects width perturbations",
    "exact",
    20,
    5e-3,
    ("step",),
)
_register(
    "fock-mult",
    _suite_fock_mult,
    "truncated multiplication law for exponential operators on the half-degree block",
    "float",
    20,
    1e-6,
    ("cases", "scale"),
)
_register(
    "triangle",
    _suite_triangle,
    "cyclic sums of geodesic flows cancel exactly in random metric trees",
    "exact",
    100,
    1e-9,
    ("size",),
)


def suite_names() -> List[str]:
    return sorted(REGISTRY)


def resolve_config(cfg: SuiteConfig) -> ResolvedConfig:
    entry = REGISTRY.get(cfg.suite)
    if entry is None:
        known = ", ".join(suite_names())
        raise ConfigError(f"unknown suite {cfg.suite!r}; known suites: {known}")
    params = cfg.params_dict()
    for key in params:
        if key not in entry.allowed_params:
            raise ConfigError(f"unknown parameter {key!r} for suite {cfg.suite}")
    return ResolvedConfig(
        suite=cfg.suite,
        mode=cfg.mode if cfg.mode is not None else entry.default_mode,
        seed=cfg.seed,
        trials=cfg.trials if cfg.trials is not None else entry.default_trials,
        tolerance=float(cfg.tolerance) if cfg.tolerance is not None else entry.default_tolerance,
        params=params,
    )


def run_suite(cfg: SuiteConfig) -> Report:
    """Resolve the config, run the suite, and assemble the sorted report."""
    rc = resolve_config(cfg)
    rows = REGISTRY[rc.suite].run(rc)
    return make_report(rc.suite, digest_of(rc.as_dict()), rows)
