"""Command-line driver: suite runner plus per-module probes.

``isoact run`` executes a registered verification suite and emits a
deterministic report.  The module groups (``tree``, ``harmonic``,
``rtree``, ``mobius``, ``cocycle``, ``immobile``) expose the individual
constructions for ad-hoc queries with JSON input and output.

All deliberate failures surface as clean one-line errors; exit status of
``run`` is zero exactly when no check row failed.
"""

from __future__ import annotations

import functools
import json
import re
from fractions import Fraction

import click
import numpy as np

from . import mobius as mo
from .cocycles import (
    lattice_sigma,
    random_step_automorphism,
    sigma_pair,
    step_cocycle_residual,
)
from .errors import ConfigError, IsoactError
from .exact import QComplex
from .groups import su_from_json, su_random, word_from_json
from .harmonic import (
    cylinder_vertices,
    divergence,
    gram_inv_delta,
    gram_neg_log,
    gram_neg_log_padic,
    poisson_transform,
    root_mean,
    subtree_flow_norms,
    tree_ball_graph,
)
from .immobile import (
    CayleyWindow,
    boundary_edge_count,
    chain_identity_residual,
    gamma_difference,
    immobile_function_test,
    indicator_from_json,
    subset_from_json,
)
from .report import SuiteConfig, emit_report, render_report
from .rtree import free_cayley_gamma, translation_length
from .suites import run_suite, suite_names
from .traintrack import CORPUS, TrackMetric, track_from_json, track_to_json
from .treeball import (
    TreeBall,
    abs_metric,
    boundary_derivative,
    cylinder_measure,
    freeword_automorphism,
    lattice_distance,
)

CONFIG_KEYS = ("suite", "mode", "seed", "trials", "tolerance", "params")


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except IsoactError as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def emit(data) -> None:
    click.echo(json.dumps(data, sort_keys=True, indent=2))


def parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"malformed JSON for {what}: {exc}") from exc


def parse_group(text: str) -> int:
    match = re.fullmatch(r"F(\d+)", text)
    if not match or int(match.group(1)) < 2:
        raise ConfigError(f"group must be 'F<rank>' with rank >= 2, got {text!r}")
    return int(match.group(1))


def parse_schedule(text: str):
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"schedule must be comma-separated integers, got {text!r}") from exc


def load_track(source: str):
    """Accept a corpus name, a JSON file path, or inline JSON."""
    if source in CORPUS:
        return CORPUS[source]()
    if source.lstrip().startswith("{"):
        return track_from_json(parse_json(source, "train track"))
    try:
        with open(source, "r", encoding="utf-8") as handle:
            return track_from_json(json.load(handle))
    except OSError as exc:
        names = ", ".join(sorted(CORPUS))
        raise ConfigError(f"no such track {source!r}; corpus names: {names} ({exc})") from exc


@click.group()
def main():
    """Verification tools for affine isometric group actions."""


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------


@main.command(name="run")
@click.option("--suite", type=str, default=None, help="Suite name; see --list.")
@click.option("--seed", type=int, default=None, help="64-bit reproducibility seed.")
@click.option("--trials", type=int, default=None, help="Number of random trials.")
@click.option("--tol", type=float, default=None, help="Residual tolerance for float checks.")
@click.option("--mode", type=click.Choice(["exact", "float"]), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write report here.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--list", "list_suites", is_flag=True, help="List registered suites and exit.")
@click.pass_context
@guarded
def run_command(ctx, suite, seed, trials, tol, mode, out, fmt, config_path, list_suites):
    """Run one verification suite and emit its report."""
    if list_suites:
        emit(suite_names())
        return
    file_cfg = {}
    if config_path is not None:
        with open(config_path, "r", encoding="utf-8") as handle:
            file_cfg = json.load(handle)
        for key in file_cfg:
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown configuration key {key!r}")
    suite = suite if suite is not None else file_cfg.get("suite")
    if suite is None:
        raise ConfigError("no suite given; pass --suite or put 'suite' in the config file")
    cfg = SuiteConfig.make(
        suite,
        mode=mode if mode is not None else file_cfg.get("mode"),
        seed=seed if seed is not None else int(file_cfg.get("seed", 0)),
        trials=trials if trials is not None else file_cfg.get("trials"),
        tolerance=tol if tol is not None else file_cfg.get("tolerance"),
        params=file_cfg.get("params", {}),
    )
    report = run_suite(cfg)
    if out is not None:
        emit_report(report, fmt, out)
        counts = report.summary()
        click.echo(
            f"{report.suite}: {counts['pass']} pass, {counts['fail']} fail, "
            f"{counts['unresolved']} unresolved -> {out}"
        )
    else:
        click.echo(render_report(report, fmt), nl=False)
    ctx.exit(report.exit_status())


# ---------------------------------------------------------------------------
# tree group
# ---------------------------------------------------------------------------


@main.group()
def tree():
    """Regular tree balls, their absolute, and lattice distances."""


@tree.command(name="ball")
@click.option("--n", type=int, required=True)
@click.option("--radius", type=int, required=True)
@guarded
def tree_ball(n, radius):
    """Vertex counts of the radius-R ball in the (n+1)-regular tree."""
    ball = TreeBall(n, radius)
    emit(
        {
            "n": n,
            "radius": radius,
            "vertices": ball.vertex_count(),
            "leaves": len(ball.leaves()),
        }
    )


@tree.command(name="dist")
@click.option("--n", type=int, required=True)
@click.option("--radius", type=int, required=True)
@click.option("--u", type=str, required=True, help="Address as JSON array.")
@click.option("--v", type=str, required=True)
@guarded
def tree_dist(n, radius, u, v):
    """Graph distance between two ball vertices."""
    ball = TreeBall(n, radius)
    a = tuple(parse_json(u, "--u"))
    b = tuple(parse_json(v, "--v"))
    emit({"distance": ball.distance(a, b)})


@tree.command(name="absmetric")
@click.option("--n", type=int, required=True)
@click.option("--radius", type=int, required=True)
@click.option("--x", type=str, required=True, help="Boundary address as JSON array.")
@click.option("--y", type=str, required=True)
@guarded
def tree_absmetric(n, radius, x, y):
    """Ultrametric between two ends, read off their common prefix."""
    ball = TreeBall(n, radius)
    value = abs_metric(ball, tuple(parse_json(x, "--x")), tuple(parse_json(y, "--y")))
    emit({"delta": str(value)})


@tree.command(name="measure")
@click.option("--n", type=int, required=True)
@click.option("--radius", type=int, required=True)
@click.option("--v", type=str, required=True)
@guarded
def tree_measure(n, radius, v):
    """Canonical measure of the cylinder below a vertex."""
    ball = TreeBall(n, radius)
    emit({"measure": str(cylinder_measure(ball, tuple(parse_json(v, "--v"))))})


@tree.command(name="latdist")
@click.option("--p", type=int, required=True)
@click.option("--m1", type=str, required=True, help="2x2 rational matrix as JSON.")
@click.option("--m2", type=str, required=True)
@guarded
def tree_latdist(p, m1, m2):
    """Tree distance between two lattice classes given by column matrices."""

    def matrix(text, what):
        rows = parse_json(text, what)
        return tuple(tuple(Fraction(str(x)) for x in row) for row in rows)

    emit({"distance": lattice_distance(matrix(m1, "--m1"), matrix(m2, "--m2"), p)})


@tree.command(name="deriv")
@click.option("--n", type=int, default=3, show_default=True)
@click.option("--radius", type=int, required=True)
@click.option("--rank", type=int, default=2, show_default=True)
@click.option("--word", type=str, required=True, help="Reduced word as JSON letters.")
@click.option("--end", type=str, required=True, help="Ray prefix as JSON address.")
@guarded
def tree_deriv(n, radius, rank, word, end):
    """Boundary derivative of a free-word automorphism at an end."""
    g = word_from_json(parse_json(word, "--word"), rank)
    auto = freeword_automorphism(g, radius)
    value = boundary_derivative(auto, tuple(parse_json(end, "--end")))
    emit({"derivative": str(value)})


# ---------------------------------------------------------------------------
# harmonic group
# ---------------------------------------------------------------------------


@main.group()
def harmonic():
    """Discrete calculus on tree balls and boundary kernels."""


@harmonic.command(name="identities")
@click.option("--n", type=int, default=2, show_default=True)
@click.option("--radius", type=int, default=4, show_default=True)
@click.option("--mode", type=click.Choice(["exact", "float"]), default="exact")
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
@guarded
def harmonic_identities(ctx, n, radius, mode, trials, seed):
    """Laplacian factorisation and adjointness on one ball."""
    cfg = SuiteConfig.make(
        "tree-identities",
        mode=mode,
        seed=seed,
        trials=trials,
        params={"n_values": (n,), "radius": radius},
    )
    report = run_suite(cfg)
    click.echo(render_report(report, "json"), nl=False)
    ctx.exit(report.exit_status())


@harmonic.command(name="poisson")
@click.option("--n", type=int, default=2, show_default=True)
@click.option("--radius", type=int, default=4, show_default=True)
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@guarded
def harmonic_poisson(n, radius, k, seed):
    """Interior divergence of the transform of zero-mean boundary data."""
    ball = TreeBall(n, radius)
    graph = tree_ball_graph(ball)
    rng = np.random.default_rng([seed, 0])
    cyls = cylinder_vertices(ball, k)
    raw = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8))) for _ in cyls]
    shift = sum(raw, Fraction(0)) / len(raw)
    data = {c: r - shift for c, r in zip(cyls, raw)}
    vals = poisson_transform(ball, graph, k, data)
    div = divergence(graph, vals)
    worst = max(
        (abs(div[i]) for i, flag in enumerate(graph.interior) if flag), default=Fraction(0)
    )
    emit(
        {
            "check": "poisson-interior-divergence",
            "params": {"n": n, "radius": radius, "k": k, "seed": seed},
            "root_mean": str(root_mean(ball, k, data)),
            "residual": str(worst),
            "verdict": "pass" if worst == 0 else "fail",
        }
    )


@harmonic.command(name="h1")
@click.option("--n", type=int, default=3, show_default=True)
@click.option("--radii", type=str, default="6,8,10", show_default=True)
@guarded
def harmonic_h1(n, radii):
    """Surviving norm of the half-tree flow across window radii."""
    schedule = parse_schedule(radii)
    norms = subtree_flow_norms(n, schedule, method="float")
    emit(
        {
            "check": "halftree-flow-norm",
            "params": {"n": n, "radii": schedule},
            "norms": norms,
            "verdict": "pass" if all(v > 0.1 for v in norms) else "fail",
        }
    )


@harmonic.command(name="gram")
@click.option("--n", type=int, default=2, show_default=True)
@click.option("--radius", type=int, default=4, show_default=True)
@click.option("--k", type=int, default=2, show_default=True)
@click.option(
    "--kernel",
    type=click.Choice(["inv_delta", "neg_log", "neg_log_padic"]),
    default="neg_log",
    show_default=True,
)
@click.option("--p", type=int, default=2, show_default=True)
@guarded
def harmonic_gram(n, radius, k, kernel, p):
    """Cylinder-difference gram matrix and its zero-mean minimal eigenvalue."""
    ball = TreeBall(n, radius)
    if kernel == "inv_delta":
        matrix = gram_inv_delta(ball, k)
    elif kernel == "neg_log":
        matrix = gram_neg_log(ball, k)
    else:
        matrix = gram_neg_log_padic(ball, k, p)
    m = len(matrix)
    dense = np.array([[float(x) for x in row] for row in matrix])
    ones = np.ones((m, 1)) / np.sqrt(m)
    basis = np.linalg.qr(np.eye(m) - ones @ ones.T)[0][:, : m - 1]
    restricted = basis.T @ dense @ basis
    min_eig = float(np.linalg.eigvalsh((restricted + restricted.T) / 2)[0])
    emit(
        {
            "kernel": kernel,
            "params": {"n": n, "radius": radius, "k": k, "p": p},
            "matrix": [[str(x) for x in row] for row in matrix],
            "min_eigenvalue_zero_mean": min_eig,
        }
    )


# ---------------------------------------------------------------------------
# rtree group
# ---------------------------------------------------------------------------


@main.group()
def rtree():
    """Train tracks, metric trees, and free-group tree actions."""


@rtree.command(name="validate")
@click.option("--track", type=str, required=True, help="Corpus name, file, or inline JSON.")
@click.pass_context
def rtree_validate(ctx, track):
    """Check the matching conditions of a train track."""
    try:
        loaded = load_track(track)
    except IsoactError as exc:
        emit({"ok": False, "error": str(exc)})
        ctx.exit(1)
    emit(
        {
            "ok": True,
            "vertices": len(loaded.vertices),
            "edges": len(loaded.edge_ends),
            "json": track_to_json(loaded),
        }
    )


@rtree.command(name="metric")
@click.option("--track", type=str, required=True)
@click.option("--points", type=str, required=True, help='JSON [[edge, "p/q"], ...].')
@guarded
def rtree_metric(track, points):
    """Exact pairwise strip-space distances between chart points."""
    loaded = load_track(track)
    pts = [(int(e), Fraction(str(x))) for e, x in parse_json(points, "--points")]
    metric = TrackMetric(loaded, pts)
    emit({"distances": [[str(d) for d in row] for row in metric.pairwise()]})


@rtree.command(name="pairing")
@click.option("--size", type=int, default=40, show_default=True)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
@guarded
def rtree_pairing(ctx, size, trials, seed):
    """Triangle cancellation of geodesic flows in random metric trees."""
    cfg = SuiteConfig.make("triangle", seed=seed, trials=trials, params={"size": size})
    report = run_suite(cfg)
    click.echo(render_report(report, "json"), nl=False)
    ctx.exit(report.exit_status())


@rtree.command(name="length")
@click.option("--rank", type=int, default=2, show_default=True)
@click.option("--word", type=str, required=True)
@guarded
def rtree_length(rank, word):
    """Translation length and cyclic-reduction conjugator of a word."""
    g = word_from_json(parse_json(word, "--word"), rank)
    core, conj = g.cyclic_reduce()
    emit(
        {
            "length": translation_length(g),
            "core": list(core.letters),
            "conjugator": list(conj.letters),
        }
    )


@rtree.command(name="gamma")
@click.option("--rank", type=int, default=2, show_default=True)
@click.option("--alpha", type=int, default=1, show_default=True)
@click.option("--word", type=str, required=True)
@guarded
def rtree_gamma(rank, alpha, word):
    """Collapsed-tree cocycle of a word, edge by edge."""
    g = word_from_json(parse_json(word, "--word"), rank)
    vector = free_cayley_gamma(g, alpha)
    emit(
        {
            "edges": [
                {"tail": list(letters), "letter": j, "coeff": str(c)}
                for (letters, j), c in vector.coeffs
            ],
            "norm2": str(vector.norm2()),
        }
    )


# ---------------------------------------------------------------------------
# mobius group
# ---------------------------------------------------------------------------


@main.group()
def mobius():
    """Disc isometries: grams, cocycles, lengths, and kernels."""


@mobius.command(name="gram")
@click.option("--g1", type=str, required=True, help='SU(1,1) element as {"a":[re,im],"b":[re,im]}.')
@click.option("--g2", type=str, required=True)
@guarded
def mobius_gram(g1, g2):
    """Closed-form pairing of two disc cocycles."""
    a = su_from_json(parse_json(g1, "--g1"))
    b = su_from_json(parse_json(g2, "--g2"))
    value = mo.gamma_gram(a, b)
    emit(
        {
            "gram": [value.real, value.imag],
            "norm2_g1": mo.phi(a),
            "norm2_g2": mo.phi(b),
        }
    )


@mobius.command(name="cocycle")
@click.option("--g1", type=str, required=True)
@click.option("--g2", type=str, required=True)
@click.option("--degree", type=int, default=80, show_default=True)
@click.option("--tol", type=float, default=1e-6, show_default=True)
@guarded
def mobius_cocycle(g1, g2, degree, tol):
    """Truncated affine cocycle residual on the half-degree block."""
    a = su_from_json(parse_json(g1, "--g1"))
    b = su_from_json(parse_json(g2, "--g2"))
    residual = mo.affine_cocycle_residual(a, b, degree=degree)
    emit({"residual": residual, "degree": degree, "verdict": "pass" if residual <= tol else "fail"})


@mobius.command(name="length")
@click.option("--g", type=str, required=True)
@guarded
def mobius_length(g):
    """Hyperbolic translation length of a disc isometry."""
    emit({"length": mo.hyperbolic_length(su_from_json(parse_json(g, "--g")))})


@mobius.command(name="cpd")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--size", type=int, default=6, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@guarded
def mobius_cpd(seed, trials, size, tol):
    """Centered-eigenvalue test of the squared-norm kernel."""
    worst = -np.inf
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        els = [su_random(rng, 0.8) for _ in range(size)]
        worst = max(worst, mo.centered_max_eigenvalue(mo.kernel_matrix(els, mo.phi)))
    emit(
        {
            "max_centered_eigenvalue": worst,
            "trials": trials,
            "verdict": "pass" if worst <= tol else "fail",
        }
    )


@mobius.command(name="gns")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--size", type=int, default=8, show_default=True)
@guarded
def mobius_gns(seed, size):
    """Embedding distances versus squared norms from the gram factorisation."""
    rng = np.random.default_rng([seed])
    els = [su_random(rng, 0.8) for _ in range(size)]
    gram = mo.gns_gram(els)
    vecs = mo.gns_vectors(gram)
    worst = 0.0
    for i, gi in enumerate(els):
        for j, gj in enumerate(els):
            dist2 = float(np.sum((vecs[i] - vecs[j]) ** 2))
            worst = max(worst, abs(dist2 - mo.phi(gi * gj.inverse())))
    emit({"distance_residual": worst, "size": size, "verdict": "pass" if worst <= 1e-9 else "fail"})


@mobius.command(name="probe")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--powers", type=int, default=20, show_default=True)
@click.option("--slope-threshold", type=float, default=0.1, show_default=True)
@guarded
def mobius_probe(seed, powers, slope_threshold):
    """Growth probe along powers; flags unbounded trends, never triviality."""
    rng = np.random.default_rng([seed])
    g = su_random(rng, 0.8)
    norms = []
    power = g
    for _ in range(powers):
        norms.append(mo.phi(power))
        power = power * g
    sup, slope = mo.power_growth(norms)
    flag = "nontrivial (unbounded trend)" if slope > slope_threshold else "inconclusive"
    emit({"sup_norm2": sup, "slope": slope, "flag": flag})


# ---------------------------------------------------------------------------
# cocycle group
# ---------------------------------------------------------------------------


@main.group()
def cocycle():
    """Scalar 2-cocycles: symplectic, averaged, lattice, and step groups."""


@cocycle.command(name="sp-tau")
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.pass_context
@guarded
def cocycle_sp_tau(ctx, trials, seed, tol):
    """Symplectic phase-defect cocycle identity over guarded triples."""
    cfg = SuiteConfig.make("sp-tau", seed=seed, trials=trials, tolerance=tol)
    report = run_suite(cfg)
    click.echo(render_report(report, "json"), nl=False)
    ctx.exit(report.exit_status())


@cocycle.command(name="measures")
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.pass_context
@guarded
def cocycle_measures(ctx, trials, seed, tol):
    """Convolution 2-cocycle identity for finitely supported measures."""
    cfg = SuiteConfig.make("measure-cocycle", seed=seed, trials=trials, tolerance=tol)
    report = run_suite(cfg)
    click.echo(render_report(report, "json"), nl=False)
    ctx.exit(report.exit_status())


@cocycle.command(name="lattice")
@click.option("--first", type=str, required=True, help='JSON [[alpha, [[re,im],...]], ...].')
@click.option("--second", type=str, required=True)
@guarded
def cocycle_lattice(first, second):
    """Exact symplectic form of two formal lattice combinations."""

    def combo(text, what):
        out = []
        for alpha, vec in parse_json(text, what):
            out.append(
                (
                    Fraction(str(alpha)),
                    tuple(QComplex(Fraction(str(re)), Fraction(str(im))) for re, im in vec),
                )
            )
        return out

    value = lattice_sigma(combo(first, "--first"), combo(second, "--second"))
    emit({"sigma": str(value)})


@cocycle.command(name="bgroup")
@click.option("--level", type=int, default=3, show_default=True)
@click.option("--trials", type=int, default=25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@guarded
def cocycle_bgroup(level, trials, seed, tol):
    """Step-automorphism cocycle identity with disc-isometry values."""
    worst = 0.0
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        f1, f2, f3 = (
            random_step_automorphism(rng, level, lambda r: su_random(r, 0.6)) for _ in range(3)
        )
        worst = max(worst, step_cocycle_residual(f1, f2, f3, sigma_pair))
    emit(
        {
            "level": level,
            "trials": trials,
            "max_residual": worst,
            "verdict": "pass" if worst <= tol else "fail",
        }
    )


# ---------------------------------------------------------------------------
# immobile group
# ---------------------------------------------------------------------------


@main.group()
def immobile():
    """Almost-invariant vertex sets in free-group Cayley windows."""


@immobile.command(name="set")
@click.option("--group", type=str, default="F2", show_default=True)
@click.option("--radius", type=int, default=8, show_default=True)
@click.option("--set", "descriptor", type=str, default='{"kind":"suffix","v":[1]}', show_default=True)
@guarded
def immobile_set(group, radius, descriptor):
    """Boundary edge count of a described vertex set in one window."""
    rank = parse_group(group)
    window = CayleyWindow(rank, radius)
    subset = subset_from_json(window, parse_json(descriptor, "--set"))
    emit(
        {
            "group": group,
            "radius": radius,
            "set_size": len(subset),
            "window_size": len(window.vertices()),
            "boundary_edges": boundary_edge_count(window, subset),
        }
    )


@immobile.command(name="func")
@click.option("--group", type=str, default="F2", show_default=True)
@click.option("--schedule", type=str, default="4,6,8", show_default=True)
@click.option("--set", "descriptor", type=str, default='{"kind":"suffix","v":[1]}', show_default=True)
@guarded
def immobile_func(group, schedule, descriptor):
    """Boundary-energy trend of an indicator over a radius schedule."""
    rank = parse_group(group)
    radii = parse_schedule(schedule)
    indicator = indicator_from_json(parse_json(descriptor, "--set"), rank)
    report = immobile_function_test(rank, indicator, radii)
    emit(
        {
            "group": group,
            "schedule": list(report.radii),
            "energies": [str(v) for v in report.sums],
            "verdict": report.verdict,
        }
    )


@immobile.command(name="cocycle")
@click.option("--group", type=str, default="F2", show_default=True)
@click.option("--radius", type=int, default=8, show_default=True)
@click.option("--word", type=str, required=True)
@click.option("--q", type=str, default=None, help="Second word for the chain identity.")
@click.option("--set", "descriptor", type=str, default='{"kind":"suffix","v":[1]}', show_default=True)
@guarded
def immobile_cocycle(group, radius, word, q, descriptor):
    """Support of the difference function of an indicator under one word."""
    rank = parse_group(group)
    window = CayleyWindow(rank, radius)
    indicator = indicator_from_json(parse_json(descriptor, "--set"), rank)
    g = word_from_json(parse_json(word, "--word"), rank)
    diff = gamma_difference(window, indicator, g)
    result = {
        "group": group,
        "radius": radius,
        "support": [
            {"at": list(h.letters), "value": int(v)}
            for h, v in sorted(diff.items(), key=lambda item: item[0].letters)
        ],
    }
    if q is not None:
        qw = word_from_json(parse_json(q, "--q"), rank)
        result["chain_residual"] = chain_identity_residual(window, indicator, g, qw)
    emit(result)


if __name__ == "__main__":
    main()
