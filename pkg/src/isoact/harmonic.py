"""Difference operators, the Poisson transform, and boundary kernels on trees.

Everything here runs on an :class:`OrientedGraph`: a finite window of a
locally finite graph with one canonical orientation chosen per edge and a
flag marking the vertices whose full neighbourhood lies inside the window.
Edge functions are understood antisymmetrically, stored on the canonical
orientations only.

The gradient and divergence are exact adjoints for the counting inner
products, and on the homogeneous tree ball they compose to ``(n + 1)``
times the mean-value Laplacian at interior vertices.  The Poisson transform
turns boundary data into a divergence-free edge function, with all measure
arithmetic done in exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import (
    BallTooSmall,
    ConstraintViolation,
    NotZeroMean,
    SolveFailure,
    TreeMismatch,
    VertexNotFound,
)
from .treeball import (
    Address,
    TreeBall,
    common_prefix_length,
    cylinder_measure,
    measure_from,
)


@dataclass(frozen=True)
class OrientedGraph:
    """Finite graph window with canonical edge orientations.

    ``edges`` holds ``(tail_index, head_index)`` pairs into ``vertices``.
    ``interior[i]`` is True when vertex ``i`` keeps its full degree in the
    ambient graph, so difference-operator identities can be asserted there.
    """

    vertices: Tuple[object, ...]
    edges: Tuple[Tuple[int, int], ...]
    interior: Tuple[bool, ...]

    @cached_property
    def index(self) -> Dict[object, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def incident(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """Per vertex, the ``(edge_index, sign)`` pairs; sign +1 when the
        canonical orientation points into the vertex."""
        buckets: List[List[Tuple[int, int]]] = [[] for _ in self.vertices]
        for e, (t, h) in enumerate(self.edges):
            buckets[t].append((e, -1))
            buckets[h].append((e, +1))
        return tuple(tuple(b) for b in buckets)

    def degree(self, i: int) -> int:
        return len(self.incident[i])

    def edge_index(self, u, v) -> Tuple[int, int]:
        """Edge joining two vertices, as ``(index, sign)`` relative to the
        orientation ``u -> v``."""
        iu, iv = self.index[u], self.index[v]
        for e, (t, h) in enumerate(self.edges):
            if (t, h) == (iu, iv):
                return e, +1
            if (t, h) == (iv, iu):
                return e, -1
        raise VertexNotFound(f"no edge between {u} and {v}")


def tree_ball_graph(ball: TreeBall) -> OrientedGraph:
    """The ball as an oriented graph, edges pointing away from the root."""
    vs = ball.vertices()
    idx = {v: i for i, v in enumerate(vs)}
    edges = tuple((idx[v[:-1]], idx[v]) for v in vs if v)
    interior = tuple(ball.is_interior(v) for v in vs)
    return OrientedGraph(tuple(vs), edges, interior)


# ---------------------------------------------------------------------------
# Difference operators
# ---------------------------------------------------------------------------


def gradient(graph: OrientedGraph, f: Sequence) -> List:
    """Edge function ``f(head) - f(tail)`` on canonical orientations."""
    return [f[h] - f[t] for t, h in graph.edges]


def divergence(graph: OrientedGraph, h: Sequence) -> List:
    """Vertex function summing ``h`` over edges oriented into each vertex.

    With the antisymmetric reading of edge functions this is the formal
    adjoint of :func:`gradient`: canonical edges into the vertex count
    positively, edges out of it negatively.
    """
    out = [0] * len(graph.vertices)
    for val, (t, h) in zip(h, graph.edges):
        out[h] = out[h] + val
        out[t] = out[t] - val
    return out


def mean_value_laplacian(ball: TreeBall, graph: OrientedGraph, f: Sequence) -> Dict[int, object]:
    """``f - (neighbour average)`` at interior vertices of a tree ball.

    Returned as a map from vertex index to value; boundary vertices are
    omitted because their window degree understates the tree degree.
    """
    p = ball.n + 1
    exact = all(isinstance(x, (Fraction, int)) for x in f)
    out: Dict[int, object] = {}
    for i in range(len(graph.vertices)):
        if not graph.interior[i]:
            continue
        acc = 0
        for e, sign in graph.incident[i]:
            t, h = graph.edges[e]
            acc = acc + f[t if sign > 0 else h]
        out[i] = f[i] - Fraction(1, p) * acc if exact else f[i] - acc / p
    return out


def edge_inner(h1: Sequence, h2: Sequence):
    return sum(a * b for a, b in zip(h1, h2))


def vertex_inner(f1: Sequence, f2: Sequence):
    return sum(a * b for a, b in zip(f1, f2))


# ---------------------------------------------------------------------------
# Cylinder data and the Poisson transform
# ---------------------------------------------------------------------------


def cylinder_vertices(ball: TreeBall, k: int) -> List[Address]:
    if not 1 <= k <= ball.radius:
        raise ConstraintViolation(f"cylinder depth {k} outside 1..{ball.radius}")
    return [v for v in ball.vertices() if len(v) == k]


def _check_cylinder_function(ball: TreeBall, k: int, values: Dict[Address, Fraction]) -> None:
    expected = set(cylinder_vertices(ball, k))
    if set(values) != expected:
        raise ConstraintViolation("cylinder function must cover every depth-k vertex exactly")
    for v in values.values():
        if isinstance(v, float):
            raise ConstraintViolation("cylinder values must be exact rationals")


def root_mean(ball: TreeBall, k: int, values: Dict[Address, Fraction]) -> Fraction:
    _check_cylinder_function(ball, k, values)
    return sum((Fraction(values[c]) * cylinder_measure(ball, c) for c in values), Fraction(0))


def poisson_transform(
    ball: TreeBall, graph: OrientedGraph, k: int, values: Dict[Address, Fraction]
) -> List[Fraction]:
    """Divergence-free edge function attached to zero-mean boundary data.

    The data is a function on depth-``k`` cylinders.  For an edge, the value
    integrates the data over the far-side boundary against the canonical
    measure seen from the near vertex, antisymmetrised over the two sides.
    The result has exactly zero divergence at every interior vertex.

    Requires ``radius >= k + 2`` so at least one interior shell separates
    the data depth from the window boundary, and zero mean at the root
    (:class:`NotZeroMean` otherwise).
    """
    if ball.radius < k + 2:
        raise BallTooSmall(f"radius {ball.radius} < {k + 2}; enlarge the ball or lower k")
    mean = root_mean(ball, k, values)
    if mean != 0:
        raise NotZeroMean(f"data has root mean {mean}; subtract it first")
    leaves = ball.leaves()
    leaf_val = {l: Fraction(values[l[:k]]) for l in leaves}
    out: List[Fraction] = []
    for t, h in graph.edges:
        tail = graph.vertices[t]
        head = graph.vertices[h]
        plus = Fraction(0)
        minus = Fraction(0)
        for l in leaves:
            if common_prefix_length(l, head) == len(head):
                plus += leaf_val[l] * measure_from(ball, tail, l)
            else:
                minus += leaf_val[l] * measure_from(ball, head, l)
        out.append(plus - minus)
    return out


# ---------------------------------------------------------------------------
# Boundary kernel grams
# ---------------------------------------------------------------------------


def cylinder_basis(ball: TreeBall, k: int) -> List[Dict[Address, Fraction]]:
    """Zero-mean basis: differences of consecutive depth-k cylinder indicators.

    Consecutive cylinders have equal mass, so each difference has zero mean;
    together they span the zero-mean cylinder functions.
    """
    cyls = cylinder_vertices(ball, k)
    basis = []
    for i in range(len(cyls) - 1):
        f = {c: Fraction(0) for c in cyls}
        f[cyls[i]] = Fraction(1)
        f[cyls[i + 1]] = Fraction(-1)
        basis.append(f)
    return basis


def _pair_energy_inv(ball: TreeBall, a: Address, b: Address, k: int) -> Fraction:
    """Resolution-truncated energy of ``1/delta`` over a cylinder pair.

    Off the diagonal the visual metric is constant on the pair and the
    value is exact.  On the diagonal the kernel is clamped at the ball's
    resolution ``delta >= n^{-radius}``, giving a finite self energy with
    one constant contribution per resolved level.
    """
    n, D = ball.n, ball.radius
    mu_k = cylinder_measure(ball, a)
    if a != b:
        m = common_prefix_length(a, b)
        return n**m * mu_k * mu_k
    unit = Fraction(n) ** (2 - k) / (n + 1) ** 2
    return unit * ((D - k) * (1 - Fraction(1, n)) + 1)


def gram_inv_delta(ball: TreeBall, k: int) -> List[List[Fraction]]:
    """Gram of ``-1/delta`` over the zero-mean cylinder basis.

    Truncated at the ball's resolution; see :func:`_pair_energy_inv`.
    """
    cyls = cylinder_vertices(ball, k)
    basis = cylinder_basis(ball, k)
    energy = {
        (a, b): _pair_energy_inv(ball, a, b, k) for a in cyls for b in cyls
    }
    out = []
    for f in basis:
        row = []
        for g in basis:
            acc = Fraction(0)
            for a in cyls:
                if f[a] == 0:
                    continue
                for b in cyls:
                    if g[b] == 0:
                        continue
                    acc += f[a] * g[b] * energy[(a, b)]
            row.append(-acc)
        out.append(row)
    return out


def gram_neg_log(ball: TreeBall, k: int) -> List[List[Fraction]]:
    """Gram of ``-log delta`` over the zero-mean cylinder basis.

    Entries are exact rationals in units of ``log n``: the kernel is the
    divergence depth times ``log n``, and splitting by depth gives one
    finite sum per resolved level plus a geometric tail below depth ``k``
    summing to ``mu_k^2 / (n - 1)`` per cylinder.
    """
    n = ball.n
    cyls = cylinder_vertices(ball, k)
    basis = cylinder_basis(ball, k)
    mu_k = cylinder_measure(ball, cyls[0])

    def entry(f, g) -> Fraction:
        acc = Fraction(0)
        for j in range(1, k + 1):
            for u in cylinder_vertices(ball, j):
                fu = sum(
                    (f[c] * mu_k for c in cyls if common_prefix_length(c, u) == j), Fraction(0)
                )
                gu = sum(
                    (g[c] * mu_k for c in cyls if common_prefix_length(c, u) == j), Fraction(0)
                )
                acc += fu * gu
        tail = sum((f[c] * g[c] for c in cyls), Fraction(0))
        return acc + Fraction(1, n - 1) * mu_k * mu_k * tail

    return [[entry(f, g) for g in basis] for f in basis]


def gram_neg_log_padic(ball: TreeBall, k: int, p: int) -> List[List[Fraction]]:
    """Same kernel read through the p-adic metric on the boundary.

    When ``n`` equals the prime ``p`` the visual metric coincides with the
    p-adic chordal metric, so the gram is the one of :func:`gram_neg_log`;
    any other ``n`` is a category error and raises :class:`TreeMismatch`.
    """
    if any(p % q == 0 for q in range(2, int(p**0.5) + 1)) or p < 2:
        raise ConstraintViolation(f"{p} is not prime")
    if ball.n != p:
        raise TreeMismatch(f"ball branching {ball.n} does not realise the {p}-adic boundary")
    return gram_neg_log(ball, k)


# ---------------------------------------------------------------------------
# Harmonic decomposition of edge flows
# ---------------------------------------------------------------------------


def _solve_fraction_dense(rows: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    m = len(rows)
    aug = [list(rows[i]) + [rhs[i]] for i in range(m)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise SolveFailure("singular system in exact elimination")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][m] for i in range(m)]


EXACT_SOLVE_LIMIT = 400


def harmonic_decompose(graph: OrientedGraph, flow: Sequence, method: str = "auto"):
    """Split an edge flow into a gradient and a divergence-free remainder.

    Solves the Dirichlet problem ``div grad u = div flow`` on interior
    vertices with ``u = 0`` on the window boundary and returns
    ``(u, remainder)`` with ``remainder = flow - grad u``.  The remainder
    has zero divergence at every interior vertex.

    ``method``: ``"exact"`` runs rational elimination (small windows only),
    ``"float"`` runs conjugate gradients on the sparse system, ``"auto"``
    picks by size and input type.
    """
    interior = [i for i, flag in enumerate(graph.interior) if flag]
    pos = {v: j for j, v in enumerate(interior)}
    rhs_full = divergence(graph, flow)
    if method == "auto":
        exact_ok = all(isinstance(x, (Fraction, int)) for x in flow)
        method = "exact" if exact_ok and len(interior) <= EXACT_SOLVE_LIMIT else "float"
    if method == "exact":
        m = len(interior)
        rows = [[Fraction(0)] * m for _ in range(m)]
        for j, i in enumerate(interior):
            rows[j][j] = Fraction(graph.degree(i))
            for e, _sign in graph.incident[i]:
                t, h = graph.edges[e]
                other = h if t == i else t
                if other in pos:
                    rows[j][pos[other]] -= 1
        sol = _solve_fraction_dense(rows, [Fraction(rhs_full[i]) for i in interior])
        u = [Fraction(0)] * len(graph.vertices)
        for j, i in enumerate(interior):
            u[i] = sol[j]
    elif method == "float":
        m = len(interior)
        data, ri, ci = [], [], []
        for j, i in enumerate(interior):
            ri.append(j)
            ci.append(j)
            data.append(float(graph.degree(i)))
            for e, _sign in graph.incident[i]:
                t, h = graph.edges[e]
                other = h if t == i else t
                if other in pos:
                    ri.append(j)
                    ci.append(pos[other])
                    data.append(-1.0)
        mat = scipy.sparse.csr_matrix((data, (ri, ci)), shape=(m, m))
        rhs = np.array([float(rhs_full[i]) for i in interior])
        sol, info = scipy.sparse.linalg.cg(mat, rhs, rtol=1e-12, atol=0.0, maxiter=20 * m)
        if info != 0:
            raise SolveFailure(f"conjugate gradients did not converge (info={info})")
        u = [0.0] * len(graph.vertices)
        for j, i in enumerate(interior):
            u[i] = float(sol[j])
    else:
        raise ConstraintViolation(f"unknown method {method!r}")
    grad_u = gradient(graph, u)
    remainder = [a - b for a, b in zip(flow, grad_u)]
    return u, remainder


def interior_divergence_max(graph: OrientedGraph, h: Sequence) -> float:
    div = divergence(graph, h)
    vals = [abs(float(div[i])) for i, flag in enumerate(graph.interior) if flag]
    return max(vals) if vals else 0.0


def single_edge_flow(graph: OrientedGraph, tail, head) -> List[Fraction]:
    """Unit flow along one edge, zero elsewhere."""
    e, sign = graph.edge_index(tail, head)
    out = [Fraction(0)] * len(graph.edges)
    out[e] = Fraction(sign)
    return out


def subtree_flow_norms(n: int, radii: Sequence[int], method: str = "float") -> List[float]:
    """Squared norms of the divergence-free part of a single-edge flow.

    For each radius, builds the tree ball, pushes the unit flow on the edge
    from the root into direction 0 through :func:`harmonic_decompose`, and
    records the squared norm of the remainder.  On the 4-regular tree this
    converges to 1/2 as the radius grows.
    """
    out = []
    for r in radii:
        ball = TreeBall(n, r)
        graph = tree_ball_graph(ball)
        flow = single_edge_flow(graph, (), (0,))
        if method == "float":
            flow = [float(x) for x in flow]
        _, rem = harmonic_decompose(graph, flow, method=method)
        out.append(float(edge_inner(rem, rem)))
    return out
