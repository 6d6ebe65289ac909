"""Linear minimization oracles, membership tests, and vertex identity.

Each feasible region exposes `lmo(cost) -> Vertex` and `membership(x, tol)`.
Vertices carry a hashable `key` so active-set membership never compares
floating-point coordinates; ties in every oracle break deterministically
(lowest index first) so repeated runs produce identical traces.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

DEFAULT_MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class Vertex:
    point: np.ndarray
    key: tuple = field(compare=True)

    def __post_init__(self):
        object.__setattr__(self, "point", np.asarray(self.point, dtype=float))


class Simplex:
    """Probability simplex: x >= 0, sum x = 1. Vertices are basis vectors."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("need n >= 1")
        self.n = n

    def vertex(self, index):
        point = np.zeros(self.n)
        point[index] = 1.0
        return Vertex(point, ("simplex", index))

    def lmo(self, cost):
        cost = np.asarray(cost, dtype=float)
        if cost.shape != (self.n,):
            raise ValueError("cost dimension mismatch")
        return self.vertex(int(np.argmin(cost)))

    def membership(self, x, tol=DEFAULT_MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= -tol) and abs(float(np.sum(x)) - 1.0) <= tol)

    def initial_vertex(self):
        return self.vertex(0)

    def all_vertices(self):
        return [self.vertex(i) for i in range(self.n)]

    def tangent_project(self, v):
        """Project onto the direction space of the affine hull (sum = 0)."""
        v = np.asarray(v, dtype=float)
        return v - v.mean()


class L1Ball:
    """Scaled l1 ball: sum |x_i| <= tau. Vertices are +-tau * e_i."""

    def __init__(self, n, tau=1.0):
        if tau <= 0:
            raise ValueError("tau must be positive")
        self.n = n
        self.tau = float(tau)

    def vertex(self, index, sign):
        point = np.zeros(self.n)
        point[index] = sign * self.tau
        return Vertex(point, ("l1", index, sign))

    def lmo(self, cost):
        cost = np.asarray(cost, dtype=float)
        if cost.shape != (self.n,):
            raise ValueError("cost dimension mismatch")
        index = int(np.argmax(np.abs(cost)))
        # sign(0) treated as +1, so a zero cost lands on -tau * e_index
        sign = -1 if cost[index] > 0 else (1 if cost[index] < 0 else -1)
        return self.vertex(index, sign)

    def membership(self, x, tol=DEFAULT_MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        return bool(float(np.sum(np.abs(x))) <= self.tau + tol)

    def initial_vertex(self):
        return self.vertex(0, 1)

    def all_vertices(self):
        return [self.vertex(i, s) for i in range(self.n) for s in (1, -1)]

    def tangent_project(self, v):
        """Full-dimensional region: the affine hull is the whole space."""
        return np.asarray(v, dtype=float)


class Birkhoff:
    """Doubly stochastic matrices on `side` rows, vectorized row-major.

    The oracle solves a minimum-cost perfect matching (Hungarian method via
    scipy's assignment solver), so the returned permutation matrix is an
    exact linear minimizer.
    """

    def __init__(self, side):
        if side < 1:
            raise ValueError("need side >= 1")
        self.side = side
        self.n = side * side

    def vertex_from_permutation(self, perm):
        point = np.zeros((self.side, self.side))
        point[np.arange(self.side), perm] = 1.0
        return Vertex(point.ravel(), ("perm",) + tuple(int(j) for j in perm))

    def lmo(self, cost):
        cost = np.asarray(cost, dtype=float)
        if cost.shape != (self.n,):
            raise ValueError(f"cost must have dimension {self.side}^2 = {self.n}")
        rows, cols = linear_sum_assignment(cost.reshape(self.side, self.side))
        perm = np.empty(self.side, dtype=int)
        perm[rows] = cols
        return self.vertex_from_permutation(perm)

    def membership(self, x, tol=DEFAULT_MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        mat = x.reshape(self.side, self.side)
        return bool(
            np.all(mat >= -tol)
            and np.all(np.abs(mat.sum(axis=0) - 1.0) <= tol)
            and np.all(np.abs(mat.sum(axis=1) - 1.0) <= tol)
        )

    def initial_vertex(self):
        return self.vertex_from_permutation(np.arange(self.side))

    def tangent_project(self, v):
        """Double centering: zero out row and column sums."""
        mat = np.asarray(v, dtype=float).reshape(self.side, self.side)
        row = mat.mean(axis=1, keepdims=True)
        col = mat.mean(axis=0, keepdims=True)
        return (mat - row - col + mat.mean()).ravel()


class LayeredDAG:
    """Unit source-to-sink flows on a DAG; vertices are path indicators.

    Nodes must be topologically ordered (every edge goes from a lower to a
    higher node id). The oracle relaxes edges in topological order, O(E+V).
    """

    def __init__(self, num_nodes, edges, source, sink):
        self.num_nodes = num_nodes
        self.edges = [(int(u), int(v)) for u, v in edges]
        self.source = int(source)
        self.sink = int(sink)
        self.n = len(self.edges)
        for u, v in self.edges:
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ValueError("edge endpoint out of range")
            if u >= v:
                raise ValueError("edges must respect the topological node order")
        self._out = [[] for _ in range(num_nodes)]
        for idx, (u, v) in enumerate(self.edges):
            self._out[u].append((v, idx))
        self._incidence = None
        self._incidence_pinv = None

    def lmo(self, cost):
        cost = np.asarray(cost, dtype=float)
        if cost.shape != (self.n,):
            raise ValueError("cost dimension mismatch")
        dist = np.full(self.num_nodes, np.inf)
        pred = np.full(self.num_nodes, -1, dtype=int)
        dist[self.source] = 0.0
        for u in range(self.num_nodes):
            if not np.isfinite(dist[u]):
                continue
            for v, idx in self._out[u]:
                cand = dist[u] + cost[idx]
                if cand < dist[v]:
                    dist[v] = cand
                    pred[v] = idx
        if not np.isfinite(dist[self.sink]):
            raise RuntimeError("sink unreachable from source")
        path = []
        node = self.sink
        while node != self.source:
            idx = pred[node]
            path.append(idx)
            node = self.edges[idx][0]
        path = tuple(sorted(int(i) for i in path))
        point = np.zeros(self.n)
        point[list(path)] = 1.0
        return Vertex(point, ("path",) + path)

    def membership(self, x, tol=DEFAULT_MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        if np.any(x < -tol):
            return False
        div = np.zeros(self.num_nodes)
        for idx, (u, v) in enumerate(self.edges):
            div[u] += x[idx]
            div[v] -= x[idx]
        target = np.zeros(self.num_nodes)
        target[self.source] = 1.0
        target[self.sink] = -1.0
        return bool(np.all(np.abs(div - target) <= tol))

    def initial_vertex(self):
        return self.lmo(np.zeros(self.n))

    def tangent_project(self, v):
        """Project onto circulation space (zero divergence at every node)."""
        v = np.asarray(v, dtype=float)
        if self._incidence_pinv is None:
            inc = np.zeros((self.num_nodes, self.n))
            for idx, (u, w) in enumerate(self.edges):
                inc[u, idx] = 1.0
                inc[w, idx] = -1.0
            self._incidence = inc
            self._incidence_pinv = np.linalg.pinv(inc)
        return v - self._incidence_pinv @ (self._incidence @ v)

    def to_dict(self):
        return {
            "num_nodes": self.num_nodes,
            "edges": [[u, v] for u, v in self.edges],
            "source": self.source,
            "sink": self.sink,
        }

    @classmethod
    def from_dict(cls, payload):
        return cls(payload["num_nodes"], payload["edges"], payload["source"], payload["sink"])

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)


def layered_flow_graph(layers=15, width=15):
    """Source -> `layers` fully-connected layers of `width` nodes -> sink."""
    if layers < 1 or width < 1:
        raise ValueError("need layers >= 1 and width >= 1")
    num_nodes = 2 + layers * width
    source = 0
    sink = num_nodes - 1
    node = lambda layer, j: 1 + layer * width + j
    edges = [(source, node(0, j)) for j in range(width)]
    for layer in range(layers - 1):
        for i in range(width):
            for j in range(width):
                edges.append((node(layer, i), node(layer + 1, j)))
    edges.extend((node(layers - 1, i), sink) for i in range(width))
    return LayeredDAG(num_nodes, edges, source, sink)
