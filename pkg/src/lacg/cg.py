"""Conditional-gradient steps over an explicit active set.

The active set keeps barycentric weights alongside the vertices; the
iterate is always recomputed from the weights so the convex-combination
invariant cannot drift. Away steps that hit the boundary of the weight
simplex remove the away vertex (drop step).
"""

from dataclasses import dataclass

import numpy as np

PRUNE_TOL = 1e-12

STEP_FW = "fw"
STEP_AWAY = "away"
STEP_DROP = "drop"
STEP_PAIRWISE = "pairwise"


@dataclass
class CGStepReport:
    step_type: str
    gamma: float
    fw_gap: float
    vertex_added: bool = False
    vertex_dropped: bool = False


class ActiveSet:
    """Vertices plus strictly positive weights summing to one."""

    def __init__(self, vertices, weights):
        self.vertices = list(vertices)
        self.weights = np.asarray(weights, dtype=float)
        if len(self.vertices) != self.weights.size:
            raise ValueError("vertex/weight length mismatch")
        if len({v.key for v in self.vertices}) != len(self.vertices):
            raise ValueError("duplicate vertex keys")
        self._index = {v.key: i for i, v in enumerate(self.vertices)}
        self.matrix = np.stack([v.point for v in self.vertices])
        self._prune()

    @classmethod
    def from_vertex(cls, vertex):
        return cls([vertex], np.array([1.0]))

    @property
    def size(self):
        return len(self.vertices)

    @property
    def point(self):
        return self._point

    def index_of(self, key):
        return self._index.get(key)

    def weight_of(self, key):
        idx = self._index.get(key)
        return 0.0 if idx is None else float(self.weights[idx])

    def copy(self):
        return ActiveSet(list(self.vertices), self.weights.copy())

    def _rebuild(self):
        self._index = {v.key: i for i, v in enumerate(self.vertices)}
        self.matrix = np.stack([v.point for v in self.vertices])

    def _prune(self):
        keep = self.weights > PRUNE_TOL
        if not np.all(keep):
            if not np.any(keep):
                keep[int(np.argmax(self.weights))] = True
            self.vertices = [v for v, k in zip(self.vertices, keep) if k]
            self.weights = self.weights[keep]
            self._rebuild()
        self.weights = self.weights / self.weights.sum()
        self._point = self.weights @ self.matrix

    def _ensure_member(self, vertex):
        idx = self._index.get(vertex.key)
        if idx is not None:
            return idx, False
        self.vertices.append(vertex)
        self.weights = np.append(self.weights, 0.0)
        self._rebuild()
        return len(self.vertices) - 1, True

    def apply_fw(self, vertex, gamma):
        """x <- x + gamma (s - x): scale all weights by 1-gamma, add gamma to s."""
        if gamma > 0.0:
            idx, _ = self._ensure_member(vertex)
            self.weights *= 1.0 - gamma
            self.weights[idx] += gamma
        self._prune()

    def apply_away(self, index, gamma):
        """x <- x + gamma (x - v): scale weights by 1+gamma, subtract gamma from v."""
        if gamma > 0.0:
            self.weights *= 1.0 + gamma
            self.weights[index] -= gamma
        self._prune()

    def apply_pairwise(self, vertex, away_index, gamma):
        """Move gamma of mass from the away vertex onto s."""
        if gamma > 0.0:
            away_key = self.vertices[away_index].key
            idx, _ = self._ensure_member(vertex)
            self.weights[self.index_of(away_key)] -= gamma
            self.weights[idx] += gamma
        self._prune()


def step_size(obj, x, d, gamma_max, rule="exact"):
    """Step length along d, capped at gamma_max.

    exact: minimizer of the quadratic restricted to the segment.
    short_step: the smoothness-bound surrogate <-grad, d> / (L ||d||^2).
    """
    if gamma_max < 0:
        raise ValueError("gamma_max must be nonnegative")
    d = np.asarray(d, dtype=float)
    sq = float(d @ d)
    if sq == 0.0:
        return 0.0
    slope = float(obj.grad(x) @ d)
    if rule == "short_step":
        gamma = -slope / (obj.L * sq)
    elif rule == "exact":
        curv = obj.quad_form(d)
        if curv <= 0.0:
            return gamma_max if slope < 0 else 0.0
        gamma = -slope / curv
    else:
        raise ValueError(f"unknown step rule {rule!r}")
    return float(min(max(gamma, 0.0), gamma_max))


def wolfe_gap_at(obj, oracle, x, grad=None):
    """(grad, lmo vertex, gap) at x; gap = <grad, x - s> bounds the primal gap."""
    if grad is None:
        grad = obj.grad(x)
    s = oracle.lmo(grad)
    return grad, s, float(grad @ (x - s.point))


def fw_step(obj, oracle, x, rule="exact"):
    """One vanilla step: move toward the linear minimizer."""
    grad, s, gap = wolfe_gap_at(obj, oracle, x)
    d = s.point - x
    gamma = step_size(obj, x, d, 1.0, rule)
    report = CGStepReport(step_type=STEP_FW, gamma=gamma, fw_gap=gap, vertex_added=gamma > 0)
    return x + gamma * d, report


def _away_index(aset, grad):
    return int(np.argmax(aset.matrix @ grad))


def afw_iteration(obj, oracle, aset, rule="exact", precomputed=None):
    """One away-step iteration; mutates the active set in place.

    Picks the better of the toward and away directions by the larger inner
    product with the negative gradient; an away step that exhausts the away
    vertex's weight removes it. With a singleton set the away direction is
    undefined and the toward branch is forced.
    """
    x = aset.point
    if precomputed is not None:
        grad, s, gap = precomputed
    else:
        grad, s, gap = wolfe_gap_at(obj, oracle, x)

    use_away = False
    if aset.size > 1:
        away_idx = _away_index(aset, grad)
        away_point = aset.vertices[away_idx].point
        away_gain = float(grad @ (away_point - x))
        use_away = away_gain > gap
    if use_away:
        away_key = aset.vertices[away_idx].key
        lam = float(aset.weights[away_idx])
        gamma_max = lam / (1.0 - lam)
        d = x - away_point
        gamma = step_size(obj, x, d, gamma_max, rule)
        aset.apply_away(away_idx, gamma)
        dropped = aset.index_of(away_key) is None
        step = STEP_DROP if dropped else STEP_AWAY
        return CGStepReport(step_type=step, gamma=gamma, fw_gap=gap, vertex_dropped=dropped)

    gamma = step_size(obj, x, s.point - x, 1.0, rule)
    was_member = aset.index_of(s.key) is not None
    before = aset.size
    aset.apply_fw(s, gamma)
    added = (not was_member) and aset.index_of(s.key) is not None
    dropped = before + (1 if added else 0) > aset.size
    return CGStepReport(
        step_type=STEP_FW, gamma=gamma, fw_gap=gap, vertex_added=added, vertex_dropped=dropped
    )


def pfw_iteration(obj, oracle, aset, rule="exact", precomputed=None):
    """One pairwise iteration: shift mass from the away vertex to the toward one."""
    x = aset.point
    if precomputed is not None:
        grad, s, gap = precomputed
    else:
        grad, s, gap = wolfe_gap_at(obj, oracle, x)
    away_idx = _away_index(aset, grad)
    away_key = aset.vertices[away_idx].key
    if away_key == s.key:
        return CGStepReport(step_type=STEP_PAIRWISE, gamma=0.0, fw_gap=gap)
    d = s.point - aset.vertices[away_idx].point
    gamma_max = float(aset.weights[away_idx])
    gamma = step_size(obj, x, d, gamma_max, rule)
    was_member = aset.index_of(s.key) is not None
    before = aset.size
    aset.apply_pairwise(s, away_idx, gamma)
    added = (not was_member) and aset.index_of(s.key) is not None
    dropped = before + (1 if added else 0) > aset.size
    return CGStepReport(
        step_type=STEP_PAIRWISE, gamma=gamma, fw_gap=gap, vertex_added=added, vertex_dropped=dropped
    )
