"""Exact simplex projection and the inexact convex-hull projection subproblem.

The hull subproblem is
    minimize  -<z, u> + (sigma/2) ||u||^2   over  u in conv(V),
written in barycentric coordinates as
    g(lam) = -<V z, lam> + (sigma/2) lam' (V V') lam   over the simplex,
and solved by projected Nesterov iterations. Suboptimality is certified by
the linear-minimization (Wolfe) gap of g over the simplex, which upper
bounds g(lam) - min g for convex g, so a returned solution always carries
a verified accuracy bound.
"""

from dataclasses import dataclass

import numpy as np

_GRAM_POWER_ITERS = 50
_GRAM_INFLATION = 1.01


def project_simplex(y):
    """Euclidean projection onto the probability simplex, O(m log m).

    Sort-and-threshold: find the largest prefix of the sorted entries whose
    shifted average keeps the pivot positive, subtract, clip, renormalize.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("expected a nonempty 1-d array")
    m = y.size
    u = np.sort(y)[::-1]
    cumulative = np.cumsum(u) - 1.0
    counts = np.arange(1, m + 1)
    feasible = u - cumulative / counts > 0
    rho = counts[feasible][-1]
    tau = cumulative[rho - 1] / rho
    x = np.maximum(y - tau, 0.0)
    return x / x.sum()


class VertexHull:
    """Frozen set of vertices with the cached quantities the solver needs.

    The Gram matrix and its spectral bounds are computed once per hull; only
    the linear term V z changes between solves, so reprojection onto an
    unchanged hull costs O(m n) setup.
    """

    def __init__(self, vertices):
        vertices = list(vertices)
        if not vertices:
            raise ValueError("hull needs at least one vertex")
        self.vertices = vertices
        self.keys = [v.key for v in vertices]
        if len(set(self.keys)) != len(self.keys):
            raise ValueError("duplicate vertex keys in hull")
        self.matrix = np.stack([v.point for v in vertices])
        self.m = len(vertices)
        self.gram = self.matrix @ self.matrix.T
        self.gram_top_bound = self._power_bound(self.gram)
        self.gram_min = max(float(np.linalg.eigvalsh(self.gram)[0]), 0.0) if self.m > 1 else float(self.gram[0, 0])
        self.is_standard_basis = self._detect_standard_basis()

    @staticmethod
    def _power_bound(gram):
        m = gram.shape[0]
        if m == 1:
            return float(gram[0, 0]) * _GRAM_INFLATION
        v = np.full(m, 1.0 / np.sqrt(m))
        rayleigh = 0.0
        for _ in range(_GRAM_POWER_ITERS):
            w = gram @ v
            norm = np.linalg.norm(w)
            if norm == 0.0:
                return 0.0
            rayleigh = float(v @ w)
            v = w / norm
        return max(rayleigh, float(v @ (gram @ v))) * _GRAM_INFLATION

    def _detect_standard_basis(self):
        cols = set()
        for row in self.matrix:
            nz = np.nonzero(row)[0]
            if nz.size != 1 or row[nz[0]] != 1.0:
                return False
            cols.add(int(nz[0]))
        return len(cols) == self.m

    def linear_term(self, z):
        return self.matrix @ z

    def lift(self, lam):
        return lam @ self.matrix


@dataclass
class HullSubproblem:
    hull: VertexHull
    linear: np.ndarray
    sigma: float

    @classmethod
    def build(cls, hull, z, sigma):
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        return cls(hull=hull, linear=hull.linear_term(z), sigma=float(sigma))

    @property
    def gram(self):
        return self.hull.gram

    def value(self, lam):
        return -float(self.linear @ lam) + 0.5 * self.sigma * float(lam @ (self.gram @ lam))

    def grad(self, lam, gram_lam=None):
        if gram_lam is None:
            gram_lam = self.gram @ lam
        return self.sigma * gram_lam - self.linear

    def wolfe_gap(self, lam, grad=None):
        if grad is None:
            grad = self.grad(lam)
        return float(grad @ lam) - float(np.min(grad))


@dataclass
class HullSolution:
    lam: np.ndarray
    point: np.ndarray
    certified_gap: float
    converged: bool


def _normalize_weights(lam, m):
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (m,) or np.any(lam < 0) or lam.sum() <= 0:
        return np.full(m, 1.0 / m)
    return lam / lam.sum()


def solve_hull_subproblem(sub, target_eps, warm_start=None, use_fastpath=True):
    """Certified eps-solution of the hull subproblem in barycentric form.

    Runs projected Nesterov iterations (constant momentum when the Gram
    matrix is definite, convex schedule otherwise) and stops once the Wolfe
    gap certifies `target_eps`. Returns the best iterate seen, so a warm
    start can never be worsened. A hull of distinct standard basis vectors
    short-circuits to the exact closed form.
    """
    if target_eps <= 0:
        raise ValueError("target_eps must be positive")
    if use_fastpath and sub.hull.is_standard_basis:
        return _solve_basis_exact(sub)
    return _solve_accelerated(sub, target_eps, warm_start)


def solve_hull_subproblem_simplex_fastpath(sub, target_eps=1e-12, warm_start=None):
    """Exact solution when the hull vertices are distinct basis vectors.

    With V V' = I the subproblem is a Euclidean projection of (V z)/sigma
    onto the simplex. Violated precondition falls back to the general
    solver.
    """
    if not sub.hull.is_standard_basis:
        return _solve_accelerated(sub, target_eps, warm_start)
    return _solve_basis_exact(sub)


def _solve_basis_exact(sub):
    lam = project_simplex(sub.linear / sub.sigma)
    return HullSolution(lam=lam, point=sub.hull.lift(lam), certified_gap=0.0, converged=True)


def _solve_accelerated(sub, target_eps, warm_start):
    m = sub.hull.m
    if m == 1:
        lam = np.array([1.0])
        return HullSolution(lam=lam, point=sub.hull.lift(lam), certified_gap=0.0, converged=True)

    gram = sub.gram
    lipschitz = sub.sigma * sub.hull.gram_top_bound
    if lipschitz <= 0:
        # degenerate hull of zero vectors: g is linear, a vertex is optimal
        lam = np.zeros(m)
        lam[int(np.argmax(sub.linear))] = 1.0
        return HullSolution(lam=lam, point=sub.hull.lift(lam), certified_gap=0.0, converged=True)
    strong = sub.sigma * sub.hull.gram_min
    if strong > 0:
        q = min(strong / lipschitz, 1.0)
        beta = (1.0 - np.sqrt(q)) / (1.0 + np.sqrt(q))
    else:
        beta = None  # convex schedule below

    lam = _normalize_weights(warm_start, m) if warm_start is not None else np.full(m, 1.0 / m)
    gram_lam = gram @ lam
    grad = sub.grad(lam, gram_lam)
    best_lam, best_val = lam, sub.value(lam)
    certified = sub.wolfe_gap(lam, grad)

    lam_prev, gram_prev = lam, gram_lam
    momentum_a = 1.0
    cap = 10 * m + 1000
    iters = 0
    while certified > target_eps and iters < cap:
        if beta is None:
            a_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * momentum_a**2))
            step_beta = (momentum_a - 1.0) / a_next
            momentum_a = a_next
        else:
            step_beta = beta
        nu = lam + step_beta * (lam - lam_prev)
        gram_nu = gram_lam + step_beta * (gram_lam - gram_prev)
        grad_nu = sub.sigma * gram_nu - sub.linear
        lam_new = project_simplex(nu - grad_nu / lipschitz)

        lam_prev, gram_prev = lam, gram_lam
        lam, gram_lam = lam_new, gram @ lam_new
        grad = sub.grad(lam, gram_lam)
        val = sub.value(lam)
        if val < best_val:
            best_lam, best_val = lam, val
        certified = min(certified, sub.wolfe_gap(lam, grad))
        iters += 1

    return HullSolution(
        lam=best_lam,
        point=sub.hull.lift(best_lam),
        certified_gap=certified,
        converged=certified <= target_eps,
    )
