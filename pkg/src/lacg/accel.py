"""Accelerated sequence over a frozen vertex hull, with restarts.

One accelerated step mixes the anchor point with the latest hull minimizer,
accumulates the gradient into a dual vector z, and reprojects z onto the
hull through the regularized subproblem from `projection`. The contraction
parameter is theta = sqrt(mu / (2L)) per step; restarting resets the weight
accumulators onto a fresh hull and may happen no more often than the
minimum restart period without losing the accelerated rate.

The warm-up variant targets problems whose minimizer lies in the interior:
it runs an unconstrained accelerated sequence (theta = sqrt(mu / L)) next
to plain toward steps and keeps the accelerated iterate only while it stays
feasible, which needs a membership test instead of hull projections.
"""

import math
from dataclasses import dataclass

import numpy as np

from .projection import HullSubproblem, VertexHull, solve_hull_subproblem

EPS_M_FLOOR = 1e-14
THETA_MAX = 0.5


def contraction_parameter(mu, L):
    """theta = sqrt(mu/(2L)), clamped away from degenerate conditioning."""
    return min(math.sqrt(mu / (2.0 * L)), THETA_MAX)


def min_restart_period(mu, L):
    """Minimum iterations between restarts: (2/theta) log(L/mu - 1).

    Equals 2 sqrt(2L/mu) log(L/mu - 1) since 1/(2 theta^2) = L/mu. The log
    argument drops below 1 for L/mu <= 2, where any spacing is safe, so the
    period clamps to zero.
    """
    if mu >= L:
        return 0.0
    ratio = L / mu
    if ratio <= 2.0:
        return 0.0
    theta = math.sqrt(mu / (2.0 * L))
    return (2.0 / theta) * math.log(ratio - 1.0)


class AccState:
    """State of the accelerated sequence.

    x is the anchor the next step mixes from (the coupled output when run
    inside the coupling loop), w the latest hull minimizer with barycentric
    coordinates warm_lambda over `hull`, z the dual accumulator, and (a, A)
    the step and cumulative weights with a/A = theta away from restarts.
    """

    def __init__(self, obj, hull, y0, eps_m=EPS_M_FLOOR):
        self.theta = contraction_parameter(obj.mu, obj.L)
        self.reg_offset = obj.L - obj.mu
        self.restart_period = min_restart_period(obj.mu, obj.L)
        self.flagged = False
        self.restart(obj, y0, hull.vertices, eps_m=eps_m, warm_lambda=None)

    def copy(self):
        dup = object.__new__(AccState)
        dup.__dict__.update(self.__dict__)
        dup.x = self.x.copy()
        dup.w = self.w.copy()
        dup.z = self.z.copy()
        dup.warm_lambda = self.warm_lambda.copy()
        return dup

    def advance_weights(self):
        """A <- A/(1-theta), a <- theta A; keeps a/A = theta."""
        self.A = self.A / (1.0 - self.theta)
        self.a = self.theta * self.A

    def restart(self, obj, y, vertices, eps_m, warm_lambda=None):
        """Reset accumulators onto conv(vertices), anchored at y.

        z restarts from the gradient at y and both w and the anchor jump to
        the regularized hull minimizer (sigma = L at unit weights).
        """
        self.hull = VertexHull(vertices)
        self.a = 1.0
        self.A = 1.0
        grad = obj.grad(y)
        self.z = obj.L * y - grad
        sub = HullSubproblem.build(self.hull, self.z, obj.mu * self.A + self.reg_offset)
        sol = solve_hull_subproblem(sub, max(eps_m, EPS_M_FLOOR), warm_start=warm_lambda)
        self.flagged = self.flagged or not sol.converged
        self.w = sol.point
        self.warm_lambda = sol.lam
        self.x = sol.point.copy()
        self.restart_flag = False
        self.restart_count = 0
        return sol.point

    def replace_hull(self, vertices):
        """Swap in a hull; the next warm start keeps weights of surviving vertices."""
        old_weights = dict(zip(self.hull.keys, self.warm_lambda))
        self.hull = VertexHull(vertices)
        warm = np.array([old_weights.get(key, 0.0) for key in self.hull.keys])
        total = warm.sum()
        if total > 0:
            self.warm_lambda = warm / total
        else:
            self.warm_lambda = np.full(self.hull.m, 1.0 / self.hull.m)


def acc_step(state, obj, eps_m):
    """One accelerated step; mutates state and returns the new trial point.

    y mixes the anchor with the previous hull minimizer, z accumulates the
    weighted gradient at y, the new w solves the hull subproblem to eps_m,
    and the trial point is the (1-theta, theta) mix of anchor and w.
    """
    theta = state.a / state.A
    y = (state.x + theta * state.w) / (1.0 + theta)
    grad = obj.grad(y)
    state.z = state.z - state.a * grad + obj.mu * state.a * y
    sigma = obj.mu * state.A + state.reg_offset
    sub = HullSubproblem.build(state.hull, state.z, sigma)
    sol = solve_hull_subproblem(sub, max(eps_m, EPS_M_FLOOR), warm_start=state.warm_lambda)
    state.flagged = state.flagged or not sol.converged
    state.w = sol.point
    state.warm_lambda = sol.lam
    return (1.0 - theta) * state.x + theta * state.w


def accel_wolfe_gap(state, obj, x):
    """Wolfe gap of f at x over the current hull: max_u <grad, x - u>."""
    grad = obj.grad(x)
    return float(grad @ x) - float(np.min(state.hull.matrix @ grad))


@dataclass
class WarmupReport:
    accepted: bool
    took_accelerated: bool
    fw_gap: float


class WarmupState:
    """Hybrid of plain toward steps and an unconstrained accelerated sequence."""

    def __init__(self, obj, x0):
        self.x = np.asarray(x0, dtype=float).copy()
        self.w = self.x.copy()
        self.theta = min(math.sqrt(obj.mu / obj.L), 1.0)


def warmup_iteration(state, obj, oracle, membership_tol=1e-9, precomputed=None):
    """One hybrid iteration; keeps the accelerated iterate only if feasible.

    The toward step uses the smoothness short step. The accelerated update
    is the unconstrained proximal form w' = (1-theta) w + theta (y -
    grad(y)/mu); when its mix lands outside the feasible set the sequence
    resets (w <- x) and the toward step is taken instead. On feasible sets
    that are not full-dimensional the gradient is projected onto the
    direction space of the affine hull, so the accelerated sequence only
    leaves the set through a facet, never through the hull itself; the
    contraction analysis is unchanged since f keeps its curvature bounds on
    the subspace.
    """
    x = state.x
    if precomputed is not None:
        grad, v, gap = precomputed
    else:
        grad = obj.grad(x)
        v = oracle.lmo(grad)
        gap = float(grad @ (x - v.point))
    project = getattr(oracle, "tangent_project", lambda g: g)
    d = v.point - x
    sq = float(d @ d)
    eta = 0.0 if sq == 0.0 else min(max(gap / (obj.L * sq), 0.0), 1.0)
    x_fw = x + eta * d

    theta = state.theta
    y = (x + theta * state.w) / (1.0 + theta)
    w_new = (1.0 - theta) * state.w + theta * (y - project(obj.grad(y)) / obj.mu)
    x_acc = (1.0 - theta) * x + theta * w_new

    if oracle.membership(x_acc, membership_tol):
        state.w = w_new
        took_acc = obj.value(x_acc) <= obj.value(x_fw)
        state.x = x_acc if took_acc else x_fw
        return WarmupReport(accepted=True, took_accelerated=took_acc, fw_gap=gap)
    state.x = x_fw
    state.w = x_fw.copy()
    return WarmupReport(accepted=False, took_accelerated=False, fw_gap=gap)
