"""Coupling of an independent away-step sequence with an accelerated one.

Each iteration advances the conditional-gradient sequence, takes one
accelerated step over the current hull, handles restarts, and outputs the
best point seen so far. The hull the accelerated sequence projects onto is
frozen from the moment the CG sequence adds a vertex until the next
restart; while no vertex has been added it tracks the CG active set, which
can only shrink. Restart timing: a raised flag plus a restart counter that
must reach the minimum restart period; optionally an early restart fires
once the accelerated sequence has exhausted its progress on the frozen
hull.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .accel import EPS_M_FLOOR, AccState, accel_wolfe_gap, acc_step
from .cg import PRUNE_TOL, ActiveSet, afw_iteration, pfw_iteration, wolfe_gap_at
from .projection import VertexHull
from .trace import STATUS_GAP_REACHED, STATUS_MAX_ITERS, RunResult, TraceRow

CULL_THRESHOLD = 1e-12
TIE_TOL = 1e-15

RESTART_FLAG = "flag"
RESTART_EARLY = "early"


@dataclass
class LacgConfig:
    inner_cg: str = "afw"
    eps_target: float = 1e-8
    max_iters: int = 20000
    enhancement_enabled: bool = False
    early_restart_enabled: bool = False
    culling_enabled: bool = False
    step_rule: str = "exact"
    seed: int = 0

    def __post_init__(self):
        if self.eps_target <= 0:
            raise ValueError("eps_target must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.inner_cg not in ("afw", "pfw"):
            raise ValueError(f"unknown inner CG variant {self.inner_cg!r}")
        if self.step_rule not in ("exact", "short_step"):
            raise ValueError(f"unknown step rule {self.step_rule!r}")


class LacgState:
    """Coupled run state: CG active set, accelerated state, monotone output.

    `coords_out` carries barycentric coordinates of the output point (vertex
    key -> (vertex, weight)) so the enhancement can hand the output back to
    the CG sequence as a well-formed active set.
    """

    def __init__(self, obj, x0):
        self.afw = ActiveSet.from_vertex(x0)
        self.acc = AccState(obj, VertexHull([x0]), x0.point)
        self.x_out = x0.point.copy()
        self.f_out = obj.value(self.x_out)
        self.coords_out = {x0.key: (x0, 1.0)}
        self.k = 0


@dataclass
class IterationRecord:
    step_type: str
    gamma: float
    f_afw: float
    f_acc: float
    f_out: float
    hull_size: int
    restarted: bool
    restart_cause: str | None
    transplanted: bool


def _mix_coords(coords_a, coords_b, weight_a, weight_b):
    out = {}
    for key, (vertex, w) in coords_a.items():
        out[key] = (vertex, weight_a * w)
    for key, (vertex, w) in coords_b.items():
        if key in out:
            out[key] = (vertex, out[key][1] + weight_b * w)
        else:
            out[key] = (vertex, weight_b * w)
    return {key: vw for key, vw in out.items() if vw[1] > 0.0}


def _hull_coords(hull, lam):
    return {v.key: (v, float(w)) for v, w in zip(hull.vertices, lam) if w > 0.0}


def _active_set_coords(aset):
    return {v.key: (v, float(w)) for v, w in zip(aset.vertices, aset.weights)}


def cull_active_set(acc, threshold=CULL_THRESHOLD):
    """Drop hull vertices whose barycentric weight in w falls below threshold.

    The weights renormalize and w is rebuilt from the surviving vertices; if
    every weight is below threshold the largest one is kept.
    """
    lam = acc.warm_lambda
    keep = lam >= threshold
    if not np.any(keep):
        keep[int(np.argmax(lam))] = True
    if np.all(keep):
        return acc
    vertices = [v for v, flag in zip(acc.hull.vertices, keep) if flag]
    weights = lam[keep]
    weights = weights / weights.sum()
    acc.hull = VertexHull(vertices)
    acc.warm_lambda = weights
    acc.w = acc.hull.lift(weights)
    return acc


def lacg_iteration(state, obj, oracle, cfg, precomputed=None):
    """One coupled iteration; mutates state, returns a telemetry record."""
    inner = afw_iteration if cfg.inner_cg == "afw" else pfw_iteration
    report = inner(obj, oracle, state.afw, rule=cfg.step_rule, precomputed=precomputed)

    acc = state.acc
    acc.advance_weights()
    eps_m = max(acc.a * cfg.eps_target / 8.0, EPS_M_FLOOR)
    hull_size = acc.hull.m
    x_hat = acc_step(acc, obj, eps_m)
    theta = acc.theta
    coords_hat = _mix_coords(state.coords_out, _hull_coords(acc.hull, acc.warm_lambda), 1.0 - theta, theta)

    f_afw = obj.value(state.afw.point)
    f_hat = obj.value(x_hat)

    restarted = False
    cause = None
    if acc.restart_flag and acc.restart_count >= acc.restart_period:
        restarted, cause = True, RESTART_FLAG
    elif cfg.early_restart_enabled and accel_wolfe_gap(acc, obj, x_hat) <= cfg.eps_target / math.sqrt(
        obj.mu * obj.L
    ):
        restarted, cause = True, RESTART_EARLY

    if restarted:
        vertices = list(state.afw.vertices)
        if f_afw <= f_hat:
            y, warm = state.afw.point, state.afw.weights.copy()
        else:
            y = x_hat
            weights = {key: w for key, (_, w) in coords_hat.items()}
            warm = np.array([weights.get(v.key, 0.0) for v in vertices])
            warm = warm / warm.sum() if warm.sum() > 0 else None
        eps_restart = max(cfg.eps_target / 8.0, EPS_M_FLOOR)
        x_hat = acc.restart(obj, y, vertices, eps_m=eps_restart, warm_lambda=warm)
        coords_hat = _hull_coords(acc.hull, acc.warm_lambda)
        f_hat = obj.value(x_hat)
    else:
        if report.vertex_added:
            acc.restart_flag = True
        if not acc.restart_flag and set(acc.hull.keys) != {v.key for v in state.afw.vertices}:
            acc.replace_hull(list(state.afw.vertices))

    if cfg.culling_enabled:
        cull_active_set(acc, CULL_THRESHOLD)

    transplanted = _select_output(state, obj, cfg, x_hat, coords_hat, f_afw, f_hat)

    acc.x = state.x_out
    acc.restart_count += 1
    state.k += 1
    return IterationRecord(
        step_type=report.step_type,
        gamma=report.gamma,
        f_afw=f_afw,
        f_acc=f_hat,
        f_out=state.f_out,
        hull_size=hull_size,
        restarted=restarted,
        restart_cause=cause,
        transplanted=transplanted,
    )


def _set_output(state, point, f_val, coords):
    state.x_out = point
    state.f_out = f_val
    state.coords_out = coords


def _select_output(state, obj, cfg, x_hat, coords_hat, f_afw, f_hat):
    """Monotone output pick; optionally hands the kept output back to the CG set.

    Ties resolve toward keeping the current output, then the accelerated
    point, then the CG point, which maximizes stability of the monotone
    sequence.
    """
    if cfg.enhancement_enabled:
        if state.f_out <= f_afw and state.f_out <= f_hat:
            hull_keys = set(state.acc.hull.keys)
            afw_keys = {v.key for v in state.afw.vertices}
            support_keys = set(state.coords_out.keys())
            if hull_keys <= afw_keys and support_keys <= hull_keys:
                weights = np.array([state.coords_out.get(v.key, (None, 0.0))[1] for v in state.acc.hull.vertices])
                if np.all(weights <= PRUNE_TOL):
                    return False
                state.afw = ActiveSet(list(state.acc.hull.vertices), weights)
                return True
            return False
        if f_hat <= f_afw + TIE_TOL:
            _set_output(state, x_hat, f_hat, coords_hat)
        else:
            _set_output(state, state.afw.point.copy(), f_afw, _active_set_coords(state.afw))
        return False

    f_min = min(state.f_out, f_hat, f_afw)
    if state.f_out <= f_min + TIE_TOL:
        return False
    if f_hat <= f_min + TIE_TOL:
        _set_output(state, x_hat, f_hat, coords_hat)
    else:
        _set_output(state, state.afw.point.copy(), f_afw, _active_set_coords(state.afw))
    return False


def run_lacg(obj, oracle, x0, cfg, f_star=None):
    """Iterate the coupling until the CG Wolfe gap certifies eps_target.

    The stopping certificate is the CG sequence's Wolfe gap, which bounds
    its primal gap; the output point is never worse, so the certificate
    transfers to it.
    """
    state = LacgState(obj, x0)
    start = time.monotonic()
    grad, s, gap = wolfe_gap_at(obj, oracle, state.afw.point)
    algorithm = f"lacg-{cfg.inner_cg}"

    rows = [
        TraceRow(
            iter=0,
            elapsed_s=time.monotonic() - start,
            f=state.f_out,
            primal_gap=None if f_star is None else state.f_out - f_star,
            wolfe_gap=gap,
            active_set_size=state.afw.size,
            cset_size=state.acc.hull.m,
            step_type="init",
            restarted=False,
        )
    ]
    aux = {"f_afw": [state.f_out], "f_acc": [state.f_out], "restarts": [], "transplants": []}

    status = STATUS_GAP_REACHED if gap <= cfg.eps_target else None
    while status is None:
        record = lacg_iteration(state, obj, oracle, cfg, precomputed=(grad, s, gap))
        grad, s, gap = wolfe_gap_at(obj, oracle, state.afw.point)
        rows.append(
            TraceRow(
                iter=state.k,
                elapsed_s=time.monotonic() - start,
                f=state.f_out,
                primal_gap=None if f_star is None else state.f_out - f_star,
                wolfe_gap=gap,
                active_set_size=state.afw.size,
                cset_size=record.hull_size,
                step_type=record.step_type,
                restarted=record.restarted,
            )
        )
        aux["f_afw"].append(record.f_afw)
        aux["f_acc"].append(record.f_acc)
        if record.restarted:
            aux["restarts"].append((state.k, record.restart_cause))
        if record.transplanted:
            aux["transplants"].append(state.k)
        if gap <= cfg.eps_target:
            status = STATUS_GAP_REACHED
        elif state.k >= cfg.max_iters:
            status = STATUS_MAX_ITERS

    metadata = {
        "algorithm": algorithm,
        "status": status,
        "flagged": state.acc.flagged,
        "eps_target": cfg.eps_target,
        "iterations": state.k,
        "restart_period": state.acc.restart_period,
    }
    return RunResult(rows=rows, metadata=metadata, aux=aux)
