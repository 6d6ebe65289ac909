"""Benchmark instances, solver runners, reference solves, and comparisons.

An instance file bundles an objective (core JSON schema) with a polytope
descriptor; every generator is deterministic in its seed. Runners share the
trace schema from `trace` so any run can feed the same plotting pipeline.
"""

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .accel import EPS_M_FLOOR, AccState, WarmupState, accel_wolfe_gap, acc_step, warmup_iteration
from .cg import afw_iteration, pfw_iteration, step_size, wolfe_gap_at
from .cg import ActiveSet
from .coupling import LacgConfig, run_lacg
from .objectives import (
    QuadraticObjective,
    generate_sparse_gram_quadratic,
    generate_spectrum_quadratic,
    objective_from_dict,
    objective_to_dict,
)
from .polytopes import Birkhoff, L1Ball, LayeredDAG, Simplex, layered_flow_graph
from .projection import VertexHull
from .trace import CSV_FIELDS, STATUS_GAP_REACHED, STATUS_MAX_ITERS, RunResult, TraceRow, format_row, write_rows

GENERATORS = ("simplex-quadratic", "birkhoff-gram", "dag-flow", "l1-lasso", "lb-instance")
ALGORITHMS = ("fw", "afw", "pfw", "lacg-afw", "lacg-pfw", "muagd-fixed", "warmup-lacg")


@dataclass
class Instance:
    kind: str
    seed: int
    objective: QuadraticObjective
    polytope: object
    params: dict = field(default_factory=dict)


def build_instance(kind, seed=0, **params):
    if kind == "simplex-quadratic":
        n = int(params.get("n", 200))
        mu = float(params.get("mu", 1.0))
        L = float(params.get("L", 100.0))
        obj = generate_spectrum_quadratic(n, mu, L, seed)
        poly = Simplex(n)
    elif kind == "lb-instance":
        n = int(params.get("n", 100))
        matrix = 2.0 * (np.eye(n) if n <= 64 else sp.identity(n, format="csr"))
        obj = QuadraticObjective(matrix, np.zeros(n), L=2.0, mu=2.0)
        obj.generator, obj.seed = "lb", seed
        poly = Simplex(n)
    elif kind == "birkhoff-gram":
        side = int(params.get("side", 10))
        density = float(params.get("density", 0.01))
        obj = generate_sparse_gram_quadratic(side * side, density, seed)
        poly = Birkhoff(side)
    elif kind == "dag-flow":
        layers = int(params.get("layers", 4))
        width = int(params.get("width", 4))
        density = float(params.get("density", 0.01))
        poly = layered_flow_graph(layers=layers, width=width)
        obj = generate_sparse_gram_quadratic(poly.n, density, seed)
    elif kind == "l1-lasso":
        n = int(params.get("n", 100))
        mu = float(params.get("mu", 1.0))
        L = float(params.get("L", 100.0))
        tau = float(params.get("tau", 1.0))
        obj = generate_spectrum_quadratic(n, mu, L, seed)
        poly = L1Ball(n, tau)
    else:
        raise ValueError(f"unknown generator {kind!r}")
    return Instance(kind=kind, seed=seed, objective=obj, polytope=poly, params=dict(params))


def _polytope_to_dict(poly):
    if isinstance(poly, Simplex):
        return {"kind": "simplex", "n": poly.n}
    if isinstance(poly, L1Ball):
        return {"kind": "l1", "n": poly.n, "tau": poly.tau}
    if isinstance(poly, Birkhoff):
        return {"kind": "birkhoff", "side": poly.side}
    if isinstance(poly, LayeredDAG):
        return {"kind": "dag", "graph": poly.to_dict()}
    raise ValueError(f"cannot serialize polytope {type(poly)!r}")


def _polytope_from_dict(payload):
    kind = payload["kind"]
    if kind == "simplex":
        return Simplex(payload["n"])
    if kind == "l1":
        return L1Ball(payload["n"], payload["tau"])
    if kind == "birkhoff":
        return Birkhoff(payload["side"])
    if kind == "dag":
        return LayeredDAG.from_dict(payload["graph"])
    raise ValueError(f"unknown polytope kind {kind!r}")


def dump_instance(instance, path):
    payload = {
        "kind": instance.kind,
        "seed": instance.seed,
        "params": instance.params,
        "objective": objective_to_dict(instance.objective),
        "polytope": _polytope_to_dict(instance.polytope),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True)


def load_instance(path):
    with open(path) as fh:
        payload = json.load(fh)
    return Instance(
        kind=payload["kind"],
        seed=payload["seed"],
        objective=objective_from_dict(payload["objective"]),
        polytope=_polytope_from_dict(payload["polytope"]),
        params=payload.get("params", {}),
    )


def _run_plain(obj, oracle, point_of, advance, sizes, eps, max_iters, f_star, algorithm):
    """Shared run loop. `advance` consumes the precomputed (grad, lmo
    vertex, gap) at the current point and performs one step; `sizes()`
    reports (active_set_size, cset_size) for the telemetry row."""
    start = time.monotonic()
    grad, s, gap = wolfe_gap_at(obj, oracle, point_of())
    f_val = obj.value(point_of())
    active, cset = sizes()
    rows = [
        TraceRow(
            iter=0,
            elapsed_s=time.monotonic() - start,
            f=f_val,
            primal_gap=None if f_star is None else f_val - f_star,
            wolfe_gap=gap,
            active_set_size=active,
            cset_size=cset,
            step_type="init",
            restarted=False,
        )
    ]
    status = STATUS_GAP_REACHED if gap <= eps else None
    k = 0
    while status is None:
        k += 1
        step_type, restarted = advance((grad, s, gap))
        grad, s, gap = wolfe_gap_at(obj, oracle, point_of())
        f_val = obj.value(point_of())
        active, cset = sizes()
        rows.append(
            TraceRow(
                iter=k,
                elapsed_s=time.monotonic() - start,
                f=f_val,
                primal_gap=None if f_star is None else f_val - f_star,
                wolfe_gap=gap,
                active_set_size=active,
                cset_size=cset,
                step_type=step_type,
                restarted=restarted,
            )
        )
        if gap <= eps:
            status = STATUS_GAP_REACHED
        elif k >= max_iters:
            status = STATUS_MAX_ITERS
    metadata = {"algorithm": algorithm, "status": status, "flagged": False, "eps_target": eps, "iterations": k}
    return RunResult(rows=rows, metadata=metadata)


def run_fw(obj, oracle, x0, eps=1e-8, max_iters=20000, step_rule="exact", f_star=None):
    """Vanilla toward-step runs on the bare iterate, no active set."""
    state = {"x": x0.point.copy()}

    def advance(precomputed):
        grad, s, gap = precomputed
        d = s.point - state["x"]
        gamma = step_size(obj, state["x"], d, 1.0, step_rule)
        state["x"] = state["x"] + gamma * d
        return "fw", False

    return _run_plain(
        obj, oracle, lambda: state["x"], advance, lambda: (0, 0), eps, max_iters, f_star, "fw"
    )


def run_active_set_cg(obj, oracle, x0, variant="afw", eps=1e-8, max_iters=20000, step_rule="exact", f_star=None):
    aset = ActiveSet.from_vertex(x0)
    inner = afw_iteration if variant == "afw" else pfw_iteration

    def advance(precomputed):
        report = inner(obj, oracle, aset, rule=step_rule, precomputed=precomputed)
        return report.step_type, False

    result = _run_plain(
        obj, oracle, lambda: aset.point, advance, lambda: (aset.size, 0), eps, max_iters, f_star, variant
    )
    result.aux["active_set"] = aset
    return result


def run_muagd_fixed(obj, polytope, eps=1e-8, max_iters=20000, f_star=None, x0=None):
    """Accelerated sequence over the full (enumerable) vertex hull, no restarts.

    The stopping certificate is the Wolfe gap of the output over the hull,
    which equals the polytope Wolfe gap because the hull spans the whole
    feasible region.
    """
    if not hasattr(polytope, "all_vertices"):
        raise ValueError("fixed-hull accelerated runs need an enumerable vertex set")
    vertices = polytope.all_vertices()
    start_vertex = x0 if x0 is not None else polytope.initial_vertex()
    state = AccState(obj, VertexHull(vertices), start_vertex.point, eps_m=max(eps / 8.0, EPS_M_FLOOR))
    x_out = state.x.copy()
    f_out = obj.value(x_out)

    start = time.monotonic()
    gap = accel_wolfe_gap(state, obj, x_out)
    rows = [
        TraceRow(0, time.monotonic() - start, f_out, None if f_star is None else f_out - f_star, gap, 0, state.hull.m, "init", False)
    ]
    status = STATUS_GAP_REACHED if gap <= eps else None
    k = 0
    while status is None:
        k += 1
        state.advance_weights()
        eps_m = max(state.a * eps / 8.0, EPS_M_FLOOR)
        x_hat = acc_step(state, obj, eps_m)
        f_hat = obj.value(x_hat)
        if f_hat < f_out:
            x_out, f_out = x_hat, f_hat
        state.x = x_out
        gap = accel_wolfe_gap(state, obj, x_out)
        rows.append(
            TraceRow(k, time.monotonic() - start, f_out, None if f_star is None else f_out - f_star, gap, 0, state.hull.m, "acc", False)
        )
        if gap <= eps:
            status = STATUS_GAP_REACHED
        elif k >= max_iters:
            status = STATUS_MAX_ITERS
    metadata = {
        "algorithm": "muagd-fixed",
        "status": status,
        "flagged": state.flagged,
        "eps_target": eps,
        "iterations": k,
    }
    return RunResult(rows=rows, metadata=metadata)


def run_warmup(obj, oracle, x0, eps=1e-8, max_iters=20000, f_star=None):
    """Hybrid interior-optimum variant; needs a membership test."""
    if not hasattr(oracle, "membership"):
        raise ValueError("the warm-up variant needs a membership oracle")
    state = WarmupState(obj, x0.point)
    accepts = []

    def advance(precomputed):
        report = warmup_iteration(state, obj, oracle, precomputed=precomputed)
        accepts.append(report.accepted)
        return ("acc" if report.took_accelerated else "fw"), False

    result = _run_plain(
        obj, oracle, lambda: state.x, advance, lambda: (0, 0), eps, max_iters, f_star, "warmup-lacg"
    )
    result.aux["accepted"] = accepts
    return result


def solve(instance, algorithm, eps=1e-8, max_iters=20000, step_rule="exact", f_star=None, lacg_flags=None):
    obj, poly = instance.objective, instance.polytope
    x0 = poly.initial_vertex()
    if algorithm == "fw":
        return run_fw(obj, poly, x0, eps, max_iters, step_rule, f_star)
    if algorithm in ("afw", "pfw"):
        return run_active_set_cg(obj, poly, x0, algorithm, eps, max_iters, step_rule, f_star)
    if algorithm in ("lacg-afw", "lacg-pfw"):
        flags = lacg_flags or {}
        cfg = LacgConfig(
            inner_cg=algorithm.split("-")[1],
            eps_target=eps,
            max_iters=max_iters,
            step_rule=step_rule,
            seed=instance.seed,
            **flags,
        )
        return run_lacg(obj, poly, x0, cfg, f_star=f_star)
    if algorithm == "muagd-fixed":
        return run_muagd_fixed(obj, poly, eps, max_iters, f_star, x0=x0)
    if algorithm == "warmup-lacg":
        return run_warmup(obj, poly, x0, eps, max_iters, f_star)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def compute_reference(instance, gap=1e-13, max_iters=500000):
    """High-accuracy solution via away steps run to a tiny Wolfe gap."""
    result = run_active_set_cg(
        instance.objective, instance.polytope, instance.polytope.initial_vertex(), "afw", gap, max_iters
    )
    last = result.rows[-1]
    aset = result.aux["active_set"]
    return {
        "f_star": last.f,
        "wolfe_gap": last.wolfe_gap,
        "converged": result.status == STATUS_GAP_REACHED,
        "x": aset.point.tolist(),
    }


def max_workers():
    value = os.environ.get("LACG_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def compare(instance, algorithms, eps=1e-8, max_iters=20000, step_rule="exact", f_star=None, lacg_flags=None):
    """Run several algorithms on one instance; returns {name: RunResult}."""
    if len(algorithms) < 2:
        raise ValueError("compare needs at least two algorithms")
    workers = max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                alg: pool.submit(solve, instance, alg, eps, max_iters, step_rule, f_star, lacg_flags)
                for alg in algorithms
            }
            return {alg: fut.result() for alg, fut in futures.items()}
    return {alg: solve(instance, alg, eps, max_iters, step_rule, f_star, lacg_flags) for alg in algorithms}


def write_comparison_csv(results, path):
    """Long-format CSV: every run's rows keyed by an algorithm column."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["algorithm"] + CSV_FIELDS)
        writer.writeheader()
        for name, result in results.items():
            for row in result.rows:
                writer.writerow(format_row(row, algorithm=name))
