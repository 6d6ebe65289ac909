"""Independent oracles used only by the tests.

Nothing here shares code with the library paths it checks: quadratic
programs over the simplex are solved by KKT support enumeration, linear
minimizers by brute-force vertex enumeration, and shortest paths by
exhaustive path enumeration.
"""

import itertools

import numpy as np


def qp_over_simplex(gram, linear, sigma):
    """Exact minimizer of -<linear, lam> + (sigma/2) lam'G lam over the simplex.

    Enumerates every support, solves the equality-constrained KKT system on
    it, and keeps the best feasible candidate. Exponential in m; intended
    for m <= 6.
    """
    gram = np.asarray(gram, dtype=float)
    linear = np.asarray(linear, dtype=float)
    m = linear.size
    best_val, best_lam = np.inf, None
    for size in range(1, m + 1):
        for support in itertools.combinations(range(m), size):
            idx = list(support)
            system = np.zeros((size + 1, size + 1))
            system[:size, :size] = sigma * gram[np.ix_(idx, idx)]
            system[:size, size] = 1.0
            system[size, :size] = 1.0
            rhs = np.concatenate([linear[idx], [1.0]])
            try:
                sol = np.linalg.solve(system, rhs)
            except np.linalg.LinAlgError:
                sol = np.linalg.lstsq(system, rhs, rcond=None)[0]
            lam_support = sol[:size]
            if np.any(lam_support < -1e-10):
                continue
            lam = np.zeros(m)
            lam[idx] = np.maximum(lam_support, 0.0)
            total = lam.sum()
            if total <= 0:
                continue
            lam /= total
            val = -float(linear @ lam) + 0.5 * sigma * float(lam @ gram @ lam)
            if val < best_val:
                best_val, best_lam = val, lam
    return best_lam, best_val


def project_simplex_oracle(y):
    """Projection via the QP oracle: argmin ||lam - y||^2 over the simplex."""
    y = np.asarray(y, dtype=float)
    lam, _ = qp_over_simplex(np.eye(y.size), y, 1.0)
    return lam


def brute_force_lmo(vertices, cost):
    """argmin <cost, v> over an explicit vertex list; ties by list order."""
    values = [float(np.asarray(cost) @ v.point) for v in vertices]
    return vertices[int(np.argmin(values))], min(values)


def brute_force_assignment(cost_matrix):
    """Minimum-cost perfect matching by enumerating all permutations."""
    n = cost_matrix.shape[0]
    best_perm, best_cost = None, np.inf
    for perm in itertools.permutations(range(n)):
        cost = float(cost_matrix[np.arange(n), perm].sum())
        if cost < best_cost:
            best_perm, best_cost = perm, cost
    return best_perm, best_cost


def enumerate_paths(graph):
    """All source->sink paths of a layered DAG as sorted edge-index tuples."""
    paths = []

    def walk(node, edges_so_far):
        if node == graph.sink:
            paths.append(tuple(sorted(edges_so_far)))
            return
        for nxt, idx in graph._out[node]:
            walk(nxt, edges_so_far + [idx])

    walk(graph.source, [])
    return paths


def simplex_qp_exact(obj, support, max_rounds=200):
    """Machine-precision minimizer of a quadratic over the probability simplex.

    Active-set refinement seeded with a support guess: solve the KKT system
    on the support, drop negative coordinates, add vertices whose gradient
    dips below the face's common value, repeat. Exact once the support
    settles, which a good seed (e.g. from a converged CG run) makes fast.
    """
    matrix = obj.matrix
    if not isinstance(matrix, np.ndarray):
        matrix = matrix.toarray()
    n = obj.n
    support = sorted(set(int(i) for i in support))
    for _ in range(max_rounds):
        size = len(support)
        system = np.zeros((size + 1, size + 1))
        system[:size, :size] = matrix[np.ix_(support, support)]
        system[:size, size] = 1.0
        system[size, :size] = 1.0
        rhs = np.concatenate([-obj.b[support], [1.0]])
        sol = np.linalg.solve(system, rhs)
        x_support, nu = sol[:size], sol[size]
        if np.any(x_support < -1e-14):
            worst = int(np.argmin(x_support))
            support.pop(worst)
            continue
        x = np.zeros(n)
        x[support] = np.maximum(x_support, 0.0)
        grad = matrix @ x + obj.b
        off = [i for i in range(n) if i not in support]
        if off:
            violations = [(grad[i], i) for i in off if grad[i] < -nu - 1e-12]
            if violations:
                support.append(min(violations)[1])
                support.sort()
                continue
        return x, obj.value(x)
    raise RuntimeError("active-set refinement did not settle")
