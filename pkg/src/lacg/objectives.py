"""Quadratic objectives with certified smoothness and strong-convexity constants.

Every objective has the form f(x) = 0.5 * x'Mx + b'x with a symmetric
positive-definite M. The constants L and mu bound the spectrum of M from
above and below; all step sizes and restart schedules downstream rely on
them being valid bounds, so the generators certify them explicitly.
"""

import json

import numpy as np
import scipy.sparse as sp

# Dense storage below this dimension; CSR above (benchmark instances are
# sparse once n^2-sized).
_DENSE_MAX_DIM = 64

_POWER_ITERS = 200
_POWER_RTOL = 1e-10
_POWER_INFLATION = 1.01


class QuadraticObjective:
    """f(x) = 0.5 x'Mx + b'x with spectrum certified inside [mu, L]."""

    def __init__(self, matrix, b, L, mu):
        if mu <= 0 or L <= 0:
            raise ValueError("mu and L must be positive")
        if mu > L:
            raise ValueError(f"mu={mu} exceeds L={L}")
        b = np.asarray(b, dtype=float)
        if not np.all(np.isfinite(b)):
            raise ValueError("linear term contains non-finite entries")
        if sp.issparse(matrix):
            matrix = sp.csr_matrix(matrix)
            if matrix.shape[0] != matrix.shape[1]:
                raise ValueError("matrix must be square")
            if not np.all(np.isfinite(matrix.data)):
                raise ValueError("matrix contains non-finite entries")
        else:
            matrix = np.asarray(matrix, dtype=float)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError("matrix must be square")
            if not np.all(np.isfinite(matrix)):
                raise ValueError("matrix contains non-finite entries")
        if matrix.shape[0] != b.shape[0]:
            raise ValueError("matrix/linear-term dimension mismatch")
        self.matrix = matrix
        self.b = b
        self.L = float(L)
        self.mu = float(mu)
        self.n = b.shape[0]

    def _check_dim(self, x):
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of dimension {self.n}, got shape {x.shape}")

    def value(self, x):
        x = np.asarray(x, dtype=float)
        self._check_dim(x)
        return 0.5 * float(x @ (self.matrix @ x)) + float(self.b @ x)

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        self._check_dim(x)
        g = self.matrix @ x + self.b
        return np.asarray(g).ravel()

    def quad_form(self, d):
        """d'Md, the curvature along d (used by exact line search)."""
        d = np.asarray(d, dtype=float)
        self._check_dim(d)
        return float(d @ (self.matrix @ d))


def certify_top_eigenvalue(matrix, seed=0):
    """Upper bound on the largest eigenvalue of a symmetric PSD matrix.

    Power iteration until the Rayleigh quotient stabilizes, then inflated
    by 1% so the returned value is a valid smoothness constant even when
    the iteration has not fully converged.
    """
    n = matrix.shape[0]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    rayleigh = 0.0
    for _ in range(_POWER_ITERS):
        w = matrix @ v
        w = np.asarray(w).ravel()
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        new_rayleigh = float(v @ w)
        v = w / norm
        if rayleigh > 0 and abs(new_rayleigh - rayleigh) <= _POWER_RTOL * rayleigh:
            rayleigh = new_rayleigh
            break
        rayleigh = new_rayleigh
    return rayleigh * _POWER_INFLATION


def generate_spectrum_quadratic(n, mu, L, seed):
    """Random quadratic with exact extreme eigenvalues mu and L.

    M = U diag(lambda) U' for a random orthonormal basis U, eigenvalues
    uniform in [mu, L] with the smallest forced to mu and the largest to
    L, so the reported condition number is exact. The linear term has
    entries uniform in [0, 1].
    """
    if not (0 < mu <= L):
        raise ValueError("need 0 < mu <= L")
    if n < 2:
        raise ValueError("need n >= 2")
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigs = rng.uniform(mu, L, size=n)
    eigs[np.argmin(eigs)] = mu
    eigs[np.argmax(eigs)] = L
    matrix = (basis * eigs) @ basis.T
    matrix = 0.5 * (matrix + matrix.T)
    b = rng.uniform(0.0, 1.0, size=n)
    obj = QuadraticObjective(matrix, b, L=L, mu=mu)
    obj.generator = "spectrum"
    obj.seed = seed
    return obj


def generate_sparse_gram_quadratic(n, density, seed):
    """Gram-type quadratic with matrix (G'G + I)/2 for a sparse Gaussian G.

    The Gram shift certifies mu = 1/2 without any eigensolve; L comes
    from power iteration with a 1% inflation so it stays a valid upper
    bound. Dense storage below 64 dimensions, CSR above.
    """
    if not (0 < density <= 1):
        raise ValueError("density must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    raw = sp.random(n, n, density=density, random_state=rng, data_rvs=rng.standard_normal)
    gram = (raw.T @ raw + sp.identity(n)) * 0.5
    if n <= _DENSE_MAX_DIM:
        matrix = gram.toarray()
        matrix = 0.5 * (matrix + matrix.T)
    else:
        matrix = sp.csr_matrix(0.5 * (gram + gram.T))
    L = certify_top_eigenvalue(matrix, seed=seed)
    obj = QuadraticObjective(matrix, np.zeros(n), L=L, mu=0.5)
    obj.generator = "sparse_gram"
    obj.seed = seed
    return obj


def objective_to_dict(obj):
    """JSON-ready dict: {n, matrix: {format, ...}, b, L, mu, seed, generator}."""
    if sp.issparse(obj.matrix):
        m = sp.csr_matrix(obj.matrix)
        matrix = {
            "format": "csr",
            "data": m.data.tolist(),
            "indices": m.indices.tolist(),
            "indptr": m.indptr.tolist(),
        }
    else:
        matrix = {"format": "dense", "data": obj.matrix.tolist()}
    return {
        "n": obj.n,
        "matrix": matrix,
        "b": obj.b.tolist(),
        "L": obj.L,
        "mu": obj.mu,
        "seed": getattr(obj, "seed", None),
        "generator": getattr(obj, "generator", None),
    }


def objective_from_dict(payload):
    m = payload["matrix"]
    n = payload["n"]
    if m["format"] == "csr":
        matrix = sp.csr_matrix(
            (np.array(m["data"], dtype=float), m["indices"], m["indptr"]), shape=(n, n)
        )
    elif m["format"] == "dense":
        matrix = np.array(m["data"], dtype=float)
    else:
        raise ValueError(f"unknown matrix format {m['format']!r}")
    obj = QuadraticObjective(matrix, np.array(payload["b"], dtype=float), payload["L"], payload["mu"])
    obj.seed = payload.get("seed")
    obj.generator = payload.get("generator")
    return obj


def dump_objective(obj, path):
    with open(path, "w") as fh:
        json.dump(objective_to_dict(obj), fh, sort_keys=True)


def load_objective(path):
    with open(path) as fh:
        return objective_from_dict(json.load(fh))
