"""Second adjacency eigenvalue of a regular multigraph.

The trivial eigenvector (all ones, eigenvalue k) is projected out.  Power
iteration runs on ``A + kI``, whose spectrum lies in [0, 2k], so the dominant
remaining eigenvalue is the signed lambda2 even on bipartite graphs; the same
iteration on ``kI - A`` gives lambda_min.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .graph import CayleyGraph

DENSE_LIMIT = 512


class NonConvergence(RuntimeError):
    def __init__(self, report: "SpectralReport"):
        super().__init__(
            f"lambda2 did not converge: estimate {report.lambda2:.12g}, residual {report.residual:.3g}"
        )
        self.report = report


@dataclass(frozen=True)
class SpectralReport:
    lambda2: float
    gap: float
    iterations: int
    residual: float
    converged: bool
    lambda_min: Optional[float] = None
    method: str = "power"

    @property
    def normalized_gap(self) -> float:
        return self.gap / (self.gap + self.lambda2) if self.gap + self.lambda2 else float("nan")


def adjacency_matrix(graph: CayleyGraph) -> sp.csr_matrix:
    """Sparse adjacency with multiplicities (parallel slots add up)."""
    n, k = graph.adjacency.shape
    rows = np.repeat(np.arange(n, dtype=np.int64), k)
    cols = graph.adjacency.reshape(-1).astype(np.int64)
    mat = sp.csr_matrix((np.ones(n * k), (rows, cols)), shape=(n, n))
    mat.sum_duplicates()
    return mat


def dense_spectrum(graph: CayleyGraph) -> np.ndarray:
    """All eigenvalues, descending, from a dense symmetric eigensolver."""
    dense = adjacency_matrix(graph).toarray()
    return np.sort(np.linalg.eigvalsh(dense))[::-1]


def _deflate(x: np.ndarray) -> np.ndarray:
    return x - x.mean()


def _power(op, n: int, shift: float, sign: float, tol: float, max_iter: int, rng) -> tuple[float, float, int, bool]:
    x = _deflate(rng.standard_normal(n))
    x /= np.linalg.norm(x)
    theta, resid = 0.0, np.inf
    for it in range(1, max_iter + 1):
        ax = sign * (op @ x)
        theta = float(x @ ax)
        resid = float(np.linalg.norm(ax - theta * x))
        if resid < tol:
            return sign * theta, resid, it, True
        y = _deflate(ax + shift * x)
        norm = np.linalg.norm(y)
        if norm == 0:
            return sign * theta, resid, it, False
        x = y / norm
    return sign * theta, resid, max_iter, False


def spectral_gap(
    graph: CayleyGraph,
    tol: float = 1e-8,
    max_iter: int = 100_000,
    method: str = "auto",
    seed: int = 0,
    strict: bool = False,
) -> SpectralReport:
    """Estimate lambda2 and the gap ``k - lambda2``.

    ``method`` is ``"power"``, ``"lanczos"`` (ARPACK, two largest eigenvalues)
    or ``"auto"`` (power iteration up to DENSE_LIMIT vertices, Lanczos above).
    Only power iteration also reports lambda_min.
    With ``strict=True`` a non-converged estimate raises NonConvergence; the
    best estimate and residual are always in the report.
    """
    n, k = graph.vertex_count, graph.k_reg
    if n == 1:
        return SpectralReport(float(k), 0.0, 0, 0.0, True, float(k), "trivial")
    if method == "auto":
        method = "power" if n <= DENSE_LIMIT else "lanczos"
    op = adjacency_matrix(graph)
    rng = np.random.default_rng(seed)
    if method == "power":
        lam2, res2, it2, ok2 = _power(op, n, float(k), 1.0, tol, max_iter, rng)
        lmin, resm, itm, okm = _power(op, n, float(k), -1.0, tol, max_iter, rng)
        report = SpectralReport(lam2, k - lam2, it2 + itm, max(res2, resm), ok2 and okm, lmin, "power")
    elif method == "lanczos":
        report = _lanczos(op, n, k, tol, max_iter, rng)
    else:
        raise ValueError(f"unknown method {method!r}")
    if strict and not report.converged:
        raise NonConvergence(report)
    return report


def _lanczos(op, n: int, k: int, tol: float, max_iter: int, rng) -> SpectralReport:
    # the two largest eigenvalues are k (trivial) and lambda2; no deflation needed
    count = [0]

    def matvec(x):
        count[0] += 1
        return op @ np.ravel(x)

    lin = spla.LinearOperator((n, n), matvec=matvec, dtype=np.float64)
    v0 = rng.standard_normal(n)
    converged = True
    try:
        vals, vecs = spla.eigsh(lin, k=2, which="LA", v0=v0, tol=tol, maxiter=max_iter)
    except spla.ArpackNoConvergence as err:
        converged = False
        vals, vecs = err.eigenvalues, err.eigenvectors
        if len(vals) < 2:
            raise
    order = np.argsort(vals)
    lam2 = float(vals[order[-2]])
    x = vecs[:, order[-2]]
    resid = float(np.linalg.norm(op @ x - lam2 * x))
    ok = converged and resid < max(100 * tol, 1e-6)
    return SpectralReport(lam2, k - lam2, count[0], resid, ok, None, "lanczos")
