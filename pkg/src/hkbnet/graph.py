"""Simple undirected weighted graphs and the spectra used by the coupling bounds.

All matrices in this package are tiny (a dozen nodes at most), so eigenvalues
are computed with a cyclic Jacobi sweep instead of pulling in a linear-algebra
backend.  The neighbor-normalized Laplacian is asymmetric; its spectrum is
obtained through a diagonal similarity transform that restores symmetry.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

# Absolute tolerance below which an eigenvalue counts as zero.
ZERO_EIGENVALUE_TOL = 1e-8


class TopologyError(ValueError):
    """Weight matrix violates the simple-undirected contract."""


class GenerationError(RuntimeError):
    """Random graph generation exhausted its retry budget."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class DegenerateNodeError(ValueError):
    """An operation required every node to have at least one neighbor."""


class EigenSolverError(RuntimeError):
    """The Jacobi iteration failed to converge."""

    def __init__(self, message: str, sweeps: int):
        super().__init__(message)
        self.sweeps = sweeps


@dataclass(frozen=True, eq=False)
class Topology:
    """Weighted adjacency of a simple undirected graph.

    weights[i, j] > 0 is the interaction strength between neighbors i and j;
    the matrix is symmetric with a zero diagonal.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise TopologyError("weight matrix must be square")
        if w.shape[0] < 2:
            raise TopologyError(f"need at least 2 nodes, got {w.shape[0]}")
        if not np.all(np.isfinite(w)):
            raise TopologyError("weights must be finite")
        if np.any(w < 0.0):
            raise TopologyError("weights must be nonnegative")
        if not np.array_equal(w, w.T):
            raise TopologyError("weight matrix must be symmetric")
        if np.any(np.diag(w) != 0.0):
            raise TopologyError("diagonal must be zero (simple graph)")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def neighbor_counts(self) -> np.ndarray:
        """Number of neighbors of each node (a count, not the weighted degree)."""
        return np.count_nonzero(self.weights > 0.0, axis=1)

    def is_connected(self) -> bool:
        """Breadth-first reachability of every node from node 0."""
        adj = self.weights > 0.0
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(adj[i]):
                if not seen[j]:
                    seen[j] = True
                    queue.append(j)
        return bool(seen.all())


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Real eigenvalues in ascending order; lambda2 is the second smallest."""

    eigenvalues: np.ndarray
    lambda2: float


def complete_graph(n: int, weight: float = 1.0) -> Topology:
    """All-to-all graph with a common edge weight."""
    if n < 2:
        raise TopologyError(f"complete graph needs n >= 2, got {n}")
    if weight <= 0.0:
        raise TopologyError("edge weight must be positive")
    w = np.full((n, n), float(weight))
    np.fill_diagonal(w, 0.0)
    return Topology(w)


def random_weighted_graph(
    n: int,
    edge_prob: float,
    weight_lo: float,
    weight_hi: float,
    seed: int,
    max_attempts: int = 1000,
) -> Topology:
    """Connected Erdos-Renyi-style graph with uniform random edge weights.

    Each unordered pair is independently an edge with probability edge_prob
    and weight drawn uniformly from [weight_lo, weight_hi).  Disconnected
    draws are discarded and regenerated from the same seeded stream, so one
    seed always yields one graph.

    Raises GenerationError when no connected draw appears within
    max_attempts.
    """
    if n < 2:
        raise TopologyError(f"need n >= 2, got {n}")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge_prob must lie in [0, 1], got {edge_prob}")
    if weight_lo < 0.0 or weight_hi <= 0.0 or weight_hi < weight_lo:
        raise ValueError("weights must satisfy 0 <= weight_lo <= weight_hi, weight_hi > 0")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    for attempt in range(1, max_attempts + 1):
        present = rng.random(iu.size) < edge_prob
        vals = rng.uniform(weight_lo, weight_hi, iu.size) * present
        w = np.zeros((n, n))
        w[iu, ju] = vals
        w += w.T
        top = Topology(w)
        if top.is_connected():
            return top
    raise GenerationError(
        f"no connected graph in {max_attempts} attempts "
        f"(n={n}, edge_prob={edge_prob})",
        attempts=max_attempts,
    )


def laplacian(topology: Topology) -> np.ndarray:
    """Graph Laplacian: degree on the diagonal, minus the weights elsewhere.

    Rows sum to zero and the matrix is symmetric positive semidefinite.
    """
    w = topology.weights
    return np.diag(w.sum(axis=1)) - w


def normalized_neighbor_laplacian(topology: Topology) -> np.ndarray:
    """Laplacian with each row divided by that node's neighbor count.

    The normalizer is the number of neighbors, not the weighted degree, so
    the result is asymmetric for irregular graphs.  Raises
    DegenerateNodeError when some node has no neighbors.
    """
    counts = topology.neighbor_counts
    if np.any(counts == 0):
        isolated = int(np.flatnonzero(counts == 0)[0])
        raise DegenerateNodeError(f"node {isolated} has no neighbors")
    return laplacian(topology) / counts[:, None]


def symmetric_eigenvalues(matrix: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate away every off-diagonal entry until the off-diagonal
    Frobenius mass falls below tol relative to the matrix norm.  Raises
    EigenSolverError with the sweep count if that never happens.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")
    norm = np.sqrt((a * a).sum())
    if norm == 0.0:
        return np.zeros(n)
    for sweep in range(1, max_sweeps + 1):
        off_diag = a - np.diag(np.diag(a))
        off = np.sqrt((off_diag * off_diag).sum())
        if off <= tol * norm:
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = c * c * app - 2.0 * s * c * apq + s * s * aqq
                a[q, q] = s * s * app + 2.0 * s * c * apq + c * c * aqq
                a[p, q] = a[q, p] = 0.0
    raise EigenSolverError(f"Jacobi iteration did not converge in {max_sweeps} sweeps", sweeps=max_sweeps)


def spectrum(matrix: np.ndarray, symmetric_similarity_hint: np.ndarray | None = None) -> SpectrumResult:
    """All eigenvalues of a real matrix known to have a real spectrum.

    Symmetric input is solved directly.  Asymmetric input must come with a
    positive diagonal hint d such that diag(d)^(1/2) @ m @ diag(d)^(-1/2) is
    symmetric (the neighbor-normalized Laplacian with d set to the neighbor
    counts is the motivating case).
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if m.shape[0] < 2:
        raise ValueError("spectrum needs at least a 2x2 matrix")
    scale = max(1.0, float(np.abs(m).max()))
    if symmetric_similarity_hint is None:
        if np.abs(m - m.T).max() > 1e-12 * scale:
            raise ValueError("asymmetric matrix requires a similarity hint")
        sym = 0.5 * (m + m.T)
    else:
        d = np.asarray(symmetric_similarity_hint, dtype=float).reshape(-1)
        if d.shape[0] != m.shape[0] or np.any(d <= 0.0):
            raise ValueError("similarity hint must be a positive diagonal of matching size")
        root = np.sqrt(d)
        sym = root[:, None] * m / root[None, :]
        if np.abs(sym - sym.T).max() > 1e-9 * scale:
            raise ValueError("similarity hint does not symmetrize the matrix")
        sym = 0.5 * (sym + sym.T)
    eigs = symmetric_eigenvalues(sym)
    return SpectrumResult(eigenvalues=eigs, lambda2=float(eigs[1]))


def kron_lambda2(
    normalized_lap: np.ndarray,
    diag2: np.ndarray,
    similarity_hint: np.ndarray | None = None,
    exclude_kernel_copies: bool = True,
) -> float:
    """Second-smallest eigenvalue of normalized_lap Kronecker a 2x2 diagonal.

    The eigenvalues of the product are all pairwise products lambda_i * d_j,
    so no Kronecker matrix is ever formed.  The kernel of a connected
    Laplacian is duplicated by the diagonal factor; with
    exclude_kernel_copies (the default) those copies collapse to a single
    zero, which turns the result into lambda2 * min_j d_j.  With the switch
    off the literal second-smallest of the full 2n multiset is returned.
    """
    d = np.asarray(diag2, dtype=float)
    if d.ndim == 2:
        if d.shape != (2, 2) or np.any(d != np.diag(np.diag(d))):
            raise ValueError("diag2 must be diagonal 2x2")
        d = np.diag(d)
    if d.shape != (2,) or np.any(d < 0.0):
        raise ValueError("diag2 must hold two nonnegative entries")
    lam = spectrum(normalized_lap, symmetric_similarity_hint=similarity_hint).eigenvalues
    if exclude_kernel_copies:
        kernel = lam[np.abs(lam) <= ZERO_EIGENVALUE_TOL]
        rest = lam[np.abs(lam) > ZERO_EIGENVALUE_TOL]
        products = np.concatenate([np.zeros(kernel.size), np.multiply.outer(rest, d).ravel()])
    else:
        products = np.multiply.outer(lam, d).ravel()
    products.sort()
    return float(products[1])
