"""Laplacian spectra, algebraic connectivity and Wiener-index distances."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DisconnectedGraphError, DomainError, NumericError

# lambda_2 above this declares a graph connected
CONNECTED_TOL = 1e-9


@dataclass(frozen=True)
class NetworkGraph:
    """Undirected simple graph on nodes ``0..n-1``."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise DomainError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "NetworkGraph":
        iu, ju = np.nonzero(np.triu(np.asarray(adj), 1))
        return cls(adj.shape[0], zip(iu.tolist(), ju.tolist()))

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            nb[u].append(v)
            nb[v].append(u)
        return nb

    def with_edge(self, u: int, v: int) -> "NetworkGraph":
        return NetworkGraph(self.n, set(self.edges) | {(u, v)})


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray

    @property
    def fiedler(self) -> float:
        if self.eigenvalues.size < 2:
            raise DomainError("algebraic connectivity needs at least two nodes")
        return float(self.eigenvalues[1])

    def is_connected(self, tol: float = CONNECTED_TOL) -> bool:
        return self.eigenvalues.size >= 2 and self.eigenvalues[1] > tol

    def n_components(self, tol: float = CONNECTED_TOL) -> int:
        return int(np.count_nonzero(self.eigenvalues <= tol))


@dataclass(frozen=True)
class DistanceMetrics:
    wiener: float
    mu: float
    mu_w: float
    delta_mu: float


def laplacian(g: NetworkGraph) -> np.ndarray:
    """Degree matrix minus adjacency matrix, as integers."""
    a = g.adjacency()
    return np.diag(a.sum(axis=1)) - a


def laplacian_from_adjacency(adj: np.ndarray) -> np.ndarray:
    adj = np.asarray(adj)
    return np.diag(adj.sum(axis=-1)) - adj


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(m).max(initial=0.0))):
        raise DomainError("matrix is not symmetric")
    return m


def jacobi_eigenvalues(m: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate away each off-diagonal entry in row order until the
    off-diagonal Frobenius norm drops below ``tol`` times the matrix norm.
    The diagonal then holds the eigenvalues to about that relative accuracy.

    Raises:
        DomainError: ``m`` is not square and symmetric.
        NumericError: no convergence within ``max_sweeps``.
    """
    a = _check_symmetric(m).copy()
    n = a.shape[0]
    if n <= 1:
        return np.sort(np.diag(a))
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * scale:
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    raise NumericError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def eigenvalues(l: np.ndarray, tol: float = 1e-10, method: str = "lapack") -> Spectrum:
    """Full ascending spectrum of a symmetric matrix.

    ``method="lapack"`` uses the LAPACK symmetric driver via numpy;
    ``method="jacobi"`` uses :func:`jacobi_eigenvalues`.
    """
    m = _check_symmetric(l)
    if method == "lapack":
        vals = np.linalg.eigvalsh(m)
    elif method == "jacobi":
        vals = jacobi_eigenvalues(m, tol=min(tol, 1e-12))
    else:
        raise DomainError(f"unknown eigen method {method!r}")
    return Spectrum(np.sort(vals))


def fiedler_value(g: NetworkGraph, method: str = "lapack") -> float:
    """Second-smallest Laplacian eigenvalue; zero (to tolerance) iff disconnected."""
    if g.n < 2:
        raise DomainError("algebraic connectivity needs n >= 2")
    lam2 = eigenvalues(laplacian(g), method=method).fiedler
    return 0.0 if abs(lam2) <= CONNECTED_TOL else lam2


def wiener_spectral(s: Spectrum, n: int | None = None) -> float:
    """``n * sum_{i>=2} 1/lambda_i``.

    Exact Wiener index on trees; on graphs with cycles this is the
    Kirchhoff index (sum of pairwise effective resistances), which is
    what the placement objective minimizes.
    """
    vals = np.asarray(s.eigenvalues, dtype=float)
    n = vals.size if n is None else int(n)
    if n < 2:
        raise DomainError("Wiener index needs n >= 2")
    if vals[1] <= CONNECTED_TOL:
        raise DisconnectedGraphError("graph is disconnected (lambda_2 ~ 0)")
    return float(n * np.sum(1.0 / vals[1:]))


def wiener_spectral_batch(vals: np.ndarray) -> np.ndarray:
    """Row-wise :func:`wiener_spectral` on a stack of ascending spectra; inf where disconnected."""
    vals = np.asarray(vals, dtype=float)
    n = vals.shape[-1]
    out = np.full(vals.shape[:-1], np.inf)
    ok = vals[..., 1] > CONNECTED_TOL
    out[ok] = n * np.sum(1.0 / vals[ok][..., 1:], axis=-1)
    return out


def bfs_distances(g: NetworkGraph, source: int) -> list[int]:
    nb = g.neighbours()
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in nb[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def wiener_paths(g: NetworkGraph) -> int:
    """Half the sum of hop distances over ordered node pairs."""
    total = 0
    for s in range(g.n):
        d = bfs_distances(g, s)
        if min(d) < 0:
            raise DisconnectedGraphError("graph is disconnected")
        total += sum(d)
    return total // 2


def average_distance(wiener: float, n: int, delta_mu: float = 0.0) -> DistanceMetrics:
    """Average pair distance ``W / C(n, 2)`` and its uncertainty-padded form."""
    if n < 2:
        raise DomainError("average distance needs n >= 2")
    if delta_mu < 0:
        raise DomainError("delta_mu must be non-negative")
    mu = wiener / (n * (n - 1) / 2)
    return DistanceMetrics(wiener=wiener, mu=mu, mu_w=mu + delta_mu, delta_mu=delta_mu)


def link_probability(d: float, gamma: float, mu_shadow: float, k_const: float) -> float:
    """Probabilistic link model ``K exp(-mu d^gamma)`` clipped to [0, 1]."""
    if d < 0:
        raise DomainError("distance must be non-negative")
    if k_const <= 0:
        raise DomainError("k_const must be positive")
    return float(min(1.0, max(0.0, k_const * math.exp(-mu_shadow * d**gamma))))


def dump_matrix(m: np.ndarray, path: str | Path) -> None:
    """Whitespace-delimited text dump, integers kept as integers."""
    m = np.asarray(m)
    fmt = "%d" if np.issubdtype(m.dtype, np.integer) else "%.17g"
    np.savetxt(path, m, fmt=fmt)
