"""Weighted digraphs, Laplace matrices and their spectral summary.

Vertices are labelled ``1..n``.  An arc ``(a, b, w)`` means that agent ``a``
measures agent ``b`` (``b`` is a neighbour of ``a``), so it contributes
``-w`` at entry ``(a, b)`` of the Laplace matrix.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import matrixcore
from .errors import DomainError, InvalidInputError, MultiplicityError, TopologyError

__all__ = [
    "WeightedDigraph",
    "SpectrumReport",
    "laplace_matrix",
    "has_directed_spanning_tree",
    "leading_set",
    "left_zero_eigenvector",
    "zero_tolerance",
    "gain_matrix",
    "spectrum_report",
    "make_cycle",
    "make_dodeca_example",
    "make_three_node_example",
]


@dataclass(frozen=True)
class WeightedDigraph:
    n: int
    arcs: tuple = ()

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise InvalidInputError("digraph needs at least one vertex")
        clean = []
        seen = set()
        for arc in self.arcs:
            if len(arc) == 2:
                src, dst = arc
                w = 1.0
            elif len(arc) == 3:
                src, dst, w = arc
            else:
                raise InvalidInputError(f"arc must be (src, dst[, weight]), got {arc!r}")
            if int(src) != src or int(dst) != dst:
                raise InvalidInputError(f"non-integer vertex index in arc {arc!r}")
            src, dst, w = int(src), int(dst), float(w)
            if not (1 <= src <= n and 1 <= dst <= n):
                raise InvalidInputError(f"arc {arc!r} has a vertex outside 1..{n}")
            if src == dst:
                raise InvalidInputError(f"self-loop at vertex {src}")
            if not np.isfinite(w) or w <= 0:
                raise InvalidInputError(f"arc {arc!r} weight must be positive and finite")
            if (src, dst) in seen:
                raise InvalidInputError(f"duplicate arc ({src}, {dst})")
            seen.add((src, dst))
            clean.append((src, dst, w))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", tuple(clean))

    def adjacency(self):
        adj = np.zeros((self.n, self.n))
        for src, dst, w in self.arcs:
            adj[src - 1, dst - 1] = w
        return adj

    def scaled(self, c):
        """Copy with every arc weight multiplied by ``c > 0``."""
        return WeightedDigraph(self.n, tuple((s, d, w * c) for s, d, w in self.arcs))

    def to_dict(self):
        return {"n": self.n, "arcs": [[s, d, w] for s, d, w in self.arcs]}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(int(data["n"]), tuple(tuple(a) for a in data.get("arcs", [])))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"bad digraph block: {exc}") from exc


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    zero_multiplicity: int
    r: float
    has_spanning_tree: bool
    leading_set: tuple
    v_left: np.ndarray = field(default=None, repr=False)

    @property
    def nonzero_eigenvalues(self):
        return _drop_zeros(self.eigenvalues, self.zero_multiplicity)


def laplace_matrix(g):
    """``L = diag(A 1) - A`` for the weighted adjacency matrix ``A``."""
    adj = g.adjacency()
    return np.diag(adj.sum(axis=1)) - adj


def _sink_components(g):
    """Strong components with no arc leaving them, as sorted 1-based tuples."""
    adj = csr_matrix(g.adjacency() > 0)
    ncomp, labels = connected_components(adj, directed=True, connection="strong")
    leaves = np.ones(ncomp, dtype=bool)
    for src, dst, _ in g.arcs:
        if labels[src - 1] != labels[dst - 1]:
            leaves[labels[src - 1]] = False
    comps = []
    for c in np.flatnonzero(leaves):
        comps.append(tuple(int(i) + 1 for i in np.flatnonzero(labels == c)))
    return sorted(comps)


def has_directed_spanning_tree(g):
    """True iff some root vertex is reachable from every vertex along arcs.

    Following arcs from any vertex eventually enters a strong component with
    no outgoing arcs, so a common root exists iff there is exactly one such
    component.
    """
    return len(_sink_components(g)) == 1


def leading_set(g):
    """Vertices of the strongly connected component with no outside neighbours."""
    comps = _sink_components(g)
    if len(comps) != 1:
        raise TopologyError(
            f"digraph has {len(comps)} closed strong components; no directed spanning tree"
        )
    return comps[0]


def zero_tolerance(L):
    return 1e-9 * max(1.0, float(np.linalg.norm(L, 2)))


def _drop_zeros(lam, count):
    if count <= 0:
        return lam
    idx = np.argsort(np.abs(lam), kind="stable")[:count]
    keep = np.ones(lam.size, dtype=bool)
    keep[idx] = False
    return lam[keep]


def left_zero_eigenvector(L):
    """Left null vector ``v`` of a Laplace-type matrix with ``sum(v) = 1``.

    One equation of ``L^T v = 0`` is redundant (the columns of ``L`` sum to
    zero), so it is replaced with the normalisation ``1^T v = 1``.  The
    resulting system is nonsingular exactly when zero is a simple eigenvalue.
    """
    L = matrixcore.as_matrix(L, square=True).astype(float)
    n = L.shape[0]
    if n == 1:
        return np.ones(1)
    tol = zero_tolerance(L)
    lam = matrixcore.eigenvalues(L)
    nzero = int(np.sum(np.abs(lam) < tol))
    if nzero != 1:
        raise MultiplicityError(f"zero eigenvalue has multiplicity {nzero}, expected 1")
    M = L.T.copy()
    M[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    try:
        v = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise MultiplicityError("normalised null-vector system is singular") from exc
    v[np.abs(v) < 1e-13] = 0.0
    if np.any(v < 0):
        raise MultiplicityError("left null vector has negative entries; not a Laplace-type matrix")
    v /= v.sum()
    resid = np.linalg.norm(v @ L)
    if resid > 1e-10 * max(1.0, np.linalg.norm(L)):
        raise MultiplicityError(f"left null vector residual {resid:.3e} too large")
    return v


def gain_matrix(g, gains):
    """``diag(gains)`` after validation.

    Gains must be positive and finite.  A zero gain is accepted on a vertex
    with no neighbours, where it multiplies a zero row of ``L`` and has no
    effect.
    """
    if gains is None:
        return np.eye(g.n)
    gains = np.asarray(gains, dtype=float)
    if gains.shape != (g.n,):
        raise DomainError(f"expected {g.n} gains, got shape {gains.shape}")
    if not np.all(np.isfinite(gains)) or np.any(gains < 0):
        raise DomainError("gains must be positive and finite")
    if np.any(gains == 0):
        has_nbr = g.adjacency().sum(axis=1) > 0
        if np.any((gains == 0) & has_nbr):
            raise DomainError("zero gain on an agent that has neighbours")
    return np.diag(gains)


def spectrum_report(g, gains=None):
    """Spectral summary of ``K L`` with ``K = diag(gains)`` (identity by default)."""
    KL = gain_matrix(g, gains) @ laplace_matrix(g)
    return _report_for(g, KL)


def _report_for(g, KL):
    lam = matrixcore.sort_eigenvalues(matrixcore.eigenvalues(KL))
    tol = zero_tolerance(KL)
    nzero = int(np.sum(np.abs(lam) < tol))
    nonzero = _drop_zeros(lam, nzero)
    r = float(np.min(nonzero.real)) if nonzero.size else float("nan")
    tree = has_directed_spanning_tree(g)
    if tree:
        lead = leading_set(g)
        v = left_zero_eigenvector(KL)
    else:
        lead = ()
        v = None
    return SpectrumReport(lam, nzero, r, tree, lead, v)


def make_cycle(n, weight=1.0):
    """Directed cycle with arcs (1, 2), (2, 3), ..., (n, 1)."""
    if n < 2:
        raise InvalidInputError("cycle needs n >= 2")
    return WeightedDigraph(n, tuple((i, i % n + 1, weight) for i in range(1, n + 1)))


def make_three_node_example():
    """Three agents; agent 1 leads, 2 measures 1, 3 measures 1 and 2."""
    return WeightedDigraph(3, ((2, 1, 1.0), (3, 2, 1.0), (3, 1, 1.0)))


def make_dodeca_example():
    """Twenty-agent digraph whose leading set is the directed 10-cycle 1..10.

    Inner ring: arcs (i, i+1) closing at (10, 1).  Outer vertex ``10+i``
    measures inner vertex ``i`` and outer vertex ``10 + (i mod 10) + 1``.
    """
    arcs = []
    for i in range(1, 11):
        arcs.append((i, i % 10 + 1, 1.0))
    for i in range(1, 11):
        arcs.append((10 + i, i, 1.0))
        arcs.append((10 + i, 10 + i % 10 + 1, 1.0))
    return WeightedDigraph(20, tuple(arcs))
