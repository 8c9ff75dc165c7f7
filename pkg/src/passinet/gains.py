"""Consensus-gain criteria.

Closed loop of N identical agents under ``u_i = -k_i g^T ybar_i``::

    x' = (I_N ⊗ A - (K L) ⊗ B g^T C^T) x,    K = diag(k_1, ..., k_N).

Consensus holds iff ``A - lam B g^T C^T`` is Hurwitz for every nonzero
eigenvalue ``lam`` of ``K L`` (block-triangular reduction of the disagreement
dynamics).  Passivity arguments give the cheaper sufficient level
``kappa0 / r(K' L)`` on the common magnitude.
"""

from dataclasses import dataclass

import numpy as np

from . import digraph as dg
from . import matrixcore
from .errors import BracketError, DomainError, InvalidInputError, TopologyError
from .passify import kappa0 as _kappa0
from .passify import transfer_numerator

__all__ = [
    "GainAssignment",
    "ConsensusVerdict",
    "sufficient_gain_identical",
    "sufficient_gain_nonidentical",
    "exact_consensus_test",
    "assembled_disagreement_matrix",
    "threshold_bisection",
    "cycle_threshold",
    "general_threshold",
    "asymptote_ratio",
    "cycle_hyperbola_check",
    "double_integrator_scale",
    "is_cycle",
    "nonzero_spectrum",
]

BOUNDARY_BAND = 1e-9


@dataclass(frozen=True, eq=False)
class GainAssignment:
    """Per-agent gains ``k_vec = k * k_prime`` with ``||k_prime||_2 = 1``."""

    k_vec: np.ndarray

    def __post_init__(self):
        k = np.atleast_1d(np.asarray(self.k_vec, dtype=float)).copy()
        if k.ndim != 1 or k.size == 0:
            raise DomainError("gain vector must be a non-empty 1-D array")
        if not np.all(np.isfinite(k)) or np.any(k < 0) or not np.any(k > 0):
            raise DomainError("gains must be finite, nonnegative and not all zero")
        k.setflags(write=False)
        object.__setattr__(self, "k_vec", k)

    @classmethod
    def from_direction(cls, k, k_prime):
        kp = np.asarray(k_prime, dtype=float)
        return cls(k * kp / np.linalg.norm(kp))

    @property
    def k(self):
        return float(np.linalg.norm(self.k_vec))

    @property
    def k_prime(self):
        return self.k_vec / self.k


@dataclass(frozen=True)
class ConsensusVerdict:
    achieved: bool
    max_real_part: float
    witness: str


def _require_tree(g):
    if not dg.has_directed_spanning_tree(g):
        raise TopologyError("A2 violated: digraph has no directed spanning tree")


def _r_of(KL):
    lam = matrixcore.eigenvalues(KL)
    idx = int(np.argmin(np.abs(lam)))
    rest = np.delete(lam, idx)
    return float(np.min(rest.real))


def sufficient_gain_identical(agent, g):
    """``kappa0 / r(L)``: any common gain above it yields consensus."""
    kap = _kappa0(agent)
    _require_tree(g)
    if g.n == 1:
        return 0.0
    return kap / _r_of(dg.laplace_matrix(g))


def _unit_direction(g, k_prime):
    kp = np.asarray(k_prime, dtype=float)
    if kp.shape != (g.n,):
        raise DomainError(f"expected {g.n} gain coordinates, got shape {kp.shape}")
    dg.gain_matrix(g, kp)
    norm = np.linalg.norm(kp)
    if norm == 0:
        raise DomainError("gain direction is zero")
    return kp / norm


def sufficient_gain_nonidentical(agent, g, k_prime):
    """``kappa0 / r(K' L)`` for the unit direction ``k_prime``.

    ``k_prime`` is normalised to unit length.  A zero coordinate is accepted
    only for an agent without neighbours (its row of ``L`` vanishes).
    """
    kap = _kappa0(agent)
    _require_tree(g)
    kp = _unit_direction(g, k_prime)
    if g.n == 1:
        return 0.0
    return kap / _r_of(np.diag(kp) @ dg.laplace_matrix(g))


def _gain_vector(g, gains):
    if isinstance(gains, GainAssignment):
        k = gains.k_vec
    elif np.ndim(gains) == 0:
        k = np.full(g.n, float(gains))
    else:
        k = np.asarray(gains, dtype=float)
    if k.shape != (g.n,):
        raise DomainError(f"expected {g.n} gains, got shape {k.shape}")
    if not np.all(np.isfinite(k)) or np.any(k < 0):
        raise DomainError("gains must be finite and nonnegative")
    return k


def nonzero_spectrum(g, k):
    """Eigenvalues of ``diag(k) L`` with the one closest to zero removed."""
    lam = matrixcore.eigenvalues(np.diag(k) @ dg.laplace_matrix(g))
    idx = int(np.argmin(np.abs(lam)))
    return np.delete(lam, idx)


def exact_consensus_test(agent, g, gains):
    """Exact consensus verdict for a scalar gain or a per-agent gain vector.

    Each nonzero eigenvalue ``lam`` of ``K L`` contributes the block
    ``A - lam B g^T C^T``; consensus holds iff all blocks are Hurwitz.  A
    spectral abscissa within ``1e-9`` of zero counts as not achieved.
    """
    _require_tree(g)
    k = _gain_vector(g, gains)
    if g.n == 1:
        return ConsensusVerdict(True, -np.inf, "single agent")
    coupling = agent.coupling()
    worst = -np.inf
    witness = ""
    for lam in nonzero_spectrum(g, k):
        m = matrixcore.max_real_part(agent.A - lam * coupling)
        if m > worst:
            worst = m
            witness = f"lambda={lam:.6g}: max Re eig(A - lambda B g^T C^T) = {m:.6g}"
    return ConsensusVerdict(bool(worst < -BOUNDARY_BAND), float(worst), witness)


def _householder_basis(N):
    """``P = [1 | W]`` with W the last N-1 columns of the reflector e1 -> 1/sqrt(N)."""
    u = -np.ones(N) / np.sqrt(N)
    u[0] += 1.0
    if np.linalg.norm(u) < 1e-15:
        H = np.eye(N)
    else:
        H = np.eye(N) - 2.0 * np.outer(u, u) / (u @ u)
    P = H.copy()
    P[:, 0] = 1.0
    return P


def assembled_disagreement_matrix(agent, g, gains):
    """``R = I_{N-1} ⊗ A - Lam_e ⊗ B g^T C^T`` built from ``P^{-1} K L P``.

    Kept as an independent oracle for :func:`exact_consensus_test`.
    """
    k = _gain_vector(g, gains)
    N = g.n
    KL = np.diag(k) @ dg.laplace_matrix(g)
    P = _householder_basis(N)
    lam_full = np.linalg.solve(P, KL @ P)
    lam_e = lam_full[1:, 1:]
    return np.kron(np.eye(N - 1), agent.A) - np.kron(lam_e, agent.coupling())


def threshold_bisection(agent, g, k_lo, k_hi, k_prime=None, rtol=1e-10, samples=32):
    """Common-gain magnitude where :func:`exact_consensus_test` flips to True.

    The bracket is first sampled at ``samples`` points; verdicts must read
    False ... False True ... True, otherwise :class:`BracketError` is raised
    (monotonicity in the gain is not guaranteed for general agents).

    Parameters
    ----------
    k_prime : array_like, optional
        Gain direction; the identical-gain direction ``(1, ..., 1)`` is used
        when omitted, so ``k`` is then the per-agent gain.
    """
    _require_tree(g)
    if not 0 <= k_lo < k_hi:
        raise BracketError(f"need 0 <= k_lo < k_hi, got [{k_lo}, {k_hi}]")
    direction = np.ones(g.n) if k_prime is None else np.asarray(k_prime, dtype=float)
    if k_prime is not None:
        direction = _unit_direction(g, direction)

    def ok(k):
        return exact_consensus_test(agent, g, k * direction).achieved

    ks = np.linspace(k_lo, k_hi, samples)
    verdicts = [ok(k) for k in ks]
    if verdicts[0] or not verdicts[-1]:
        raise BracketError(
            f"bracket [{k_lo}, {k_hi}] does not straddle the threshold "
            f"(verdicts {verdicts[0]} / {verdicts[-1]})"
        )
    first_true = verdicts.index(True)
    if not all(verdicts[first_true:]):
        flips = [float(ks[i]) for i in range(1, samples) if verdicts[i] != verdicts[i - 1]]
        raise BracketError(f"non-monotone verdicts in bracket; flips near {flips}")
    lo, hi = float(ks[first_true - 1]), float(ks[first_true])
    atol = 1e-12 * k_hi
    for _ in range(200):
        if hi - lo <= max(rtol * hi, atol):
            break
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def cycle_threshold(n):
    """``cot(pi/n)**2 / 2``: exact gain bound for double integrators on an n-cycle."""
    if int(n) != n or n < 3:
        raise DomainError("cycle threshold needs an integer n >= 3")
    return 0.5 / np.tan(np.pi / n) ** 2


def general_threshold(spectrum):
    """``max_j sin^2(arg lam_j) / Re lam_j`` over nonzero Laplacian eigenvalues."""
    lam = np.atleast_1d(np.asarray(spectrum, dtype=complex))
    if lam.size == 0:
        return 0.0
    if np.any(lam.real <= 0):
        raise DomainError("all eigenvalues must have positive real part")
    sin2 = lam.imag**2 / np.abs(lam) ** 2
    return float(np.max(sin2 / lam.real))


def asymptote_ratio(n):
    """``cycle_threshold(n) / (n**2 / (2 pi**2))``; tends to 1 from below."""
    return cycle_threshold(n) / (n**2 / (2.0 * np.pi**2))


def is_cycle(g):
    """True iff ``g`` is a single directed cycle through all vertices."""
    if g.n < 2 or len(g.arcs) != g.n:
        return False
    out = np.zeros(g.n, dtype=int)
    inn = np.zeros(g.n, dtype=int)
    for s, d, _ in g.arcs:
        out[s - 1] += 1
        inn[d - 1] += 1
    if np.any(out != 1) or np.any(inn != 1):
        return False
    return len(dg.leading_set(g)) == g.n if dg.has_directed_spanning_tree(g) else False


def cycle_hyperbola_check(gains, v, graph=None, rtol=1e-9):
    """True iff the products ``k_i v_i`` agree to ``rtol`` (relative).

    On a directed cycle the left zero-eigenvector of ``K L`` satisfies
    ``k_1 v_1 = ... = k_N v_N``.  Passing ``graph`` enforces the cycle
    precondition.
    """
    if graph is not None and not is_cycle(graph):
        raise DomainError("hyperbola relation needs a directed cycle topology")
    k = np.asarray(gains, dtype=float)
    v = np.asarray(v, dtype=float)
    if k.shape != v.shape:
        raise InvalidInputError("gains and v must have the same length")
    prod = k * v
    scale = np.max(np.abs(prod))
    if scale == 0:
        return False
    return bool(np.max(prod) - np.min(prod) <= rtol * scale)


def double_integrator_scale(agent, tol=1e-9):
    """Return ``c`` when ``g^T chi(s) = c (s + 1) / s**2``, else None.

    For such agents each block has characteristic polynomial
    ``z**2 + c lam z + c lam`` and the closed-form thresholds apply to ``c k``.
    """
    if agent.n != 2:
        return None
    num, den = transfer_numerator(agent)
    dc = np.zeros(3)
    dc[: den.coef.size] = np.real(den.coef[:3])
    if not np.allclose(dc, [0.0, 0.0, 1.0], atol=tol):
        return None
    nc = np.zeros(2)
    if num.degree() > 1:
        return None
    nc[: num.coef.size] = np.real(num.coef)
    if nc[0] <= 0 or abs(nc[0] - nc[1]) > tol * abs(nc[0]):
        return None
    return float(nc[0])
