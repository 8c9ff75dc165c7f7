"""Closed-loop simulation of a network of identical agents.

The stacked state obeys ``x' = M x`` with
``M = I_N ⊗ A - (K L) ⊗ B g^T C^T``.  Integration is fixed-step classical
RK4; for a linear time-invariant right-hand side one RK4 step is exactly
multiplication by ``I + hM + (hM)^2/2 + (hM)^3/6 + (hM)^4/24``, which is
precomputed once.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import digraph as dg
from . import matrixcore
from .errors import DivergenceError, DomainError, MultiplicityError
from .gains import exact_consensus_test
from .passify import AgentModel

__all__ = [
    "NetworkSpec",
    "SimTrace",
    "ConvergenceSummary",
    "closed_loop_matrix",
    "disagreement",
    "simulate",
    "predicted_consensus",
    "convergence_report",
    "random_initial_state",
]

DEFAULT_DT = 1e-3
DEFAULT_T_END = 25.0
DEFAULT_TOL = 1e-2
OVERFLOW_GUARD = 1e12


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    agent: AgentModel
    graph: dg.WeightedDigraph
    gains: np.ndarray
    x0: np.ndarray

    def __post_init__(self):
        N, n = self.graph.n, self.agent.n
        gains = np.atleast_1d(np.asarray(self.gains, dtype=float))
        if gains.size == 1 and N > 1:
            gains = np.full(N, gains[0])
        dg.gain_matrix(self.graph, gains)
        x0 = np.asarray(self.x0, dtype=float).ravel()
        if x0.shape != (N * n,):
            raise DomainError(f"x0 must have {N * n} entries, got {x0.size}")
        if not np.all(np.isfinite(x0)):
            raise DomainError("x0 has non-finite entries")
        for name, arr in (("gains", gains), ("x0", x0)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def N(self):
        return self.graph.n

    def gain_laplacian(self):
        return np.diag(self.gains) @ dg.laplace_matrix(self.graph)

    def __eq__(self, other):
        if not isinstance(other, NetworkSpec):
            return NotImplemented
        return (
            self.agent == other.agent
            and self.graph == other.graph
            and np.array_equal(self.gains, other.gains)
            and np.array_equal(self.x0, other.x0)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SimTrace:
    t: np.ndarray
    states: np.ndarray
    e: np.ndarray
    c_pred: np.ndarray
    converged: bool
    final_error_to_c: float
    tol: float = DEFAULT_TOL

    def agent_states(self, step=-1):
        """States at one output step as an (N, n) array."""
        n = self.c_pred.shape[1]
        return self.states[step].reshape(-1, n)


@dataclass(frozen=True)
class ConvergenceSummary:
    e_final: float
    max_error_to_c: float
    converged: bool
    exact_achieved: bool
    agrees: bool

    def line(self):
        return (
            f"converged={self.converged} e(t_end)={self.e_final:.3e} "
            f"max|x_i - c|={self.max_error_to_c:.3e} exact_test={self.exact_achieved} "
            f"agrees={self.agrees}"
        )


def random_initial_state(N, n, seed=42, low=-5.0, high=5.0):
    """Pseudo-random stacked initial state, uniform in ``[low, high]``."""
    rng = np.random.default_rng(seed)
    return rng.uniform(low, high, size=N * n)


def closed_loop_matrix(spec):
    N = spec.N
    return np.kron(np.eye(N), spec.agent.A) - np.kron(spec.gain_laplacian(), spec.agent.coupling())


def disagreement(states, n):
    """``e = sum_i ||x_i - x_{i+1}||`` for stacked states (last axis N*n)."""
    s = np.asarray(states)
    blocks = s.reshape(s.shape[:-1] + (-1, n))
    if blocks.shape[-2] < 2:
        return np.zeros(s.shape[:-1])
    return np.linalg.norm(np.diff(blocks, axis=-2), axis=-1).sum(axis=-1)


def _consensus_weights(spec):
    if spec.N == 1:
        return np.ones(1)
    return dg.left_zero_eigenvector(spec.gain_laplacian())


def predicted_consensus(spec, t):
    """``c(t) = exp(A t) (v^T ⊗ I_n) x(0)`` with ``v`` the left zero-vector of ``K L``."""
    v = _consensus_weights(spec)
    n = spec.agent.n
    c0 = v @ spec.x0.reshape(spec.N, n)
    return matrixcore.expm(spec.agent.A, t) @ c0


def _rk4_step_matrix(M, h):
    hM = h * M
    P = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for j in range(1, 5):
        term = term @ hM / j
        P = P + term
    return P


def simulate(spec, t_end=DEFAULT_T_END, dt=DEFAULT_DT, tol=DEFAULT_TOL, decimate=1):
    """Integrate the closed loop with fixed-step RK4.

    The step is shrunk slightly if needed so the run ends exactly at
    ``t_end``.  Every ``decimate``-th step is kept in the trace (plus the
    final one).

    Raises
    ------
    DivergenceError
        When the state norm exceeds ``1e12``; carries the first-exceed time.
    """
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    if not 0 < dt <= t_end:
        raise DomainError("need 0 < dt <= t_end")
    decimate = max(1, int(decimate))
    steps = max(1, int(math.ceil(t_end / dt - 1e-9)))
    h = t_end / steps
    n = spec.agent.n
    Phi = _rk4_step_matrix(closed_loop_matrix(spec), h)

    keep = list(range(0, steps + 1, decimate))
    if keep[-1] != steps:
        keep.append(steps)
    states = np.empty((len(keep), spec.x0.size))
    x = spec.x0.copy()
    states[0] = x
    row = 1
    for k in range(1, steps + 1):
        x = Phi @ x
        if not np.linalg.norm(x) <= OVERFLOW_GUARD:
            raise DivergenceError(
                f"state norm exceeded {OVERFLOW_GUARD:.0e} at t={k * h:.6g}", k * h
            )
        if row < len(keep) and keep[row] == k:
            states[row] = x
            row += 1
    t = np.array(keep, dtype=float) * h
    e = disagreement(states, n)

    try:
        v = _consensus_weights(spec)
    except MultiplicityError:
        c_pred = np.full((len(keep), n), np.nan)
    else:
        c = v @ spec.x0.reshape(spec.N, n)
        c_pred = np.empty((len(keep), n))
        prev_t = 0.0
        for j, tj in enumerate(t):
            c = matrixcore.expm(spec.agent.A, tj - prev_t) @ c
            prev_t = tj
            c_pred[j] = c
    final = states[-1].reshape(spec.N, n)
    err_c = float(np.max(np.linalg.norm(final - c_pred[-1], axis=1)))
    return SimTrace(t, states, e, c_pred, bool(e[-1] < tol), err_c, tol)


def convergence_report(trace, spec):
    """Compare a finished run with the exact eigenvalue verdict."""
    if spec.N == 1 or not dg.has_directed_spanning_tree(spec.graph):
        exact = spec.N == 1
    else:
        exact = exact_consensus_test(spec.agent, spec.graph, spec.gains).achieved
    return ConvergenceSummary(
        float(trace.e[-1]),
        trace.final_error_to_c,
        trace.converged,
        exact,
        trace.converged == exact,
    )
