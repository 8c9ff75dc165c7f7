"""Passifiability of a single SIMO agent.

For an agent ``x' = A x + B u``, ``y = C^T x`` and output weighting ``g``
the scalar transfer function is ``W(s) = g^T C^T (sI - A)^{-1} B``.  Feeding
back ``u = -kappa g^T y`` renders the agent strictly passive whenever
``kappa + Re[1/W(iw)] > 0`` for every real ``w``; the smallest such level is
``kappa0 = sup_w -Re[1/W(iw)]``.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize_scalar

from . import matrixcore
from .errors import DimensionError, InvalidInputError, PassifiabilityError

__all__ = [
    "AgentModel",
    "PassifyReport",
    "double_integrator_agent",
    "transfer_numerator",
    "is_hyper_minimum_phase",
    "kappa0",
    "passify_report",
]

# relative trim level for coefficients that cancel in the numerator
_TRIM = 1e-12


@dataclass(frozen=True, eq=False)
class AgentModel:
    """One SIMO agent: ``A`` (n x n), ``B`` (n x 1), ``C`` (n x l), ``g`` (l,)."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        A = matrixcore.as_matrix(np.asarray(self.A, dtype=float), square=True)
        n = A.shape[0]
        B = np.asarray(self.B, dtype=float).reshape(-1, 1)
        C = np.asarray(self.C, dtype=float)
        if C.ndim == 1:
            C = C.reshape(-1, 1)
        g = np.atleast_1d(np.asarray(self.g, dtype=float)).ravel()
        if B.shape[0] != n:
            raise DimensionError(f"B must have {n} rows, got {B.shape}")
        if C.ndim != 2 or C.shape[0] != n:
            raise DimensionError(f"C must be {n} x l, got {C.shape}")
        if g.shape != (C.shape[1],):
            raise DimensionError(f"g must have {C.shape[1]} entries, got {g.shape}")
        for name, arr in (("B", B), ("C", C), ("g", g)):
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError(f"{name} has non-finite entries")
        for name, arr in (("A", A), ("B", B), ("C", C), ("g", g)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def feedback_vector(self):
        """``c = C g`` so that ``g^T y = c^T x``."""
        return self.C @ self.g

    def coupling(self):
        """``B g^T C^T``: the n x n matrix multiplying each Laplacian entry."""
        return self.B @ self.feedback_vector.reshape(1, -1)

    def __eq__(self, other):
        if not isinstance(other, AgentModel):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, k), getattr(other, k)) for k in ("A", "B", "C", "g")
        )

    __hash__ = None

    def to_dict(self):
        return {
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
            "g": self.g.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["A"], data["B"], data["C"], data["g"])
        except KeyError as exc:
            raise InvalidInputError(f"agent block is missing {exc}") from exc


@dataclass(frozen=True)
class PassifyReport:
    numerator: Polynomial
    denominator: Polynomial
    is_hmp: bool
    kappa0: float
    strictly_passive: bool = False


def double_integrator_agent():
    """Double integrator with PD-shaped output: ``W(s) = (s + 1)/s**2``."""
    return AgentModel(
        A=[[0.0, 0.0], [1.0, 0.0]],
        B=[[2.0], [0.0]],
        C=[[0.5], [0.5]],
        g=[1.0],
    )


def _charpoly(M):
    # numpy.poly gives descending monic coefficients
    return Polynomial(np.real_if_close(np.poly(M))[::-1])


def transfer_numerator(agent, check=True):
    """Numerator and denominator of ``g^T chi(s)``.

    By the matrix determinant lemma,
    ``det(sI - A + B c^T) = det(sI - A) (1 + c^T (sI - A)^{-1} B)``, so the
    numerator is ``charpoly(A - B c^T) - charpoly(A)``.

    With ``check`` the identity is confirmed against direct linear solves at
    ten pseudo-random complex points.
    """
    A = agent.A
    den = _charpoly(A)
    full = _charpoly(A - agent.coupling())
    diff = (full - den).coef
    num = matrixcore.as_polynomial(Polynomial(diff), tol=_TRIM)
    # an identically zero numerator trims to a single coefficient
    if np.max(np.abs(num.coef)) <= _TRIM * max(1.0, np.max(np.abs(den.coef))):
        num = Polynomial([0.0])
    if check:
        _check_rational(agent, num, den)
    return num, den


def _check_rational(agent, num, den):
    rng = np.random.default_rng(12345)
    c = agent.feedback_vector
    n = agent.n
    spec = matrixcore.eigenvalues(agent.A)
    scale = 1.0 + np.max(np.abs(spec))
    checked = 0
    while checked < 10:
        s = complex(*(rng.standard_normal(2) * scale))
        if np.min(np.abs(spec - s)) < 1e-6 * scale:
            continue
        direct = c @ np.linalg.solve(s * np.eye(n) - agent.A, agent.B[:, 0])
        ratio = num(s) / den(s)
        if abs(direct - ratio) > 1e-8 * max(1.0, abs(direct)):
            raise ArithmeticError(
                f"numerator extraction failed at s={s}: {ratio} vs {direct}"
            )
        checked += 1


def _hmp_numerator(num, n):
    coef = np.asarray(num.coef, dtype=float)
    if num.degree() != n - 1:
        return False
    if np.any(coef <= 0):
        return False
    if n == 1:
        return True
    return matrixcore.routh_hurwitz(num)


def is_hyper_minimum_phase(agent):
    """Numerator of ``g^T chi`` has degree n-1, positive coefficients, and is Hurwitz."""
    num, _ = transfer_numerator(agent)
    return _hmp_numerator(num, agent.n)


def _neg_re_inverse(num, den, w):
    s = 1j * np.asarray(w, dtype=float)
    return -np.real(den(s) / num(s))


def _sup_neg_re_inverse(num, den):
    """``sup_{w >= 0} -Re[den(iw)/num(iw)]`` including the ``w -> inf`` limit."""
    grid = np.concatenate(([0.0], np.logspace(-6, 6, 600)))
    vals = _neg_re_inverse(num, den, grid)
    best = float(np.max(vals))
    i = int(np.argmax(vals))
    if 0 < i < grid.size - 1:
        lo = np.log10(max(grid[i - 1], 1e-7))
        hi = np.log10(grid[i + 1])
        res = minimize_scalar(
            lambda u: -_neg_re_inverse(num, den, 10.0**u),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, float(-res.fun))
    # den = q num + rem with deg q = 1; Re q(iw) tends to the constant term of q
    q, _ = divmod(den, num)
    q = matrixcore.as_polynomial(q)
    limit = -float(np.real(q.coef[0]))
    return max(best, limit)


def kappa0(agent):
    """Passification level ``sup_w -Re[1/W(iw)]``, clamped at zero.

    A negative supremum means the agent is already strictly passive; zero is
    returned then (:func:`passify_report` carries the flag).

    Raises
    ------
    PassifiabilityError
        If ``g^T chi(s)`` is not hyper-minimum-phase.
    """
    rep = passify_report(agent)
    if not rep.is_hmp:
        raise PassifiabilityError(
            f"g^T chi(s) numerator {rep.numerator} is not hyper-minimum-phase"
        )
    return rep.kappa0


def passify_report(agent):
    num, den = transfer_numerator(agent)
    hmp = _hmp_numerator(num, agent.n)
    if not hmp:
        return PassifyReport(num, den, False, float("nan"), False)
    sup = _sup_neg_re_inverse(num, den)
    if sup <= 0:
        return PassifyReport(num, den, True, 0.0, True)
    return PassifyReport(num, den, True, sup, False)
