"""Boundary of the sufficient gain region.

A unit direction ``k'`` in the positive orthant is mapped to the point
``h(k') = kappa0 / r(K' L) * k'``; every gain vector beyond it along the same
ray gives consensus.  ``h_rho(k') = ||h(k')||`` is the distance to the origin.

When the leading set is a single agent (a leader), that agent's gain has no
effect and its coordinate is dropped from the sphere; it is reported as 0.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import digraph as dg
from . import matrixcore
from .errors import DomainError, TopologyError
from .passify import kappa0 as _kappa0

__all__ = [
    "BoundarySample",
    "BoundaryTrace",
    "effective_coordinates",
    "sphere_grid",
    "boundary_sample",
    "trace_boundary",
    "three_node_polar",
]


@dataclass(frozen=True, eq=False)
class BoundarySample:
    k_prime: np.ndarray
    radius: float
    point: np.ndarray
    polar: tuple = None
    effective: tuple = ()

    @property
    def h_rho(self):
        return self.radius

    @property
    def delta(self):
        """Simplex coordinate ``k'_a / (k'_a + k'_b)`` in the two-gain case."""
        if len(self.effective) != 2:
            return None
        a, b = (self.k_prime[i - 1] for i in self.effective)
        return float(a / (a + b))


@dataclass(frozen=True)
class BoundaryTrace:
    samples: list
    argmin: int
    argmax: int
    h_min: float
    h_max: float
    refined_min: BoundarySample = None
    refined_max: BoundarySample = None
    note: str = ""

    @property
    def min_sample(self):
        return self.refined_min or self.samples[self.argmin]

    @property
    def max_sample(self):
        return self.refined_max or self.samples[self.argmax]


def effective_coordinates(g):
    """1-based indices of agents whose gains enter the region."""
    lead = dg.leading_set(g)
    if len(lead) == 1:
        return tuple(i for i in range(1, g.n + 1) if i != lead[0])
    return tuple(range(1, g.n + 1))


def _r_nonzero(KL):
    lam = matrixcore.eigenvalues(KL)
    idx = int(np.argmin(np.abs(lam)))
    return float(np.min(np.delete(lam, idx).real))


def _sample(kap, L, n, eff, kp_eff):
    kp = np.zeros(n)
    kp[[i - 1 for i in eff]] = kp_eff
    radius = kap / _r_nonzero(np.diag(kp) @ L)
    polar = None
    if len(eff) == 2:
        polar = (math.atan2(kp_eff[1], kp_eff[0]), radius)
    return BoundarySample(kp, radius, radius * kp, polar, tuple(eff))


def boundary_sample(agent, g, k_prime, eps=0.05):
    """Map one direction on the clipped sphere to the region boundary.

    ``k_prime`` lists the effective coordinates only (see
    :func:`effective_coordinates`) and is normalised to unit length.
    """
    if not dg.has_directed_spanning_tree(g):
        raise TopologyError("A2 violated: digraph has no directed spanning tree")
    kap = _kappa0(agent)
    eff = effective_coordinates(g)
    kp = np.asarray(k_prime, dtype=float)
    if kp.shape != (len(eff),):
        raise DomainError(f"expected {len(eff)} effective gain coordinates {eff}, got {kp.shape}")
    kp = kp / np.linalg.norm(kp)
    if np.min(kp) < eps - 1e-15:
        raise DomainError(f"direction {kp} leaves the clipped sphere (eps={eps})")
    return _sample(kap, dg.laplace_matrix(g), g.n, eff, kp)


def _default_samples(d):
    if d <= 2:
        return 400
    if d == 3:
        return 64
    return max(1, int(20000 ** (1.0 / (d - 1))))


def _from_angles(phis):
    d = len(phis) + 1
    x = np.empty(d)
    s = 1.0
    for i, p in enumerate(phis):
        x[i] = s * math.cos(p)
        s *= math.sin(p)
    x[-1] = s
    return x


def sphere_grid(d, eps=0.05, samples=None):
    """Deterministic grid on ``{k' : ||k'|| = 1, k'_i >= eps}``.

    Two dimensions use an evenly spaced angle between the clipping limits;
    higher dimensions use bin centres in hyperspherical angles over
    ``[0, pi/2]`` and drop points that leave the clipped set.
    """
    if d < 1:
        raise DomainError("dimension must be positive")
    if not 0 < eps < 1 / math.sqrt(d):
        raise DomainError(f"eps must lie in (0, 1/sqrt({d}))")
    if d == 1:
        return np.ones((1, 1))
    samples = _default_samples(d) if samples is None else int(samples)
    if samples < 2 and d == 2:
        raise DomainError("need at least 2 samples")
    if d == 2:
        th = np.linspace(math.asin(eps), math.acos(eps), samples)
        return np.column_stack((np.cos(th), np.sin(th)))
    centres = (np.arange(samples) + 0.5) * (math.pi / 2) / samples
    pts = []
    for idx in np.ndindex(*([samples] * (d - 1))):
        x = _from_angles(centres[list(idx)])
        if x.min() >= eps:
            pts.append(x)
    if not pts:
        raise DomainError("grid has no point inside the clipped sphere; raise samples")
    return np.array(pts)


def trace_boundary(agent, g, eps=0.05, samples=None, refine=True):
    """Sample ``h`` over a grid of the clipped sphere and locate extrema of ``h_rho``.

    With two effective coordinates and ``refine`` the grid extrema are polished
    by a bounded scalar search in the polar angle between neighbouring grid
    nodes.
    """
    if not dg.has_directed_spanning_tree(g):
        raise TopologyError("A2 violated: digraph has no directed spanning tree")
    kap = _kappa0(agent)
    eff = effective_coordinates(g)
    L = dg.laplace_matrix(g)
    grid = sphere_grid(len(eff), eps, samples)
    out = [_sample(kap, L, g.n, eff, row) for row in grid]
    radii = np.array([s.radius for s in out])
    imin, imax = int(np.argmin(radii)), int(np.argmax(radii))
    note = ""
    if len(eff) < g.n:
        lead = [i for i in range(1, g.n + 1) if i not in eff]
        note = f"leader coordinate {lead[0]} dropped; reported as 0"

    rmin = rmax = None
    if refine and len(eff) == 2 and len(out) > 2:
        th = np.arctan2(grid[:, 1], grid[:, 0])

        def polish(i, sign):
            lo, hi = th[max(i - 1, 0)], th[min(i + 1, len(th) - 1)]
            res = minimize_scalar(
                lambda t: sign * _sample(kap, L, g.n, eff, [math.cos(t), math.sin(t)]).radius,
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-13},
            )
            cand = _sample(kap, L, g.n, eff, [math.cos(res.x), math.sin(res.x)])
            best = out[i]
            return cand if sign * cand.radius < sign * best.radius else best

        rmin = polish(imin, 1.0)
        rmax = polish(imax, -1.0)
    return BoundaryTrace(out, imin, imax, float(radii[imin]), float(radii[imax]), rmin, rmax, note)


def three_node_polar(agent, eps=0.05, samples=400, deltas=None):
    """Polar boundary ``(gamma(delta), rho(delta))`` of the three-agent leader example.

    Gains on the two followers are ``(delta, 1 - delta)``;
    ``gamma = arctan((1 - delta)/delta)`` and
    ``rho = kappa0 / r(diag(0, delta, 1 - delta) L)``.
    """
    kap = _kappa0(agent)
    L = dg.laplace_matrix(dg.make_three_node_example())
    if deltas is None:
        if not 0 < eps < 0.5:
            raise DomainError("eps must lie in (0, 1/2)")
        deltas = np.linspace(eps, 1 - eps, samples)
    out = []
    for d in np.atleast_1d(deltas):
        d = float(d)
        if not eps - 1e-15 <= d <= 1 - eps + 1e-15:
            raise DomainError(f"delta={d} outside [{eps}, {1 - eps}]")
        rho = kap / _r_nonzero(np.diag([0.0, d, 1.0 - d]) @ L)
        out.append((math.atan2(1.0 - d, d), rho))
    return out
