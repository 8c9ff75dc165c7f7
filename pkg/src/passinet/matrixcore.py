"""Dense matrix and polynomial kernel.

Matrices are plain :class:`numpy.ndarray` objects (real or complex) and
polynomials are :class:`numpy.polynomial.Polynomial` objects, which store
coefficients in ascending degree.  The eigenvalue solver is LAPACK's
Hessenberg reduction followed by shifted QR (``numpy.linalg.eigvals``) and the
matrix exponential is Padé scaling-and-squaring (``scipy.linalg.expm``).
"""

import numpy as np
import scipy.linalg
from numpy.polynomial import Polynomial

from .errors import ConvergenceError, DimensionError, InvalidInputError

__all__ = [
    "as_matrix",
    "as_polynomial",
    "eigenvalues",
    "sort_eigenvalues",
    "kron",
    "expm",
    "max_real_part",
    "routh_hurwitz",
    "complex_quadratic_stable",
]


def as_matrix(m, square=False):
    """Validate ``m`` as a finite 2-D array and return it as an ndarray."""
    a = np.asarray(m)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.number):
        raise InvalidInputError(f"non-numeric matrix dtype {a.dtype}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_polynomial(p, tol=0.0):
    """Coerce ``p`` (Polynomial or ascending coefficient list) and trim it.

    Trailing coefficients with magnitude ``<= tol * max|coef|`` are dropped so
    the leading coefficient is nonzero.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(np.atleast_1d(np.asarray(p)))
    coef = np.asarray(p.coef)
    if not np.all(np.isfinite(coef)):
        raise InvalidInputError("polynomial has non-finite coefficients")
    scale = np.max(np.abs(coef)) if coef.size else 0.0
    return p.trim(tol * scale)


def eigenvalues(m):
    """Eigenvalues of a square matrix, with multiplicity, as a complex array.

    Raises
    ------
    DimensionError
        If ``m`` is not square.
    ConvergenceError
        If the QR iteration does not converge.
    """
    a = as_matrix(m, square=True)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    try:
        lam = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    return lam.astype(complex)


def sort_eigenvalues(lam):
    """Sort a multiset of eigenvalues lexicographically by (Re, Im)."""
    lam = np.asarray(lam, dtype=complex)
    order = np.lexsort((lam.imag, lam.real))
    return lam[order]


def kron(a, b):
    """Kronecker product ``a ⊗ b``; block (i, j) equals ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def expm(m, t=1.0):
    """Matrix exponential ``exp(m t)``."""
    a = as_matrix(m, square=True)
    if not np.isfinite(t):
        raise InvalidInputError("time must be finite")
    return scipy.linalg.expm(a * t)


def max_real_part(m):
    """Largest real part over the spectrum of ``m`` (spectral abscissa)."""
    lam = eigenvalues(m)
    return float(np.max(lam.real)) if lam.size else -np.inf


def routh_hurwitz(p):
    """Return True iff every root of the real polynomial ``p`` has Re < 0.

    Builds the Routh array and requires the first column to be strictly of
    one sign.  A zero pivot means a root on or to the right of the imaginary
    axis, so the answer is False in that case.

    Parameters
    ----------
    p : Polynomial or sequence
        Real coefficients in ascending degree.
    """
    p = as_polynomial(p)
    coef = np.asarray(p.coef)
    if np.iscomplexobj(coef):
        if np.any(coef.imag != 0):
            raise InvalidInputError("routh_hurwitz needs real coefficients")
        coef = coef.real
    if coef.size == 1 and coef[0] == 0:
        raise InvalidInputError("zero polynomial")
    deg = coef.size - 1
    if deg < 1:
        raise InvalidInputError("polynomial degree must be at least 1")
    desc = coef[::-1] / coef[-1]
    if np.any(desc <= 0):
        return False

    width = deg // 2 + 1
    prev = np.zeros(width)
    cur = np.zeros(width)
    prev[: len(desc[0::2])] = desc[0::2]
    cur[: len(desc[1::2])] = desc[1::2]
    for _ in range(deg - 1):
        if cur[0] <= 0:
            return False
        nxt = np.zeros(width)
        nxt[:-1] = (cur[0] * prev[1:] - prev[0] * cur[1:]) / cur[0]
        prev, cur = cur, nxt
    return bool(cur[0] > 0)


def complex_quadratic_stable(alpha, beta):
    """Stability of ``f(z) = z**2 + (alpha + i beta) z + (alpha + i beta)``.

    Hermite-Biehler split on the imaginary axis: ``f(iw) = phi(w) + i psi(w)``
    with ``phi = -w**2 - beta w + alpha`` and ``psi = alpha w + beta``.  The
    Wronskian at ``w = 0`` is ``alpha**2 + beta**2 > 0``.  With ``alpha > 0``
    the single root ``-beta/alpha`` of ``psi`` sits strictly between the two
    real roots of the downward parabola ``phi`` iff ``phi(-beta/alpha) > 0``,
    i.e. ``alpha + beta*tau > tau**2`` with ``tau = beta/alpha``.  Multiplying
    through by ``alpha > 0`` gives ``alpha**3 + alpha beta**2 - beta**2 > 0``.

    Roots exactly on the imaginary axis count as unstable.
    """
    alpha = float(alpha)
    beta = float(beta)
    if alpha == 0.0 and beta == 0.0:
        raise InvalidInputError("(alpha, beta) must not both be zero")
    if alpha <= 0.0:
        return False
    tau = beta / alpha
    return alpha + beta * tau > tau * tau
