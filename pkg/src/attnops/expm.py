"""Matrix exponential via truncated Taylor series or diagonal Pade approximants.

Both methods share the same scaling-and-squaring wrapper: when the 1-norm of
the argument exceeds ``scaling_threshold`` the matrix is divided by a power of
two, the series / rational approximant is evaluated there, and the result is
squared back up.  Pass ``scaling_threshold=math.inf`` to evaluate the raw
approximant.  The Pade step solves Q(A) X = P(A) with partial-pivot LU; the
denominator is never inverted explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dense import as_square
from .errors import SingularDenominator

DEFAULT_SCALING_THRESHOLD = 0.5
_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class ExpmSpec:
    """Method selection for the attention variants that exponentiate an operator."""

    method: str = "pade"
    taylor_terms: int = 30
    pade_m: int = 6
    pade_n: int = 6
    scaling_threshold: float = DEFAULT_SCALING_THRESHOLD

    def __post_init__(self):
        if self.method not in ("taylor", "pade"):
            raise ValueError(f"method must be 'taylor' or 'pade', got {self.method!r}")
        if self.taylor_terms < 1:
            raise ValueError("taylor_terms must be >= 1")
        if self.pade_m < 1 or self.pade_n < 1:
            raise ValueError("pade degrees must be >= 1")
        if not self.scaling_threshold > 0:
            raise ValueError("scaling_threshold must be positive")


def _one_norm(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a), axis=0)))


def _squarings(norm1: float, threshold: float) -> int:
    if norm1 <= threshold or not math.isfinite(threshold):
        return 0
    return max(0, math.ceil(math.log2(norm1 / threshold)))


def pade_coefficients(m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Ascending numerator/denominator coefficients of the degree-(m, n) approximant of exp.

    Obtained by matching the exponential's Taylor series through order m + n,
    which fixes p_j = (m+n-j)! m! / ((m+n)! j! (m-j)!) and the mirrored,
    sign-alternating q_j.
    """
    if m < 1 or n < 1:
        raise ValueError("pade degrees must be >= 1")
    fact = math.factorial
    total = fact(m + n)
    p = [Fraction(fact(m + n - j) * fact(m), total * fact(j) * fact(m - j)) for j in range(m + 1)]
    q = [
        (-1) ** j * Fraction(fact(m + n - j) * fact(n), total * fact(j) * fact(n - j))
        for j in range(n + 1)
    ]
    return np.array([float(c) for c in p]), np.array([float(c) for c in q])


def _polyval_matrix(coeffs: np.ndarray, a: np.ndarray) -> np.ndarray:
    # Horner scheme on the matrix argument, coefficients in ascending order.
    eye = np.eye(a.shape[0], dtype=a.dtype)
    acc = coeffs[-1] * eye
    for c in coeffs[-2::-1]:
        acc = acc @ a + c * eye
    return acc


def expm_taylor(
    a,
    terms: int = 30,
    scaling_threshold: float = DEFAULT_SCALING_THRESHOLD,
) -> np.ndarray:
    """sum_{k=0}^{terms} A^k / k!, with scaling-and-squaring."""
    a = as_square(a, "a")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if not scaling_threshold > 0:
        raise ValueError("scaling_threshold must be positive")
    s = _squarings(_one_norm(a), scaling_threshold)
    x = a / (2.0**s)
    eye = np.eye(a.shape[0], dtype=x.dtype)
    acc = eye.copy()
    term = eye
    for k in range(1, terms + 1):
        term = term @ x / k
        acc = acc + term
    for _ in range(s):
        acc = acc @ acc
    return acc


def expm_pade(
    a,
    m: int = 6,
    n: int = 6,
    scaling_threshold: float = DEFAULT_SCALING_THRESHOLD,
) -> np.ndarray:
    """Solve Q(A) X = P(A) for the degree-(m, n) approximant, with scaling-and-squaring."""
    a = as_square(a, "a")
    if not scaling_threshold > 0:
        raise ValueError("scaling_threshold must be positive")
    p_coeffs, q_coeffs = pade_coefficients(m, n)
    s = _squarings(_one_norm(a), scaling_threshold)
    x = a / (2.0**s)
    p_mat = _polyval_matrix(p_coeffs, x)
    q_mat = _polyval_matrix(q_coeffs, x)
    try:
        condition = np.linalg.cond(q_mat, 1)
    except np.linalg.LinAlgError:
        condition = math.inf
    if not np.isfinite(condition) or condition > _CONDITION_LIMIT:
        raise SingularDenominator(
            f"denominator condition estimate {condition:.3e} exceeds {_CONDITION_LIMIT:.0e}"
        )
    out = np.linalg.solve(q_mat, p_mat)
    for _ in range(s):
        out = out @ out
    return out


def matrix_exponential(a, spec: ExpmSpec = ExpmSpec()) -> np.ndarray:
    if spec.method == "taylor":
        return expm_taylor(a, spec.taylor_terms, spec.scaling_threshold)
    return expm_pade(a, spec.pade_m, spec.pade_n, spec.scaling_threshold)
