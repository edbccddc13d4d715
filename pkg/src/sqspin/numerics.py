"""Scalar numerical kernels: root bracketing, special functions, differentiation.

Everything here is dependency-light on purpose.  The routines are small,
deterministic, and tuned for the parameter ranges that show up in the
phase-structure and metrology modules (couplings of order one, Fock indices
up to a few thousand).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, NoSignChange, NonFinite, SolverFailure

__all__ = [
    "DiffConfig",
    "central_diff",
    "coth",
    "find_root",
    "grow_bracket",
    "laguerre_assoc",
    "log_gamma",
]

# Below this |x| the direct 1/tanh(x) form starts losing digits to the
# 1/x pole, so coth switches to its Laurent expansion.
_COTH_SERIES_CUTOFF = 1e-3

_POLISH_STEPS = 3


def _ensure_finite(value: float, context: str) -> float:
    if not math.isfinite(value):
        raise NonFinite(f"{context} evaluated to a non-finite value ({value!r})")
    return value


def coth(x: float) -> float:
    """Hyperbolic cotangent, accurate through the small-argument pole.

    For |x| below 1e-3 the Laurent series 1/x + x/3 - x^3/45 is used; the
    omitted term is O(x^5), far below double precision there.

    Raises:
        DomainError: if x == 0.
        NonFinite: if x is NaN.
    """
    if math.isnan(x):
        raise NonFinite("coth received NaN")
    if x == 0.0:
        raise DomainError("coth(0) is undefined")
    if abs(x) < _COTH_SERIES_CUTOFF:
        return 1.0 / x + x / 3.0 - x**3 / 45.0
    return 1.0 / math.tanh(x)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0.

    Backed by ``math.lgamma``, which is exact to well under 1e-12 relative
    error over the range used here (0.5 through ~1e6).

    Raises:
        DomainError: if x <= 0 (poles and the reflection branch are not needed).
    """
    if math.isnan(x):
        raise NonFinite("log_gamma received NaN")
    if x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def laguerre_assoc(n: int, k: float, x: float) -> float:
    """Associated Laguerre polynomial L_n^(k)(x).

    For k > -1 (and any non-integer k) the stable three-term recurrence in n
    is used.  A negative integer upper index k = -j is reduced through

        L_n^(-j)(x) = (-x)^j * (n-j)!/n! * L_{n-j}^(j)(x)      (j <= n)

    and through the defining finite series when j > n, where the binomial
    coefficient is taken in its generalized (falling-factorial) sense.

    Raises:
        DomainError: if n is negative or not an integer.
        NonFinite: if x or k is not finite.
    """
    if not isinstance(n, (int,)) or isinstance(n, bool):
        raise DomainError(f"degree n must be an integer, got {n!r}")
    if n < 0:
        raise DomainError(f"degree n must be >= 0, got {n}")
    if not (math.isfinite(x) and math.isfinite(k)):
        raise NonFinite("laguerre_assoc received a non-finite argument")

    if n == 0:
        return 1.0

    k_int = round(k)
    if k < 0 and k == k_int and -k_int <= n:
        j = -k_int
        # Falling-factorial ratio (n-j)!/n! = 1 / (n (n-1) ... (n-j+1)).
        ratio = 1.0
        for i in range(n, n - j, -1):
            ratio /= i
        return (-x) ** j * ratio * laguerre_assoc(n - j, float(j), x)
    if k < 0 and k == k_int:
        return _laguerre_series(n, float(k_int), x)

    prev = 1.0
    curr = 1.0 + k - x
    for i in range(1, n):
        prev, curr = curr, ((2 * i + 1 + k - x) * curr - (i + k) * prev) / (i + 1)
    return curr


def _laguerre_series(n: int, k: float, x: float) -> float:
    """Defining series sum_i (-1)^i C(n+k, n-i) x^i / i!, generalized binomial."""
    total = 0.0
    for i in range(n + 1):
        binom = 1.0
        a = n + k
        for step in range(n - i):
            binom *= (a - step) / (n - i - step)
        term = binom * x**i / math.factorial(i)
        if i % 2:
            term = -term
        total += term
    return total


def grow_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    factor: float = 2.0,
    max_steps: int = 60,
) -> tuple[float, float]:
    """Expand [lo, hi] upward until f changes sign across it.

    The lower endpoint is held fixed; the width is multiplied by ``factor``
    each step.  Returns the first straddling bracket found.

    Raises:
        NoSignChange: if no sign change appears within ``max_steps``.
        NonFinite: if f returns NaN/inf at an endpoint.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    flo = _ensure_finite(f(lo), "grow_bracket f(lo)")
    if flo == 0.0:
        return lo, lo
    for _ in range(max_steps):
        fhi = _ensure_finite(f(hi), "grow_bracket f(hi)")
        if fhi == 0.0 or (flo < 0.0) != (fhi < 0.0):
            return lo, hi
        hi = lo + (hi - lo) * factor
    raise NoSignChange(f"no sign change found growing from [{lo}, ...] in {max_steps} steps")


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of f on a straddling bracket by bisection with a secant polish.

    Bisection runs until the bracket width drops below ``tol`` (or an exact
    zero is hit), then a few secant steps refine the estimate, accepted only
    while they stay inside the original bracket and keep shrinking |f|.

    Args:
        f: scalar function, must be finite on [lo, hi].
        lo, hi: bracket endpoints with f(lo) and f(hi) of opposite sign
            (an endpoint that is already a root is returned directly).
        tol: absolute width tolerance for the bisection stage.
        max_iter: bisection iteration budget.

    Returns:
        The abscissa with the smallest |f| seen.

    Raises:
        NoSignChange: if the bracket does not straddle a root.
        SolverFailure: if the bracket fails to shrink below tol in budget.
        NonFinite: if f returns NaN/inf anywhere it is evaluated.
    """
    if not lo <= hi:
        raise DomainError(f"need lo <= hi, got [{lo}, {hi}]")
    flo = _ensure_finite(f(lo), "find_root f(lo)")
    fhi = _ensure_finite(f(hi), "find_root f(hi)")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0.0) == (fhi < 0.0):
        raise NoSignChange(f"f has the same sign at both ends of [{lo}, {hi}]")

    orig_lo, orig_hi = lo, hi
    best_x, best_f = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    converged = False
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = _ensure_finite(f(mid), "find_root f(mid)")
        if abs(fmid) < abs(best_f):
            best_x, best_f = mid, fmid
        if fmid == 0.0:
            return mid
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
        if hi - lo <= tol:
            converged = True
            break
    if not converged:
        raise SolverFailure(f"bracket width {hi - lo:g} still above tol={tol:g} after {max_iter} bisections")

    x0, f0, x1, f1 = lo, flo, hi, fhi
    for _ in range(_POLISH_STEPS):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not (orig_lo <= x2 <= orig_hi) or not math.isfinite(x2):
            break
        f2 = _ensure_finite(f(x2), "find_root polish")
        x0, f0, x1, f1 = x1, f1, x2, f2
        if abs(f2) < abs(best_f):
            best_x, best_f = x2, f2
        if f2 == 0.0:
            break
    return best_x


@dataclass(frozen=True)
class DiffConfig:
    """Finite-difference settings.

    step=None selects max(1e-5, 1e-4*|x|), balancing truncation against
    roundoff for functions of order unity.
    """

    step: float | None = None
    order: int = 4

    def resolve_step(self, x: float) -> float:
        if self.step is not None:
            if self.step <= 0.0:
                raise DomainError(f"step must be positive, got {self.step}")
            return self.step
        return max(1e-5, 1e-4 * abs(x))


def central_diff(f: Callable[[float], float], x: float, cfg: DiffConfig | None = None) -> float:
    """Central finite-difference derivative of f at x, order 2 or 4.

    Raises:
        DomainError: on an unsupported order.
        NonFinite: if any stencil evaluation is NaN/inf.
    """
    cfg = cfg or DiffConfig()
    h = cfg.resolve_step(x)
    if cfg.order == 2:
        fp = _ensure_finite(f(x + h), "central_diff f(x+h)")
        fm = _ensure_finite(f(x - h), "central_diff f(x-h)")
        return (fp - fm) / (2.0 * h)
    if cfg.order == 4:
        fp2 = _ensure_finite(f(x + 2.0 * h), "central_diff f(x+2h)")
        fp1 = _ensure_finite(f(x + h), "central_diff f(x+h)")
        fm1 = _ensure_finite(f(x - h), "central_diff f(x-h)")
        fm2 = _ensure_finite(f(x - 2.0 * h), "central_diff f(x-2h)")
        return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)
    raise DomainError(f"order must be 2 or 4, got {cfg.order}")
