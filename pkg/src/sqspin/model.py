"""Phase structure of the single spherical quantum spin (SQS).

The SQS is one harmonic oscillator with inverse mass g whose frequency and
drive are fixed self-consistently by the constraints <x^2> = 1 and <x> = h0.
Two settings are covered:

* thermal equilibrium at temperature T, where the ordered branch has
  omega = sqrt(g) and h^2 = sqrt(g)/2 - (g/4) coth(sqrt(g)/(2T)), and the
  disordered branch solves omega = (g/2) coth(omega/(2T));
* the dissipative steady state at damping rate gamma, where the ordered
  window is g^2 - 4g + gamma^2 <= 0 with omega = sqrt(4g - gamma^2)/2.

Sign conventions: equilibrium fixes h >= 0, the steady state h <= 0 (the two
ordered solutions are degenerate; one is picked for determinism).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, SolverFailure
from .numerics import coth, find_root, grow_bracket

__all__ = [
    "CRITICAL_TOL",
    "EquilibriumSolution",
    "NessSolution",
    "Phase",
    "PhaseDiagramGrid",
    "equilibrium_critical_temperature",
    "ness_critical_gs",
    "ness_unconstrained_moments",
    "phase_diagram",
    "solve_equilibrium",
    "solve_ness",
]

# |h^2| at or below this counts as sitting on the critical line; chosen to
# clear solver residual noise with a couple of decades to spare.
CRITICAL_TOL = 1e-10

# T=0 ordered window closes here: sqrt(g)/2 - g/4 = 0 at g = 4.
G_CRITICAL_T0 = 4.0


class Phase(str, enum.Enum):
    ORDERED = "ordered"
    DISORDERED = "disordered"
    CRITICAL = "critical"

    def __str__(self) -> str:  # CSV-friendly
        return self.value


@dataclass(frozen=True)
class EquilibriumSolution:
    """Self-consistent equilibrium solution at coupling g and temperature T."""

    g: float
    T: float
    phase: Phase
    omega: float
    h: float
    alpha: float
    n: float


@dataclass(frozen=True)
class NessSolution:
    """Self-consistent dissipative steady-state solution at (g, gamma)."""

    g: float
    gamma: float
    phase: Phase
    omega: float
    h: float
    alpha: float


@dataclass(frozen=True)
class CriticalPoint:
    """A bisection-refined point on a phase boundary."""

    g: float
    axis2: float


@dataclass(frozen=True)
class PhaseDiagramGrid:
    """Grid classification plus refined boundary points.

    ``records`` is row-major: the outer loop runs over g_values ascending,
    the inner loop over axis2_values ascending.  ``axis2`` is T in
    equilibrium mode and gamma in ness mode.
    """

    mode: str
    g_values: tuple[float, ...]
    axis2_values: tuple[float, ...]
    records: tuple
    critical_points: tuple[CriticalPoint, ...]


def _coth_factor(x_over_2t: float, T: float) -> float:
    """coth(arg) with the T = 0 limit taken exactly."""
    if T == 0.0:
        return 1.0
    return coth(x_over_2t / T)


def _ordered_h_squared(g: float, T: float) -> float:
    w = math.sqrt(g)
    return 0.5 * w - 0.25 * g * _coth_factor(0.5 * w, T)


def _thermal_occupation(omega: float, T: float) -> float:
    if T == 0.0:
        return 0.0
    return 0.5 * _coth_factor(0.5 * omega, T) - 0.5


def _disordered_omega(g: float, T: float, tol: float = 1e-12) -> float:
    """Solve omega = (g/2) coth(omega/(2T)); T = 0 collapses to g/2."""
    if T == 0.0:
        return 0.5 * g

    def residual(w: float) -> float:
        return w - 0.5 * g * coth(0.5 * w / T)

    lo = 1e-12
    try:
        lo, hi = grow_bracket(residual, lo, max(g, 1.0))
    except SolverFailure as exc:
        raise SolverFailure(f"no bracket for the disordered omega at g={g}, T={T}") from exc
    return find_root(residual, lo, hi, tol=tol)


def solve_equilibrium(g: float, T: float = 0.0, tol: float = CRITICAL_TOL) -> EquilibriumSolution:
    """Solve the equilibrium self-consistency constraints and classify the phase.

    The ordered solution is returned wherever it exists (h^2 > tol); the
    phase is Critical when |h^2| <= tol and Disordered otherwise.

    Args:
        g: coupling (inverse mass), > 0.
        T: temperature, >= 0.  T = 0 uses the exact coth -> 1 limit.
        tol: classification tolerance on h^2.

    Raises:
        DomainError: for g <= 0 or T < 0.
        SolverFailure: if the disordered frequency cannot be bracketed.
    """
    if not g > 0.0:
        raise DomainError(f"g must be > 0, got {g}")
    if T < 0.0:
        raise DomainError(f"T must be >= 0, got {T}")

    h_sq = _ordered_h_squared(g, T)
    if h_sq > tol:
        omega = math.sqrt(g)
        h = math.sqrt(h_sq)
        return EquilibriumSolution(
            g=g, T=T, phase=Phase.ORDERED, omega=omega, h=h,
            alpha=h / omega, n=_thermal_occupation(omega, T),
        )
    if abs(h_sq) <= tol:
        omega = math.sqrt(g)
        return EquilibriumSolution(
            g=g, T=T, phase=Phase.CRITICAL, omega=omega, h=0.0,
            alpha=0.0, n=_thermal_occupation(omega, T),
        )
    omega = _disordered_omega(g, T)
    return EquilibriumSolution(
        g=g, T=T, phase=Phase.DISORDERED, omega=omega, h=0.0,
        alpha=0.0, n=_thermal_occupation(omega, T),
    )


def equilibrium_critical_temperature(g: float, tol: float = 1e-12) -> float:
    """Temperature where the ordered branch closes: coth(sqrt(g)/(2 T_c)) = 2/sqrt(g).

    Only defined for 0 < g < 4; above g = 4 the right-hand side drops below 1
    and no solution exists.
    """
    if not 0.0 < g < G_CRITICAL_T0:
        raise DomainError(f"critical temperature requires 0 < g < 4, got {g}")

    def residual(T: float) -> float:
        return _ordered_h_squared(g, T)

    lo, hi = grow_bracket(residual, 1e-9, max(1.0, g))
    return find_root(residual, lo, hi, tol=tol)


def _ness_discriminant(g: float, gamma: float) -> float:
    return g * g - 4.0 * g + gamma * gamma


def solve_ness(g: float, gamma: float, tol: float = CRITICAL_TOL) -> NessSolution:
    """Steady-state solution of the damped SQS at (g, gamma).

    Ordered (discriminant g^2 - 4g + gamma^2 <= -tol):
        omega = sqrt(4g - gamma^2)/2,
        h = -(g*gamma/(4g - gamma^2)) * sqrt(|1 - 2*omega/g|).
    Disordered: h = alpha = 0 with omega = g/2 (the constraint solution for
    the undriven damped oscillator, whose steady state is the basis vacuum).
    Critical within tol of the window edge, where h vanishes continuously.

    At gamma = 0 the ordered omega reduces to the equilibrium sqrt(g) and h
    to 0 (the equilibrium limit; the degenerate finite-h equilibrium pair is
    recovered by solve_equilibrium).

    Raises:
        DomainError: if g <= 0, gamma < 0, or 4g <= gamma^2 (omega not real).
    """
    if not g > 0.0:
        raise DomainError(f"g must be > 0, got {g}")
    if gamma < 0.0:
        raise DomainError(f"gamma must be >= 0, got {gamma}")
    four_g_minus_g2 = 4.0 * g - gamma * gamma
    if four_g_minus_g2 <= 0.0:
        raise DomainError(f"need 4g > gamma^2 for a real frequency, got g={g}, gamma={gamma}")

    disc = _ness_discriminant(g, gamma)
    if disc <= -tol:
        omega = 0.5 * math.sqrt(four_g_minus_g2)
        h = -(g * gamma / four_g_minus_g2) * math.sqrt(abs(1.0 - 2.0 * omega / g))
        if gamma == 0.0:
            h = 0.0  # avoid -0.0 in the equilibrium limit
        return NessSolution(g=g, gamma=gamma, phase=Phase.ORDERED, omega=omega,
                            h=h, alpha=h / omega)
    if abs(disc) < tol:
        return NessSolution(g=g, gamma=gamma, phase=Phase.CRITICAL,
                            omega=0.5 * math.sqrt(four_g_minus_g2), h=0.0, alpha=0.0)
    return NessSolution(g=g, gamma=gamma, phase=Phase.DISORDERED, omega=0.5 * g,
                        h=0.0, alpha=0.0)


def ness_critical_gs(gamma: float) -> tuple[float, float]:
    """Boundary couplings g_- < g_+ of the steady-state ordered window.

    Roots of g^2 - 4g + gamma^2 = 0: g = 2 -/+ sqrt(4 - gamma^2).  The lower
    root is the order-by-disorder boundary, the upper one continues the
    equilibrium transition (g_+ = 4 at gamma = 0).  They merge at gamma = 2.
    """
    if not 0.0 <= gamma <= 2.0:
        raise DomainError(f"ordered window exists only for 0 <= gamma <= 2, got {gamma}")
    root = math.sqrt(4.0 - gamma * gamma)
    return 2.0 - root, 2.0 + root


def ness_unconstrained_moments(omega: float, g: float, gamma: float) -> tuple[complex, complex]:
    """First and second ladder moments of the damped steady state before the
    constraints fix omega.

    Returns (<a>, <aa>) with
        <a>  = (1/2) sqrt(1 - 2 omega/g) (i - gamma/(2 omega)),
        <aa> = ((g - 2 omega)/(4 g omega)) [ (gamma^2 - 2g)/(2 omega) - i gamma ].

    Requires 0 < 2 omega <= g so the square root stays real.
    """
    if not omega > 0.0:
        raise DomainError(f"omega must be > 0, got {omega}")
    if gamma < 0.0:
        raise DomainError(f"gamma must be >= 0, got {gamma}")
    if 2.0 * omega > g:
        raise DomainError(f"need 2*omega <= g, got omega={omega}, g={g}")
    root = math.sqrt(1.0 - 2.0 * omega / g)
    mean_a = 0.5 * root * complex(-gamma / (2.0 * omega), 1.0)
    prefactor = (g - 2.0 * omega) / (4.0 * g * omega)
    mean_aa = prefactor * complex((gamma * gamma - 2.0 * g) / (2.0 * omega), -gamma)
    return mean_a, mean_aa


def _classify_equilibrium(g: float, T: float, tol: float) -> int:
    """+1 ordered, 0 critical, -1 disordered; no root solving."""
    h_sq = _ordered_h_squared(g, T)
    if h_sq > tol:
        return 1
    if h_sq >= -tol:
        return 0
    return -1


def _classify_ness(g: float, gamma: float, tol: float) -> int:
    if 4.0 * g <= gamma * gamma:
        return -1
    disc = _ness_discriminant(g, gamma)
    if disc <= -tol:
        return 1
    if disc < tol:
        return 0
    return -1


def _ness_record(g: float, gamma: float, tol: float) -> NessSolution:
    if 4.0 * g <= gamma * gamma:
        # omega formula is imaginary here; the phase is disordered and the
        # constraint solution omega = g/2 still applies.
        return NessSolution(g=g, gamma=gamma, phase=Phase.DISORDERED,
                            omega=0.5 * g, h=0.0, alpha=0.0)
    return solve_ness(g, gamma, tol=tol)


def _refine_flip(classify, lo: float, hi: float, tol: float) -> float:
    """Bisect the classification flip between lo and hi to width tol."""
    c_lo = classify(lo)
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if classify(mid) == c_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def phase_diagram(
    mode: str,
    g_values: Sequence[float],
    axis2_values: Sequence[float],
    tol: float = 1e-10,
    include_records: bool = True,
) -> PhaseDiagramGrid:
    """Classify a (g, T) or (g, gamma) grid and refine the phase boundary.

    Wherever two neighboring grid points (along either axis) classify into
    different phases, the flip location is bisected down to ``tol`` along the
    connecting axis and emitted as a CriticalPoint.  Grid points that land on
    the boundary within CRITICAL_TOL are emitted as critical points directly.

    Args:
        mode: "equilibrium" (axis2 = T) or "ness" (axis2 = gamma).
        g_values: ascending positive couplings.
        axis2_values: ascending, nonnegative.
        tol: bisection width for boundary refinement.
        include_records: when False, skip per-point solution records and
            return classification plus refined boundary only.

    Returns:
        PhaseDiagramGrid with one record per grid point in row-major order
        (g outer, axis2 inner) and deterministic critical-point ordering.
    """
    if mode not in ("equilibrium", "ness"):
        raise DomainError(f"mode must be 'equilibrium' or 'ness', got {mode!r}")
    gs = [float(v) for v in g_values]
    a2s = [float(v) for v in axis2_values]
    if not gs or not a2s:
        raise DomainError("grid axes must be non-empty")
    if any(v <= 0.0 for v in gs) or gs != sorted(gs):
        raise DomainError("g axis must be positive and ascending")
    if any(v < 0.0 for v in a2s) or a2s != sorted(a2s):
        raise DomainError("axis2 must be nonnegative and ascending")

    if mode == "equilibrium":
        classify = lambda g, a2: _classify_equilibrium(g, a2, CRITICAL_TOL)
        record = lambda g, a2: solve_equilibrium(g, a2, tol=CRITICAL_TOL)
    else:
        classify = lambda g, a2: _classify_ness(g, a2, CRITICAL_TOL)
        record = lambda g, a2: _ness_record(g, a2, CRITICAL_TOL)

    records = []
    labels: dict[tuple[int, int], int] = {}
    for i, g in enumerate(gs):
        for j, a2 in enumerate(a2s):
            labels[(i, j)] = classify(g, a2)
            if include_records:
                try:
                    records.append(record(g, a2))
                except Exception as exc:
                    raise type(exc)(f"grid point (g={g}, axis2={a2}): {exc}") from exc

    critical: list[CriticalPoint] = []
    seen: set[tuple[float, float]] = set()

    def emit(g: float, a2: float) -> None:
        key = (round(g, 14), round(a2, 14))
        if key not in seen:
            seen.add(key)
            critical.append(CriticalPoint(g=g, axis2=a2))

    for i, g in enumerate(gs):
        for j, a2 in enumerate(a2s):
            if labels[(i, j)] == 0:
                emit(g, a2)

    # Scan along g at fixed axis2, then along axis2 at fixed g.
    for j, a2 in enumerate(a2s):
        for i in range(len(gs) - 1):
            if labels[(i, j)] * labels[(i + 1, j)] == -1:
                g_star = _refine_flip(lambda g: classify(g, a2), gs[i], gs[i + 1], tol)
                emit(g_star, a2)
    for i, g in enumerate(gs):
        for j in range(len(a2s) - 1):
            if labels[(i, j)] * labels[(i, j + 1)] == -1:
                a2_star = _refine_flip(lambda a2: classify(g, a2), a2s[j], a2s[j + 1], tol)
                emit(g, a2_star)

    return PhaseDiagramGrid(
        mode=mode,
        g_values=tuple(gs),
        axis2_values=tuple(a2s),
        records=tuple(records),
        critical_points=tuple(critical),
    )
