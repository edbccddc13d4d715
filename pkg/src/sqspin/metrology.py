"""Estimation theory for the coupling g of the single spherical quantum spin.

Covers, at T = 0:

* the quantum Fisher information of the ordered ground state, in closed form
  for the equilibrium protocol and semi-analytically for the dissipative
  steady-state protocol;
* photon-count statistics of the ground state read out in a Fock basis of
  frequency Omega, and the classical Fisher information of that measurement;
* the Bogoliubov squeezing parameters connecting the ground-state basis to
  the measurement basis, and the two-coefficient expansion of the
  g-derivative of the ground state.

The photon-count series is evaluated in log space so that large squeezing
and small displacement do not overflow or denormalize individual terms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    PhaseError,
    SeriesDivergence,
    StencilOutOfPhase,
)
from .model import Phase, ness_critical_gs, solve_equilibrium, solve_ness
from .numerics import DiffConfig, central_diff, laguerre_assoc, log_gamma

__all__ = [
    "FisherResult",
    "PhotonCountDistribution",
    "QfiResult",
    "SqueezeParams",
    "cramer_rao_bound",
    "derivative_state_coefficients",
    "fisher_information",
    "fisher_vs_squeezing",
    "photon_count_probabilities",
    "qfi_disordered",
    "qfi_equilibrium",
    "qfi_ness",
    "squeezing_parameters",
]

logger = logging.getLogger(__name__)

# Below this displacement (in the measurement basis) the general series is
# numerically singular and the exact squeezed-vacuum distribution is used.
_ALPHA_SV_CUTOFF = 1e-6

# Series convergence: stop once the partial sum is stable to this relative
# level for this many consecutive terms.
_SERIES_RTOL = 1e-14
_SERIES_STABLE_TERMS = 10
_SERIES_MAX_TERMS = 1000


@dataclass(frozen=True)
class SqueezeParams:
    """Squeezing magnitude r and phase phi; the complex parameter is r*e^{2i phi}."""

    r: float
    phi: float

    @property
    def zeta(self) -> complex:
        # phi is 0 or -pi/2 for real frequencies, so e^{2i phi} = +/-1 exactly.
        if self.phi == 0.0:
            return complex(self.r, 0.0)
        if self.phi == -0.5 * math.pi:
            return complex(-self.r, 0.0)
        return self.r * complex(math.cos(2.0 * self.phi), math.sin(2.0 * self.phi))


@dataclass(frozen=True)
class QfiResult:
    """Quantum Fisher information split into its displacement and squeezing parts."""

    g: float
    value: float
    term_displacement: float
    term_squeezing: float
    gamma: float | None = None


@dataclass(frozen=True)
class PhotonCountDistribution:
    """Photon-count probabilities p_0..p_M in a frequency-Omega Fock basis.

    ``probs`` is renormalized to unit mass; ``raw_total`` records the
    pre-normalization sum and ``tail_mass`` the truncated remainder
    max(0, 1 - raw_total).
    """

    omega_meas: float
    probs: np.ndarray
    tail_mass: float
    raw_total: float
    g: float | None = None


@dataclass(frozen=True)
class FisherResult:
    """Photon-counting Fisher information and its quantum-bound ratio."""

    g: float
    omega_meas: float
    value: float
    normalized: float


def _equilibrium_protocol(g: float) -> tuple[float, float, float, float]:
    """(omega, domega/dg, alpha, dalpha/dg) for the T=0 ordered branch."""
    if not 0.0 < g < 4.0:
        raise DomainError(f"ordered T=0 phase requires 0 < g < 4, got {g}")
    omega = math.sqrt(g)
    domega = 0.5 / omega
    alpha_sq = 0.5 / omega - 0.25
    alpha = math.sqrt(alpha_sq)
    dalpha = -(g ** -1.5) / (8.0 * alpha)
    return omega, domega, alpha, dalpha


def _qfi_terms(g: float, omega: float, domega: float, alpha: float, dalpha: float) -> tuple[float, float]:
    term_d = (2.0 * dalpha + (alpha / g) * (omega - g * domega) / omega) ** 2
    term_s = 0.5 * (1.0 / g - domega / omega) ** 2
    return term_d, term_s


def qfi_equilibrium(g: float) -> QfiResult:
    """Quantum Fisher information of the equilibrium T=0 ordered ground state.

    Uses the closed-form protocol omega = sqrt(g), alpha^2 = 1/(2 sqrt(g)) - 1/4
    with analytic derivatives.  Diverges toward both ends of (0, 4).
    """
    omega, domega, alpha, dalpha = _equilibrium_protocol(g)
    term_d, term_s = _qfi_terms(g, omega, domega, alpha, dalpha)
    return QfiResult(g=g, value=term_d + term_s,
                     term_displacement=term_d, term_squeezing=term_s)


def qfi_disordered(g: float) -> QfiResult:
    """The T=0 disordered ground state carries no information about g.

    alpha = 0 removes the displacement term, and omega = g/2 makes
    dln(omega)/dg = 1/g, removing the squeezing term; the result is 0 exactly.
    """
    if not g > 4.0:
        raise DomainError(f"disordered T=0 phase requires g > 4, got {g}")
    return QfiResult(g=g, value=0.0, term_displacement=0.0, term_squeezing=0.0)


def qfi_ness(g: float, gamma: float, cfg: DiffConfig | None = None) -> QfiResult:
    """Quantum Fisher information for the dissipative steady-state protocol.

    gamma = 0 is the equilibrium limit and delegates to qfi_equilibrium (the
    steady-state h collapses to the h -> 0 member of the degenerate pair
    there, so the equilibrium protocol is the meaningful one).  For gamma > 0
    the frequency derivative is analytic, domega/dg = 1/sqrt(4g - gamma^2),
    and dalpha/dg is an order-4 central difference with the step shrunk to
    stay inside the ordered window.

    Raises:
        PhaseError: if (g, gamma) is not in the ordered window.
        DomainError: for gamma < 0 (and, at gamma = 0, g outside (0, 4)).
    """
    if gamma < 0.0:
        raise DomainError(f"gamma must be >= 0, got {gamma}")
    if gamma == 0.0:
        res = qfi_equilibrium(g)
        return QfiResult(g=g, value=res.value, term_displacement=res.term_displacement,
                         term_squeezing=res.term_squeezing, gamma=0.0)

    sol = solve_ness(g, gamma)
    if sol.phase is not Phase.ORDERED:
        raise PhaseError(f"(g={g}, gamma={gamma}) is not in the ordered steady-state window")

    g_lo, g_hi = ness_critical_gs(gamma)
    cfg = cfg or DiffConfig()
    window_margin = min(g - g_lo, g_hi - g)
    step = min(cfg.resolve_step(g), window_margin / 8.0)

    def alpha_of(gg: float) -> float:
        return solve_ness(gg, gamma).alpha

    dalpha = central_diff(alpha_of, g, DiffConfig(step=step, order=cfg.order))
    domega = 1.0 / math.sqrt(4.0 * g - gamma * gamma)
    term_d, term_s = _qfi_terms(g, sol.omega, domega, sol.alpha, dalpha)
    return QfiResult(g=g, value=term_d + term_s, term_displacement=term_d,
                     term_squeezing=term_s, gamma=gamma)


def squeezing_parameters(g: float, omega: float, omega_meas: float) -> SqueezeParams:
    """Bogoliubov squeezing between the ground-state basis and a frequency-
    omega_meas measurement basis.

    tanh(r) = |omega - g*omega_meas| / (omega + g*omega_meas); phi is 0 when
    omega > g*omega_meas and -pi/2 when omega < g*omega_meas (the argument of
    a real number halved and negated).  Matched bases give r = 0.
    """
    if g <= 0.0 or omega <= 0.0 or omega_meas <= 0.0:
        raise DomainError("squeezing_parameters requires positive g, omega, omega_meas")
    diff = omega - g * omega_meas
    if diff == 0.0:
        return SqueezeParams(r=0.0, phi=0.0)
    tanh_r = abs(diff) / (omega + g * omega_meas)
    return SqueezeParams(r=math.atanh(tanh_r), phi=0.0 if diff > 0.0 else -0.5 * math.pi)


def _signed_tanh_r(g: float, omega: float, omega_meas: float) -> float:
    """e^{2i phi} tanh(r) collapsed to its real value (omega - g*Omega)/(omega + g*Omega)."""
    return (omega - g * omega_meas) / (omega + g * omega_meas)


def _series_sum(m: int, x: float, tt: float) -> tuple[float, float]:
    """Inner series of the photon-count amplitude at index m, log-space.

    Computes sum_k Gamma(k+1/2) Q^k L_{2k}^{(m-2k)}(x) with Q = -2 tt / x and
    returns (log|sum|, sign).
    """
    # Terms are accumulated as (log-magnitude, sign); a running rescale keeps
    # the partial sum near unity regardless of the peak term size.
    log_q_over = math.log(2.0 * abs(tt) / x) if tt != 0.0 else -math.inf
    sign_q = -1.0 if tt > 0.0 else 1.0

    scale = -math.inf
    total = 0.0
    stable = 0
    k = 0
    while k <= _SERIES_MAX_TERMS:
        if k == 0:
            log_mag, sign = log_gamma(0.5), 1.0
        elif tt == 0.0:
            break
        else:
            two_k = 2 * k
            if two_k <= m:
                lag = laguerre_assoc(two_k, float(m - two_k), x)
                if lag == 0.0:
                    log_mag, sign = -math.inf, 1.0
                else:
                    log_mag = log_gamma(k + 0.5) + k * log_q_over + math.log(abs(lag))
                    sign = (sign_q ** k) * math.copysign(1.0, lag)
            else:
                # Negative upper index reduced through
                # L_{2k}^{(m-2k)}(x) = (-x)^{2k-m} m!/(2k)! L_m^{(2k-m)}(x).
                lag = laguerre_assoc(m, float(two_k - m), x)
                if lag == 0.0:
                    log_mag, sign = -math.inf, 1.0
                else:
                    log_mag = (log_gamma(k + 0.5) + k * log_q_over
                               + (two_k - m) * math.log(x)
                               + log_gamma(m + 1.0) - log_gamma(two_k + 1.0)
                               + math.log(abs(lag)))
                    sign = (sign_q ** k) * ((-1.0) ** m) * math.copysign(1.0, lag)

        if log_mag > scale:
            if scale > -math.inf:
                total *= math.exp(scale - log_mag)
            scale = log_mag
        term = sign * math.exp(log_mag - scale) if log_mag > -math.inf else 0.0
        total += term

        ref = max(abs(total), 1e-300)
        if abs(term) < _SERIES_RTOL * ref:
            stable += 1
            if stable >= _SERIES_STABLE_TERMS:
                break
        else:
            stable = 0
        k += 1
    else:
        raise SeriesDivergence(
            f"photon-count series not stable after {_SERIES_MAX_TERMS} terms (m={m}, |tanh r|={abs(tt):.4f})")

    if total == 0.0 or scale == -math.inf:
        return -math.inf, 0.0
    return scale + math.log(abs(total)), math.copysign(1.0, total)


def _prob_m(m: int, x: float, tt: float, sech: float) -> float:
    log_series, sign = _series_sum(m, x, tt)
    if sign == 0.0:
        return 0.0
    log_p = (math.log(sech) - x + m * math.log(x) - log_gamma(m + 1.0)
             - math.log(math.pi) + 2.0 * log_series)
    return math.exp(log_p) if log_p > -745.0 else 0.0


def _squeezed_vacuum_prob(m: int, tt: float, sech: float) -> float:
    if m % 2 == 1:
        return 0.0
    if m == 0:
        return sech
    j = m // 2
    if tt == 0.0:
        return 0.0
    log_p = (math.log(sech) + log_gamma(m + 1.0) - 2.0 * log_gamma(j + 1.0)
             - j * math.log(4.0) + m * math.log(abs(tt)))
    return math.exp(log_p) if log_p > -745.0 else 0.0


def photon_count_probabilities(
    g: float,
    omega_meas: float,
    tail_threshold: float = 1e-10,
    max_m: int = 4096,
    fixed_m_max: int | None = None,
) -> PhotonCountDistribution:
    """Photon-count distribution of the T=0 ground state in an Omega basis.

    The state is the displaced squeezed vacuum of the measurement basis, with
    displacement alpha*sqrt(g*Omega/omega) and squeezing set by
    squeezing_parameters(g, omega, Omega).  Probabilities come from a
    Laguerre/Gamma series evaluated in log space; the index range is grown
    until the truncated tail drops below ``tail_threshold``, then the vector
    is renormalized (raw total recorded).

    Args:
        g: coupling, ordered or critical at T=0 (0 < g <= 4).
        omega_meas: measurement-basis frequency Omega > 0.
        tail_threshold: maximum allowed truncated mass before renormalizing.
        max_m: hard cap on the distribution length.
        fixed_m_max: evaluate exactly this many components (m = 0..fixed_m_max-1)
            with no tail enforcement; used for matched-truncation stencils.

    Raises:
        DomainError: in the disordered phase, or for bad Omega / thresholds.
        SeriesDivergence: if the inner series or the index extension fails to
            converge within budget.
    """
    if omega_meas <= 0.0:
        raise DomainError(f"omega_meas must be > 0, got {omega_meas}")
    if tail_threshold <= 0.0:
        raise DomainError(f"tail_threshold must be > 0, got {tail_threshold}")
    sol = solve_equilibrium(g, 0.0)
    if sol.phase is Phase.DISORDERED:
        raise DomainError(f"photon-count distribution defined for the ordered state, g={g} is disordered")

    tt = _signed_tanh_r(g, sol.omega, omega_meas)
    sech = math.sqrt(1.0 - tt * tt)
    alpha_basis = sol.alpha * math.sqrt(g * omega_meas / sol.omega)
    x = alpha_basis * alpha_basis

    if alpha_basis < _ALPHA_SV_CUTOFF:
        prob = lambda m: _squeezed_vacuum_prob(m, tt, sech)
    else:
        prob = lambda m: _prob_m(m, x, tt, sech)

    sinh_sq = tt * tt / (1.0 - tt * tt)
    mean = x + sinh_sq
    if fixed_m_max is not None:
        if fixed_m_max < 1:
            raise DomainError(f"fixed_m_max must be >= 1, got {fixed_m_max}")
        probs = [prob(m) for m in range(fixed_m_max)]
    else:
        m_count = max(24, int(3.0 * mean + 16.0))
        probs = [prob(m) for m in range(m_count)]
        while 1.0 - math.fsum(probs) >= tail_threshold:
            if m_count >= max_m:
                raise SeriesDivergence(
                    f"tail still {1.0 - math.fsum(probs):.3e} at m_max={max_m} (g={g}, Omega={omega_meas})")
            new_count = min(max_m, int(1.6 * m_count) + 8)
            probs.extend(prob(m) for m in range(m_count, new_count))
            m_count = new_count

    raw = np.asarray(probs, dtype=float)
    raw_total = float(math.fsum(probs))
    if raw_total <= 0.0:
        raise SeriesDivergence(f"photon-count series produced zero mass (g={g}, Omega={omega_meas})")
    deviation = abs(1.0 - raw_total)
    if deviation > 1e-12:
        logger.debug("photon-count raw mass deviates from 1 by %.3e at g=%g, Omega=%g",
                     deviation, g, omega_meas)
    return PhotonCountDistribution(
        omega_meas=omega_meas,
        probs=raw / raw_total,
        tail_mass=max(0.0, 1.0 - raw_total),
        raw_total=raw_total,
        g=g,
    )


# Central-difference stencils as (offset, weight/h) pairs.
_STENCILS = {
    2: ((-1.0, -0.5), (1.0, 0.5)),
    4: ((-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)),
}


def fisher_information(
    g: float,
    omega_meas: float,
    cfg: DiffConfig | None = None,
    tail_threshold: float = 1e-10,
    p_floor: float = 1e-12,
) -> FisherResult:
    """Classical Fisher information of photon counting in an Omega basis.

    F = sum_m (dp_m/dg)^2 / p_m with the derivative taken by a central
    difference over distributions evaluated at matched truncation (the
    center point fixes the index range for the whole stencil, so the
    difference never mixes different truncation lengths).  Components with
    p_m <= p_floor are excluded; their total mass is logged.

    Raises:
        StencilOutOfPhase: if any stencil point leaves the ordered window (0, 4).
        DomainError: if g itself is outside (0, 4).
    """
    qfi = qfi_equilibrium(g)
    cfg = cfg or DiffConfig()
    if cfg.order not in _STENCILS:
        raise DomainError(f"order must be one of {sorted(_STENCILS)}, got {cfg.order}")
    h = cfg.resolve_step(g)
    offsets = _STENCILS[cfg.order]
    reach = max(abs(c) for c, _ in offsets) * h
    if g - reach <= 0.0 or g + reach >= 4.0:
        raise StencilOutOfPhase(
            f"difference stencil [{g - reach:.6g}, {g + reach:.6g}] leaves the ordered window (0, 4)")

    center = photon_count_probabilities(g, omega_meas, tail_threshold)
    m_count = len(center.probs)
    dp = np.zeros(m_count)
    for offset, weight in offsets:
        dist = photon_count_probabilities(g + offset * h, omega_meas,
                                          tail_threshold, fixed_m_max=m_count)
        dp += (weight / h) * dist.probs

    p0 = center.probs
    mask = p0 > p_floor
    excluded = float(p0[~mask].sum())
    if excluded > 0.0:
        logger.debug("fisher_information dropped %.3e probability mass below p_floor=%g at g=%g, Omega=%g",
                     excluded, p_floor, g, omega_meas)
    value = float(np.sum(dp[mask] ** 2 / p0[mask]))
    return FisherResult(g=g, omega_meas=omega_meas, value=value,
                        normalized=value / qfi.value)


def fisher_vs_squeezing(
    g: float,
    r_values,
    branch: str = "below",
    cfg: DiffConfig | None = None,
    tail_threshold: float = 1e-13,
    p_floor: float = 1e-15,
) -> list[tuple[float, FisherResult]]:
    """Fisher information along a curve of measurement bases indexed by squeezing.

    Each requested magnitude r is realized by the basis frequency that
    produces it: g*Omega = omega (1 - tanh r)/(1 + tanh r) on the default
    "below" branch (Omega < omega/g), the reciprocal factor on "above".
    r = 0 is the matched basis.

    The tail and floor defaults are tighter than fisher_information's own:
    adjacent points on this curve can differ by under 1e-9, and components
    dropped at the looser thresholds carry enough information weight
    (~3e-7 relative at r ~ 1.3) to scramble that comparison.

    Args:
        g: coupling in (0, 4), held fixed.
        r_values: nondecreasing squeezing magnitudes >= 0.
        branch: "below" or "above".

    Returns:
        List of (r, FisherResult) in input order.
    """
    if branch not in ("below", "above"):
        raise DomainError(f"branch must be 'below' or 'above', got {branch!r}")
    rs = [float(r) for r in r_values]
    if any(r < 0.0 for r in rs):
        raise DomainError("squeezing magnitudes must be >= 0")
    if rs != sorted(rs):
        raise DomainError("r_values must be nondecreasing")
    sol = solve_equilibrium(g, 0.0)
    if sol.phase is not Phase.ORDERED:
        raise DomainError(f"fisher_vs_squeezing requires the ordered phase, g={g}")

    out = []
    for r in rs:
        t = math.tanh(r)
        factor = (1.0 - t) / (1.0 + t) if branch == "below" else (1.0 + t) / (1.0 - t)
        omega_meas = sol.omega * factor / g
        out.append((r, fisher_information(g, omega_meas, cfg=cfg,
                                          tail_threshold=tail_threshold,
                                          p_floor=p_floor)))
    return out


def derivative_state_coefficients(g: float) -> tuple[float, float]:
    """Coefficients (c1, c2) of the g-derivative of the ordered ground state
    on its first and second excited states.

    The derivative state has no ground-state component, so its norm fixes the
    quantum Fisher information: 4 (c1^2 + c2^2) equals qfi_equilibrium(g).value
    identically.
    """
    omega, domega, alpha, dalpha = _equilibrium_protocol(g)
    c1 = dalpha + (alpha / (2.0 * g)) * (omega - g * domega) / omega
    c2 = (1.0 / g - domega / omega) / (2.0 * math.sqrt(2.0))
    return c1, c2


def cramer_rao_bound(fisher: float, nu: int = 1) -> float:
    """Best attainable standard deviation of a g estimate: 1/sqrt(nu * F)."""
    if not fisher > 0.0:
        raise DomainError(f"fisher must be > 0, got {fisher}")
    if nu < 1 or int(nu) != nu:
        raise DomainError(f"nu must be an integer >= 1, got {nu}")
    return 1.0 / math.sqrt(nu * fisher)
