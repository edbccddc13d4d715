"""Self-validation suite: every analytic result checked against the Fock oracle.

Checks are small named functions registered with a level:

* ``quick`` checks form the fast subset (all together well under 30 s);
* ``full`` adds the expensive scans (squeezing monotonicity, dimension
  doubling, the remaining oracle grid points).

``run_checks`` powers both the ``validate`` CLI subcommand and the acceptance
test suite, so the pass/fail logic lives in exactly one place.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fock, metrology, model
from .model import Phase

__all__ = ["CheckResult", "equilibrium_residuals", "list_checks", "run_checks"]

QUICK = "quick"
FULL = "full"

# 9-point oracle grid shared by the distribution and Cramer-Rao checks,
# split so the quick level still touches every region.
_ORACLE_GRID = [(g, om) for g in (0.5, 1.0, 3.0) for om in (0.5, 1.0, 3.0)]
_ORACLE_QUICK = [(0.5, 0.5), (1.0, 3.0), (3.0, 1.0)]
_ORACLE_REST = [p for p in _ORACLE_GRID if p not in _ORACLE_QUICK]
_CR_EDGE = [(g, om) for g in (0.1, 3.9) for om in (0.5, 1.0, 3.0)]
_CR_QUICK = [(0.5, 1.0), (1.0, 1.0), (3.0, 3.0), (0.1, 0.5), (3.9, 1.0)]
_CR_REST = [p for p in _ORACLE_GRID + _CR_EDGE if p not in _CR_QUICK]


@dataclass(frozen=True)
class CheckResult:
    name: str
    level: str
    passed: bool
    detail: str
    seconds: float


_REGISTRY: list[tuple[str, str, Callable[[], tuple[bool, str]]]] = []


def _check(name: str, level: str):
    def deco(fn):
        _REGISTRY.append((name, level, fn))
        return fn
    return deco


def list_checks(level: str = FULL) -> list[tuple[str, str]]:
    """(name, level) pairs selected by level ('quick' subset or everything)."""
    if level not in (QUICK, FULL):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    return [(n, lv) for n, lv, _ in _REGISTRY if level == FULL or lv == QUICK]


def run_checks(level: str = QUICK) -> list[CheckResult]:
    """Run the selected checks in registration order."""
    if level not in (QUICK, FULL):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    results = []
    for name, lv, fn in _REGISTRY:
        if level == QUICK and lv != QUICK:
            continue
        start = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        # numpy comparisons leak np.bool_, which json.dumps rejects
        results.append(CheckResult(name=name, level=lv, passed=bool(passed),
                                   detail=detail, seconds=time.perf_counter() - start))
    return results


def equilibrium_residuals(sol) -> tuple[float, float]:
    """Self-consistency residuals of an equilibrium solution.

    Returns (constraint_residual, frequency_residual): the unit-variance
    constraint 2*omega*h^2/g + (g/(2 omega)) coth(omega/2T) - 1, and the
    branch's frequency condition (omega^2 - g for ordered/critical, the
    disordered fixed-point equation otherwise).
    """
    cothfac = 1.0 if sol.T == 0.0 else 1.0 / math.tanh(0.5 * sol.omega / sol.T)
    constraint = 2.0 * sol.omega * sol.h**2 / sol.g + (sol.g / (2.0 * sol.omega)) * cothfac - 1.0
    if sol.phase is Phase.DISORDERED:
        freq = sol.omega - 0.5 * sol.g * cothfac
    else:
        freq = sol.omega**2 - sol.g
    return constraint, freq


# --- quantum Fisher information -------------------------------------------

@_check("qfi-point-value", QUICK)
def _c_qfi_point() -> tuple[bool, str]:
    """qfi_equilibrium(1) is exactly 3/16, split 1/16 + 1/8."""
    res = metrology.qfi_equilibrium(1.0)
    ok = (res.value == 0.1875 and res.term_displacement == 0.0625
          and res.term_squeezing == 0.125)
    return ok, f"value={res.value!r} terms=({res.term_displacement!r}, {res.term_squeezing!r})"


@_check("qfi-point-oracle", QUICK)
def _c_qfi_oracle() -> tuple[bool, str]:
    """Fock fidelity estimate reproduces qfi_equilibrium(1) to 1e-3 in < 1 s."""
    start = time.perf_counter()
    est = fock.qfi_numeric(1.0, delta=1e-4, dim=64)
    dt = time.perf_counter() - start
    rel = abs(est - 0.1875) / 0.1875
    return rel <= 1e-3 and dt < 1.0, f"oracle={est:.10g} rel_err={rel:.3e} time={dt:.2f}s"


@_check("qfi-critical-divergence", QUICK)
def _c_qfi_critical() -> tuple[bool, str]:
    """QFI rises toward g=4 and (4-g)*QFI approaches the 1/32 limit."""
    values = [metrology.qfi_equilibrium(g).value for g in (3.0, 3.5, 3.9, 3.99, 3.999)]
    increasing = all(b > a for a, b in zip(values, values[1:]))
    consts = [(4.0 - g) * metrology.qfi_equilibrium(g).value
              for g in (4.0 - 1e-3, 4.0 - 1e-4, 4.0 - 1e-5)]
    mean = sum(consts) / len(consts)
    flat = all(abs(c / mean - 1.0) <= 0.05 for c in consts)
    near_limit = abs(mean * 32.0 - 1.0) <= 0.05
    return increasing and flat and near_limit, (
        f"increasing={increasing} (4-g)*QFI={['%.6f' % c for c in consts]} vs 1/32={1 / 32:.6f}")


@_check("qfi-small-g-divergence", QUICK)
def _c_qfi_small_g() -> tuple[bool, str]:
    """QFI grows without bound as g -> 0."""
    values = [metrology.qfi_equilibrium(10.0**-k).value for k in (1, 2, 3, 4)]
    ok = all(b > a for a, b in zip(values, values[1:]))
    return ok, "QFI(1e-1..1e-4) = " + ", ".join(f"{v:.4g}" for v in values)


@_check("qfi-disordered-null", QUICK)
def _c_qfi_disordered() -> tuple[bool, str]:
    """Disordered QFI is exactly zero and the oracle agrees to 1e-6 in < 5 s."""
    start = time.perf_counter()
    closed = metrology.qfi_disordered(5.0).value
    est = fock.qfi_numeric(5.0, dim=64)
    dt = time.perf_counter() - start
    ok = closed == 0.0 and abs(est) <= 1e-6 and dt < 5.0
    return ok, f"closed={closed!r} oracle={est:.3e} time={dt:.2f}s"


@_check("derivative-state-identity", QUICK)
def _c_derivative_state() -> tuple[bool, str]:
    """4(c1^2+c2^2) matches the QFI at 50 couplings; the derivative state is
    orthogonal to the ground state in the oracle."""
    gs = np.linspace(0.1, 3.9, 52)[1:-1]
    worst = 0.0
    for g in gs:
        c1, c2 = metrology.derivative_state_coefficients(float(g))
        worst = max(worst, abs(metrology.qfi_equilibrium(float(g)).value - 4.0 * (c1**2 + c2**2)))
    c1, c2 = metrology.derivative_state_coefficients(1.0)
    point_ok = abs(c1 + 0.125) <= 1e-14 and abs(c2 - 2.0**-2.5) <= 1e-14

    delta = 1e-4
    center = fock.sqs_state(1.0, 1.0, 64)
    hi = fock.sqs_state(1.0 + delta, 1.0, 64)
    lo = fock.sqs_state(1.0 - delta, 1.0, 64)
    dstate = (hi.amplitudes - lo.amplitudes) / (2.0 * delta)
    overlap = abs(np.vdot(center.amplitudes, dstate))
    ok = worst <= 1e-12 and point_ok and overlap <= 1e-6
    return ok, f"max|QFI-4(c1^2+c2^2)|={worst:.2e} c(1)=({c1:.6g},{c2:.6g}) <0|d0>={overlap:.2e}"


# --- photon statistics ------------------------------------------------------

def _distribution_agreement(points) -> tuple[bool, str]:
    worst_comp = 0.0
    worst_mass = 0.0
    for g, om in points:
        analytic = metrology.photon_count_probabilities(g, om, tail_threshold=1e-10)
        oracle = fock.probabilities_numeric(g, om)
        n = min(len(analytic.probs), len(oracle.probs))
        worst_comp = max(worst_comp, float(np.max(np.abs(analytic.probs[:n] - oracle.probs[:n]))))
        worst_mass = max(worst_mass, abs(1.0 - analytic.raw_total))
    ok = worst_comp <= 1e-6 and worst_mass <= 1e-8
    return ok, f"max component diff={worst_comp:.2e} max raw-mass dev={worst_mass:.2e} over {len(points)} points"


@_check("photon-distribution-oracle", QUICK)
def _c_photon_oracle() -> tuple[bool, str]:
    """Analytic photon-count series matches the Fock oracle per component."""
    return _distribution_agreement(_ORACLE_QUICK)


@_check("photon-distribution-oracle-grid", FULL)
def _c_photon_oracle_grid() -> tuple[bool, str]:
    """Remaining points of the 3x3 (g, Omega) oracle grid."""
    return _distribution_agreement(_ORACLE_REST)


def _cramer_rao(points) -> tuple[bool, str]:
    worst = -math.inf
    for g, om in points:
        res = metrology.fisher_information(g, om)
        worst = max(worst, res.normalized)
    ok = worst <= 1.0 + 1e-6
    return ok, f"max F/QFI = {worst:.12f} over {len(points)} points"


@_check("cramer-rao-bound", QUICK)
def _c_cramer_rao() -> tuple[bool, str]:
    """Photon-counting Fisher information never exceeds the quantum bound."""
    return _cramer_rao(_CR_QUICK)


@_check("cramer-rao-bound-grid", FULL)
def _c_cramer_rao_grid() -> tuple[bool, str]:
    """Quantum bound on the remaining grid and window-edge points."""
    return _cramer_rao(_CR_REST)


@_check("fisher-small-g-optimality", QUICK)
def _c_fisher_small_g() -> tuple[bool, str]:
    """Photon counting saturates the quantum bound as g -> 0."""
    ratios = [metrology.fisher_information(0.05, om).normalized for om in (0.5, 1.0, 2.0)]
    ok = all(r >= 0.99 for r in ratios)
    return ok, "F/QFI at g=0.05, Omega=(0.5,1,2): " + ", ".join(f"{r:.6f}" for r in ratios)


@_check("fisher-squeezing-monotone", FULL)
def _c_fisher_squeezing() -> tuple[bool, str]:
    """Fisher information does not decrease with measurement-basis squeezing."""
    start = time.perf_counter()
    worst_step = math.inf
    for g in (1.0, 2.0, 3.0):
        curve = metrology.fisher_vs_squeezing(g, np.linspace(0.0, 1.5, 30))
        values = [res.value for _, res in curve]
        worst_step = min(worst_step, min(b - a for a, b in zip(values, values[1:])))
    dt = time.perf_counter() - start
    ok = worst_step >= -1e-9 and dt < 120.0
    return ok, f"min step={worst_step:.3e} time={dt:.1f}s"


# --- dissipative steady state ----------------------------------------------

@_check("ness-window-equilibrium-limit", QUICK)
def _c_ness_window() -> tuple[bool, str]:
    """Window boundaries, their gamma ordering, and the gamma=0 limit."""
    worst_edge = 0.0
    for gamma in (0.0, 0.5, 1.0, 1.5, 2.0):
        g_lo, g_hi = model.ness_critical_gs(gamma)
        root = math.sqrt(4.0 - gamma * gamma)
        worst_edge = max(worst_edge, abs(g_lo - (2.0 - root)), abs(g_hi - (2.0 + root)))
    shift = model.ness_critical_gs(0.5)[1] > model.ness_critical_gs(1.0)[1]
    worst_rel = 0.0
    for g in np.linspace(0.3, 3.7, 10):
        eq = metrology.qfi_equilibrium(float(g)).value
        ness = metrology.qfi_ness(float(g), 0.0).value
        worst_rel = max(worst_rel, abs(ness - eq) / eq)
    ok = worst_edge <= 1e-12 and shift and worst_rel <= 1e-6
    return ok, f"edge dev={worst_edge:.2e} g_plus(0.5)>g_plus(1.0)={shift} gamma=0 rel dev={worst_rel:.2e}"


@_check("ness-qfi-gamma-growth", FULL)
def _c_ness_growth() -> tuple[bool, str]:
    """QFI at g=3.8 grows >= 10x from gamma=0.2 to 0.95*gamma* (boundary approach)."""
    g = 3.8
    gamma_star = math.sqrt(4.0 * g - g * g)
    low = metrology.qfi_ness(g, 0.2).value
    high = metrology.qfi_ness(g, 0.95 * gamma_star).value
    ratio = high / low
    return ratio >= 10.0, (
        f"QFI({g}, 0.2)={low:.6g} QFI({g}, 0.95*gamma*)={high:.6g} ratio={ratio:.4f} (need >= 10)")


# --- equilibrium phase structure --------------------------------------------

@_check("critical-temperature-value", QUICK)
def _c_critical_temperature() -> tuple[bool, str]:
    """T_c(1) equals 1/ln 3 to 1e-10."""
    tc = model.equilibrium_critical_temperature(1.0)
    dev = abs(tc - 1.0 / math.log(3.0))
    return dev <= 1e-10, f"T_c(1)={tc:.15g} dev={dev:.2e}"


@_check("phase-boundary-refinement", QUICK)
def _c_phase_boundary() -> tuple[bool, str]:
    """Refined equilibrium boundary hits (g=4, T=0) and every emitted solution
    satisfies its defining equations to 1e-9."""
    gs = np.linspace(0.1, 6.0, 60)
    ts = np.linspace(0.0, 1.5, 40)
    grid = model.phase_diagram("equilibrium", gs, ts)
    cell = gs[1] - gs[0]
    hits = [cp for cp in grid.critical_points if cp.axis2 == 0.0 and abs(cp.g - 4.0) <= cell]
    worst = 0.0
    for sol in grid.records:
        constraint, freq = equilibrium_residuals(sol)
        worst = max(worst, abs(constraint), abs(freq))
    ok = bool(hits) and worst <= 1e-9
    where = f"{hits[0].g:.6f}" if hits else "none"
    return ok, f"boundary at T=0: g={where} (cell {cell:.3f}); max residual={worst:.2e}"


# --- oracle robustness -------------------------------------------------------

@_check("oracle-delta-halving", QUICK)
def _c_delta_halving() -> tuple[bool, str]:
    """Fidelity QFI stable under halving the finite-difference step."""
    a = fock.qfi_numeric(1.0, delta=1e-4, dim=64)
    b = fock.qfi_numeric(1.0, delta=5e-5, dim=64)
    rel = abs(a - b) / abs(a)
    return rel <= 1e-3, f"delta=1e-4: {a:.10g}, delta=5e-5: {b:.10g}, rel shift={rel:.2e}"


@_check("oracle-dim-doubling", FULL)
def _c_dim_doubling() -> tuple[bool, str]:
    """Oracle outputs move by <= 1e-8 when the Fock dimension doubles."""
    devs = {
        "qfi(g=1)": abs(fock.qfi_numeric(1.0, dim=64) - fock.qfi_numeric(1.0, dim=128)),
        "qfi(g=5)": abs(fock.qfi_numeric(5.0, dim=64) - fock.qfi_numeric(5.0, dim=128)),
    }
    small = fock.probabilities_numeric(1.0, 3.0, dim=64)
    big = fock.probabilities_numeric(1.0, 3.0, dim=128)
    n = min(len(small.probs), len(big.probs))
    devs["probs(g=1,Omega=3)"] = float(np.max(np.abs(small.probs[:n] - big.probs[:n])))
    worst = max(devs.values())
    ok = worst <= 1e-8
    return ok, " ".join(f"{k}:{v:.2e}" for k, v in devs.items())
