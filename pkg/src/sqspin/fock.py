"""Truncated-Fock-space oracle.

Everything in this module is brute force on purpose: states are built by
exponentiating finite ladder-operator matrices and all quantities come from
plain linear algebra, so the results are independent of every closed-form
expression elsewhere in the package.  Truncation is monitored through a
trusted-block unitarity check (the top quarter of the matrix is where
truncation damage concentrates and is excluded) plus a tail-mass check on
state vectors; failing either raises TruncationError, and the state builder
doubles the dimension until both pass or a cap is hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, StencilOutOfPhase, TruncationError
from .metrology import PhotonCountDistribution, squeezing_parameters
from .model import Phase, solve_equilibrium

__all__ = [
    "DEFAULT_DIM",
    "FockOperator",
    "FockStateVector",
    "MAX_DIM",
    "build_operators",
    "ladder",
    "moments",
    "probabilities_numeric",
    "qfi_numeric",
    "sqs_state",
]

DEFAULT_DIM = 64
MAX_DIM = 1024
UNITARITY_TOL = 1e-8
TAIL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FockOperator:
    dim: int
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class FockStateVector:
    """Normalized state in the Fock basis of a frequency-basis_freq oscillator.

    raw_norm is the vector norm before renormalization; the shortfall from 1
    is the mass lost to truncation.
    """

    dim: int
    amplitudes: np.ndarray
    basis_freq: float
    raw_norm: float = 1.0


def _margin(dim: int) -> int:
    return dim // 4


def ladder(dim: int) -> np.ndarray:
    """Annihilation operator: a[m, m+1] = sqrt(m+1)."""
    if dim < 2:
        raise DomainError(f"dim must be >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def _check_unitary(u: np.ndarray, dim: int, label: str) -> None:
    trusted = dim - _margin(dim)
    defect = u.conj().T @ u - np.eye(dim)
    err = float(np.max(np.abs(defect[:trusted, :trusted])))
    if err > UNITARITY_TOL:
        raise TruncationError(
            f"{label} fails trusted-block unitarity at dim={dim}: defect {err:.3e}")


def build_operators(dim: int, alpha: complex, zeta: complex) -> tuple[FockOperator, FockOperator]:
    """Displacement D(alpha) and squeeze S(zeta) as dim x dim matrices.

    D = exp(alpha a+ - alpha* a), S = exp((zeta*/2) a a - (zeta/2) a+ a+).
    Both are checked for unitarity on the trusted block.

    Raises:
        DomainError: for dim < 16.
        TruncationError: if either operator fails the unitarity check
            (dimension too small for the requested alpha, zeta).
    """
    if dim < 16:
        raise DomainError(f"dim must be >= 16, got {dim}")
    a = ladder(dim).astype(complex)
    adag = a.conj().T
    gen_d = alpha * adag - np.conj(alpha) * a
    gen_s = 0.5 * np.conj(zeta) * (a @ a) - 0.5 * zeta * (adag @ adag)
    d = expm(gen_d)
    s = expm(gen_s)
    _check_unitary(d, dim, "displacement")
    _check_unitary(s, dim, "squeeze")
    return FockOperator(dim=dim, entries=d), FockOperator(dim=dim, entries=s)


def _build_state(alpha_basis: float, zeta: complex, basis_freq: float, dim: int) -> FockStateVector:
    d_op, s_op = build_operators(dim, complex(alpha_basis), zeta)
    vac = np.zeros(dim, dtype=complex)
    vac[0] = 1.0
    amps = d_op.entries @ (s_op.entries @ vac)
    tail = float(np.sum(np.abs(amps[dim - _margin(dim):]) ** 2))
    if tail > TAIL_TOL:
        raise TruncationError(f"state tail mass {tail:.3e} exceeds {TAIL_TOL:g} at dim={dim}")
    raw_norm = float(np.linalg.norm(amps))
    if abs(raw_norm - 1.0) > 1e-6:
        raise TruncationError(f"state norm {raw_norm} too far from 1 at dim={dim}")
    return FockStateVector(dim=dim, amplitudes=amps / raw_norm,
                           basis_freq=basis_freq, raw_norm=raw_norm)


def sqs_state(
    g: float,
    basis_freq: float,
    dim: int = DEFAULT_DIM,
    auto_expand: bool = True,
    max_dim: int = MAX_DIM,
) -> FockStateVector:
    """T=0 ground state of the constrained oscillator in an Omega Fock basis.

    Built as D(alpha_b) S(zeta) |0> where zeta comes from the Bogoliubov match
    between the self-consistent frequency and basis_freq, and the basis
    displacement is alpha * sqrt(g * basis_freq / omega) (the model's order
    parameter rescaled by the two bases' ground-state lengths).  In the
    disordered and critical phases alpha = 0 and the state is the squeezed
    vacuum.

    The dimension is doubled until tail and unitarity checks pass (cap
    ``max_dim``) unless auto_expand is off.
    """
    if basis_freq <= 0.0:
        raise DomainError(f"basis_freq must be > 0, got {basis_freq}")
    sol = solve_equilibrium(g, 0.0)
    params = squeezing_parameters(g, sol.omega, basis_freq)
    alpha_basis = sol.alpha * math.sqrt(g * basis_freq / sol.omega)
    current = dim
    while True:
        try:
            return _build_state(alpha_basis, params.zeta, basis_freq, current)
        except TruncationError:
            if not auto_expand or current >= max_dim:
                raise
            current = min(2 * current, max_dim)


def probabilities_numeric(g: float, omega_meas: float, dim: int = DEFAULT_DIM) -> PhotonCountDistribution:
    """Photon-count probabilities |<m|psi>|^2, the oracle for the analytic series."""
    state = sqs_state(g, omega_meas, dim)
    raw = np.abs(state.amplitudes * state.raw_norm) ** 2
    raw_total = float(raw.sum())
    return PhotonCountDistribution(
        omega_meas=omega_meas,
        probs=raw / raw_total,
        tail_mass=max(0.0, 1.0 - raw_total),
        raw_total=raw_total,
        g=g,
    )


def _infidelity(lhs: FockStateVector, rhs: FockStateVector) -> float:
    """1 - |<lhs|rhs>| evaluated without cancellation.

    Near-unit overlaps lose 9-10 digits when formed as 1 minus a dot product,
    so the infidelity is computed from the phase-aligned difference vector:
    1 - |<u|v>| = ||u - v e^{i theta}||^2 / 2 at the optimal theta.
    """
    n = min(lhs.dim, rhs.dim)
    u = lhs.amplitudes[:n]
    v = rhs.amplitudes[:n]
    overlap = np.vdot(u, v)
    mag = abs(overlap)
    phase = overlap / mag if mag > 0.0 else 1.0
    return max(0.0, 0.5 * float(np.sum(np.abs(u - phase * v) ** 2)))


def qfi_numeric(g: float, delta: float | None = None, dim: int = DEFAULT_DIM) -> float:
    """Finite-difference fidelity estimate of the quantum Fisher information.

    Uses the symmetric two-point form 8 (1 - |<psi(g-d)|psi(g+d)>|) / (2d)^2
    with default d = 1e-4 max(1, |g|); the infidelity is evaluated through the
    cancellation-free difference-norm identity.  The estimate is recomputed at
    a second reference basis frequency as a consistency check (shift must stay
    below 1e-4 on a max(1, |F|) scale).

    Raises:
        StencilOutOfPhase: if g-d and g+d fall in different phases (or either
            lands on the critical point).
        TruncationError: if the two reference bases disagree.
    """
    if delta is None:
        delta = 1e-4 * max(1.0, abs(g))
    if delta <= 0.0:
        raise DomainError(f"delta must be > 0, got {delta}")
    phase_lo = solve_equilibrium(g - delta, 0.0).phase
    phase_hi = solve_equilibrium(g + delta, 0.0).phase
    if phase_lo != phase_hi or Phase.CRITICAL in (phase_lo, phase_hi):
        raise StencilOutOfPhase(
            f"g +/- {delta:g} spans phases {phase_lo} / {phase_hi}; move away from the boundary")

    omega = solve_equilibrium(g, 0.0).omega
    base_freq = omega / g
    estimates = []
    for ref in (base_freq, 1.5 * base_freq):
        lo = sqs_state(g - delta, ref, dim)
        hi = sqs_state(g + delta, ref, dim)
        estimates.append(2.0 * _infidelity(lo, hi) / delta**2)
    first, second = estimates
    if abs(first - second) > 1e-4 * max(1.0, abs(first)):
        raise TruncationError(
            f"fidelity QFI differs between reference bases: {first:.6e} vs {second:.6e}")
    return first


def moments(state: FockStateVector, which: str) -> complex:
    """Expectation value of a, aa, a+a, x, or xx in the state's basis.

    The position quadrature is x = (a + a+)/sqrt(2 basis_freq).
    """
    a = ladder(state.dim)
    if which == "a":
        op = a
    elif which == "aa":
        op = a @ a
    elif which == "adag_a":
        op = a.T @ a
    elif which in ("x", "xx"):
        x = (a + a.T) / math.sqrt(2.0 * state.basis_freq)
        op = x if which == "x" else x @ x
    else:
        raise DomainError(f"unknown moment {which!r}; expected a, aa, adag_a, x, or xx")
    return complex(np.vdot(state.amplitudes, op @ state.amplitudes))
