"""Truncated-Fock-space oracle: state construction, moments, fidelity QFI.

The oracle must satisfy the defining constraints of the model on its own,
with no reference to the closed forms it is later used to check.  That is
what makes the analytic-vs-oracle comparisons in validate.py meaningful.
"""

import math

import numpy as np
import pytest

from sqspin import fock
from sqspin.errors import DomainError, StencilOutOfPhase, TruncationError
from sqspin.model import solve_equilibrium


def test_ladder_matrix_elements():
    a = fock.ladder(5)
    assert a[0, 1] == 1.0
    assert a[2, 3] == pytest.approx(math.sqrt(3.0))
    assert np.count_nonzero(a) == 4
    with pytest.raises(DomainError):
        fock.ladder(1)


def test_displacement_operator_shifts_the_vacuum():
    disp, _ = fock.build_operators(64, 0.5, 0.0)
    vac = np.zeros(64, dtype=complex)
    vac[0] = 1.0
    state = fock.FockStateVector(dim=64, amplitudes=disp.entries @ vac, basis_freq=1.0)
    assert fock.moments(state, "a") == pytest.approx(0.5 + 0.0j, abs=1e-12)
    # coherent state photon number |alpha|^2
    assert fock.moments(state, "adag_a") == pytest.approx(0.25 + 0.0j, abs=1e-12)


def test_squeeze_operator_vacuum_photon_number():
    r = 0.4
    _, squeeze = fock.build_operators(64, 0.0, r)
    vac = np.zeros(64, dtype=complex)
    vac[0] = 1.0
    state = fock.FockStateVector(dim=64, amplitudes=squeeze.entries @ vac, basis_freq=1.0)
    assert fock.moments(state, "adag_a") == pytest.approx(math.sinh(r) ** 2 + 0.0j, abs=1e-10)
    assert fock.moments(state, "a") == pytest.approx(0.0j, abs=1e-12)
    # positive real squeezing contracts the position quadrature by e^{-2r}
    assert fock.moments(state, "xx").real == pytest.approx(0.5 * math.exp(-2.0 * r), abs=1e-10)


def test_build_operators_rejects_tiny_dimension():
    with pytest.raises(DomainError):
        fock.build_operators(8, 0.1, 0.0)


def test_state_satisfies_the_defining_constraints():
    # <x^2> = 1 is the spherical constraint; <x> is the order parameter.
    for g in (0.5, 1.0, 3.0):
        sol = solve_equilibrium(g, 0.0)
        state = fock.sqs_state(g, sol.omega / g)
        x = fock.moments(state, "x").real
        xx = fock.moments(state, "xx").real
        assert xx == pytest.approx(1.0, abs=1e-9)
        assert x == pytest.approx(sol.h * math.sqrt(2.0 * sol.omega / g), abs=1e-9)


def test_constraints_hold_in_any_measurement_basis():
    g = 1.0
    for basis in (0.4, 1.0, 2.37):
        state = fock.sqs_state(g, basis)
        assert fock.moments(state, "xx").real == pytest.approx(1.0, abs=1e-9)
        assert fock.moments(state, "x").real == pytest.approx(math.sqrt(2.0) * 0.5, abs=1e-9)


def test_disordered_state_is_centered():
    state = fock.sqs_state(5.0, 1.0)
    assert abs(fock.moments(state, "x")) < 1e-10
    assert fock.moments(state, "xx").real == pytest.approx(1.0, abs=1e-9)


def test_moments_rejects_unknown_key():
    state = fock.sqs_state(1.0, 1.0)
    with pytest.raises(DomainError):
        fock.moments(state, "xp")


def test_probabilities_are_a_distribution():
    dist = fock.probabilities_numeric(1.0, 3.0)
    assert np.all(dist.probs >= 0.0)
    assert float(dist.probs.sum()) == pytest.approx(1.0, abs=1e-12)
    assert abs(1.0 - dist.raw_total) < 1e-6


def test_auto_expansion_raises_when_capped():
    # strong squeezing spills past 24 levels; forbidding growth must be loud
    with pytest.raises(TruncationError):
        fock.sqs_state(1.0, 40.0, dim=24, auto_expand=False)
    state = fock.sqs_state(1.0, 40.0, dim=24)
    assert state.dim > 24
    # the spherical constraint survives even a wildly mismatched basis
    assert fock.moments(state, "xx").real == pytest.approx(1.0, abs=1e-9)


def test_qfi_numeric_reproduces_the_closed_form():
    assert fock.qfi_numeric(1.0) == pytest.approx(0.1875, rel=1e-6)
    assert fock.qfi_numeric(3.0) == pytest.approx(0.058778483438456576, rel=1e-6)


def test_qfi_numeric_disordered_is_zero():
    assert abs(fock.qfi_numeric(5.0)) <= 1e-10


def test_qfi_numeric_stable_under_dim_doubling():
    a = fock.qfi_numeric(1.0, dim=64)
    b = fock.qfi_numeric(1.0, dim=128)
    assert abs(a - b) <= 1e-10


def test_qfi_numeric_refuses_to_straddle_the_transition():
    with pytest.raises(StencilOutOfPhase):
        fock.qfi_numeric(4.00001, delta=1e-3)
    with pytest.raises(DomainError):
        fock.qfi_numeric(1.0, delta=-1e-4)
