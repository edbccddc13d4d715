"""Numerical kernels against scipy/math references and hand-computed values."""

import math

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from sqspin.errors import DomainError, NoSignChange, NonFinite
from sqspin.numerics import (
    DiffConfig,
    central_diff,
    coth,
    find_root,
    grow_bracket,
    laguerre_assoc,
    log_gamma,
)


def test_coth_matches_reference_at_moderate_arguments():
    for x in (0.01, 0.1, 1.0, 5.0, 30.0):
        ref = math.cosh(x) / math.sinh(x)
        assert coth(x) == pytest.approx(ref, rel=1e-15)
        assert coth(-x) == pytest.approx(-ref, rel=1e-15)


def test_coth_series_agrees_with_the_direct_form_near_the_cutoff():
    # the series takes over below 1e-3; just underneath, the direct 1/tanh
    # is still trustworthy and the two must coincide
    for x in (9.999e-4, 5e-4):
        assert coth(x) == pytest.approx(1.0 / math.tanh(x), rel=1e-12)


def test_coth_small_argument_leading_terms():
    x = 1e-5
    assert coth(x) == pytest.approx(1.0 / x + x / 3.0, rel=1e-15)


def test_coth_rejects_zero_and_nan():
    with pytest.raises(DomainError):
        coth(0.0)
    with pytest.raises(NonFinite):
        coth(math.nan)


def test_log_gamma_matches_math_lgamma():
    for x in (0.5, 1.0, 2.5, 17.0, 301.5):
        assert log_gamma(x) == math.lgamma(x)
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-3.2)


def test_log_gamma_recurrence():
    # Gamma(x+1) = x Gamma(x)
    for x in (0.5, 1.7, 9.0, 50.0):
        ratio = math.exp(log_gamma(x + 1.0) - log_gamma(x))
        assert ratio == pytest.approx(x, rel=1e-10)


def test_laguerre_nonnegative_index_matches_scipy():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(0, 40))
        k = float(rng.integers(0, 30))
        x = float(rng.uniform(0.0, 25.0))
        ref = eval_genlaguerre(n, k, x)
        assert laguerre_assoc(n, k, x) == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_laguerre_negative_integer_index_hand_values():
    # scipy returns nan for negative integer upper index, so these are
    # pinned from the finite sum L_n^(a)(x) = sum_i (-1)^i C(n+a, n-i) x^i / i!
    x = 0.7
    assert laguerre_assoc(2, -1.0, x) == pytest.approx(-x + x * x / 2, rel=1e-14)
    x = 1.3
    assert laguerre_assoc(3, -2.0, x) == pytest.approx(x * x / 2 - x**3 / 6, rel=1e-14)
    x = 0.9
    assert laguerre_assoc(4, -3.0, x) == pytest.approx(-(x**3) / 6 + x**4 / 24, rel=1e-14)
    # index more negative than the degree exercises the generalized-binomial path
    x = 1.1
    assert laguerre_assoc(2, -5.0, x) == pytest.approx(6 + 3 * x + x * x / 2, rel=1e-14)


def test_laguerre_negative_index_annihilation():
    # L_n^(-j) carries a factor x^j, so it vanishes at x = 0 for 1 <= j <= n
    assert laguerre_assoc(3, -2.0, 0.0) == 0.0
    assert laguerre_assoc(5, -5.0, 0.0) == 0.0


def _laguerre_explicit(n, k, x):
    """Defining finite sum with the generalized binomial, written independently."""
    total = 0.0
    for i in range(n + 1):
        binom = 1.0
        for step in range(n - i):
            binom *= (n + k - step) / (n - i - step)
        total += (-1.0) ** i * binom * x**i / math.factorial(i)
    return total


def test_laguerre_matches_the_defining_series():
    for n in range(11):
        for k in range(-10, 11):
            for x in (0.1, 1.0, 5.0):
                ref = _laguerre_explicit(n, float(k), x)
                assert laguerre_assoc(n, float(k), x) == pytest.approx(
                    ref, rel=1e-10, abs=1e-10)


def test_laguerre_rejects_negative_degree():
    with pytest.raises(DomainError):
        laguerre_assoc(-1, 0.0, 1.0)


def test_find_root_cubic():
    root = find_root(lambda x: x**3 - 2 * x - 5, 2.0, 3.0)
    assert root == pytest.approx(2.0945514815423265, abs=1e-12)


def test_find_root_stable_under_bracket_refinement():
    f = lambda x: x**3 - 2 * x - 5
    root = find_root(f, 2.0, 3.0)
    again = find_root(f, root - 1e-9, root + 1e-9)
    assert again == pytest.approx(root, abs=5e-12)


def test_find_root_needs_sign_change():
    with pytest.raises(NoSignChange):
        find_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_grow_bracket_expands_until_sign_change():
    f = lambda x: x * x - 10.0
    lo, hi = grow_bracket(f, 0.1, 0.2)
    assert f(lo) < 0 < f(hi)
    root = find_root(f, lo, hi)
    assert root == pytest.approx(math.sqrt(10.0), abs=1e-12)


def test_grow_bracket_gives_up():
    with pytest.raises(NoSignChange):
        grow_bracket(lambda x: 1.0, 0.1, 0.2, max_steps=5)


def test_central_diff_orders():
    f = math.exp
    x = 0.3
    exact = math.exp(x)
    err2 = abs(central_diff(f, x, DiffConfig(step=1e-3, order=2)) - exact)
    err4 = abs(central_diff(f, x, DiffConfig(step=1e-3, order=4)) - exact)
    assert err4 < err2 < 1e-6
    assert err4 < 1e-11


def test_central_diff_order4_error_scales_as_step_to_the_fourth():
    exact = math.exp(0.3)
    e_coarse = abs(central_diff(math.exp, 0.3, DiffConfig(step=0.1)) - exact)
    e_fine = abs(central_diff(math.exp, 0.3, DiffConfig(step=0.01)) - exact)
    assert e_coarse / e_fine == pytest.approx(1e4, rel=0.5)


def test_diff_config_resolves_scaled_step():
    cfg = DiffConfig()
    assert cfg.resolve_step(0.0) == 1e-5
    assert cfg.resolve_step(100.0) == pytest.approx(1e-2)
