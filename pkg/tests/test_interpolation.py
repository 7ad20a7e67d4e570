"""Real-interpolation norms from K-curves."""

import math

import numpy as np
import pytest

from lorentzlab.interpolation import (
    InterpParams,
    interp_norm,
    interp_norm_of,
    lorentz_identity_ratio,
)
from lorentzlab.kfunctional import LatticeCouple, k_curve
from lorentzlab.norms import Lebesgue, Lorentz
from lorentzlab.spaces import MeasureSpace, StepFunction

from conftest import random_step, rel_err

INF = math.inf


def _indicator(mass):
    return StepFunction(MeasureSpace.discrete([mass]), ((1.0, mass),))


def test_indicator_closed_form():
    # (L^1, L^inf)_{theta,q} norm of an indicator of mass m:
    # m^{1-theta} (q theta (1-theta))^{-1/q}
    for m in (0.5, 1.0, 4.0):
        f = _indicator(m)
        cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
        for theta, q in [(0.5, 1.0), (0.25, 2.0), (0.7, 3.0)]:
            want = m ** (1.0 - theta) * (q * theta * (1.0 - theta)) ** (-1.0 / q)
            got = interp_norm_of(f, cpl, InterpParams(theta, q), method="exact")
            assert rel_err(got, want) < 1e-9


def test_indicator_sup_norm():
    # q = inf: sup_s s^{-theta} min(s, m) = m^{1-theta}, attained at s = m
    for m in (0.5, 2.0):
        f = _indicator(m)
        cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
        for theta in (0.3, 0.5, 0.8):
            got = interp_norm_of(f, cpl, InterpParams(theta, INF), method="exact")
            assert rel_err(got, m ** (1.0 - theta)) < 1e-9


def test_homogeneity():
    for seed in range(6):
        f = random_step(seed, n=5)
        cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
        ip = InterpParams(0.4, 2.0)
        base = interp_norm_of(f, cpl, ip, method="exact")
        for c in (0.01, 3.0, 250.0):
            g = f.scaled(c)
            cg = LatticeCouple.for_step(g, Lebesgue(1.0), Lebesgue(INF))
            assert rel_err(interp_norm_of(g, cg, ip, method="exact"), c * base) < 1e-9


def test_role_exchange():
    # (A0, A1)_{theta,q} = (A1, A0)_{1-theta,q} with equal norms
    for seed in range(4):
        f = random_step(seed + 50, n=4)
        fwd = LatticeCouple.for_step(f, Lebesgue(1.0), Lorentz(2.0, 2.0))
        rev = LatticeCouple.for_step(f, Lorentz(2.0, 2.0), Lebesgue(1.0))
        for theta, q in [(0.3, 1.0), (0.5, 2.0), (0.75, INF)]:
            a = interp_norm_of(f, fwd, InterpParams(theta, q))
            b = interp_norm_of(f, rev, InterpParams(1.0 - theta, q))
            assert rel_err(a, b) < 1e-6


def test_node_doubling_stability():
    for seed in range(5):
        f = random_step(seed + 9, n=6)
        cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
        cur = k_curve(f, cpl, method="exact")
        for theta, q in [(0.5, 1.5), (0.2, 3.0)]:
            ip = InterpParams(theta, q)
            a = interp_norm(cur, ip, nodes=32)
            b = interp_norm(cur, ip, nodes=64)
            assert rel_err(a, b) < 1e-8


def test_q_monotone_up_to_identity_constant():
    # on indicators the q-dependence is exactly (q theta (1-theta))^{-1/q};
    # any two q-values differ by at most the theta-dependent constant
    f = _indicator(1.0)
    cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
    theta = 0.5
    vals = [
        interp_norm_of(f, cpl, InterpParams(theta, q), method="exact")
        for q in (1.0, 2.0, 4.0, INF)
    ]
    bound = (theta * (1.0 - theta)) ** (-1.0)
    for a in vals:
        for b in vals:
            assert a / b <= bound * (1.0 + 1e-9)


def test_lorentz_identity_ratio_on_indicator():
    # the exact ratio between the interpolation norm and the target Lorentz
    # norm on an indicator is (theta (1-theta))^{-1/q}
    f = _indicator(2.0)
    for theta, q in [(0.5, 1.0), (0.3, 2.0), (0.8, 4.0)]:
        got = lorentz_identity_ratio(f, theta, q)
        want = (theta * (1.0 - theta)) ** (-1.0 / q)
        assert rel_err(got, want) < 1e-9


def test_divergent_tail_returns_inf():
    # theta = 0 with q < inf diverges unless the K-curve decays; an indicator
    # has K constant at large s, so the integral blows up
    f = _indicator(1.0)
    cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
    with pytest.raises(ValueError):
        InterpParams(0.0, 1.0)
    with pytest.raises(ValueError):
        InterpParams(1.5, 1.0)
