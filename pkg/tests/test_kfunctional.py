"""K-functional engines: exact oracle, brute force, descent, curve invariants."""

import math

import numpy as np
import pytest

from lorentzlab.kfunctional import (
    LatticeCouple,
    descent_gap,
    k_commutation_ratio,
    k_curve,
    k_exact_l1_linf,
    k_lattice,
)
from lorentzlab.norms import Lebesgue, Lorentz, quasi_triangle_constant
from lorentzlab.spaces import ExponentPair, rearrangement

from conftest import random_product, random_step, rel_err

INF = math.inf
S_VALUES = (0.05, 0.3, 1.0, 4.0, 20.0)


def _exact_by_hand(f, s):
    # K(s; L^1, L^inf) = integral of the decreasing rearrangement up to s
    g = rearrangement(f)
    acc, budget = 0.0, s
    for v, m in g.levels:
        take = min(m, budget)
        acc += v * take
        budget -= take
        if budget <= 0:
            break
    return acc


def test_exact_oracle_is_the_rearrangement_integral():
    for seed in range(25):
        f = random_step(seed, n=6)
        for s in S_VALUES:
            assert rel_err(k_exact_l1_linf(f, s), _exact_by_hand(f, s)) < 1e-13


def test_exact_oracle_caps():
    f = random_step(42, n=5)
    total = f.lp_norm(1.0)
    top = float(f.values[0])
    assert k_exact_l1_linf(f, 1e9) == pytest.approx(total, rel=1e-12)
    s = 1e-9
    assert k_exact_l1_linf(f, s) == pytest.approx(s * top, rel=1e-12)


def test_brute_matches_exact_on_l1_linf():
    for seed in range(20):
        f = random_step(seed, n=5)
        cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
        for s in S_VALUES:
            exact = k_exact_l1_linf(f, s)
            brute = k_lattice(f, cpl, s, method="brute", resolution=64)
            assert rel_err(brute, exact) < 1e-3


def test_descent_matches_brute():
    for seed in range(12):
        f = random_step(seed + 100, n=5)
        for norms in [
            (Lebesgue(1.0), Lebesgue(INF)),
            (Lorentz(2.0, 1.0), Lebesgue(INF)),
            (Lebesgue(1.0), Lorentz(2.0, 2.0)),
        ]:
            cpl = LatticeCouple.for_step(f, *norms)
            for s in (0.3, 1.0, 4.0):
                brute = k_lattice(f, cpl, s, method="brute")
                desc = k_lattice(f, cpl, s, method="descent")
                assert rel_err(desc, brute) < 1e-6


def test_descent_gap_is_tiny():
    for seed in range(6):
        f = random_step(seed + 7, n=5)
        cpl = LatticeCouple.for_step(f, Lorentz(2.0, 1.0), Lebesgue(INF))
        assert abs(descent_gap(f, cpl, 1.0)) < 1e-6


def test_resolution_refinement_never_hurts():
    for seed in range(8):
        f = random_step(seed + 31, n=5)
        cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lorentz(2.0, 2.0))
        for s in (0.3, 1.0, 4.0):
            k64 = k_lattice(f, cpl, s, method="brute", resolution=64)
            k128 = k_lattice(f, cpl, s, method="brute", resolution=128)
            assert k128 <= k64 + 1e-9 * (1.0 + k64)


def test_curve_monotone_concave_capped():
    for seed in range(8):
        f = random_step(seed, n=6)
        cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
        cur = k_curve(f, cpl, count=257, method="exact")
        s, K = cur.s, cur.K
        tol = 1e-9 * (1.0 + K.max())
        assert np.all(np.diff(K) >= -tol)  # nondecreasing in s
        # concavity at interior triples
        lam = (s[1:-1] - s[:-2]) / (s[2:] - s[:-2])
        chord = (1 - lam) * K[:-2] + lam * K[2:]
        assert np.all(K[1:-1] >= chord - tol)
        # caps: K <= ||f||_0 and K <= s ||f||_1
        assert np.all(K <= cur.cap0 * (1 + 1e-12) + tol)
        assert np.all(K <= s * cur.cap1 * (1 + 1e-12) + tol)


def test_curve_symmetry_under_role_exchange():
    # K(s; A0, A1) = s K(1/s; A1, A0)
    for seed in range(5):
        f = random_step(seed + 3, n=5)
        fwd = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
        rev = LatticeCouple.for_step(f, Lebesgue(INF), Lebesgue(1.0))
        for s in (0.1, 0.7, 1.0, 3.0, 12.0):
            a = k_lattice(f, fwd, s, method="brute")
            b = s * k_lattice(f, rev, 1.0 / s, method="brute")
            assert rel_err(a, b) < 1e-9


def test_curve_evaluate_scalar_and_array():
    f = random_step(1, n=5)
    cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
    cur = k_curve(f, cpl, method="exact")
    v = cur.evaluate(1.0)
    assert isinstance(v, float)
    arr = cur.evaluate(np.array([0.5, 1.0, 2.0]))
    assert arr.shape == (3,)
    assert rel_err(v, k_exact_l1_linf(f, 1.0)) < 1e-12


def test_brute_curve_tracks_exact_curve():
    f = random_step(17, n=4)
    cpl = LatticeCouple.for_step(f, Lebesgue(1.0), Lebesgue(INF))
    ex = k_curve(f, cpl, count=65, method="exact")
    br = k_curve(f, cpl, count=65, method="brute")
    for s in np.geomspace(ex.s[0], ex.s[-1], 33):
        assert rel_err(br.evaluate(float(s)), ex.evaluate(float(s))) < 1e-3


def test_commutation_ratio_within_quasi_norm_constants():
    for seed in range(10):
        F = random_product(seed, nx=3, ny=3)
        for p, r in [(2.0, 2.0), (2.0, 1.0), (0.5, 0.5)]:
            e = ExponentPair(p, r)
            C = quasi_triangle_constant(e)
            ratio = k_commutation_ratio(F, e, s=1.0)[2]
            assert 1.0 / C - 1e-9 <= ratio <= C + 1e-9
