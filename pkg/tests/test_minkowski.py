"""Minkowski verdicts, counterexample families, rate fits, region sweep."""

import math

import numpy as np
import pytest

from lorentzlab.minkowski import (
    FamilyParams,
    family_eval,
    f41_quadrature,
    f42_product,
    forward_holds_theory,
    minkowski_ratio,
    rate_fit,
    reverse_holds_theory,
    sweep_plane,
    sweep_rows,
)
from lorentzlab.norms import lorentz_norm
from lorentzlab.spaces import (
    ExponentPair,
    MeasureSpace,
    ProductStepFunction,
    StepFunction,
)

from conftest import random_product, rel_err

INF = math.inf


def test_ratio_matches_direct_norms():
    F = random_product(5, nx=4, ny=4)
    e = ExponentPair(2.0, 1.0)
    v = minkowski_ratio(F, e)
    assert rel_err(v.lhs, lorentz_norm(F.x_integral(), e)) < 1e-14
    rhs = sum(
        m * lorentz_norm(F.slice_x(i), e) for i, m in enumerate(F.x_space.masses)
    )
    assert rel_err(v.rhs, rhs) < 1e-12
    assert v.ratio == pytest.approx(v.lhs / v.rhs, rel=1e-15)


def test_degenerate_zero_flagged():
    sp = MeasureSpace.discrete([1.0])
    F = ProductStepFunction(sp, sp, np.zeros((1, 1)))
    v = minkowski_ratio(F, ExponentPair(2.0, 2.0))
    assert math.isnan(v.ratio)
    assert "degenerate-zero-over-zero" in v.flags
    doc = v.to_json()
    assert doc["descriptor"] and math.isnan(doc["ratio"])


# --- F41 ------------------------------------------------------------------


def test_f41_closed_vs_quadrature():
    for p, r, alpha in [
        (2.0, 2.0, 1.0), (2.0, 0.5, 0.3), (3.0, 1.0, 2.9),
        (1.5, 4.0, 1.2), (2.0, INF, 1.0),
    ]:
        v = family_eval(FamilyParams("F41", alpha=alpha), ExponentPair(p, r),
                        cross_check=True)
        assert rel_err(v.lhs, v.meta["quadLhs"]) < 1e-10
        assert rel_err(v.rhs, v.meta["quadRhs"]) < 1e-10


def test_f41_ratio_formula():
    for p, r, alpha in [(2.0, 2.0, 1.5), (2.0, 0.5, 0.7), (3.0, 7.0, 1.0)]:
        v = family_eval(FamilyParams("F41", alpha=alpha), ExponentPair(p, r))
        want = (p - alpha) ** (1.0 - 1.0 / r) * p ** (1.0 / r - 1.0)
        assert rel_err(v.ratio, want) < 1e-12


def test_f41_ratio_one_at_r_one():
    # at r = 1 both sides coincide for every admissible alpha
    for alpha in (0.25, 1.0, 1.9):
        v = family_eval(FamilyParams("F41", alpha=alpha), ExponentPair(2.0, 1.0))
        assert rel_err(v.ratio, 1.0) < 1e-12


def test_f41_rejects_bad_alpha():
    with pytest.raises(ValueError):
        family_eval(FamilyParams("F41", alpha=3.0), ExponentPair(2.0, 2.0))
    with pytest.raises(ValueError):
        FamilyParams("F41", alpha=-1.0)


# --- F42 ------------------------------------------------------------------


def test_f42_exact_ratio():
    for N in (2, 4, 8, 16):
        for p in (0.5, 2.0):
            v = family_eval(FamilyParams("F42", N=N), ExponentPair(p, p))
            assert rel_err(v.ratio, N ** (1.0 / p - 1.0)) < 1e-12


def test_f42_grid_shape():
    F = f42_product(3)
    np.testing.assert_array_equal(F.values, np.eye(3))


# --- F43 / F44 ------------------------------------------------------------


def _phi(z, beta):
    base = 2.0 + np.abs(z)
    return 1.0 / (base * np.log(base) ** beta)


def _lattice_product(N, beta, L, h):
    """Explicit product-grid model of the truncated lattice-translate family;
    an independent oracle for the streamlined evaluator."""
    k = int(round(1.0 / h))
    xs = MeasureSpace.discrete(np.ones(2 * N + 1))
    ny = 2 * (N + L) * k
    yc = -(N + L) + (np.arange(ny) + 0.5) * h
    ys = MeasureSpace.discrete(np.full(ny, h))
    x = np.arange(-N, N + 1)
    z = x[:, None] - yc[None, :]
    vals = np.where(np.abs(z) < L, _phi(z, beta), 0.0)
    return ProductStepFunction(xs, ys, vals)


@pytest.mark.parametrize("N,beta,r", [(2, 0.75, 2.0), (2, 2.05, 0.5), (3, 1.0, 3.0)])
def test_lattice_family_matches_explicit_grid(N, beta, r):
    L, h = 3, 0.25
    e = ExponentPair(1.0, r)
    v = family_eval(FamilyParams("F43", N=N, beta=beta, L=float(L), h=h), e)
    w = minkowski_ratio(_lattice_product(N, beta, L, h), e)
    assert rel_err(v.lhs, w.lhs) < 1e-12
    assert rel_err(v.rhs, w.rhs) < 1e-12


def test_lattice_family_refinement_meta():
    v = family_eval(
        FamilyParams("F43", N=64, beta=0.75), ExponentPair(1.0, 2.0),
        refine_check=True,
    )
    assert v.meta["deltaHalfH"] < 0.01
    assert v.meta["deltaDoubleL"] < 0.01


def test_lattice_family_requires_p_one():
    with pytest.raises(ValueError):
        family_eval(FamilyParams("F43", N=4, beta=1.0), ExponentPair(2.0, 2.0))


def test_f44_ratio_decreasing_small():
    rats = []
    for N in (64, 256, 1024):
        v = family_eval(
            FamilyParams("F44", N=N, beta=2.05), ExponentPair(1.0, 0.5), "reverse"
        )
        rats.append(v.ratio)
    assert rats[0] > rats[1] > rats[2]


# --- rate fitting ---------------------------------------------------------


def test_rate_fit_recovers_synthetic_slopes():
    Ns = np.array([16.0, 32.0, 64.0, 128.0, 256.0])
    fit = rate_fit(zip(Ns, 3.0 * Ns**-0.5), "powerOfN")
    assert abs(fit["slope"] + 0.5) < 1e-10 and fit["residual"] < 1e-10
    fit = rate_fit(zip(Ns, 0.7 * np.log(Ns) ** 0.25), "powerOfLogN")
    assert abs(fit["slope"] - 0.25) < 1e-10
    eps = np.array([0.01, 0.02, 0.04, 0.08])
    fit = rate_fit(zip(eps, 2.0 * eps**1.5), "powerOfEps")
    assert abs(fit["slope"] - 1.5) < 1e-10
    assert fit["monotone"]


def test_rate_fit_validation():
    with pytest.raises(ValueError):
        rate_fit([(1.0, 1.0), (2.0, 1.0)], "powerOfN")
    with pytest.raises(ValueError):
        rate_fit([(1.0, 1.0)] * 5, "powerOfN")
    with pytest.raises(ValueError):
        rate_fit([(float(n), 1.0) for n in range(4, 9)], "powerOfSomething")


# --- theory tables and sweep ---------------------------------------------


def test_theory_tables():
    assert forward_holds_theory(2.0, 1.0)
    assert forward_holds_theory(1.0, 1.0)
    assert forward_holds_theory(INF, INF)
    assert not forward_holds_theory(1.0, 2.0)
    assert not forward_holds_theory(0.5, 0.5)
    assert reverse_holds_theory(0.5, 0.5)
    assert reverse_holds_theory(0.5, 1.0)
    assert reverse_holds_theory(1.0, 1.0)
    assert not reverse_holds_theory(0.5, 2.0)
    assert not reverse_holds_theory(2.0, 2.0)


def test_small_sweep_is_consistent():
    ps = [0.5, 1.0, 2.0]
    rs = [0.5, 1.0, 2.0]
    rows = sweep_plane(ps, rs, seed=0, draws=8)
    assert len(rows) == 2 * len(ps) * len(rs)
    for row in rows:
        assert row["consistent"], row
        # on the diagonal the holding direction has constant exactly 1
        if row["p"] == row["r"]:
            if row["direction"] == "forward" and row["p"] >= 1.0:
                assert row["extremeRatio"] <= 1.0 + 1e-12
            if row["direction"] == "reverse" and row["p"] <= 1.0:
                assert row["extremeRatio"] >= 1.0 - 1e-12
            if row["p"] == 1.0:
                assert rel_err(row["extremeRatio"], 1.0) < 1e-12


def test_sweep_rows_csv_shape():
    rows = sweep_plane([2.0], [1.0], draws=6)
    header, data = sweep_rows(rows)
    assert header[0] == "p" and len(data) == 2
    assert all(len(r) == len(header) for r in data)


def test_sweep_is_deterministic():
    a = sweep_plane([2.0, 0.5], [1.0, 2.0], seed=3, draws=8)
    b = sweep_plane([2.0, 0.5], [1.0, 2.0], seed=3, draws=8)
    assert a == b
