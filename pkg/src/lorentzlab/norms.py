"""Exact Lorentz and mixed-Lorentz quasi-norms on step functions.

The quasi-norm convention is the unnormalized one,

    ||g||_{p,r} = || rho * mu({g >= rho})^(1/p) ||_{L^r(R_+, drho/rho)},

so that ||g||_{p,p} = p^(-1/p) ||g||_{L^p}.  All probe code compares ratios,
which makes the convention a pure bookkeeping choice; it is recorded in every
report.

For a step function the distribution function is piecewise constant and each
piece integrates in closed form, so every norm here is exact up to floating
point rounding.  The row-wise kernels evaluate many candidate value vectors
over a fixed atom structure at once; the K-functional search depends on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spaces import ExponentPair, MixedExponents, ProductStepFunction, StepFunction

__all__ = [
    "is_normable",
    "quasi_triangle_constant",
    "lorentz_norm",
    "mixed_lorentz_norm",
    "lorentz_norm_rows",
    "lebesgue_norm_rows",
    "Lebesgue",
    "Lorentz",
    "MixedNorm",
]

_INF = math.inf


def is_normable(e: ExponentPair) -> bool:
    """Whether the (p, r) quasi-norm is equivalent to a genuine norm."""
    p, r = e.p, e.r
    return (1 < p < _INF and 1 <= r <= _INF) or (p == r == 1) or (p == r == _INF)


def quasi_triangle_constant(e: ExponentPair) -> float:
    """C with ||f+g|| <= C (||f|| + ||g||), from mu_{f+g}(rho) <= mu_f(rho/2) + mu_g(rho/2)."""
    p, r = e.p, e.r
    cp = max(1.0, 2.0 ** (1.0 / p - 1.0)) if p < _INF else 1.0
    cr = max(1.0, 2.0 ** (1.0 / r - 1.0)) if r < _INF else 1.0
    return 2.0 * cp * cr


def lorentz_norm_rows(values: np.ndarray, masses: np.ndarray, p: float, r: float) -> np.ndarray:
    """(p, r) quasi-norm of each row of `values` over atoms with the given masses.

    values: (N, n) nonnegative; masses: (n,).  Rows are independent functions
    on the same atom space.
    """
    values = np.asarray(values, dtype=float)
    masses = np.asarray(masses, dtype=float)
    if values.ndim == 1:
        values = values[None, :]
    if p == _INF:  # then r == inf: essential sup
        masked = np.where(masses > 0, values, 0.0)
        return masked.max(axis=1) if masked.shape[1] else np.zeros(len(masked))
    order = np.argsort(-values, axis=1, kind="stable")
    v = np.take_along_axis(values, order, axis=1)
    w = masses[order]
    cum = np.cumsum(w, axis=1)
    if r == _INF:
        return (v * cum ** (1.0 / p)).max(axis=1) if v.shape[1] else np.zeros(len(v))
    vr = v**r
    drop = vr - np.concatenate([vr[:, 1:], np.zeros((len(vr), 1))], axis=1)
    return (np.sum(cum ** (r / p) * drop, axis=1) / r) ** (1.0 / r)


def lebesgue_norm_rows(values: np.ndarray, masses: np.ndarray, p: float) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[None, :]
    if p == _INF:
        masked = np.where(np.asarray(masses) > 0, values, 0.0)
        return masked.max(axis=1) if masked.shape[1] else np.zeros(len(masked))
    return np.sum(values**p * np.asarray(masses), axis=1) ** (1.0 / p)


def lorentz_norm(f: StepFunction, e: ExponentPair) -> float:
    """Exact (p, r) quasi-norm of a step function.

    Returns 0.0 for the zero function.  Finite step functions always have a
    finite norm; +inf is reserved for degenerate exponent requests and never
    produced here.
    """
    if f.is_zero:
        return 0.0
    return float(lorentz_norm_rows(f.values[None, :], f.masses, e.p, e.r)[0])


def mixed_lorentz_norm(F: ProductStepFunction, m: MixedExponents) -> float:
    """Outer Lorentz norm over X of the inner Lorentz norms of the y-sections."""
    inner = lorentz_norm_rows(F.values, F.y_space.masses, m.inner.p, m.inner.r)
    return float(lorentz_norm_rows(inner[None, :], F.x_space.masses, m.outer.p, m.outer.r)[0])


# ---------------------------------------------------------------------------
# Norm descriptors.  A descriptor plus the weight structure of the underlying
# atom space yields a monotone lattice quasi-norm; couples of these feed the
# K-functional engines.


@dataclass(frozen=True)
class Lebesgue:
    p: float

    def rows(self, values, weights):
        return lebesgue_norm_rows(values, weights, self.p)

    def describe(self) -> str:
        return f"L^{self.p:g}"


@dataclass(frozen=True)
class Lorentz:
    p: float
    r: float

    def __post_init__(self):
        ExponentPair(self.p, self.r)  # validate admissibility

    def rows(self, values, weights):
        return lorentz_norm_rows(values, weights, self.p, self.r)

    def describe(self) -> str:
        return f"L^({self.p:g},{self.r:g})"


@dataclass(frozen=True)
class MixedNorm:
    """Outer norm over x of the inner norms of the y-sections of a grid.

    `weights` passed to .rows must be a pair (x_masses, y_masses); row vectors
    are row-major flattened grids.
    """

    outer: object
    inner: object

    def rows(self, values, weights):
        xw, yw = weights
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[None, :]
        n, nx, ny = len(values), len(xw), len(yw)
        inner = self.inner.rows(values.reshape(n * nx, ny), yw).reshape(n, nx)
        return self.outer.rows(inner, xw)

    def describe(self) -> str:
        return f"{self.outer.describe()}(X; {self.inner.describe()}(Y))"


def plain_mixed_lebesgue(F: ProductStepFunction, p1: float, p2: float) -> float:
    """Unnormalized mixed Lebesgue norm ||x -> ||f(x,.)||_{L^{p2}} ||_{L^{p1}}."""
    inner = lebesgue_norm_rows(F.values, F.y_space.masses, p2)
    return float(lebesgue_norm_rows(inner[None, :], F.x_space.masses, p1)[0])
