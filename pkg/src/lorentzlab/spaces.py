"""Finite measure spaces and exactly-representable step functions.

Everything downstream (quasi-norms, K-functionals, interpolation norms)
operates on these types.  A step function is stored in canonical form as a
list of (value, mass) levels with strictly decreasing positive values, so
its distribution function is an explicit piecewise-constant object and all
norm integrals reduce to closed forms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MeasureSpace",
    "StepFunction",
    "ProductStepFunction",
    "ExponentPair",
    "MixedExponents",
    "distribution",
    "rearrangement",
    "step_to_json",
    "step_from_json",
    "product_to_json",
    "product_from_json",
]

_MASS_SLACK = 1e-9


@dataclass(frozen=True)
class MeasureSpace:
    """A finite weighted atom list, either genuinely discrete or a uniform
    grid of cells discretizing an interval."""

    kind: str  # "discrete-with-weights" | "interval-with-uniform-grid"
    atoms: tuple  # of (label, mass)

    def __post_init__(self):
        if self.kind not in ("discrete-with-weights", "interval-with-uniform-grid"):
            raise ValueError(f"unknown measure-space kind {self.kind!r}")
        labels = [a[0] for a in self.atoms]
        if len(set(labels)) != len(labels):
            raise ValueError("atom labels must be unique")
        masses = np.asarray([a[1] for a in self.atoms], dtype=float)
        if masses.size and (not np.all(np.isfinite(masses)) or np.any(masses < 0)):
            raise ValueError("atom masses must be finite and nonnegative")
        object.__setattr__(self, "atoms", tuple((str(l), float(m)) for l, m in self.atoms))

    @staticmethod
    def discrete(masses, labels=None) -> "MeasureSpace":
        masses = list(masses)
        if labels is None:
            labels = [f"a{i}" for i in range(len(masses))]
        return MeasureSpace("discrete-with-weights", tuple(zip(labels, masses)))

    @staticmethod
    def interval(length: float, cells: int) -> "MeasureSpace":
        """Uniform grid of `cells` cells covering an interval of given length."""
        h = float(length) / cells
        return MeasureSpace(
            "interval-with-uniform-grid",
            tuple((f"c{i}", h) for i in range(cells)),
        )

    @property
    def masses(self) -> np.ndarray:
        return np.asarray([m for _, m in self.atoms], dtype=float)

    @property
    def total_mass(self) -> float:
        return float(sum(m for _, m in self.atoms))

    def __len__(self):
        return len(self.atoms)


def _canonical_levels(levels):
    """Merge equal values, sort strictly decreasing, drop zero value/mass."""
    acc = {}
    for v, m in levels:
        v = float(v)
        m = float(m)
        if not (math.isfinite(v) and v >= 0):
            raise ValueError("level values must be finite and nonnegative")
        if m < 0:
            raise ValueError("level masses must be nonnegative")
        if v == 0.0 or m == 0.0:
            continue
        acc[v] = acc.get(v, 0.0) + m
    return tuple(sorted(acc.items(), key=lambda vm: -vm[0]))


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative simple function given by its level decomposition."""

    space: MeasureSpace
    levels: tuple  # of (value, mass), canonical: strictly decreasing values

    def __post_init__(self):
        lv = _canonical_levels(self.levels)
        object.__setattr__(self, "levels", lv)
        if self.level_mass > self.space.total_mass + _MASS_SLACK * (1.0 + self.space.total_mass):
            raise ValueError("total level mass exceeds the mass of the space")

    @staticmethod
    def from_values(space: MeasureSpace, values) -> "StepFunction":
        """Build from one value per atom of `space`."""
        values = np.asarray(values, dtype=float)
        if values.shape != (len(space),):
            raise ValueError("need exactly one value per atom")
        return StepFunction(space, tuple(zip(values, space.masses)))

    @property
    def values(self) -> np.ndarray:
        return np.asarray([v for v, _ in self.levels], dtype=float)

    @property
    def masses(self) -> np.ndarray:
        return np.asarray([m for _, m in self.levels], dtype=float)

    @property
    def level_mass(self) -> float:
        return float(sum(m for _, m in self.levels))

    @property
    def is_zero(self) -> bool:
        return not self.levels

    def scaled(self, factor: float) -> "StepFunction":
        factor = abs(float(factor))
        return StepFunction(self.space, tuple((v * factor, m) for v, m in self.levels))

    def lp_norm(self, p: float) -> float:
        """Plain Lebesgue norm of the level decomposition."""
        if self.is_zero:
            return 0.0
        if p == math.inf:
            return float(self.values[0])
        return float(np.sum(self.values**p * self.masses) ** (1.0 / p))


@dataclass(frozen=True)
class ProductStepFunction:
    """Nonnegative function on a product of two atom spaces, stored as a grid."""

    x_space: MeasureSpace
    y_space: MeasureSpace
    values: np.ndarray = field(repr=False)  # shape (len(x_space), len(y_space))

    def __post_init__(self):
        grid = np.asarray(self.values, dtype=float)
        if grid.shape != (len(self.x_space), len(self.y_space)):
            raise ValueError("grid shape must match the atom counts")
        if not np.all(np.isfinite(grid)) or np.any(grid < 0):
            raise ValueError("grid entries must be finite and nonnegative")
        grid = grid.copy()
        grid.setflags(write=False)
        object.__setattr__(self, "values", grid)

    def slice_x(self, i: int) -> StepFunction:
        """The y-section at the i-th x-atom."""
        return StepFunction.from_values(self.y_space, self.values[i])

    def x_integral(self) -> StepFunction:
        """y ↦ ∫ f(x, y) dμ_X(x), exact weighted column sum."""
        g = self.x_space.masses @ self.values
        return StepFunction.from_values(self.y_space, g)

    def flattened(self) -> StepFunction:
        """The same function viewed on the product space (atom masses multiply)."""
        mx = self.x_space.masses
        my = self.y_space.masses
        prod_masses = np.outer(mx, my).ravel()
        space = MeasureSpace.discrete(prod_masses)
        return StepFunction(space, tuple(zip(self.values.ravel(), prod_masses)))

    def scaled(self, factor: float) -> "ProductStepFunction":
        return ProductStepFunction(self.x_space, self.y_space, self.values * abs(float(factor)))


@dataclass(frozen=True)
class ExponentPair:
    """Lorentz exponents (p, r); the admissible range is p < ∞ or p = r = ∞."""

    p: float
    r: float

    def __post_init__(self):
        p, r = float(self.p), float(self.r)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", r)
        if not (p > 0 and r > 0):
            raise ValueError("exponents must be positive")
        if p == math.inf and r != math.inf:
            raise ValueError("p = ∞ requires r = ∞")

    def as_tuple(self):
        return (self.p, self.r)


@dataclass(frozen=True)
class MixedExponents:
    """Outer and inner exponent pairs of a mixed Lorentz norm."""

    outer: ExponentPair
    inner: ExponentPair


def distribution(f: StepFunction, rho: float) -> float:
    """μ({f ≥ rho}) for rho > 0; the superlevel set uses ≥."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return float(sum(m for v, m in f.levels if v >= rho))


def rearrangement(f: StepFunction) -> StepFunction:
    """The decreasing rearrangement, laid out on (0, total level mass)."""
    space = MeasureSpace(
        "interval-with-uniform-grid" if not f.levels else "discrete-with-weights",
        tuple((f"r{i}", m) for i, (_, m) in enumerate(f.levels)),
    )
    return StepFunction(space, f.levels)


# ---------------------------------------------------------------------------
# JSON round-tripping.  With exact=True all masses and values are written as
# shortest round-trip decimal strings, so decode(encode(x)) == x bit for bit.


def _num(x: float, exact: bool):
    return repr(float(x)) if exact else float(x)


def _parse_num(x) -> float:
    return float(x)


def step_to_json(f: StepFunction, exact: bool = False) -> dict:
    return {
        "space": {
            "kind": f.space.kind,
            "masses": [_num(m, exact) for m in f.space.masses],
        },
        "levels": [[_num(v, exact), _num(m, exact)] for v, m in f.levels],
    }


def step_from_json(doc: dict) -> StepFunction:
    space = MeasureSpace(
        doc["space"]["kind"],
        tuple((f"a{i}", _parse_num(m)) for i, m in enumerate(doc["space"]["masses"])),
    )
    levels = tuple((_parse_num(v), _parse_num(m)) for v, m in doc["levels"])
    return StepFunction(space, levels)


def product_to_json(F: ProductStepFunction, exact: bool = False) -> dict:
    return {
        "xMasses": [_num(m, exact) for m in F.x_space.masses],
        "yMasses": [_num(m, exact) for m in F.y_space.masses],
        "values": [_num(v, exact) for v in F.values.ravel()],
    }


def product_from_json(doc: dict) -> ProductStepFunction:
    xm = [_parse_num(m) for m in doc["xMasses"]]
    ym = [_parse_num(m) for m in doc["yMasses"]]
    grid = np.asarray([_parse_num(v) for v in doc["values"]], dtype=float)
    return ProductStepFunction(
        MeasureSpace.discrete(xm),
        MeasureSpace.discrete(ym),
        grid.reshape(len(xm), len(ym)),
    )


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True)
