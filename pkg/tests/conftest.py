"""Shared test helpers: seeded random step functions and product grids."""

import numpy as np

from lorentzlab.spaces import MeasureSpace, ProductStepFunction, StepFunction


def random_step(seed, n=5) -> StepFunction:
    rng = np.random.default_rng(seed)
    masses = rng.uniform(0.2, 2.0, size=n)
    values = 10.0 ** rng.uniform(-2.0, 2.0, size=n)
    return StepFunction.from_values(MeasureSpace.discrete(masses), values)


def random_product(seed, nx=3, ny=3) -> ProductStepFunction:
    rng = np.random.default_rng(seed)
    xm = rng.uniform(0.2, 2.0, size=nx)
    ym = rng.uniform(0.2, 2.0, size=ny)
    vals = 10.0 ** rng.uniform(-2.0, 2.0, size=(nx, ny))
    return ProductStepFunction(
        MeasureSpace.discrete(xm), MeasureSpace.discrete(ym), vals
    )


def rel_err(a: float, b: float) -> float:
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale
