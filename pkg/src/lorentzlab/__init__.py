"""Desk-scale lab for Lorentz quasi-norms, K-functionals, real interpolation,
and Minkowski-inequality experiments on exactly-representable step functions."""

__version__ = "0.1.0"

from .spaces import (  # noqa: F401
    ExponentPair,
    MeasureSpace,
    MixedExponents,
    ProductStepFunction,
    StepFunction,
    distribution,
    rearrangement,
)
from .norms import (  # noqa: F401
    Lebesgue,
    Lorentz,
    MixedNorm,
    is_normable,
    lorentz_norm,
    mixed_lorentz_norm,
    quasi_triangle_constant,
)
from .kfunctional import (  # noqa: F401
    KCurve,
    LatticeCouple,
    k_commutation_ratio,
    k_curve,
    k_exact_l1_linf,
    k_lattice,
)
from .interpolation import (  # noqa: F401
    InterpParams,
    interp_norm,
    interp_norm_of,
    lorentz_identity_ratio,
)
from .minkowski import (  # noqa: F401
    FamilyParams,
    MinkowskiVerdict,
    family_eval,
    minkowski_ratio,
    rate_fit,
    sweep_plane,
)
from .probes import (  # noqa: F401
    cwikel_probe,
    identity_probe,
    lemma61_ratio,
    log_convexity_probe,
    remark22_probe,
)
