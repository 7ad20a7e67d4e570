"""Numerical probes for embeddings and identities between (mixed) Lorentz
spaces and their real interpolation spaces.

None of these assert a specific constant: the identities hold with unknown
equivalence constants, so every probe reports a lhs/rhs ratio and the batch
runners only track stability of those ratios across instance sizes.  All
instances are seeded and bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .interpolation import InterpParams, interp_norm, interp_norm_of
from .kfunctional import BRUTE_ATOM_CAP, LatticeCouple, k_curve
from .norms import (
    Lebesgue,
    Lorentz,
    MixedNorm,
    is_normable,
    lorentz_norm,
    mixed_lorentz_norm,
    plain_mixed_lebesgue,
)
from .spaces import (
    ExponentPair,
    MeasureSpace,
    MixedExponents,
    ProductStepFunction,
    StepFunction,
)

__all__ = [
    "ProbeReport",
    "random_product",
    "cwikel_probe",
    "lemma61_ratio",
    "log_convexity_probe",
    "remark22_probe",
    "identity_probe",
    "probe_rows",
]

_INF = math.inf


@dataclass(frozen=True)
class ProbeReport:
    probe: str
    params: dict
    instance: dict  # {"xSize", "ySize", "seed"}
    lhs: float
    rhs: float
    ratio: float
    method: str
    flags: tuple = ()

    def to_json(self) -> dict:
        return {
            "probe": self.probe,
            "params": dict(self.params),
            "instance": dict(self.instance),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "method": self.method,
            "flags": list(self.flags),
        }


def _report(probe, params, instance, lhs, rhs, method, flags=()):
    flags = tuple(flags)
    if lhs == 0.0 and rhs == 0.0:
        ratio, flags = math.nan, flags + ("degenerate-zero-over-zero",)
    elif rhs == 0.0 or not (math.isfinite(lhs) and math.isfinite(rhs)):
        ratio, flags = math.nan, flags + ("ratio-undefined",)
    else:
        ratio = lhs / rhs
    return ProbeReport(probe, params, instance, lhs, rhs, ratio, method, flags)


def random_product(seed, nx: int, ny: int) -> ProductStepFunction:
    """Seeded random instance: values log-uniform in [1e-3, 1e3], masses
    uniform in [0.2, 2]."""
    rng = np.random.default_rng(seed)
    xs = MeasureSpace.discrete(rng.uniform(0.2, 2.0, nx))
    ys = MeasureSpace.discrete(rng.uniform(0.2, 2.0, ny))
    return ProductStepFunction(xs, ys, 10.0 ** rng.uniform(-3.0, 3.0, (nx, ny)))


def _k_method(F: ProductStepFunction, requested: str, heuristic: bool):
    """Pick the K engine for a joint (product-space) computation."""
    n = len(F.x_space) * len(F.y_space)
    if requested == "descent":
        return "descent", ("heuristic-descent-K",)
    if n <= BRUTE_ATOM_CAP:
        return "brute", ()
    if not heuristic:
        raise ValueError(
            f"instance has {n} atoms, above the brute-force cap {BRUTE_ATOM_CAP}; "
            "pass heuristic=True to allow descent"
        )
    return "descent", ("heuristic-descent-K",)


# ---------------------------------------------------------------------------
# Cwikel-type embeddings between Lorentz-Bochner interpolation spaces.


def _cwikel_regimes(p: float, r: float, q: float):
    regimes = []
    if (0 < q < p < _INF and q <= r <= _INF) or (p == q == r):
        regimes.append("i")
    if (0 < p < q <= _INF and 0 < r <= q) or (p == q == r):
        regimes.append("ii")
    return regimes


def cwikel_probe(
    F: ProductStepFunction,
    e: ExponentPair,
    ip: InterpParams,
    inner_couple: LatticeCouple | None = None,
    seed=None,
    method: str = "auto",
    heuristic: bool = False,
    regime: str = "auto",
) -> ProbeReport:
    """Interpolating before or after taking the outer Lorentz norm.

    lhs: interpolation norm of F between L^{p,r}(X; A0) and L^{p,r}(X; A1),
    with the joint K computed on the product lattice.  rhs: the L^{p,r}(X)
    norm of x -> interpolation norm of the slice between (A0, A1).  Regime
    (i) tests rhs <~ lhs; regime (ii) tests lhs <~ rhs.  Passing regime "i"
    or "ii" insists on that embedding's hypotheses.
    """
    p, r, q = e.p, e.r, ip.q
    regimes = _cwikel_regimes(p, r, q)
    if regime != "auto":
        if regime not in ("i", "ii"):
            raise ValueError(f"unknown regime {regime!r}")
        if regime not in regimes:
            raise ValueError(
                f"exponents (p={p:g}, r={r:g}, q={q:g}) violate the regime-({regime}) "
                "hypotheses: (i) needs 0<q<p<inf, q<=r<=inf or p=q=r; "
                "(ii) needs 0<p<q<=inf, 0<r<=q or p=q=r"
            )
        regimes = [regime]
    if not regimes:
        raise ValueError(
            "exponents satisfy neither embedding regime: need 0<q<p<inf, q<=r<=inf "
            "(i) or 0<p<q<=inf, 0<r<=q (ii) or p=q=r"
        )
    ym = F.y_space.masses
    if inner_couple is None:
        inner_couple = LatticeCouple(ym, Lebesgue(1.0), Lebesgue(_INF))
    params = {"p": p, "r": r, "theta": ip.theta, "q": q,
              "innerCouple": inner_couple.describe(), "regimes": regimes}
    instance = {"xSize": len(F.x_space), "ySize": len(F.y_space), "seed": seed}
    flags = tuple(f"under-test-regime-{t}" for t in regimes) + ("ratio-evidence-only",)
    if not F.values.any():
        return _report("cwikel", params, instance, 0.0, 0.0, "none", flags)

    kmethod, mflags = _k_method(F, method if method != "auto" else "brute", heuristic)
    joint = LatticeCouple(
        weights=(F.x_space.masses, ym),
        norm0=MixedNorm(Lorentz(p, r), inner_couple.norm0),
        norm1=MixedNorm(Lorentz(p, r), inner_couple.norm1),
    )
    lhs = interp_norm_of(F, joint, ip, method=kmethod)
    # per-slice couples live on the slice's level decomposition (all the norm
    # descriptors are rearrangement invariant, so levels-as-atoms is exact)
    slice_norms = []
    for i in range(len(F.x_space)):
        sf = F.slice_x(i)
        if sf.is_zero:
            slice_norms.append(0.0)
            continue
        cpl = LatticeCouple(sf.masses, inner_couple.norm0, inner_couple.norm1)
        slice_norms.append(interp_norm_of(sf, cpl, ip))
    rhs = lorentz_norm(StepFunction.from_values(F.x_space, slice_norms), e)
    return _report("cwikel", params, instance, lhs, rhs, kmethod, flags + mflags)


# ---------------------------------------------------------------------------
# Product-space Lorentz norm versus iterated L^p(Lorentz) norm.


def lemma61_ratio(F: ProductStepFunction, e: ExponentPair, seed=None) -> ProbeReport:
    """lhs = Lorentz norm of F on the product space; rhs = plain L^p(X) norm
    of the slice Lorentz norms.  The two coincide exactly when r = p; for
    p <= r the lhs is dominated and for r <= p the rhs is."""
    p, r = e.p, e.r
    lhs = lorentz_norm(F.flattened(), e)
    slice_norms = np.array(
        [lorentz_norm(F.slice_x(i), e) for i in range(len(F.x_space))]
    )
    if p == _INF:
        rhs = float(np.where(F.x_space.masses > 0, slice_norms, 0.0).max())
    else:
        rhs = float(np.sum(slice_norms**p * F.x_space.masses) ** (1.0 / p))
    regime = "equality" if p == r else ("i" if p <= r else "ii")
    params = {"p": p, "r": r, "regime": regime}
    instance = {"xSize": len(F.x_space), "ySize": len(F.y_space), "seed": seed}
    return _report("lemma61", params, instance, lhs, rhs, "exact", ())


# ---------------------------------------------------------------------------
# Log-convexity (interpolation) inequalities for mixed norms.


def log_convexity_probe(
    F: ProductStepFunction, p0: tuple, p1: tuple, theta: float, seed=None
) -> ProbeReport:
    """Mixed-Lebesgue norm at the intermediate exponents against the
    geometric mean of the two weak mixed Lorentz norms.

    lhs = ||F|| in mixed L^{p_theta}; rhs = ||F||_{p0,inf}^(1-theta) *
    ||F||_{p1,inf}^theta with componentwise 1/p_theta^i =
    (1-theta)/p0^i + theta/p1^i.  Requires p0^i != p1^i.
    """
    if not (0 < theta < 1):
        raise ValueError("theta must lie in (0, 1)")
    if p0[0] == p1[0] or p0[1] == p1[1]:
        raise ValueError("the interpolation inequality requires p0^i != p1^i componentwise")
    pt = tuple(
        1.0 / ((1.0 - theta) / a + theta / b) for a, b in zip(p0, p1)
    )
    lhs = plain_mixed_lebesgue(F, pt[0], pt[1])
    weak0 = mixed_lorentz_norm(
        F, MixedExponents(ExponentPair(p0[0], _INF), ExponentPair(p0[1], _INF))
    )
    weak1 = mixed_lorentz_norm(
        F, MixedExponents(ExponentPair(p1[0], _INF), ExponentPair(p1[1], _INF))
    )
    rhs = weak0 ** (1.0 - theta) * weak1**theta
    params = {"p0": list(p0), "p1": list(p1), "theta": theta, "pTheta": list(pt)}
    instance = {"xSize": len(F.x_space), "ySize": len(F.y_space), "seed": seed}
    return _report("chen-sun", params, instance, lhs, rhs, "exact", ())


def remark22_probe(
    f: StepFunction, p: float, r0: float, r1: float, theta: float, seed=None
) -> ProbeReport:
    """Second-parameter interpolation inequality on plain step functions:
    ||u||_{p,r_theta} against ||u||_{p,r0}^(1-theta) ||u||_{p,r1}^theta with
    1/r_theta = (1-theta)/r0 + theta/r1."""
    if not (0 < theta < 1):
        raise ValueError("theta must lie in (0, 1)")
    rt = 1.0 / ((1.0 - theta) / r0 + theta / r1)
    lhs = lorentz_norm(f, ExponentPair(p, rt))
    rhs = (
        lorentz_norm(f, ExponentPair(p, r0)) ** (1.0 - theta)
        * lorentz_norm(f, ExponentPair(p, r1)) ** theta
    )
    params = {"p": p, "r0": r0, "r1": r1, "theta": theta, "rTheta": rt}
    instance = {"xSize": len(f.space), "ySize": 1, "seed": seed}
    return _report("remark22", params, instance, lhs, rhs, "exact", ())


# ---------------------------------------------------------------------------
# Interpolation-identity probes (ratio stability only).


def _check_identity_hypotheses(p0, p1, r0, r1):
    for i in (0, 1):
        if p0[i] == p1[i]:
            raise ValueError("identity hypotheses require p0^i != p1^i for i = 1, 2")
        for p, r in ((p0[i], r0[i]), (p1[i], r1[i])):
            if not is_normable(ExponentPair(p, r)):
                raise ValueError(
                    f"({p:g},{r:g}) violates the normability condition "
                    "(1<p<inf, 1<=r<=inf, or p=r in {1,inf})"
                )


def _mixed_lorentz_couple(F, p0, r0, p1, r1) -> LatticeCouple:
    return LatticeCouple(
        weights=(F.x_space.masses, F.y_space.masses),
        norm0=MixedNorm(Lorentz(p0[0], r0[0]), Lorentz(p0[1], r0[1])),
        norm1=MixedNorm(Lorentz(p1[0], r1[0]), Lorentz(p1[1], r1[1])),
    )


def identity_probe(
    kind: str,
    params: dict,
    sizes,
    seed: int = 0,
    draws: int = 3,
    method: str = "auto",
    heuristic: bool = False,
) -> list:
    """Ratio-stability evidence for the mixed-Lorentz interpolation identities.

    kind = "corollary12": lhs is the (theta, q) interpolation norm of F
    between two mixed Lorentz spaces with p0^1 = p0^2 and p1^1 = p1^2, rhs is
    the plain Lorentz (p_theta, q) norm of F on the product space.

    kind = "theorem11": lhs is the interpolation norm between two mixed
    Lorentz spaces at ((1-vt) theta0 + vt theta1, q), rhs the interpolation
    norm between the corresponding mixed Lebesgue spaces at (vt, q).

    Both identities hold with unknown equivalence constants, so these
    reports are evidence about ratio spread and drift only, never about a
    specific constant; every report carries the ratio-evidence-only flag.
    """
    if kind not in ("theorem11", "corollary12"):
        raise ValueError(f"unknown identity probe {kind!r}")
    reports = []
    if kind == "corollary12":
        p0s, p1s = float(params["p0"]), float(params["p1"])
        r = float(params.get("r", 1.0))
        theta, q = float(params["theta"]), float(params["q"])
        if not (0 < theta < 1):
            raise ValueError("theta must lie in (0, 1)")
        if q < 1:
            raise ValueError("the identity hypotheses require q >= 1")
        p0, p1 = (p0s, p0s), (p1s, p1s)
        r0 = r1 = (r, r)
        _check_identity_hypotheses(p0, p1, r0, r1)
        ip = InterpParams(theta, q)
        p_theta = 1.0 / ((1.0 - theta) / p0s + theta / p1s)
        for n in sizes:
            for d in range(draws):
                F = random_product((seed, n, d), n, n)
                kmethod, mflags = _k_method(F, method if method != "auto" else "brute", heuristic)
                couple = _mixed_lorentz_couple(F, p0, r0, p1, r1)
                lhs = interp_norm_of(F, couple, ip, method=kmethod)
                rhs = lorentz_norm(F.flattened(), ExponentPair(p_theta, q))
                prm = {"p0": p0s, "p1": p1s, "r": r, "theta": theta, "q": q,
                       "pTheta": p_theta}
                inst = {"xSize": n, "ySize": n, "seed": [seed, n, d]}
                reports.append(
                    _report("corollary12", prm, inst, lhs, rhs, kmethod,
                            ("ratio-evidence-only",) + mflags)
                )
        return reports
    # theorem11
    p0, p1 = tuple(params["p0"]), tuple(params["p1"])
    r0 = tuple(params.get("r0", (1.0, 1.0)))
    r1 = tuple(params.get("r1", (1.0, 1.0)))
    theta0, theta1 = float(params["theta0"]), float(params["theta1"])
    vt, q = float(params["vartheta"]), float(params["q"])
    if not (0 < theta0 < 1 and 0 < theta1 < 1 and 0 < vt < 1) or theta0 == theta1:
        raise ValueError("need 0 < theta0 != theta1 < 1 and 0 < vartheta < 1")
    if q < 1:
        raise ValueError("the identity hypotheses require q >= 1")
    _check_identity_hypotheses(p0, p1, r0, r1)

    def p_vec(th):
        return tuple(1.0 / ((1.0 - th) / a + th / b) for a, b in zip(p0, p1))

    pv0, pv1 = p_vec(theta0), p_vec(theta1)
    theta = (1.0 - vt) * theta0 + vt * theta1
    for n in sizes:
        for d in range(draws):
            F = random_product((seed, n, d), n, n)
            kmethod, mflags = _k_method(F, method if method != "auto" else "brute", heuristic)
            lhs = interp_norm_of(
                F, _mixed_lorentz_couple(F, p0, r0, p1, r1), InterpParams(theta, q),
                method=kmethod,
            )
            lebesgue_couple = LatticeCouple(
                weights=(F.x_space.masses, F.y_space.masses),
                norm0=MixedNorm(Lebesgue(pv0[0]), Lebesgue(pv0[1])),
                norm1=MixedNorm(Lebesgue(pv1[0]), Lebesgue(pv1[1])),
            )
            rhs = interp_norm_of(F, lebesgue_couple, InterpParams(vt, q), method=kmethod)
            prm = {"p0": list(p0), "p1": list(p1), "r0": list(r0), "r1": list(r1),
                   "theta0": theta0, "theta1": theta1, "vartheta": vt, "q": q,
                   "pTheta0": list(pv0), "pTheta1": list(pv1), "thetaEff": theta}
            inst = {"xSize": n, "ySize": n, "seed": [seed, n, d]}
            reports.append(
                _report("theorem11", prm, inst, lhs, rhs, kmethod,
                        ("ratio-evidence-only",) + mflags)
            )
    return reports


def probe_rows(reports) -> tuple:
    """CSV header and rows summarizing a batch of probe reports."""
    header = ["probe", "xSize", "ySize", "seed", "lhs", "rhs", "ratio", "method", "flags"]
    rows = [
        [
            rep.probe,
            rep.instance.get("xSize"),
            rep.instance.get("ySize"),
            str(rep.instance.get("seed")),
            rep.lhs,
            rep.rhs,
            rep.ratio,
            rep.method,
            ";".join(rep.flags),
        ]
        for rep in reports
    ]
    return header, rows
