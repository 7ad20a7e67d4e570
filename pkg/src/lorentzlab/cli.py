"""Command-line entry point.

Subcommands:

* verify <suite>   -- run a named invariant suite (exit 0/1)
* sweep            -- (p, r) region sweep, CSV + JSON evidence sidecar
* probe <name>     -- embedding/identity/counterexample probes, JSON + CSV

Exit codes: 0 pass, 1 assertion failure, 2 usage error, 3 I/O error,
4 hypothesis violation.  Outputs embed the effective configuration and the
package version; identical (flags, config, seed) produce byte-identical
files.  Floats are written with 17 significant digits in JSON and 12 in CSV.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .interpolation import InterpParams, interp_norm, lorentz_identity_ratio
from .kfunctional import (
    LatticeCouple,
    k_commutation_ratio,
    k_curve,
    k_exact_l1_linf,
    k_lattice,
)
from .minkowski import (
    FamilyParams,
    family_eval,
    minkowski_ratio,
    rate_fit,
    sweep_plane,
    sweep_rows,
)
from .norms import lorentz_norm, mixed_lorentz_norm, quasi_triangle_constant
from .probes import (
    cwikel_probe,
    identity_probe,
    lemma61_ratio,
    log_convexity_probe,
    probe_rows,
    random_product,
)
from .spaces import (
    ExponentPair,
    MeasureSpace,
    MixedExponents,
    ProductStepFunction,
    StepFunction,
)

_INF = math.inf

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_HYPOTHESIS = 4


def _fmt_json(x):
    if isinstance(x, float):
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return float(format(x, ".17g"))
    if isinstance(x, dict):
        return {k: _fmt_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt_json(v) for v in x]
    if isinstance(x, (np.floating,)):
        return _fmt_json(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_fmt_json(v) for v in x.tolist()]
    return x


def _fmt_csv(x):
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def _write_json(path, doc):
    doc = _fmt_json(doc)
    text = json.dumps(doc, sort_keys=True, indent=1)
    if path in (None, "-"):
        sys.stdout.write(text + "\n")
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text + "\n")


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt_csv(x) for x in row])


def _load_config(path):
    """Flat INI-style key = value file; '#' starts a comment."""
    conf = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line {line!r}")
            key, value = line.split("=", 1)
            conf[key.strip()] = value.strip()
    return conf


def _effective(args, keys):
    """Merge config-file values under the CLI flags; flags win."""
    conf = _load_config(args.config) if args.config else {}
    eff = {}
    for key, cast, default in keys:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            eff[key] = flag
        elif key in conf:
            eff[key] = cast(conf[key])
        else:
            eff[key] = default
    return eff


def _config_block(eff):
    return {
        "version": __version__,
        "threads": int(os.environ.get("LORENTZ_LAB_THREADS", "1")),
        "config": {k: _fmt_json(v) for k, v in eff.items()},
        "normConvention": "||g||_{p,r} = ||rho mu(|g|>=rho)^(1/p)||_{L^r(drho/rho)}",
    }


def _parse_exponent(text):
    return _INF if text in ("inf", "Inf", "infinity") else float(text)


def _parse_range(spec):
    """'0.25:4:0.25' -> grid values; a comma list is taken verbatim."""
    if ":" in spec:
        lo, hi, step = (float(x) for x in spec.split(":"))
        n = int(round((hi - lo) / step)) + 1
        vals = [lo + i * step for i in range(n)]
        return [v for v in vals if v <= hi + 1e-12]
    return [_parse_exponent(x) for x in spec.split(",")]


# ---------------------------------------------------------------------------
# verify suites


def _check(report, name, ok, detail=""):
    report.append((name, bool(ok), detail))
    return bool(ok)


def _suite_closed_forms():
    rep = []
    tol = 1e-12

    def close(a, b):
        return abs(a - b) <= tol * max(1.0, abs(b))

    ind = StepFunction(MeasureSpace.discrete([2.0]), ((1.0, 2.0),))
    checks = [
        ("indicator (2,2)", lorentz_norm(ind, ExponentPair(2, 2)), 1.0),
        ("indicator (1,1)", lorentz_norm(ind, ExponentPair(1, 1)), 2.0),
        ("indicator (3,inf)", lorentz_norm(
            StepFunction(MeasureSpace.discrete([8.0]), ((1.0, 8.0),)), ExponentPair(3, _INF)), 2.0),
        ("indicator (inf,inf)", lorentz_norm(ind.scaled(2.5), ExponentPair(_INF, _INF)), 2.5),
    ]
    two = StepFunction(MeasureSpace.discrete([1.0, 3.0]), ((2.0, 1.0), (1.0, 3.0)))
    checks.append(("two-level (1,1)", lorentz_norm(two, ExponentPair(1, 1)), 5.0))
    checks.append(("two-level (1,inf)", lorentz_norm(two, ExponentPair(1, _INF)), 4.0))
    # tensor g (x) h: mixed norm factors
    g = np.array([2.0, 1.0])
    h = np.array([1.0, 1.0, 1.0])
    F = ProductStepFunction(
        MeasureSpace.discrete([1.0, 1.0]), MeasureSpace.discrete([0.5, 0.5, 1.0]),
        np.outer(g, h),
    )
    m = MixedExponents(ExponentPair(2, 2), ExponentPair(1, 1))
    gs = StepFunction.from_values(F.x_space, g)
    hs = StepFunction.from_values(F.y_space, h)
    checks.append((
        "mixed tensor factorization",
        mixed_lorentz_norm(F, m),
        lorentz_norm(gs.scaled(hs.lp_norm(1.0) / 1.0), ExponentPair(2, 2)),
    ))
    checks.append((
        "mixed tensor value",
        mixed_lorentz_norm(F, m),
        2.0 * math.sqrt(5.0) / math.sqrt(2.0),
    ))
    # L^{p,p} = p^{-1/p} L^p
    rng = np.random.default_rng(5)
    f = StepFunction.from_values(
        MeasureSpace.discrete(rng.uniform(0.1, 2.0, 6)), rng.uniform(0.1, 5.0, 6)
    )
    for p in (0.5, 1.0, 3.0):
        checks.append((
            f"L^(p,p) identity p={p:g}",
            lorentz_norm(f, ExponentPair(p, p)),
            p ** (-1.0 / p) * f.lp_norm(p),
        ))
    # interpolation norm of the indicator, and the q = inf form
    ind4 = StepFunction(MeasureSpace.discrete([4.0]), ((1.0, 4.0),))
    curve = k_curve(ind4, LatticeCouple.for_step(ind4))
    checks.append((
        "interp indicator theta=1/2 q=2",
        interp_norm(curve, InterpParams(0.5, 2.0)),
        2.0 * math.sqrt(2.0),
    ))
    checks.append((
        "interp indicator theta=1/2 q=inf",
        interp_norm(curve, InterpParams(0.5, _INF)),
        2.0,
    ))
    checks.append((
        "lorentz identity ratio indicator",
        lorentz_identity_ratio(ind4, 0.5, 2.0),
        2.0,
    ))
    ok = True
    for name, got, want in checks:
        ok &= _check(rep, name, close(got, want), f"got {got!r} want {want!r}")
    return ok, rep


def _suite_k_oracle():
    rep = []
    ok = True
    worst_brute = worst_desc = 0.0
    for seed in range(40):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        f = StepFunction.from_values(
            MeasureSpace.discrete(rng.uniform(0.1, 2.0, n)), rng.uniform(0.1, 5.0, n)
        )
        couple = LatticeCouple.for_step(f)
        for s in (0.1, 1.0, 7.5):
            exact = k_exact_l1_linf(f, s)
            brute = k_lattice(f, couple, s, method="brute")
            desc = k_lattice(f, couple, s, method="descent")
            worst_brute = max(worst_brute, abs(brute - exact) / exact)
            worst_desc = max(worst_desc, abs(desc - brute) / max(brute, 1e-300))
    ok &= _check(rep, "brute vs exact (rel 1e-3)", worst_brute <= 1e-3, f"worst {worst_brute:.3e}")
    ok &= _check(rep, "descent vs brute (rel 1e-6)", worst_desc <= 1e-6, f"worst {worst_desc:.3e}")
    return ok, rep


def _suite_commutation():
    rep = []
    ok = True
    for p, r in ((2.0, 2.0), (2.0, 1.0), (0.5, 0.5)):
        e = ExponentPair(p, r)
        C = quasi_triangle_constant(e)
        worst_lo, worst_hi = math.inf, 0.0
        for seed in range(25):
            F = random_product((11, seed), 3, 3)
            _, _, ratio = k_commutation_ratio(F, e, s=1.0, method="brute")
            worst_lo, worst_hi = min(worst_lo, ratio), max(worst_hi, ratio)
        ok &= _check(
            rep, f"commutation ({p:g},{r:g}) in [1/C, C]",
            1.0 / C <= worst_lo and worst_hi <= C,
            f"observed [{worst_lo:.6f}, {worst_hi:.6f}], C = {C:g}",
        )
    return ok, rep


def _suite_lemma61():
    rep = []
    ok = True
    worst = 0.0
    for seed in range(50):
        F = random_product((13, seed), 5, 4)
        for p in (0.5, 1.0, 2.0):
            ratio = lemma61_ratio(F, ExponentPair(p, p)).ratio
            worst = max(worst, abs(ratio - 1.0))
    ok &= _check(rep, "r = p equality (1e-12)", worst <= 1e-12, f"worst dev {worst:.3e}")
    hi = 0.0
    for seed in range(25):
        F = random_product((17, seed), 8, 8)
        hi = max(hi, lemma61_ratio(F, ExponentPair(1.0, 2.0)).ratio)
    ok &= _check(rep, "regime (i) ratio bounded", hi <= 1.0 + 1e-9, f"max {hi:.6f}")
    return ok, rep


def _suite_quadrature():
    rep = []
    ok = True
    worst = 0.0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        f = StepFunction.from_values(
            MeasureSpace.discrete(rng.uniform(0.1, 2.0, n)), rng.uniform(0.1, 5.0, n)
        )
        curve = k_curve(f, LatticeCouple.for_step(f))
        for theta, q in ((0.3, 1.0), (0.5, 2.0), (0.7, 4.0)):
            a = interp_norm(curve, InterpParams(theta, q), nodes=32)
            b = interp_norm(curve, InterpParams(theta, q), nodes=64)
            worst = max(worst, abs(a - b) / b)
    ok &= _check(rep, "node doubling < 1e-8 rel", worst < 1e-8, f"worst {worst:.3e}")
    return ok, rep


_SUITES = {
    "closed-forms": _suite_closed_forms,
    "k-oracle": _suite_k_oracle,
    "commutation": _suite_commutation,
    "lemma61": _suite_lemma61,
    "quadrature": _suite_quadrature,
}


def cmd_verify(args) -> int:
    if args.suite not in _SUITES:
        sys.stderr.write(
            f"unknown suite {args.suite!r}; choose from {', '.join(sorted(_SUITES))}\n"
        )
        return EXIT_USAGE
    ok, rep = _SUITES[args.suite]()
    for name, passed, detail in rep:
        tag = "PASS" if passed else "FAIL"
        line = f"[{tag}] {name}"
        if detail and not passed:
            line += f": {detail}"
        print(line)
    print(f"suite {args.suite}: {sum(p for _, p, _ in rep)}/{len(rep)} checks passed")
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args) -> int:
    keys = [
        ("grid-p", str, "0.25:4:0.25"),
        ("grid-r", str, "0.25:4:0.25"),
        ("seed", int, 0),
        ("draws", int, 12),
        ("out", str, "sweep.csv"),
    ]
    eff = _effective(args, keys)
    try:
        p_values = _parse_range(eff["grid-p"])
        r_values = _parse_range(eff["grid-r"])
    except ValueError as ex:
        sys.stderr.write(f"bad grid spec: {ex}\n")
        return EXIT_USAGE
    rows = sweep_plane(p_values, r_values, seed=eff["seed"], draws=eff["draws"])
    header, table = sweep_rows(rows)
    out = eff["out"]
    sidecar = os.path.splitext(out)[0] + ".json"
    try:
        _write_csv(out, header, table)
        _write_json(sidecar, {**_config_block(eff), "cells": [
            {k: _fmt_json(v) for k, v in row.items()} for row in rows
        ]})
    except OSError as ex:
        sys.stderr.write(f"cannot write output: {ex}\n")
        return EXIT_IO
    agree = sum(1 for row in rows if row["consistent"])
    print(f"{len(rows)} direction verdicts over {len(rows) // 2} cells; "
          f"{agree} consistent with the proven regions")
    return EXIT_PASS if agree == len(rows) else EXIT_FAIL


# ---------------------------------------------------------------------------
# probe


def _probe_family(args, eff):
    name = {"4.1": "F41", "4.2": "F42", "4.3": "F43", "4.4": "F44"}.get(
        eff["family"], eff["family"]
    )
    e = ExponentPair(eff["p"], eff["r"])
    verdicts = []
    if name == "F41":
        ladder = [float(x) for x in eff["alpha-ladder"].split(",")]
        for epsilon in ladder:
            verdicts.append(
                family_eval(FamilyParams("F41", alpha=e.p - epsilon), e, cross_check=True)
            )
        fit = rate_fit(
            [(eps, v.ratio) for eps, v in sorted(zip(ladder, verdicts))], "powerOfEps"
        )
    else:
        ladder = [int(x) for x in eff["n-ladder"].split(",")]
        for n in ladder:
            fp = FamilyParams(name, N=n, beta=eff["beta"] if name in ("F43", "F44") else None)
            verdicts.append(family_eval(fp, e))
        model = "powerOfN" if name == "F42" else "powerOfLogN"
        fit = rate_fit([(n, v.ratio) for n, v in zip(ladder, verdicts)], model)
    doc = {**_config_block(eff), "family": name,
           "ladder": [v.to_json() for v in verdicts], "fit": fit}
    return doc, [v.to_json() for v in verdicts], True


def cmd_probe(args) -> int:
    keys = [
        ("p", _parse_exponent, 2.0),
        ("r", _parse_exponent, 2.0),
        ("q", _parse_exponent, 2.0),
        ("theta", float, 0.5),
        ("p0", str, "2"),
        ("p1", str, "4"),
        ("r0", str, "1"),
        ("r1", str, "1"),
        ("theta0", float, 0.3),
        ("theta1", float, 0.7),
        ("vartheta", float, 0.5),
        ("sizes", str, "2,3,4"),
        ("seed", int, 0),
        ("draws", int, 3),
        ("regime", str, "auto"),
        ("heuristic", bool, False),
        ("family", str, "4.1"),
        ("alpha-ladder", str, "0.2,0.1,0.05,0.025"),
        ("n-ladder", str, "2,4,8,16"),
        ("beta", float, 0.75),
        ("out", str, "probe.json"),
    ]
    eff = _effective(args, keys)
    sizes = [int(x) for x in str(eff["sizes"]).split(",")]

    def vec(text):
        parts = [float(x) for x in str(text).split(",")]
        return (parts[0], parts[-1]) if len(parts) <= 2 else tuple(parts)

    reports = []
    ok = True
    try:
        if args.name == "family":
            doc, rows_json, ok = _probe_family(args, eff)
            out = eff["out"]
            try:
                _write_json(out, doc)
                _write_csv(
                    os.path.splitext(out)[0] + ".csv",
                    ["descriptor", "p", "r", "lhs", "rhs", "ratio"],
                    [[v["descriptor"], v["p"], v["r"], v["lhs"], v["rhs"], v["ratio"]]
                     for v in rows_json],
                )
            except OSError as ex:
                sys.stderr.write(f"cannot write output: {ex}\n")
                return EXIT_IO
            print(f"family ladder written to {out}; fit {doc['fit']}")
            return EXIT_PASS
        if args.name == "cwikel":
            e = ExponentPair(eff["p"], eff["r"])
            ip = InterpParams(eff["theta"], eff["q"])
            for n in sizes:
                for d in range(eff["draws"]):
                    F = random_product((eff["seed"], n, d), n, n)
                    reports.append(
                        cwikel_probe(F, e, ip, seed=[eff["seed"], n, d],
                                     heuristic=eff["heuristic"], regime=eff["regime"])
                    )
        elif args.name == "lemma61":
            e = ExponentPair(eff["p"], eff["r"])
            for n in sizes:
                for d in range(eff["draws"]):
                    F = random_product((eff["seed"], n, d), n, n)
                    reports.append(lemma61_ratio(F, e, seed=[eff["seed"], n, d]))
        elif args.name == "chen-sun":
            p0, p1 = vec(eff["p0"]), vec(eff["p1"])
            for n in sizes:
                for d in range(eff["draws"]):
                    F = random_product((eff["seed"], n, d), n, n)
                    reports.append(
                        log_convexity_probe(F, p0, p1, eff["theta"],
                                            seed=[eff["seed"], n, d])
                    )
        elif args.name == "corollary12":
            params = {"p0": float(eff["p0"]), "p1": float(eff["p1"]),
                      "r": float(str(eff["r0"]).split(",")[0]),
                      "theta": eff["theta"], "q": eff["q"]}
            reports = identity_probe("corollary12", params, sizes, seed=eff["seed"],
                                     draws=eff["draws"], heuristic=eff["heuristic"])
        elif args.name == "theorem11":
            params = {"p0": vec(eff["p0"]), "p1": vec(eff["p1"]),
                      "r0": vec(eff["r0"]), "r1": vec(eff["r1"]),
                      "theta0": eff["theta0"], "theta1": eff["theta1"],
                      "vartheta": eff["vartheta"], "q": eff["q"]}
            reports = identity_probe("theorem11", params, sizes, seed=eff["seed"],
                                     draws=eff["draws"], heuristic=eff["heuristic"])
        else:
            sys.stderr.write(f"unknown probe {args.name!r}\n")
            return EXIT_USAGE
    except ValueError as ex:
        sys.stderr.write(f"hypothesis violation: {ex}\n")
        return EXIT_HYPOTHESIS
    ratios = [rep.ratio for rep in reports if math.isfinite(rep.ratio)]
    ok = bool(ratios) and all(r > 0 for r in ratios)
    doc = {**_config_block(eff), "probe": args.name,
           "reports": [rep.to_json() for rep in reports],
           "ratioSpread": [min(ratios), max(ratios)] if ratios else None}
    out = eff["out"]
    try:
        _write_json(out, doc)
        header, rows = probe_rows(reports)
        _write_csv(os.path.splitext(out)[0] + ".csv", header, rows)
    except OSError as ex:
        sys.stderr.write(f"cannot write output: {ex}\n")
        return EXIT_IO
    if ratios:
        print(f"{len(reports)} reports; ratio spread [{min(ratios):.6g}, {max(ratios):.6g}]")
    else:
        print(f"{len(reports)} reports; no finite ratios")
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorentz-lab",
        description="Lorentz-norm, K-functional and Minkowski-inequality lab",
    )
    parser.add_argument("--config", help="flat key = value config file; flags override")
    sub = parser.add_subparsers(dest="command")

    p_verify = sub.add_parser("verify", help="run a named invariant suite")
    p_verify.add_argument("suite")

    p_sweep = sub.add_parser("sweep", help="(p, r) region sweep")
    p_sweep.add_argument("--grid-p", dest="grid_p")
    p_sweep.add_argument("--grid-r", dest="grid_r")
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--draws", type=int)
    p_sweep.add_argument("--out")

    p_probe = sub.add_parser("probe", help="run one probe batch")
    p_probe.add_argument("name")
    for flag, typ in [
        ("--p", _parse_exponent), ("--r", _parse_exponent), ("--q", _parse_exponent),
        ("--theta", float), ("--theta0", float), ("--theta1", float),
        ("--vartheta", float), ("--p0", str), ("--p1", str), ("--r0", str),
        ("--r1", str), ("--sizes", str), ("--seed", int), ("--draws", int),
        ("--regime", str), ("--family", str), ("--alpha-ladder", str),
        ("--n-ladder", str), ("--beta", float), ("--out", str),
    ]:
        p_probe.add_argument(flag, type=typ, dest=flag[2:].replace("-", "_"))
    p_probe.add_argument("--heuristic", action="store_const", const=True, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    if args.command == "probe":
        return cmd_probe(args)
    build_parser().print_usage(sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
