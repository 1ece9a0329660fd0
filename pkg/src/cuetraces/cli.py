"""Command-line surface: bound reports, table and curve reproduction,
verification suites, the radial quadrature estimate, and trace sampling.

Output is a single JSON document (or CSV where the deliverable is tabular)
written to stdout or --out; identical invocation and seed give byte-identical
output, so wall-clock timing goes to stderr.  Log-scaled quantities are
serialized as {sign, log10_mag}.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import analysis, bounds, montecarlo, spectral
from .numerics import ApplicabilityError, LogReal
from .trigpoly import TrigPoly, XiVector, poly_from_xi

_SCHEMA = "1"
_LN10 = math.log(10.0)

_SUITES = ("all", "bo", "moments", "generator", "laplace", "fcoeff", "tails",
           "levelset", "inequalities", "stein", "misc")


def _lr(v: LogReal) -> dict:
    return {"sign": v.sign, "log10_mag": v.ln_mag / _LN10 if v.sign else 0.0}


def _clean(obj):
    """Make a payload JSON-safe and deterministic: native types only,
    non-finite floats as strings, log-domain values expanded."""
    if isinstance(obj, LogReal):
        return _lr(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    return obj


def _json_text(payload: dict) -> str:
    return json.dumps(_clean(payload), sort_keys=True, indent=2) + "\n"


def _meta_lines(args, extra: dict | None = None) -> str:
    items = {"schema_version": _SCHEMA}
    for key in ("cmd", "which", "suite", "n", "m", "alpha", "seed", "reps",
                "tol", "n_range"):
        v = getattr(args, key, None)
        if v is not None:
            items[key] = v
    if extra:
        items.update(extra)
    return "".join(f"# meta: {k}={v}\n" for k, v in items.items())


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _u64(s: str) -> int:
    v = int(s)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit decimal")
    return v


def _parse_range(spec: str) -> range:
    parts = spec.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("range must be a:b:s")
    a, b, s = (int(p) for p in parts)
    if s < 1 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {spec!r}")
    return range(a, b + 1, s)


def _csv_table(header: str, rows: list) -> str:
    return header + "\n" + "\n".join(rows) + ("\n" if rows else "")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_bounds(args) -> tuple:
    rep = bounds.delta_chain(args.n, args.m)
    br = bounds.theta(args.n, args.m)
    payload = {
        "schema_version": _SCHEMA,
        "inputs": {"n": args.n, "m": args.m, "seed": args.seed,
                   "alpha": args.alpha},
        "delta2_bound": rep.delta2_bound,
        "delta2_condition_met": rep.delta2_condition_met,
        "delta1_bound": rep.delta1_bound,
        "delta1_refined": rep.delta1_refined,
        "tv_bound": rep.tv_bound,
        "w2_bound": rep.w2_bound,
        "applicability": rep.applicability,
        "theta_breakdown": {
            "N": br.N,
            "theta0": br.theta0, "theta1": br.theta1,
            "theta2": br.theta2, "theta3": br.theta3,
            "theta": br.theta,
            "lambda1": br.lambda1, "lambda2": br.lambda2,
            "lambda3": br.lambda3,
        },
    }
    if args.n >= 4322:
        tu = bounds.tv_uniform(args.n)
        payload["tv_uniform"] = {"m_max": tu.m_max, "bound": tu.bound,
                                 "eps_n": bounds.eps_uniform(args.n)}
    if args.alpha is not None:
        ta = bounds.tv_alpha(args.n, args.alpha)
        payload["tv_alpha"] = {"bound": ta.bound, "eps_n": ta.eps_n,
                               "n_alpha": ta.n_alpha}
    return 0, _json_text(payload)


def _cmd_table(args) -> tuple:
    if args.which == "cM":
        computed = bounds.table_cM()
        rows, max_rel = [], 0.0
        for M in sorted(computed):
            c, p = computed[M], bounds.CM_PRINTED[M]
            rel = abs(c - p) / p
            max_rel = max(max_rel, rel)
            rows.append({"M": M, "gamma": bounds.GAMMA_PRINTED[M],
                         "computed": c, "printed": p, "rel_error": rel})
        passed = max_rel <= 0.005
        if args.format == "csv":
            body = [f"{r['M']},{r['gamma']},{r['computed']:.6f},"
                    f"{r['printed']},{r['rel_error']:.3e}" for r in rows]
            text = _meta_lines(args, {"max_rel_error": f"{max_rel:.3e}"}) + \
                _csv_table("M,gamma,computed_cM,printed_cM,rel_error", body)
        else:
            text = _json_text({"schema_version": _SCHEMA, "table": "cM",
                               "rows": rows, "max_rel_error": max_rel,
                               "passed": passed})
        return (0 if passed else 1), text
    # gamma certification
    rows = []
    for m, gam in sorted(bounds.GAMMA_PRINTED.items()):
        rows.append({"m": m, "gamma": gam, "slack": bounds.gamma_slack(m, gam)})
    min_slack = min(r["slack"] for r in rows)
    passed = min_slack >= 0.0
    if args.format == "csv":
        body = [f"{r['m']},{r['gamma']},{r['slack']:.6f}" for r in rows]
        text = _meta_lines(args, {"min_slack": f"{min_slack:.6f}"}) + \
            _csv_table("m,gamma,slack", body)
    else:
        text = _json_text({"schema_version": _SCHEMA, "table": "gamma",
                           "rows": rows, "min_slack": min_slack,
                           "passed": passed})
    return (0 if passed else 1), text


def _fmt_lr_log10(v: LogReal | None) -> str:
    if v is None or v.sign == 0:
        return ""
    return f"{v.ln_mag / _LN10:.6f}"


def _cmd_curve(args) -> tuple:
    m = args.m
    if args.n_range is not None:
        nr = _parse_range(args.n_range)
    elif args.which == "theta":
        nr = range(10 * m, 2000 * m + 1, m)
    else:
        nr = range(13 * m, 2000 * m + 1, m)
    if args.which == "theta":
        rows = []
        for n in nr:
            br = bounds.theta(n, m)
            rows.append(
                f"{n},{br.N:.6g},{_fmt_lr_log10(br.theta0)},"
                f"{_fmt_lr_log10(br.theta1)},{_fmt_lr_log10(br.theta2)},"
                f"{_fmt_lr_log10(br.theta3)}")
        header = "n,N,log10_theta0,log10_theta1,log10_theta2,log10_theta3"
        text = _meta_lines(args, {"series": "theta_terms"}) + \
            _csv_table(header, rows)
        return 0, text
    rows, skipped = [], 0
    for n in nr:
        try:
            rep = bounds.delta_chain(n, m)
        except ApplicabilityError:
            skipped += 1
            continue
        rows.append(f"{n},{_fmt_lr_log10(rep.delta2_bound)}")
    text = _meta_lines(args, {
        "series": "delta2_upper_bound",
        "note": "values are the proven upper bound on the squared distance"
                " root, not the distance itself",
        "skipped_inapplicable": skipped}) + \
        _csv_table("n,log10_delta2_bound", rows)
    return 0, text


def _parse_xi(text: str, m: int | None) -> XiVector:
    vals = [float(v) for v in text.split(",") if v.strip() != ""]
    if len(vals) % 2 != 0 or not vals:
        raise argparse.ArgumentTypeError("--xi needs an even-length list")
    if m is not None and len(vals) != 2 * m:
        raise argparse.ArgumentTypeError(
            f"--xi has {len(vals)} entries, expected 2m = {2 * m}")
    return XiVector.from_array(np.asarray(vals))


def _cmd_charfn(args) -> tuple:
    xi = _parse_xi(args.xi, args.m)
    tp = spectral.char_fn(xi, args.n)
    bo = spectral.bo_det(xi, args.n)
    resid = abs(tp.value - bo.value)
    rel = resid / max(abs(tp.value), 1e-300)
    payload = {
        "schema_version": _SCHEMA,
        "inputs": {"n": args.n, "m": xi.m, "xi": list(xi.xi)},
        "toeplitz": {"value": tp.value, "truncation": tp.truncation},
        "borodin_okounkov": {"value": bo.value, "truncation": bo.truncation},
        "residual_abs": resid,
        "residual_rel": rel,
    }
    return 0, _json_text(payload)


# ----------------------------------------------------------------- verify


def _random_xi(rng, m: int, max_norm: float, min_norm: float = 0.05) -> XiVector:
    v = rng.standard_normal(2 * m)
    v *= rng.uniform(min_norm, max_norm) / np.linalg.norm(v)
    return XiVector.from_array(v)


def _suite_bo(args) -> dict:
    rng = np.random.default_rng(args.seed)
    tol = args.tol if args.tol is not None else 1e-8
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 25))
        m = int(rng.integers(1, 4))
        xi = _random_xi(rng, m, 2.0)
        t = spectral.char_fn(xi, n).value
        b = spectral.bo_det(xi, n).value
        worst = max(worst, abs(t - b) / max(abs(t), 1e-300))
    return {"cases": 50, "max_rel_residual": worst, "tol": tol,
            "passed": worst <= tol}


def _suite_moments(args) -> dict:
    reps = args.reps if args.reps else 200000
    rep = montecarlo.ds_verify(16, 4, 8, reps, args.seed)
    return {"n": rep.n, "m": rep.m, "max_weight": rep.max_weight,
            "reps": rep.reps, "checked": len(rep.checks),
            "failed": rep.n_failed, "worst_deviation_se": rep.worst_deviation,
            "out_of_theorem": rep.out_of_theorem,
            "passed": rep.n_failed == 0}


def _random_config(rng, n: int) -> montecarlo.Configuration:
    while True:
        try:
            return montecarlo.Configuration(
                n=n, theta=tuple(rng.uniform(0.0, 2.0 * math.pi, n).tolist()))
        except ValueError:
            continue


def _suite_generator(args) -> dict:
    rng = np.random.default_rng(args.seed)
    tol = args.tol if args.tol is not None else 1e-9
    worst_gen = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 51))
        k = int(rng.integers(1, 9))
        worst_gen = max(worst_gen, montecarlo.generator_residual(
            _random_config(rng, n), k))
    worst_gamma = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 51))
        m = int(rng.integers(1, 9))
        worst_gamma = max(worst_gamma, montecarlo.gamma_identities(
            _random_config(rng, n), m))
    return {"max_residual": worst_gen, "max_gamma_residual": worst_gamma,
            "tol": tol, "passed": worst_gen < tol and worst_gamma < tol}


def _suite_laplace(args) -> dict:
    rng = np.random.default_rng(args.seed)
    min_margin = math.inf
    n_strict = 0
    for _ in range(200):
        n = int(rng.integers(1, 65))
        m = int(rng.integers(1, 7))
        f = poly_from_xi(_random_xi(rng, m, 3.0, 0.1))
        pair = spectral.laplace_pair(f, n)
        margin = pair.upper_bound.ln_mag - pair.value.ln_mag
        min_margin = min(min_margin, margin)
        n_strict += margin > 1e-10
    worst_szego = 0.0
    for _ in range(20):
        m = int(rng.integers(1, 4))
        f = poly_from_xi(_random_xi(rng, m, 1.0, 0.1))
        pair = spectral.laplace_pair(f, 32)
        worst_szego = max(worst_szego,
                          abs(math.expm1(pair.value.ln_mag
                                         - pair.upper_bound.ln_mag)))
    # moments of the two sides agree to weighted degree n, so at large n the
    # true gap sits far below double precision: demand no violation beyond
    # round-off and report how many cases show a measurable strict gap
    return {"cases": 200, "min_log_margin": min_margin,
            "strictly_separated_cases": n_strict,
            "szego_cases": 20, "szego_max_residual": worst_szego,
            "passed": min_margin >= -1e-10 and n_strict > 0
            and worst_szego < 1e-6}


def _suite_fcoeff(args) -> dict:
    rng = np.random.default_rng(args.seed)
    min_fc = math.inf
    for _ in range(40):
        m = int(rng.integers(1, 6))
        xi = _random_xi(rng, m, 2.0, 0.1)
        rho = math.sqrt((1.0 + math.log(m)) / 2.0) * xi.norm()
        k0 = int(math.floor(2.0 * m * rho)) + 1
        min_fc = min(min_fc, spectral.fcoeff_bound_check(
            xi, range(k0, k0 + 2 * m + 1)))
    min_j1 = math.inf
    for _ in range(15):
        # keep rho close to the admissibility ceiling N/4: far below it the
        # predicted determinant gap sinks under double-precision noise and
        # the measured gap would reflect round-off, not the envelope
        m = int(rng.integers(1, 4))
        n = int(rng.integers(8 * m, 12 * m + 1))
        rho = rng.uniform(0.7, 0.95) * (n / m) / 4.0
        norm = rho / math.sqrt((1.0 + math.log(m)) / 2.0)
        xi = _random_xi(rng, m, norm, 0.999 * norm)
        min_j1 = min(min_j1, spectral.j1_envelope_check(xi, n))
    return {"fcoeff_min_margin": min_fc, "j1_min_log_margin": min_j1,
            "passed": min_fc >= -1e-12 and min_j1 >= -1e-12}


def _suite_tails(args) -> dict:
    n = args.n if args.n is not None else 64
    m = args.m if args.m is not None else 3
    reps = args.reps if args.reps else 10000
    rep = analysis.tail_inequality_suite(n, m, reps=reps, seed=args.seed)
    rep["passed"] = bool(rep["min_margin"] >= -1e-12 and rep["mc_passed"])
    return rep


def _suite_levelset(args) -> dict:
    rng = np.random.default_rng(args.seed)
    min_margin = math.inf
    for _ in range(100):
        m = int(rng.integers(1, 7))
        f = poly_from_xi(_random_xi(rng, m, 3.0, 0.05))
        l2 = math.sqrt(sum(abs(z) ** 2 / k for k, z in
                           enumerate(f.zeta, start=1)))
        lams = np.sqrt(2.0) * l2 * np.logspace(-4.0, 0.0, 5)
        rep = analysis.levelset_check(f, lams)
        min_margin = min(min_margin, rep["min_margin"])
    cos_poly = TrigPoly(m=1, zeta=(1.0 / math.sqrt(2.0),))
    cos_rep = analysis.levelset_check(cos_poly, [0.1])
    exact = 2.0 * math.asin(0.1) / math.pi
    cos_err = abs(cos_rep["grid"][0]["measure"] - exact)
    return {"cases": 100, "min_margin": min_margin,
            "cos_measure_error": cos_err,
            "passed": min_margin >= -1e-12 and cos_err < 1e-4}


def _suite_inequalities(args) -> dict:
    rep = bounds.certify_inequalities()
    min_gamma = bounds.gamma_table_certify()
    computed = bounds.table_cM()
    max_rel = max(abs(computed[M] - p) / p
                  for M, p in bounds.CM_PRINTED.items())
    checks = {
        "upsilon1_min_margin": rep["upsilon1"]["min_margin"],
        "upsilon2_min_margin": rep["upsilon2"]["min_margin"],
        "theta0_envelope_min": rep["theta0_envelope"]["min_margin"],
        "theta1_envelope_min": rep["theta1_envelope"]["min_margin"],
        "theta2_quadratic_min": rep["theta2_envelope_quadratic"]["min_margin"],
        "theta2_threehalves_min": rep["theta2_envelope_threehalves"]["min_margin"],
        "tail_domination_min": rep["theta_tail_domination"]["min_log_margin"],
        "lambda12_min": rep["lambda12_ordering"]["min_margin"],
        "lambda23_min": rep["lambda23_ordering"]["min_log_margin"],
        "gamma_min_slack": min_gamma,
        "cM_max_rel_error": max_rel,
    }
    margins_ok = all(v >= 0.0 for k, v in checks.items()
                     if k.endswith(("_margin", "_min", "_slack")))
    return {**checks, "detail": rep,
            "passed": bool(margins_ok and max_rel <= 0.005)}


def _suite_stein(args) -> dict:
    reps = args.reps if args.reps else 20000
    out = {"cases": []}
    ok = True
    for (n, m) in ((20, 3), (40, 5)):
        r = montecarlo.stein_terms(n, m, reps, args.seed)
        ok &= r.pass_A and r.pass_B
        out["cases"].append({
            "n": n, "m": m, "closed_A": r.closed_A, "mc_A": r.mc_A,
            "se_A": r.se_A, "pass_A": r.pass_A, "closed_B": r.closed_B,
            "mc_B": r.mc_B, "se_B": r.se_B, "pass_B": r.pass_B})
    grid = []
    dom_ok = True
    for m in (3, 4, 5, 8):
        for n in (10 * m, 20 * m, 50 * m):
            lhs = (math.sqrt((2 * m + 5) * m * (m - 1) / (9.0 * n ** 2))
                   + math.sqrt((8 * m + 7) * (m + 1) * m / (6.0 * n ** 2)))
            rhs = bounds.w2_bound(n, m)
            good = lhs <= rhs
            dom_ok &= good
            grid.append({"n": n, "m": m, "sqrtA_plus_sqrtB": lhs,
                         "w2_bound": rhs, "passed": good})
    out["w2_domination"] = {"grid": grid, "passed": dom_ok}
    out["passed"] = bool(ok and dom_ok)
    return out


def _suite_misc(args) -> dict:
    reps = args.reps if args.reps else 20000
    return analysis.misc_lemma_suite(seed=args.seed, reps=reps)


_SUITE_FNS = {
    "bo": _suite_bo,
    "moments": _suite_moments,
    "generator": _suite_generator,
    "laplace": _suite_laplace,
    "fcoeff": _suite_fcoeff,
    "tails": _suite_tails,
    "levelset": _suite_levelset,
    "inequalities": _suite_inequalities,
    "stein": _suite_stein,
    "misc": _suite_misc,
}


def _cmd_verify(args) -> tuple:
    names = list(_SUITE_FNS) if args.suite == "all" else [args.suite]
    results = {}
    all_ok = True
    for name in names:
        results[name] = _SUITE_FNS[name](args)
        all_ok &= bool(results[name]["passed"])
    payload = {"schema_version": _SCHEMA,
               "inputs": {"suite": args.suite, "seed": args.seed,
                          "reps": args.reps, "tol": args.tol},
               "results": results, "passed": all_ok}
    if args.format == "csv":
        rows = [f"{name},{int(res['passed'])}" for name, res in results.items()]
        text = _meta_lines(args) + _csv_table("suite,passed", rows)
    else:
        text = _json_text(payload)
    return (0 if all_ok else 1), text


def _cmd_estimate(args) -> tuple:
    res = analysis.delta2_numeric_m1(args.n)
    payload = {
        "schema_version": _SCHEMA,
        "inputs": {"n": args.n, "m": 1},
        "value": res.value,
        "log10_value": math.log10(res.value) if res.value > 0 else "-inf",
        "error_estimate": res.error_estimate,
        "panel_error": res.panel_error,
        "tail_error": res.tail_error,
        "truncation_radius": res.truncation_radius,
    }
    return 0, _json_text(payload)


def _cmd_sample(args) -> tuple:
    samples = montecarlo.sample_traces(args.n, args.m, args.reps or 100,
                                       args.seed)
    text = _meta_lines(args) + montecarlo.traces_to_csv(samples)
    return 0, text


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cuetraces",
        description="Distance bounds and verification suites for the "
                    "trace vector of a Haar-random unitary.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, *, n_required=False, m_default=None):
        p.add_argument("--n", type=int, required=n_required, default=None,
                       help="matrix size")
        p.add_argument("--m", type=int, default=m_default,
                       help="number of traces")
        p.add_argument("--seed", type=_u64, default=0,
                       help="unsigned 64-bit decimal seed")
        p.add_argument("--reps", type=int, default=0,
                       help="Monte Carlo replicas (0 = suite default)")
        p.add_argument("--tol", type=float, default=None,
                       help="override pass tolerance where applicable")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (recorded; results are "
                            "thread-count independent)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("bounds", help="bound chain at one (n, m)")
    common(p, n_required=True)
    p.add_argument("--alpha", type=float, default=None,
                   help="degree-growth exponent in (0, 1/2)")
    p.set_defaults(fn=_cmd_bounds, m_required=True)

    p = sub.add_parser("table", help="constant-table reproduction")
    p.add_argument("which", choices=("cM", "gamma"))
    common(p)
    p.set_defaults(fn=_cmd_table)

    p = sub.add_parser("curve", help="curve data as CSV")
    p.add_argument("which", choices=("theta", "delta2-bound"))
    common(p, m_default=3)
    p.add_argument("--n-range", dest="n_range", default=None,
                   help="a:b:s inclusive range of n")
    p.set_defaults(fn=_cmd_curve)

    p = sub.add_parser("charfn", help="characteristic function both ways")
    common(p, n_required=True)
    p.add_argument("--xi", required=True,
                   help="comma-separated 2m real coordinates")
    p.set_defaults(fn=_cmd_charfn)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=_SUITES)
    common(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("estimate", help="direct numerical estimates")
    p.add_argument("target", choices=("delta2-m1",))
    common(p, n_required=True)
    p.set_defaults(fn=_cmd_estimate)

    p = sub.add_parser("sample", help="trace samples as CSV")
    common(p, n_required=True)
    p.set_defaults(fn=_cmd_sample)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.cmd in ("bounds", "charfn", "sample") and args.m is None \
            and args.cmd != "charfn":
        ap.error(f"{args.cmd} requires --m")
    t0 = time.perf_counter()
    try:
        code, text = args.fn(args)
    except ApplicabilityError as exc:
        base = exc.hypothesis.split(" (")[0]
        detail = exc.hypothesis[len(base):].strip()
        msg = f"applicability error: {base} violated"
        print(msg + (f" {detail}" if detail else ""), file=sys.stderr)
        return 3
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write(text, args.out)
    print(f"elapsed_s={time.perf_counter() - t0:.3f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
