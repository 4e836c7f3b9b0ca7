"""Command-line front end: build certificates, re-verify them, write reports.

Every subcommand writes one canonical JSON report (to ``--out`` or stdout)
holding its inputs, exact outputs, named checks and the statement it
instantiates.  Exit codes: 0 all checks pass, 1 a check failed, 2 usage
error.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from fractions import Fraction

from . import approx, blekherman, duals, pstellensatz, quantum
from .hypercube import MultiPoly, SymProfile, fk_poly, hyper_error, reduce_multilinear, substitute_sum
from .polycore import as_rational
from .serialize import emit_report, load, multi, rat, uni, unmulti, unrat, ununi

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _report(command: str, claim: str, inputs: dict, outputs: dict, checks: dict, certificate=None) -> dict:
    rep = {
        "command": command,
        "claim": claim,
        "inputs": inputs,
        "outputs": outputs,
        "checks": checks,
        "ok": all(bool(v) for v in checks.values()),
    }
    if certificate is not None:
        rep["certificate"] = certificate
    return rep


# ---------------------------------------------------------------------------
# knapsack refutations
# ---------------------------------------------------------------------------

CLAIM_KNAPSACK = "for k < r < k+1 the knapsack system sum x_i = r, x_i^2 = x_i has a Positivstellensatz refutation of degree 2k+4"


def _refutation_certificate(ref: pstellensatz.Refutation) -> dict:
    hs = ref.h_sos
    return {
        "kind": "knapsack-refutation",
        "n": ref.n,
        "k": ref.k,
        "r": rat(ref.r),
        "b": rat(ref.b),
        "g": uni(ref.g_uni),
        "g_list": [multi(g) for g in ref.g_list] if ref.g_list is not None else None,
        "h_sos": {
            "scale": rat(hs.scale),
            "size": hs.size,
            "squares": [multi(s) for s in hs.squares] if hs.squares is not None else None,
        },
    }


def _refutation_from_certificate(c: dict) -> pstellensatz.Refutation:
    n, k = int(c["n"]), int(c["k"])
    r = unrat(c["r"])
    g_uni = ununi(c["g"])
    hs = c["h_sos"]
    squares = [unmulti(s) for s in hs["squares"]] if hs["squares"] is not None else None
    h_sos = pstellensatz.HSos(unrat(hs["scale"]), int(hs["size"]), squares)
    ref = pstellensatz.Refutation(n, k, r, unrat(c["b"]), k + 2, g_uni, h_sos)
    if c["g_list"] is not None:
        ref.g = substitute_sum(g_uni, n)
        ref.g_list = [unmulti(g) for g in c["g_list"]]
        if len(ref.g_list) != n:
            raise ValueError("g_list must have one multiplier per variable")
        ref.h = h_sos.expand(n) if squares is not None else MultiPoly(n)
    return ref


def _verify_refutation_report(ref, mode, seed) -> dict:
    mode = mode or ("expand" if ref.expanded else "random_eval")
    check = pstellensatz.verify_refutation(ref, mode, seed)
    outputs = {"degree": check.degree, "mode": mode, "soundness": check.soundness, "reason": check.reason}
    # verify_refutation also enforces degree 2k+4 whenever h is nonzero (k+2 <= n)
    checks = {"identity_sos_and_degree": check.ok}
    return outputs, checks


def cmd_refute_knapsack(args):
    _need(args, "n", "k", "r")
    ref = pstellensatz.knapsack_refutation(args.n, args.k, args.r)
    outputs, checks = _verify_refutation_report(ref, args.mode, args.seed)
    outputs["b"] = ref.b
    inputs = {"n": args.n, "k": args.k, "r": args.r, "seed": args.seed}
    return _report("refute-knapsack", CLAIM_KNAPSACK, inputs, outputs, checks, _refutation_certificate(ref))


# ---------------------------------------------------------------------------
# verify-cert
# ---------------------------------------------------------------------------


def _verify_middle_cert(c):
    params = approx.MiddleParams(int(c["n"]), unrat(c["eps"]), unrat(c["a_sq"]))
    p, d = ununi(c["p"]), int(c["d"])
    expected, d_expected = approx.middle_poly(params)
    rep = approx.verify_middle(params, p, d)
    return {
        "matches_construction": p == expected and d == d_expected,
        "nonneg": rep.nonneg,
        "small_on_outer": rep.small_on_outer,
        "bounded_by_two": rep.bounded_by_two,
        "degree_bound": rep.degree_bound_ok,
    }


def _verify_l1_cert(c):
    n, delta = int(c["n"]), unrat(c["delta"])
    h = ununi(c["h"])
    approx.check_l1_hypothesis(n, delta)
    params = approx.MiddleParams(n, delta / 2, delta * delta * n / 64)
    d = approx.chebyshev_degree(n, params.eps, params.a_sq)
    rc = approx.certify_middle_reduced(params, d)
    cert = approx.L1Cert(n, delta, params.eps, params.a_sq, h, rc, int(c["half_degree"]),
                         approx.l1_degree_claim(n, delta), unrat(c["l1_error"]), [])
    checks = approx.verify_l1_cert(cert)
    checks["half_degree_within_claim"] = approx.l1_degree_within_claim(n, delta, int(c["half_degree"]))
    return checks


def _verify_blekherman_cert(c):
    ps = [unmulti(p) for p in c["ps"]]
    d = blekherman.BlekhermanDecomp(int(c["n"]), int(c["t"]), [])
    for term in c["terms"]:
        gram = [[unrat(x) for x in row] for row in term["gram"]]
        d.terms.append(blekherman.BlekhermanTerm(int(term["j"]), gram, blekherman.gram_to_poly(gram)))
    res = blekherman.verify_blekherman(d, blekherman.sym_square_target(ps))
    return {"recombination_and_psd": res.ok}


def _profile_from(c) -> SymProfile:
    prof = c["profile"]
    return SymProfile(int(prof["n"]), tuple(unrat(v) for v in prof["values"]))


def _verify_density_cert(c):
    prof = _profile_from(c)
    d = int(c["d"])
    return {"mean_is_one": prof.expectation() == 1, "moments_psd": duals.check_moment_sign(prof, d, "psd")}


def _verify_witness_cert(c):
    prof = _profile_from(c)
    n = prof.n
    w = duals.Witness(n, int(c["d"]), unrat(c["delta"]), prof)
    rep = duals.witness_check(w, fk_poly(n, n // 2))
    return {"correlation_exceeds_delta": rep.correlation_ok, "moments_nsd": rep.moments_ok, "norm_one": rep.norm_ok}


def _verify_sampling_cert(c):
    n, k, q = int(c["n"]), int(c["k"]), int(c["queries"])
    delta = unrat(c["delta"])
    outs = [unrat(o) for o in c["outputs"]]
    h = ununi(c["h"])
    rebuilt = sum((approx.hypergeometric_poly(n, q, j) * o for j, o in enumerate(outs) if o), ununi([]))
    _, l1 = hyper_error(h, fk_poly(n, k), n)
    return {
        "outputs_nonnegative": all(o >= 0 for o in outs),
        "h_matches_outputs": rebuilt == h,
        "l1_within_budget": l1 <= delta * 2**n,
    }


VERIFIERS = {
    "middle-poly": _verify_middle_cert,
    "l1-approx": _verify_l1_cert,
    "blekherman": _verify_blekherman_cert,
    "pseudo-density": _verify_density_cert,
    "witness": _verify_witness_cert,
    "sampling-approx": _verify_sampling_cert,
}


def cmd_verify_cert(args):
    if args.cert is None:
        raise UsageError("verify-cert needs a certificate path")
    with open(args.cert, "rb") as fh:
        data = load(fh.read())
    c = data.get("certificate", data) if isinstance(data, dict) else None
    if not isinstance(c, dict) or "kind" not in c:
        return _report("verify-cert", "", {"path": args.cert}, {"error": "no certificate found"}, {"parsed": False})
    kind = c["kind"]
    try:
        if kind == "knapsack-refutation":
            ref = _refutation_from_certificate(c)
            outputs, checks = _verify_refutation_report(ref, args.mode, args.seed)
        elif kind in VERIFIERS:
            outputs, checks = {}, VERIFIERS[kind](c)
        else:
            return _report("verify-cert", "", {"path": args.cert}, {"error": f"unknown kind {kind}"}, {"parsed": False})
    except (KeyError, ValueError, TypeError, ZeroDivisionError, AssertionError) as exc:
        return _report("verify-cert", "", {"path": args.cert, "kind": kind}, {"error": str(exc)}, {"parsed": False})
    return _report("verify-cert", data.get("claim", ""), {"path": args.cert, "kind": kind, "seed": args.seed}, outputs, checks)


# ---------------------------------------------------------------------------
# approximations
# ---------------------------------------------------------------------------

CLAIM_L1 = "sos-deg_{delta 2^n}(f_{floor(n/2)}, l1) <= ceil(3 sqrt(n) / (sqrt(2) delta) ln(1/delta))"
CLAIM_MIDDLE = (
    "p(z) >= 1/4 - z^2 everywhere, |p| <= eps on a^2 <= z^2 <= n^2/4, |p| <= 2 on 1/4 <= z^2 <= n^2/4, "
    "with Chebyshev degree at most ceil(3n/(4 sqrt(2) a) ln(1/(2 eps))) + 1"
)
CLAIM_SAMPLING = "for k < 0.49 n a classical O(log(1/delta))-query sampler gives an sos l1-approximation of f_k"


def cmd_l1_approx(args):
    _need(args, "n", "delta")
    cert = approx.l1_approx_build(args.n, args.delta)
    checks = {
        "l1_within_budget": cert.l1_ok,
        "nonneg_certificate": approx.check_reduced_cert(cert.nonneg),
        "half_degree_within_claim": cert.degree_ok,
    }
    outputs = {"half_degree": cert.half_degree, "claimed_bound": cert.claimed_bound, "l1_error": cert.l1_error,
               "display_l1_over_2n": float(cert.l1_error / 2**args.n)}
    certificate = {"kind": "l1-approx", "n": args.n, "delta": rat(args.delta), "h": uni(cert.h),
                   "half_degree": cert.half_degree, "degree_bound": cert.claimed_bound,
                   "l1_error": rat(cert.l1_error),
                   "eps": rat(cert.eps), "a_sq": rat(cert.a_sq)}
    return _report("l1-approx", CLAIM_L1, {"n": args.n, "delta": args.delta}, outputs, checks, certificate)


def cmd_middle_poly(args):
    _need(args, "n", "eps")
    a_sq = args.a_sq if args.a_sq is not None else Fraction(1, 2)
    params = approx.MiddleParams(args.n, args.eps, a_sq)
    p, d = approx.middle_poly(params)
    rep = approx.verify_middle(params, p, d, seed=args.seed)
    checks = {"nonneg": rep.nonneg and rep.nonneg_full is not False, "small_on_outer": rep.small_on_outer,
              "bounded_by_two": rep.bounded_by_two, "degree_bound": rep.degree_bound_ok}
    outputs = {"d_star": d, "degree_ceiling": rep.degree_ceiling, "worst_outer": rep.worst_outer,
               "worst_band": rep.worst_band, "points_checked": rep.points_checked}
    certificate = {"kind": "middle-poly", "n": args.n, "eps": rat(args.eps), "a_sq": rat(a_sq), "d": d, "p": uni(p)}
    return _report("middle-poly", CLAIM_MIDDLE, {"n": args.n, "eps": args.eps, "a_sq": a_sq, "seed": args.seed},
                   outputs, checks, certificate)


def cmd_sampling_approx(args):
    _need(args, "n", "k", "delta")
    c = args.c if args.c is not None else 6
    rule = args.mode or "estimate"
    s = approx.sampling_approx_build(args.n, args.k, args.delta, c, value=rule)
    checks = {"l1_within_budget": s.l1_ok, "outputs_nonnegative": all(o >= 0 for o in s.outputs)}
    outputs = {"queries": s.queries, "l1_error": s.l1_error, "display_l1_over_2n": float(s.l1_error / 2**args.n)}
    certificate = {"kind": "sampling-approx", "n": args.n, "k": args.k, "delta": rat(args.delta),
                   "queries": s.queries, "outputs": [rat(o) for o in s.outputs], "h": uni(s.h)}
    inputs = {"n": args.n, "k": args.k, "delta": args.delta, "c": c, "rule": rule}
    return _report("sampling-approx", CLAIM_SAMPLING, inputs, outputs, checks, certificate)


# ---------------------------------------------------------------------------
# quantum simulation
# ---------------------------------------------------------------------------

CLAIM_MAIN = "for every x the expected output of the algorithm is within eps of (|x|-k)(|x|-k-1)"


def cmd_simulate_main(args):
    _need(args, "n", "k", "eps")
    env = quantum.main_simulate(args.n, args.k, args.eps)
    rows = [{"w": r.w, "lo": r.lo, "hi": r.hi, "target": r.target, "p_fail_hi": r.p_fail[1], "exact": r.exact}
            for r in env.rows]
    chain_ok = all(all(v for key, v in r.chain.items() if key in ("p_le_delta", "delta_w2_le_eps")) for r in env.rows)
    checks = {"envelope_within_eps": env.ok, "failure_chain": chain_ok}
    outputs = {"m": env.m, "query_count": env.query_count, "violations": env.violations, "envelope": rows}
    return _report("simulate-main", CLAIM_MAIN, {"n": args.n, "k": args.k, "eps": args.eps}, outputs, checks)


# ---------------------------------------------------------------------------
# Blekherman decompositions and spectra
# ---------------------------------------------------------------------------

CLAIM_BLEK = "Sym(sum p_i^2) = sum_j q_j(z) prod_{i<j} (z-i)(n-z-i) with each q_j a univariate sum of squares"
CLAIM_SPECTRUM = "the Johnson graph J(n,t) has eigenvalues (t-i)(n-t-i) - i with multiplicities C(n,i) - C(n,i-1), and dim Ker W_t = C(n,t) - C(n,t-1)"


def cmd_blekherman(args):
    _need(args, "n", "t")
    rng = random.Random(args.seed)
    count = args.trials if args.trials is not None else 1
    ps = [reduce_multilinear(duals.random_poly(args.n, args.t, rng, terms=5)) for _ in range(count)]
    d = blekherman.blekherman_decompose(ps, args.t)
    res = blekherman.verify_blekherman(d, blekherman.sym_square_target(ps))
    certificate = {"kind": "blekherman", "n": args.n, "t": args.t, "ps": [multi(p) for p in ps],
                   "terms": [{"j": tm.j, "gram": [[rat(x) for x in row] for row in tm.gram]} for tm in d.terms]}
    outputs = {"q": {str(tm.j): uni(tm.poly) for tm in d.terms}, "messages": res.messages}
    return _report("blekherman", CLAIM_BLEK, {"n": args.n, "t": args.t, "seed": args.seed, "trials": count},
                   outputs, {"recombination_and_psd": res.ok}, certificate)


def cmd_spectrum(args):
    _need(args, "n", "t")
    spec = blekherman.johnson_spectrum(args.n, args.t)
    checks = {
        "spectrum_verified": blekherman.verify_johnson_spectrum(args.n, args.t),
        "kernel_dimension": blekherman.kernel_dimension(args.n, args.t)
        == len(blekherman.kernel_basis(args.n, args.t)),
        "kernel_basis_verified": blekherman.verify_kernel_basis(args.n, args.t),
    }
    outputs = {"spectrum": [{"eigenvalue": e, "multiplicity": m} for e, m in spec],
               "kernel_dimension": blekherman.kernel_dimension(args.n, args.t)}
    return _report("spectrum", CLAIM_SPECTRUM, {"n": args.n, "t": args.t}, outputs, checks)


# ---------------------------------------------------------------------------
# dual objects
# ---------------------------------------------------------------------------

CLAIM_GRIG = "G_r vanishes on the knapsack ideal, G_r(1) = 1, and G_r(p^2) >= 0 for deg p <= k+1 when k < r < n-k"
CLAIM_DENSITY = "there is a degree-(n-1) pseudo-density D with E[D f_{floor(n/2)}] / ||D||_inf < -1/(4 sqrt n)"
CLAIM_WITNESS = "E[f psi] > delta, E[p^2 psi] <= 0 for deg p <= d and ||psi||_inf = 1 imply sos-deg_{delta 2^n}(f, l1) > d"
CLAIM_APPD = "A(m) = sum_{i<=m} (C(2i,i)/4^i)^2 and any degree-(n-1)/2 sos has l_inf error >= 1/(4 A((n-1)/2)) on f_{floor(n/2)}"


def cmd_grigoriev(args):
    _need(args, "n", "r", "k")
    trials = args.trials if args.trials is not None else 200
    rep = duals.grig_property_report(args.n, args.r, args.k, trials, args.seed)
    outputs = {"min_square_value": rep.min_square_value, "failures": len(rep.failures),
               "lower_bound_degree": min(args.n, 2 * args.k + 4)}
    inputs = {"n": args.n, "r": args.r, "k": args.k, "trials": trials, "seed": args.seed}
    return _report("grigoriev", CLAIM_GRIG, inputs, outputs, dict(rep.checks))


def cmd_pseudo_density(args):
    _need(args, "n")
    pd = duals.pseudo_density_build(args.n)
    checks = {"mean_is_one": pd.mean == 1, "e_df_is_minus_quarter": pd.e_df == Fraction(-1, 4),
              "moments_psd": duals.check_moment_sign(pd.profile, pd.d, "psd"), "ratio_beats_bound": pd.beats_sqrt_bound}
    outputs = {"e_df": pd.e_df, "sup_norm": pd.sup, "ratio": pd.ratio, "display_ratio": float(pd.ratio)}
    certificate = {"kind": "pseudo-density", "n": pd.n, "d": pd.d, "profile": pd.profile}
    return _report("pseudo-density", CLAIM_DENSITY, {"n": args.n}, outputs, checks, certificate)


def cmd_witness_check(args):
    if args.cert is not None:
        with open(args.cert, "rb") as fh:
            data = load(fh.read())
        c = data.get("certificate", data)
        checks = _verify_witness_cert(c)
        return _report("witness-check", CLAIM_WITNESS, {"path": args.cert}, {}, checks)
    _need(args, "n", "delta")
    pd = duals.pseudo_density_build(args.n)
    w = duals.witness_from_density(pd, args.delta)
    if args.d is not None:
        w = duals.Witness(w.n, args.d, w.delta, w.profile)
    rep = duals.witness_check(w, fk_poly(args.n, args.n // 2))
    checks = {"correlation_exceeds_delta": rep.correlation_ok, "moments_nsd": rep.moments_ok, "norm_one": rep.norm_ok}
    certificate = {"kind": "witness", "n": w.n, "d": w.d, "delta": rat(w.delta), "profile": w.profile}
    outputs = {"correlation": rep.correlation, "certified_lower_bound": f"sos-deg > {w.d}" if rep.ok else None}
    return _report("witness-check", CLAIM_WITNESS, {"n": args.n, "delta": args.delta, "d": w.d}, outputs, checks,
                   certificate)


def cmd_appendix_d(args):
    if args.m is None and args.n is None:
        raise UsageError("appendix-d needs --m and/or --n")
    outputs, checks = {}, {}
    if args.m is not None:
        a = duals.appendix_d_A(args.m)
        outputs["A"] = a
        outputs["A_next_minus_A"] = duals.appendix_d_A(args.m + 1) - a
        checks["recurrence"] = outputs["A_next_minus_A"] == Fraction(
            math.comb(2 * args.m + 2, args.m + 1), 4 ** (args.m + 1)) ** 2
        checks["product_form"] = a == duals.product_form_A(args.m)
    if args.n is not None:
        b = duals.linf_error_lower(args.n)
        outputs.update({"linf_bound": b.bound, "abs_lagrange_sum": b.abs_sum,
                        "display_asymptotic": b.display_asymptotic, "display_relative_gap": b.display_relative_gap})
        checks["abs_sum_equals_A"] = b.identity_ok
    return _report("appendix-d", CLAIM_APPD, {"m": args.m, "n": args.n}, outputs, checks)


COMMANDS = {
    "refute-knapsack": cmd_refute_knapsack,
    "verify-cert": cmd_verify_cert,
    "l1-approx": cmd_l1_approx,
    "middle-poly": cmd_middle_poly,
    "simulate-main": cmd_simulate_main,
    "blekherman": cmd_blekherman,
    "spectrum": cmd_spectrum,
    "grigoriev": cmd_grigoriev,
    "pseudo-density": cmd_pseudo_density,
    "witness-check": cmd_witness_check,
    "appendix-d": cmd_appendix_d,
    "sampling-approx": cmd_sampling_approx,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symsos", description="Build and verify exact sum-of-squares certificates.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("cert", nargs="?", help="certificate file (verify-cert, witness-check)")
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--r", type=_rational)
    parser.add_argument("--delta", type=_rational)
    parser.add_argument("--eps", type=_rational)
    parser.add_argument("--a-sq", dest="a_sq", type=_rational, help="a^2 for middle-poly (default 1/2)")
    parser.add_argument("--c", type=int, help="query multiplier for sampling-approx (default 6)")
    parser.add_argument("--m", type=int)
    parser.add_argument("--t", type=int)
    parser.add_argument("--d", type=int)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--mode")
    parser.add_argument("--out")
    parser.add_argument("--trials", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        report = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"symsos: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OverflowError) as exc:
        print(f"symsos: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"symsos: {exc}", file=sys.stderr)
        return EXIT_USAGE
    data = emit_report(report)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK if report["ok"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
