"""Command-line front end.

Every verb writes JSON-lines report records (or CSV / a plain table with
``--format``).  Exit codes: 0 success, 1 a property check failed, 2 invalid
input.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .adic import (
    doubling_constant,
    nadic_double,
    nadic_halve,
    solenoid_double,
    solenoid_doubling_kernel,
    solenoid_halve,
)
from .errors import LCAError, NotTwoRegular
from .groups import enumerate_subgroups, generated_subgroup
from .phase_space import (
    EXACT_TOL,
    StateVector,
    fourier,
    min_entry,
    random_state,
    reflect,
    smooth_with_subgroup,
    stft,
    tensor,
    wigner,
)
from .schwartz_bruhat import random_sb, sb_min, sb_wigner
from .second_degree import (
    SymmetricHom,
    cyclic_decompose,
    detect_sstate,
    enumerate_max_isotropic,
    enumerate_sstates,
    hudson_classify,
    isotropic_group,
    make_sstate,
    wehrl_l1,
)
from .suite import ReportRecord, SuiteConfig, record, run_suite, summarize


def _records_out(args, records: list[ReportRecord], csv_text: str | None = None) -> None:
    fmt = "human" if getattr(args, "human", False) else args.format
    if fmt == "csv" and csv_text is not None:
        text = csv_text
    elif fmt == "human":
        lines = []
        for r in records:
            lines.append(f"{r.status.upper():4}  {r.check}")
            if isinstance(r.measured, dict):
                lines.extend(f"      {k}: {v}" for k, v in r.measured.items())
            else:
                lines.append(f"      {r.measured}")
        text = "\n".join(lines) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "status", "criterion", "citation", "tolerance", "measured"])
        for r in records:
            d = r.to_json()
            w.writerow([d["check"], d["status"], d["criterion"], d["citation"],
                        jsonio.dumps(d["tolerance"]), jsonio.dumps(d["measured"])])
        text = buf.getvalue()
    else:
        text = "".join(jsonio.dumps(r.to_json()) + "\n" for r in records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _result(check: str, measured, citation: str = "computation") -> ReportRecord:
    return record(check, True, measured, None, citation)


def _group(args):
    if not args.group:
        raise LCAError("--group is required")
    return jsonio.parse_orders(args.group)


def _regular_group(args):
    g = _group(args)
    if not g.is_two_regular():
        raise NotTwoRegular(f"{g} has even order; this verb needs an odd-order group")
    return g


def _state(args, g, attr="state") -> StateVector:
    path = getattr(args, attr)
    if not path:
        raise LCAError(f"--{attr} is required")
    return jsonio.state_from_json(jsonio.load(path), g)


# -- verbs ----------------------------------------------------------------------------

def cmd_group(args):
    g = _group(args)
    if args.action == "info":
        return [_result("group/info", {
            "orders": list(g.orders), "cardinality": g.cardinality, "exponent": g.exponent,
            "two_regular": g.is_two_regular(),
        })]
    subs = enumerate_subgroups(g)
    return [_result("group/subgroups", {"count": len(subs), "subgroups": [h.to_json() for h in subs]})]


def cmd_fourier(args):
    g = _group(args)
    return [_result("fourier", fourier(_state(args, g)).to_json())]


def cmd_wigner(args):
    g = _regular_group(args)
    f = _state(args, g)
    W = wigner(f)
    if args.action == "compute":
        return [_result("wigner/compute", W.to_json())], W.to_csv()
    if args.action == "min":
        m, p = min_entry(W, args.tol)
        return [_result("wigner/min", {"min": m, "x": list(p.x), "a": list(p.a)})]
    if not args.spec:
        raise LCAError("wigner smooth needs --spec with H generators and beta")
    obj = jsonio.load(args.spec)
    H = generated_subgroup(g, obj["H"]["generators"])
    G = isotropic_group(SymmetricHom(cyclic_decompose(H), tuple(tuple(r) for r in obj.get("beta", []))))
    S = smooth_with_subgroup(W, G)
    real = S.real(args.tol)
    ok = float(real.min()) >= -args.tol
    rec = record("wigner/smooth", ok, {"min": float(real.min()), "table": S.to_json()}, -args.tol,
                 "smoothing by an isotropic subgroup")
    return [rec], S.to_csv()


def cmd_stft(args):
    g = _group(args)
    f = _state(args, g)
    w = _state(args, g, "window") if args.window else reflect(f)
    V = stft(f, w)
    return [_result("stft", V.to_json())], V.to_csv()


def cmd_sstate(args):
    g = _regular_group(args)
    if args.action == "enum":
        states = enumerate_sstates(g)
        return [_result("sstate/enum", {"count": len(states), "states": [s.to_json()["values"] for s in states]})]
    if args.action == "make":
        if not args.spec:
            raise LCAError("sstate make needs --spec")
        return [_result("sstate/make", make_sstate(jsonio.sstate_from_json(jsonio.load(args.spec), g)).to_json())]
    spec = detect_sstate(_state(args, g), args.tol)
    return [_result("sstate/detect", {"sstate": spec is not None, "spec": spec.to_json() if spec else None})]


def cmd_isotropic(args):
    g = _regular_group(args)
    iso = enumerate_max_isotropic(g)
    ok = all(G.check() for G in iso)
    return [record("isotropic/enum", ok, {
        "count": len(iso),
        "subgroups": [
            {"H": G.H.to_json(), "beta": [list(r) for r in G.beta.matrix],
             "points": [[list(p.x), list(p.a)] for p in G.elements]}
            for G in iso
        ],
    }, "maximal isotropic", "isotropic subgroups of phase space")]


def cmd_hudson(args):
    g = _regular_group(args)
    if args.action == "classify":
        res = hudson_classify(_state(args, g), args.tol)
        return [record("hudson/classify", res.consistent, res.to_json(), args.tol,
                       "positive Wigner iff S-state")]
    rng = np.random.default_rng(args.seed)
    violations, detected = 0, 0
    for _ in range(args.samples):
        f = random_state(g, rng)
        m = float(wigner(f).real().min())
        hit = detect_sstate(f, args.tol) is not None
        detected += hit
        violations += m >= -1e-4 and not hit
    return [record("hudson/sample-converse", violations == 0,
                   {"samples": args.samples, "violations": violations, "detected": detected},
                   {"min_wigner": -1e-4}, "positive Wigner implies S-state")]


def cmd_wehrl(args):
    g = _regular_group(args)
    f = _state(args, g)
    w = _state(args, g, "window") if args.window else reflect(f)
    l1 = wehrl_l1(f, w)
    bound = f.norm() * w.norm()
    equality = abs(l1 - bound) <= args.tol * max(1.0, bound)
    return [record("wehrl/check", l1 >= bound - args.tol * max(1.0, bound),
                   {"l1": l1, "bound": bound, "equality": bool(equality)}, args.tol,
                   "L1 norm of the STFT is at least |f||g|")]


def cmd_tensor(args):
    g1 = _group(args)
    g2 = jsonio.parse_orders(args.group2) if args.group2 else None
    f = _state(args, g1)
    h = _state(args, g2, "state2") if args.state2 else None
    if h is None:
        raise LCAError("tensor needs --state2")
    return [_result("tensor", tensor(f, h).to_json())]


def _base(args) -> int:
    if args.base is None:
        raise LCAError("--base is required")
    return args.base


def cmd_adic(args):
    if args.action == "lambda2":
        return [_result("adic/lambda2", {"base": _base(args), "value": str(doubling_constant(_base(args)))})]
    if args.action == "sample-negativity":
        n = _base(args)
        rng = np.random.default_rng(args.seed)
        worst = max(sb_min(random_sb(n, args.m, args.M, rng))[0] for _ in range(args.samples))
        ok = worst < -1e-6 if n % 2 == 0 else True
        return [record("adic/sample-negativity", ok, {"base": n, "samples": args.samples, "max_min": worst},
                       -1e-6, "Wigner positivity fails for even n")]
    if not args.input:
        raise LCAError(f"adic {args.action} needs --input")
    obj = jsonio.load(args.input)
    if args.action == "wigner":
        f = jsonio.sb_from_json(obj)
        table = sb_wigner(f)
        m, (x, b) = sb_min(f)
        return [_result("adic/wigner", {"table": table.to_json(), "min": m, "argmin": {"x": x.to_json(), "b": b},
                                        "total_mass": table.total_mass(), "norm_sq": f.norm_sq()})]
    x = jsonio.nadic_from_json(obj)
    y = nadic_halve(x) if args.action == "halve" else nadic_double(x)
    return [_result(f"adic/{args.action}", y.to_json())]


def cmd_solenoid(args):
    if args.action == "kernel":
        k = solenoid_doubling_kernel(_base(args))
        return [record("solenoid/kernel", True, {"kernel": k.to_json(), "double": solenoid_double(k).to_json()},
                       None, "doubling is not injective for odd n")]
    if not args.input:
        raise LCAError(f"solenoid {args.action} needs --input")
    p = jsonio.solenoid_from_json(jsonio.load(args.input))
    q = solenoid_halve(p) if args.action == "halve" else solenoid_double(p)
    return [_result(f"solenoid/{args.action}", q.to_json())]


def cmd_suite(args):
    config = SuiteConfig(seed=args.seed, inject_fault=args.inject_fault)
    if args.samples_given:
        config.converse_samples = args.samples
    if args.criteria:
        config.criteria = tuple(int(c) for c in args.criteria.split(","))
    records = run_suite(config)
    return records + summarize(records)


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="cyclic orders, e.g. 3,9")
    common.add_argument("--base", type=int)
    common.add_argument("--tol", type=float, default=EXACT_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--out")
    common.add_argument("--format", choices=["json", "csv", "human"], default="json")
    common.add_argument("--human", action="store_true", help="same as --format human")
    common.add_argument("--state", help="StateVector JSON file")
    common.add_argument("--window", help="window StateVector JSON file")
    common.add_argument("--state2", help="second factor for tensor")
    common.add_argument("--group2", help="group of the second factor")
    common.add_argument("--spec", help="S-state / isotropic spec JSON file")
    common.add_argument("--input", help="n-adic, Schwartz-Bruhat or solenoid JSON file")
    common.add_argument("--m", type=int, default=-1, help="support level for sampled functions")
    common.add_argument("--M", type=int, default=2, help="constancy level for sampled functions")
    common.add_argument("--inject-fault", action="store_true", help="negate Wigner tables (harness self-test)")
    common.add_argument("--criteria", help="comma-separated subset of acceptance criteria")

    parser = argparse.ArgumentParser(prog="lcawigner", description=__doc__.splitlines()[0])
    verbs = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, actions=None):
        p = verbs.add_parser(name, parents=[common])
        if actions:
            p.add_argument("action", choices=actions)
        p.set_defaults(func=func)

    verb("group", cmd_group, ["info", "subgroups"])
    verb("fourier", cmd_fourier)
    verb("wigner", cmd_wigner, ["compute", "min", "smooth"])
    verb("stft", cmd_stft)
    verb("sstate", cmd_sstate, ["enum", "make", "detect"])
    verb("isotropic", cmd_isotropic, ["enum"])
    verb("hudson", cmd_hudson, ["classify", "sample-converse"])
    verb("wehrl", cmd_wehrl, ["check"])
    verb("tensor", cmd_tensor)
    verb("adic", cmd_adic, ["halve", "double", "lambda2", "wigner", "sample-negativity"])
    verb("solenoid", cmd_solenoid, ["halve", "double", "kernel"])
    verb("suite", cmd_suite, ["run"])
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.samples_given = args.samples is not None
    if args.samples is None:
        args.samples = 100
    if args.tol <= 0 or args.samples < 1:
        print("error: --tol must be > 0 and --samples >= 1", file=sys.stderr)
        return 2
    try:
        out = args.func(args)
    except LCAError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    records, csv_text = out if isinstance(out, tuple) else (out, None)
    _records_out(args, records, csv_text)
    return 0 if all(r.passed for r in records) else 1


def main() -> None:
    sys.exit(run())
