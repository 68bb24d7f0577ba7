"""Batch front end: scenario files, check orchestration, JSON reports.

A scenario is a strict JSON object

    {"version": 1, "name": ..., "target": ..., "params": {...},
     "checks": [...]}

(optionally "description" and a default "output" path).  The target
names a registered check suite; params are validated against the
target's signature before anything runs; checks lists the groups to
execute ("all" for everything, the empty list for nothing).  Reports are
deterministic: the checksum-covered section contains the scenario echo
and the per-check outcomes in a canonical order, never wall-clock data.

Exit codes: 0 when every executed check passes, 2 when any check fails
(mathematical failures are report entries, never tracebacks), 1 for
configuration errors of any kind.
"""

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
import time

from efgl import equivariant as _eq
from efgl import fgl as _fgl
from efgl.rings import RingError, RingSpec
from efgl.series import SeriesError


class ScenarioError(ValueError):
    """Configuration problem: malformed scenario, bad parameter, bad check."""


_PRECONDITION_ERRORS = (ScenarioError, RingError, SeriesError, ValueError,
                        KeyError, TypeError)


# ---------------------------------------------------------------------------
# target registry


def _law_by_name(law, cap, p, h):
    if law == "multiplicative":
        return _fgl.multiplicative_fgl(cap=cap)
    if law == "additive":
        return _fgl.additive_fgl(cap=cap)
    if law == "honda":
        return _fgl.honda_fgl(p, h, cap)
    if law == "weierstrass":
        return _fgl.weierstrass_fgl(cap=cap)
    raise ScenarioError("unknown law %r (multiplicative, additive, honda, "
                        "weierstrass)" % (law,))


def _run_fgl_axioms(params, tokens):
    F = _law_by_name(params["law"], params["cap"], params["p"], params["h"])
    return [("%s-%s" % (params["law"], name), ok, detail)
            for name, ok, detail in F.check_axioms()]


def _run_fgl_presentation(params, tokens):
    return _eq.multiplicative_presentation_checks(params["J"])


def _run_tate_suite(params, tokens):
    checks = []
    if _wants(tokens, "worked"):
        checks.extend(_eq.tate_worked_example_checks())
    if _wants(tokens, "coproduct"):
        datum = _eq.TateGroupDatum(p=params["p"], r=params["r"],
                                   n=params["n"], alpha=params["alpha"])
        checks.extend(_eq.tate_coproduct_checks(datum))
    if _wants(tokens, "axioms"):
        datum = _eq.TateGroupDatum(p=params["p"], r=params["r"],
                                   alpha=params["alpha"])
        checks.extend(_eq.efgl_axiom_check(_eq.efgl_from_tate(datum)))
    if _wants(tokens, "multiplicativity"):
        checks.extend(_eq.tate_multiplicativity_checks())
    return checks


def _run_z2def_suite(params, tokens):
    checks = list(_eq.z2_deformation_checks(params["cap"]))
    if _wants(tokens, "axioms"):
        checks.extend(_eq.TwoSectorEFGL(params["cap"]).axiom_checks())
    return checks


def _run_lt2_relations(params, tokens):
    checks = []
    for h in params["hs"]:
        checks.extend(_eq.lubin_tate_relation_checks(h, params["cap"]))
    return checks


def _run_crt(params, tokens):
    return _eq.crt_decomposition_checks(samples=params["samples"],
                                        seed=params["seed"],
                                        iterations=params["iterations"],
                                        cap=params["cap"])


def _run_elliptic_chart(params, tokens):
    return _fgl.weierstrass_chart_checks(params["chart_cap"],
                                         params["axiom_cap"])


def _run_elliptic_division(params, tokens):
    from efgl import elliptic as el
    return el.division_polynomial_checks(upto=params["upto"])


def _torsion_model(params):
    from efgl import elliptic as el
    curve = el.WeierstrassCurve(RingSpec("Q"), params["g2"], params["g3"])
    return el.torsion_algebra(curve, params["p"], nu=params["nu"],
                              seed=params["seed"])


def _run_elliptic_torsion(params, tokens):
    from efgl import elliptic as el
    torsion = _torsion_model(params)
    checks = []
    if _wants(tokens, "algebra"):
        checks.extend(torsion.checks)
    if _wants(tokens, "completion"):
        checks.extend(el.completion_checks(
            torsion, cap=params["cap"],
            samples=params["completion_samples"],
            seed=params["completion_seed"]))
    if _wants(tokens, "tate-square"):
        rep = el.tate_square_check(torsion, cap=params["cap"],
                                   samples=params["samples"],
                                   seed=params["square_seed"])
        checks.extend(rep.checks)
    return checks


def _run_elliptic_classification(params, tokens):
    from efgl import elliptic as el
    return el.classification_checks(cap=params["cap"])


# Each entry: parameter schema (name -> (type(s), default)), the allowed
# check tokens beyond "all", the runner, and whether tokens pre-select
# work (group targets) or post-filter a fixed suite (filter targets).
_POST_FILTERS = {
    "z2def.suite": {
        "deformation": ("deformed-",),
        "q0": ("q0-",),
        "q1": ("q1-",),
        "coordinate": ("coordinate-",),
        "correction": ("correction-term",),
        "closed-form": ("deformed-correction-relation",),
        "euler": ("euler-",),
        "reparametrization": ("reparametrization-", "component-selector",
                              "rho-"),
        "relations": ("q0-generator", "q-relation", "b-relation"),
        "axioms": ("counit-", "cocommutative-", "coassociative",
                   "translate-"),
    },
    "lt2.relations": {
        "q0": ("q0-",),
        "residuals": ("q-residual-",),
        "relations": ("q0-", "q-residual-", "q-relation", "b-relation"),
    },
    "crt.decomposition": {
        "worked": ("worked-", "degenerate-"),
        "random": ("random-", "residual-"),
        "zero": ("zero-",),
    },
    "elliptic.chart": {
        "chart": ("chart-",),
        "axioms": ("chord-",),
    },
}

_TARGETS = {
    "fgl.axioms": {
        "params": {"law": (str, "multiplicative"), "cap": (int, 8),
                   "p": (int, 2), "h": (int, 1)},
        "tokens": ("axioms",),
        "run": _run_fgl_axioms,
        "groups": True,
    },
    "fgl.presentation": {
        "params": {"J": (int, 6)},
        "tokens": ("presentation",),
        "run": _run_fgl_presentation,
        "groups": True,
    },
    "tate.suite": {
        "params": {"p": (int, 2), "r": (int, 1), "n": ((int, type(None)), None),
                   "alpha": ((str, int), "-1"), "cap": ((int, type(None)), None)},
        "tokens": ("worked", "coproduct", "axioms", "multiplicativity"),
        "run": _run_tate_suite,
        "groups": True,
    },
    "z2def.suite": {
        "params": {"cap": (int, 8)},
        "tokens": tuple(_POST_FILTERS["z2def.suite"]),
        "run": _run_z2def_suite,
    },
    "lt2.relations": {
        "params": {"hs": (list, (1, 2)), "cap": (int, 8)},
        "tokens": tuple(_POST_FILTERS["lt2.relations"]),
        "run": _run_lt2_relations,
    },
    "crt.decomposition": {
        "params": {"samples": (int, 20), "seed": (int, 20260823),
                   "iterations": (int, 3), "cap": (int, 12)},
        "tokens": tuple(_POST_FILTERS["crt.decomposition"]),
        "run": _run_crt,
    },
    "elliptic.chart": {
        "params": {"chart_cap": (int, 10), "axiom_cap": (int, 8)},
        "tokens": ("chart", "axioms"),
        "run": _run_elliptic_chart,
    },
    "elliptic.division": {
        "params": {"upto": (int, 9)},
        "tokens": ("division",),
        "run": _run_elliptic_division,
        "groups": True,
    },
    "elliptic.torsion": {
        "params": {"g2": (int, 4), "g3": (int, 1), "p": (int, 5),
                   "nu": (int, 2), "cap": (int, 30), "seed": (int, 20210),
                   "samples": (int, 50), "completion_samples": (int, 10),
                   "completion_seed": (int, 3517),
                   "square_seed": (int, 11017)},
        "tokens": ("algebra", "completion", "tate-square"),
        "run": _run_elliptic_torsion,
        "groups": True,
    },
    "elliptic.classification": {
        "params": {"cap": (int, 8)},
        "tokens": ("classification",),
        "run": _run_elliptic_classification,
        "groups": True,
    },
}


def _wants(tokens, group):
    return tokens is None or group in tokens


# ---------------------------------------------------------------------------
# scenario handling


_SCENARIO_KEYS = {"version", "name", "target", "params", "checks",
                  "description", "output"}
_REQUIRED_KEYS = ("version", "name", "target", "params", "checks")


def validate_scenario(obj):
    """Schema, target, parameter, and check-token validation.

    Returns the normalized scenario dict (defaults filled in).  Raises
    ScenarioError with the violated clause on any problem.
    """
    if not isinstance(obj, dict):
        raise ScenarioError("a scenario must be a JSON object")
    unknown = set(obj) - _SCENARIO_KEYS
    if unknown:
        raise ScenarioError("unknown scenario fields: %s"
                            % ", ".join(sorted(unknown)))
    for key in _REQUIRED_KEYS:
        if key not in obj:
            raise ScenarioError("missing scenario field %r" % key)
    if obj["version"] != 1:
        raise ScenarioError("unsupported scenario version %r"
                            % (obj["version"],))
    if not isinstance(obj["name"], str) or not obj["name"]:
        raise ScenarioError("scenario name must be a nonempty string")
    target = obj["target"]
    if target not in _TARGETS:
        raise ScenarioError("unknown target %r (known: %s)"
                            % (target, ", ".join(sorted(_TARGETS))))
    spec = _TARGETS[target]
    params = obj["params"]
    if not isinstance(params, dict):
        raise ScenarioError("params must be an object")
    bad = set(params) - set(spec["params"])
    if bad:
        raise ScenarioError("target %s does not take parameters: %s"
                            % (target, ", ".join(sorted(bad))))
    merged = {}
    for pname, (ptype, default) in spec["params"].items():
        val = params.get(pname, default)
        if pname in params and not isinstance(val, ptype):
            raise ScenarioError("parameter %r of %s must have type %s"
                                % (pname, target,
                                   getattr(ptype, "__name__", ptype)))
        if isinstance(val, list):
            val = tuple(val)
        merged[pname] = val
    checks = obj["checks"]
    if not isinstance(checks, list) or \
            not all(isinstance(c, str) for c in checks):
        raise ScenarioError("checks must be a list of strings")
    allowed = set(spec["tokens"]) | {"all"}
    for tok in checks:
        if tok not in allowed:
            raise ScenarioError("target %s has no check %r (choose from %s)"
                                % (target, tok, ", ".join(sorted(allowed))))
    out = {"version": 1, "name": obj["name"], "target": target,
           "params": merged, "checks": list(checks)}
    if "description" in obj:
        if not isinstance(obj["description"], str):
            raise ScenarioError("description must be a string")
        out["description"] = obj["description"]
    if "output" in obj:
        if not isinstance(obj["output"], str):
            raise ScenarioError("output must be a path string")
        out["output"] = obj["output"]
    return out


def _status(ok):
    if ok is None:
        return "undecided-at-truncation"
    return "pass" if ok else "fail"


def run_scenario(scenario):
    """Validate and execute a scenario; return the report document.

    Mathematical failures become failed report entries; only
    configuration problems raise (as ScenarioError).
    """
    s = validate_scenario(scenario)
    spec = _TARGETS[s["target"]]
    t0 = time.perf_counter()
    checks = []
    if s["checks"]:
        tokens = None if "all" in s["checks"] else list(s["checks"])
        try:
            checks = spec["run"](s["params"], tokens)
        except _PRECONDITION_ERRORS as exc:
            raise ScenarioError("precondition violated while running %s: %s"
                                % (s["target"], exc))
        if tokens is not None and not spec.get("groups"):
            prefixes = []
            table = _POST_FILTERS.get(s["target"], {})
            for tok in tokens:
                prefixes.extend(table.get(tok, (tok,)))
            checks = [c for c in checks
                      if any(c[0].startswith(p) for p in prefixes)]
    duration_ms = int((time.perf_counter() - t0) * 1000)

    results = [{"name": name, "status": _status(ok), "detail": str(detail)}
               for name, ok, detail in checks]
    counts = {
        "pass": sum(1 for r in results if r["status"] == "pass"),
        "fail": sum(1 for r in results if r["status"] == "fail"),
        "undecided": sum(1 for r in results
                         if r["status"] == "undecided-at-truncation"),
        "total": len(results),
    }
    scenario_echo = {k: s[k] for k in ("version", "name", "target", "checks")}
    scenario_echo["params"] = {k: (list(v) if isinstance(v, tuple) else v)
                               for k, v in s["params"].items()}
    if "description" in s:
        scenario_echo["description"] = s["description"]
    report = {
        "scenario": scenario_echo,
        "results": results,
        "counts": counts,
        "ok": counts["fail"] == 0 and counts["undecided"] == 0,
    }
    canonical = json.dumps(report, sort_keys=True, separators=(",", ":"),
                           ensure_ascii=False)
    checksum = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return {"report": report,
            "meta": {"duration_ms": duration_ms, "checksum": checksum}}


# ---------------------------------------------------------------------------
# bundled scenarios


def _scenario_dir():
    return os.path.join(os.path.dirname(os.path.abspath(__file__)),
                        "scenarios")


def bundled_scenarios():
    """Name -> path for the scenario files shipped with the package."""
    out = {}
    sdir = _scenario_dir()
    if os.path.isdir(sdir):
        for fn in sorted(os.listdir(sdir)):
            if fn.endswith(".json"):
                out[fn[:-5]] = os.path.join(sdir, fn)
    return out


def load_scenario(ref):
    """Load a scenario from a path or a bundled scenario name."""
    path = ref
    if not os.path.isfile(path):
        bundled = bundled_scenarios()
        if ref in bundled:
            path = bundled[ref]
        else:
            raise ScenarioError("no scenario file or bundled scenario %r"
                                % (ref,))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError("malformed scenario %s: %s" % (path, exc))
    return obj


def _run_reference(ref):
    return run_scenario(load_scenario(ref))


# ---------------------------------------------------------------------------
# command line


def _emit(doc, out_path):
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_code(docs):
    reports = docs if isinstance(docs, list) else [docs]
    return 0 if all(d["report"]["ok"] for d in reports) else 2


def _split_tokens(text):
    return [t for t in (text or "").replace(" ", "").split(",") if t]


def _direct_scenario(name, target, params, tokens):
    return {"version": 1, "name": name, "target": target, "params": params,
            "checks": tokens if tokens is not None else ["all"]}


def _cmd_run(args):
    refs = args.scenario
    if args.jobs > 1 and len(refs) > 1:
        with concurrent.futures.ProcessPoolExecutor(args.jobs) as pool:
            docs = list(pool.map(_run_reference, refs))
    else:
        docs = [_run_reference(ref) for ref in refs]
    for ref, doc in zip(refs, docs):
        scenario = load_scenario(ref)
        if not args.out and isinstance(scenario, dict) \
                and scenario.get("output"):
            _emit(doc, scenario["output"])
    payload = docs[0] if len(docs) == 1 else docs
    _emit(payload, args.out)
    return _exit_code(docs)


def _cmd_list_scenarios(args):
    entries = []
    for name, path in bundled_scenarios().items():
        obj = load_scenario(path)
        entries.append({
            "name": name,
            "target": obj.get("target"),
            "checks": obj.get("checks"),
            "description": obj.get("description", ""),
        })
    _emit({"scenarios": entries}, args.out)
    return 0


def _cmd_fgl(args):
    params = {"law": args.law, "cap": args.cap, "p": args.p, "h": args.h}
    if args.law == "multiplicative" and args.presentation:
        doc = run_scenario(_direct_scenario(
            "fgl-presentation", "fgl.presentation", {"J": args.cap}, None))
    else:
        doc = run_scenario(_direct_scenario(
            "fgl-%s" % args.law, "fgl.axioms", params, None))
    _emit(doc, args.out)
    return _exit_code(doc)


def _cmd_tate(args):
    tokens = _split_tokens(args.check) or None
    params = {"p": args.p, "r": args.r, "n": args.n, "alpha": args.alpha,
              "cap": args.cap}
    doc = run_scenario(_direct_scenario("tate", "tate.suite", params, tokens))
    _emit(doc, args.out)
    return _exit_code(doc)


def _cmd_z2def(args):
    tokens = _split_tokens(args.verify or args.check) or None
    doc = run_scenario(_direct_scenario(
        "z2def", "z2def.suite", {"cap": args.cap}, tokens))
    _emit(doc, args.out)
    return _exit_code(doc)


def _cmd_lt2(args):
    tokens = _split_tokens(args.verify or args.check) or None
    hs = args.h if args.h else [1, 2]
    doc = run_scenario(_direct_scenario(
        "lt2", "lt2.relations", {"hs": hs, "cap": args.cap}, tokens))
    _emit(doc, args.out)
    return _exit_code(doc)


def _cmd_elliptic(args):
    sub = args.elliptic_command
    if sub == "chart":
        doc = run_scenario(_direct_scenario(
            "elliptic-chart", "elliptic.chart",
            {"chart_cap": args.chart_cap, "axiom_cap": args.axiom_cap}, None))
    elif sub == "division":
        doc = run_scenario(_direct_scenario(
            "elliptic-division", "elliptic.division",
            {"upto": args.upto}, None))
    elif sub == "classification":
        doc = run_scenario(_direct_scenario(
            "elliptic-classification", "elliptic.classification",
            {"cap": args.cap}, None))
    elif sub == "torsion":
        tokens = _split_tokens(args.check) or None
        params = {"g2": args.g2, "g3": args.g3, "p": args.p,
                  "nu": args.cap_p, "cap": args.cap_x,
                  "samples": args.samples}
        doc = run_scenario(_direct_scenario(
            "elliptic-torsion", "elliptic.torsion", params, tokens))
    else:
        raise ScenarioError("unknown elliptic subcommand %r" % (sub,))
    _emit(doc, args.out)
    return _exit_code(doc)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="efgl",
        description="Exact checks for formal group data: scenario runner "
                    "and direct check suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run scenario files or bundled names")
    p_run.add_argument("scenario", nargs="+",
                       help="scenario file path or bundled scenario name")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="run scenarios in parallel processes")
    p_run.add_argument("--out", default=None, help="write the JSON here")
    p_run.set_defaults(fn=_cmd_run)

    p_ls = sub.add_parser("list-scenarios", help="enumerate bundled scenarios")
    p_ls.add_argument("--out", default=None)
    p_ls.set_defaults(fn=_cmd_list_scenarios)

    p_fgl = sub.add_parser("fgl", help="group-law axiom and presentation "
                                       "checks")
    p_fgl.add_argument("--law", default="multiplicative",
                       choices=["multiplicative", "additive", "honda",
                                "weierstrass"])
    p_fgl.add_argument("--cap", type=int, default=8)
    p_fgl.add_argument("--p", type=int, default=2)
    p_fgl.add_argument("--h", type=int, default=1)
    p_fgl.add_argument("--presentation", action="store_true",
                       help="run the presentation-image checks instead")
    p_fgl.add_argument("--out", default=None)
    p_fgl.set_defaults(fn=_cmd_fgl)

    p_tate = sub.add_parser("tate", help="torsion datum checks")
    p_tate.add_argument("--p", type=int, default=2)
    p_tate.add_argument("--r", type=int, default=1)
    p_tate.add_argument("--n", type=int, default=None)
    p_tate.add_argument("--alpha", default="-1")
    p_tate.add_argument("--cap", type=int, default=None,
                        help="accepted for interface compatibility; the "
                             "sector model is finite and exact")
    p_tate.add_argument("--check", default="",
                        help="comma list: worked,coproduct,axioms,"
                             "multiplicativity")
    p_tate.add_argument("--out", default=None)
    p_tate.set_defaults(fn=_cmd_tate)

    p_z2 = sub.add_parser("z2def", help="two-component deformation checks")
    p_z2.add_argument("--cap", type=int, default=8)
    p_z2.add_argument("--verify", default="",
                      help="comma list of check groups")
    p_z2.add_argument("--check", default="", help="alias for --verify")
    p_z2.add_argument("--out", default=None)
    p_z2.set_defaults(fn=_cmd_z2def)

    p_lt = sub.add_parser("lt2", help="height-h deformation relation checks")
    p_lt.add_argument("--h", type=int, action="append", default=None,
                      help="height (repeatable; default 1 and 2)")
    p_lt.add_argument("--cap", type=int, default=8)
    p_lt.add_argument("--verify", default="")
    p_lt.add_argument("--check", default="", help="alias for --verify")
    p_lt.add_argument("--out", default=None)
    p_lt.set_defaults(fn=_cmd_lt2)

    p_el = sub.add_parser("elliptic", help="elliptic-curve check suites")
    esub = p_el.add_subparsers(dest="elliptic_command", required=True)
    e_chart = esub.add_parser("chart", help="chart equation and chord law")
    e_chart.add_argument("--chart-cap", type=int, default=10)
    e_chart.add_argument("--axiom-cap", type=int, default=8)
    e_chart.add_argument("--out", default=None)
    e_div = esub.add_parser("division", help="division polynomial facts")
    e_div.add_argument("--upto", type=int, default=9)
    e_div.add_argument("--out", default=None)
    e_cls = esub.add_parser("classification", help="generator image checks")
    e_cls.add_argument("--cap", type=int, default=8)
    e_cls.add_argument("--out", default=None)
    e_tor = esub.add_parser("torsion", help="certified torsion algebra")
    e_tor.add_argument("--g2", type=int, default=4)
    e_tor.add_argument("--g3", type=int, default=1)
    e_tor.add_argument("--p", type=int, default=5)
    e_tor.add_argument("--cap-x", type=int, default=30,
                       help="series truncation for the completion")
    e_tor.add_argument("--cap-p", type=int, default=2,
                       help="p-adic truncation exponent")
    e_tor.add_argument("--samples", type=int, default=50)
    e_tor.add_argument("--check", default="",
                       help="comma list: algebra,completion,tate-square")
    e_tor.add_argument("--out", default=None)
    p_el.set_defaults(fn=_cmd_elliptic)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        sys.stderr.write("configuration error: %s\n" % exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
