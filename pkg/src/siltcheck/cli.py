"""Command line front end: check, goodify, verify and report.

Every command reads an instance file, picks one named complex, and prints a
JSON report with sorted keys so reruns are byte-identical.  Exit codes: 0 all
checks passed, 1 a check failed with a witness, 2 the run hit a cap or step
bound before reaching a verdict, 3 the instance file or arguments were
malformed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .instances import (Instance, InstanceError, encode_complex,
                        instance_text, load_instance, serialize_instance)
from .silting import goodify, silting_equivalent, silting_report
from .verifier import verify_all, verify_tilting_theorem

SCHEMA = 1

DEFAULTS = {"window": (-4, 4), "pair_degrees": (-2, 2), "max_steps": 8,
            "cap": 16, "extra_margin": 0}


class UsageError(Exception):
    """Bad arguments or object references; maps to exit code 3."""


def _parse_window(text: str):
    parts = text.split(":")
    try:
        lo, hi = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"window {text!r} is not of the form lo:hi") from None
    if lo > hi:
        raise UsageError(f"window {text!r} has lo > hi")
    return lo, hi


def _effective(inst: Instance, args) -> dict:
    """Flag beats per-file option beats module default."""
    opts = inst.options
    eff = {}
    if args.window is not None:
        eff["window"] = _parse_window(args.window)
    else:
        eff["window"] = tuple(opts.get("window", DEFAULTS["window"]))
    eff["pair_degrees"] = tuple(opts.get("pair_degrees",
                                         DEFAULTS["pair_degrees"]))
    for key in ("max_steps", "cap"):
        flag = getattr(args, key)
        eff[key] = flag if flag is not None else opts.get(key, DEFAULTS[key])
        if eff[key] <= 0:
            raise UsageError(f"{key} must be positive")
    eff["extra_margin"] = opts.get("extra_margin", DEFAULTS["extra_margin"])
    if args.probes is not None:
        eff["probes"] = [p for p in args.probes.split(",") if p]
        if not eff["probes"]:
            raise UsageError("empty probe list")
    else:
        eff["probes"] = opts.get("probes")
    return eff


def _echo(eff: dict) -> dict:
    return {"window": list(eff["window"]),
            "pair_degrees": list(eff["pair_degrees"]),
            "max_steps": eff["max_steps"], "cap": eff["cap"],
            "extra_margin": eff["extra_margin"],
            "probes": eff["probes"] if eff["probes"] is not None else "all"}


def _pick_complex(inst: Instance, name: str):
    if name not in inst.complexes:
        raise UsageError(f"no complex named {name!r} in instance "
                         f"{inst.name!r}; complexes: {sorted(inst.complexes)}")
    return inst.complexes[name]


def _emit(payload: dict, output):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _check_payload(inst: Instance, name: str, eff: dict) -> tuple[dict, int]:
    U = _pick_complex(inst, name)
    srep = silting_report(U, eff["max_steps"])
    if srep.presilting_witness is not None:
        verdict, code = "fail", 1
    elif srep.n is None:
        verdict, code = "inconclusive", 2
    else:
        verdict, code = "pass", 0
    payload = {
        "object": name,
        "presilting": srep.presilting,
        "witness": list(srep.presilting_witness)
                   if srep.presilting_witness else None,
        "coresolution_steps": srep.n,
        "multiplicities": srep.multiplicities,
        "good": srep.good,
        "tilting": srep.tilting,
        "module_form": srep.module_form,
        "inconclusive": srep.inconclusive,
        "equivalence_criterion": srep.equivalence_criterion,
        "verdict": verdict,
    }
    return payload, code


def cmd_check(inst: Instance, args) -> int:
    eff = _effective(inst, args)
    payload, code = _check_payload(inst, args.object, eff)
    payload.update({"schema": SCHEMA, "command": "check",
                    "instance": inst.name, "effective": _echo(eff)})
    _emit(payload, args.output)
    return code


def cmd_goodify(inst: Instance, args) -> int:
    eff = _effective(inst, args)
    U = _pick_complex(inst, args.object)
    srep = silting_report(U, eff["max_steps"])
    payload = {"schema": SCHEMA, "command": "goodify",
               "instance": inst.name, "object": args.object,
               "effective": _echo(eff)}
    if srep.presilting_witness is not None:
        payload["verdict"] = "inconclusive"
        payload["failed_step"] = "presilting"
        payload["witness"] = list(srep.presilting_witness)
        _emit(payload, None)
        return 2
    V = goodify(U, eff["max_steps"])
    if V is None:
        payload["verdict"] = "inconclusive"
        payload["failed_step"] = "coresolution"
        _emit(payload, None)
        return 2
    out_name = f"{args.object}-good"
    out_inst = Instance(f"{inst.name}-goodified", inst.field, inst.quiver,
                        inst.relations, inst.algebra,
                        {out_name: V}, {}, {}, dict(inst.options))
    payload["verdict"] = "pass"
    payload["good_object"] = out_name
    payload["already_good"] = srep.good
    payload["checks"] = {
        "output_presilting": silting_report(V, eff["max_steps"]).presilting,
        "silting_equivalent_to_input": silting_equivalent(U, V,
                                                          eff["max_steps"]),
    }
    payload["goodified"] = serialize_instance(out_inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(instance_text(out_inst))
        payload["output"] = args.output
    _emit(payload, None)
    return 0


def _verification_reports(inst: Instance, name: str, eff: dict) -> list:
    U = _pick_complex(inst, name)
    if eff["probes"] is not None:
        A = inst.algebra
        known = {"free", "silting"}
        for v in range(len(A.idempotents)):
            known.add(f"proj{v}")
            if A.path_info is not None:
                known.add(f"simple{v}")
        unknown = set(eff["probes"]) - known
        if unknown:
            raise UsageError(f"unknown probes {sorted(unknown)}; "
                             f"available: {sorted(known)}")
    reports = verify_all(U, window=eff["window"],
                         pair_degrees=eff["pair_degrees"],
                         max_steps=eff["max_steps"],
                         extra_margin=eff["extra_margin"],
                         cap=eff["cap"], probe_names=eff["probes"])
    srep = silting_report(U, eff["max_steps"])
    if srep.presilting and srep.module_form:
        summands = getattr(U, "summands", [U])
        mods = [s.cohomology(0) for s in summands]
        mods = [m for m in mods if m.dim > 0]
        if mods:
            reports.append(verify_tilting_theorem(inst.algebra, mods,
                                                  cap=eff["cap"],
                                                  max_steps=eff["max_steps"]))
    return reports


# these checks fail when a bound is hit, not when a counterexample is found
_SOFT_CHECKS = {"coresolution terminates", "projective resolution terminates"}


def _is_soft_failure(check) -> bool:
    if check.name in _SOFT_CHECKS:
        return True
    return bool(check.details.get("inconclusive"))


def _verdict_code(reports: list) -> tuple[str, int]:
    failed = [c for r in reports for c in r.checks if not c.passed]
    undecided = any("goodification" in r.notes for r in reports)
    if any(not _is_soft_failure(c) for c in failed):
        return "fail", 1
    if failed or undecided:
        return "inconclusive", 2
    return "pass", 0


def cmd_verify(inst: Instance, args) -> int:
    eff = _effective(inst, args)
    reports = _verification_reports(inst, args.object, eff)
    verdict, code = _verdict_code(reports)
    payload = {"schema": SCHEMA, "command": "verify",
               "instance": inst.name, "object": args.object,
               "effective": _echo(eff), "verdict": verdict,
               "reports": [r.as_dict() for r in reports]}
    _emit(payload, args.output)
    return code


def cmd_report(inst: Instance, args) -> int:
    eff = _effective(inst, args)
    check_payload, check_code = _check_payload(inst, args.object, eff)
    payload = {"schema": SCHEMA, "command": "report",
               "instance": inst.name, "object": args.object,
               "effective": _echo(eff), "check": check_payload}
    if check_code == 0:
        reports = _verification_reports(inst, args.object, eff)
        verdict, verify_code = _verdict_code(reports)
        payload["verification"] = [r.as_dict() for r in reports]
        payload["verdict"] = verdict
        code = verify_code
    else:
        payload["verification"] = None
        payload["verdict"] = check_payload["verdict"]
        code = check_code
    _emit(payload, args.output)
    return code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siltcheck",
        description="exact checks for silting complexes over quiver algebras")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("check", cmd_check, "presilting and coresolution tests for a complex"),
        ("goodify", cmd_goodify, "rewrite a silting complex with one degree per summand"),
        ("verify", cmd_verify, "full equivalence verification battery"),
        ("report", cmd_report, "check plus verification in one document"),
    ]
    for name, fn, helptext in specs:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("instance", help="instance file (JSON, schema 1)")
        p.add_argument("object", help="name of a complex in the instance")
        p.add_argument("--window", default=None, metavar="LO:HI",
                       help="cohomological degree window")
        p.add_argument("--max-steps", type=int, default=None,
                       help="coresolution step bound")
        p.add_argument("--cap", type=int, default=None,
                       help="resolution length cap")
        p.add_argument("--probes", default=None, metavar="NAMES",
                       help="comma separated probe names")
        p.add_argument("--output", default=None, metavar="PATH",
                       help="also write the result to this file")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad arguments; fold into the input-error code
        return 0 if e.code == 0 else 3
    try:
        inst = load_instance(args.instance)
        return args.fn(inst, args)
    except (InstanceError, UsageError) as e:
        sys.stderr.write(f"siltcheck: {e}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
