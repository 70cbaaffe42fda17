"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Any, Sequence

from . import __version__, rootsys, spectrum, torus, weyl
from .errors import DomainError, StructuralError
from .spectrum import CosetSpec, QSpec

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _qspec(args: argparse.Namespace) -> QSpec:
    try:
        return QSpec(args.p, args.m)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _odd(qs: QSpec) -> None:
    if qs.p == 2:
        raise UsageError("only odd characteristic is supported here (p = 2 refused)")


def _inputs(qs: QSpec, **extra: Any) -> dict[str, Any]:
    return {"p": qs.p, "m": qs.m, "q": qs.q, **extra}


def _report(command: str, inputs: dict[str, Any], result: dict[str, Any], checks: list[dict[str, Any]] | None = None) -> dict[str, Any]:
    rep: dict[str, Any] = {"command": command, "version": __version__, "inputs": inputs, "result": result}
    if checks is not None:
        rep["checks"] = checks
        rep["passed"] = all(c["passed"] for c in checks)
    return rep


def cmd_nu(args: argparse.Namespace) -> tuple[dict[str, Any], list[str]]:
    qs = _qspec(args)
    try:
        coset = CosetSpec.parse(args.coset, qs.m)
        s = spectrum.nu_coset(qs, coset)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    rows = [{"value": v, "formula": s.label(v)} for v in s]
    lines = [f"nu for q = {qs.p}^{qs.m} = {qs.q}, coset {coset} ({len(rows)} values)"]
    width = max((len(str(v)) for v in s), default=1)
    lines += [f"  {r['value']:>{width}}  {r['formula']}" for r in rows]
    return _report("nu", _inputs(qs, coset=str(coset)), {"values": rows}), lines


def cmd_order_check(args: argparse.Namespace) -> tuple[dict[str, Any], list[str]]:
    qs = _qspec(args)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    try:
        coset = CosetSpec.parse(args.coset, qs.m)
        s = spectrum.nu_coset(qs, coset)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    witness = spectrum.order_witness(args.n, qs, coset)
    result = {"n": args.n, "exists": witness is not None, "witness": witness, "formula": s.label(witness) if witness else None}
    if witness is None:
        lines = [f"no: {args.n} divides no element of nu for q = {qs.q}, coset {coset}"]
    else:
        lines = [f"yes: {args.n} divides {witness} = {s.label(witness)}"]
    return _report("order-check", _inputs(qs, coset=str(coset)), result), lines


def cmd_eta(args: argparse.Namespace) -> tuple[dict[str, Any], list[str]]:
    qs = _qspec(args)
    _odd(qs)
    try:
        spec = rootsys.lookup(args.subsystem)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    weyl.enumerate_w(args.cache)
    rc = spectrum.classes_for(spec.label)
    if not 0 <= args.class_index < len(rc.classes):
        raise UsageError(f"class index must be in 0..{len(rc.classes) - 1} for {spec.label}")
    cls = rc.classes[args.class_index]
    rec = spectrum.eta(spec, cls.representative, qs, args.class_index)
    result = {
        "subsystem": spec.label,
        "class": args.class_index,
        "class_size": cls.size,
        "class_order": cls.order,
        "representative": [list(r) for r in cls.representative],
        "factors": list(rec.factors),
        "z": list(rec.z_coords),
        "exponent": rec.exponent,
        "np_factor": rec.np_factor,
        "eta": rec.eta,
    }
    lines = [f"subsystem {spec.label}, class {args.class_index} of {len(rc.classes)} (size {cls.size}, order {cls.order}), q = {qs.q}"]
    lines += ["  " + " ".join(f"{x:>3}" for x in r) for r in cls.representative]
    lines += [
        f"H_w invariant factors: {list(rec.factors)}",
        f"z coordinates: {list(rec.z_coords)}",
        f"exp(H_w/<z>) = {rec.exponent}",
        f"n_p factor = {rec.np_factor}",
        f"eta = {rec.eta}",
    ]
    return _report("eta", _inputs(qs, subsystem=spec.label, class_index=args.class_index), result), lines


def cmd_weyl_info(args: argparse.Namespace) -> tuple[dict[str, Any], list[str]]:
    group = weyl.enumerate_w(args.cache)
    if args.subsystem is None:
        classes = weyl.conjugacy_classes(group.whole())
        result = {
            "order": group.order,
            "classes": len(classes),
            "contains_minus_identity": bool(-weyl.identity() in group.whole()),
        }
        lines = [f"|W(E7)| = {group.order}", f"conjugacy classes: {len(classes)}", f"-1 in W: {result['contains_minus_identity']}"]
        lines.append("subsystem        |N_W(Pi1)|  |C_W(Pi1)|  classes  center components")
        rows = []
        for spec in rootsys.catalog():
            rc = spectrum.classes_for(spec.label)
            cent = weyl.pointwise_stabilizer(spec.pi1, group.whole()).order
            comp = list(torus.center_component_group(spec).factors)
            rows.append({"subsystem": spec.label, "normalizer_order": rc.normalizer_order, "centralizer_order": cent, "classes": len(rc.classes), "center_components": comp})
            lines.append(f"{spec.label:<16} {rc.normalizer_order:>11} {cent:>11} {len(rc.classes):>8}  {comp}")
        result["rows"] = rows
        return _report("weyl-info", {}, result), lines
    try:
        spec = rootsys.lookup(args.subsystem)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    rc = spectrum.classes_for(spec.label)
    cls = [{"index": i, "size": c.size, "order": c.order, "trace": c.trace} for i, c in enumerate(rc.classes)]
    lines = [f"{spec.label}: type {spec.cartan_type}, mh = {spec.mh}, |N_W(Pi1)| = {rc.normalizer_order}, {len(cls)} classes"]
    lines += [f"  class {c['index']:>2}: size {c['size']:>7}  order {c['order']:>2}  trace {c['trace']:>3}" for c in cls]
    result = {"subsystem": spec.label, "type": str(spec.cartan_type), "mh": spec.mh, "normalizer_order": rc.normalizer_order, "classes": cls}
    return _report("weyl-info", {"subsystem": spec.label}, result), lines


def cmd_verify(args: argparse.Namespace) -> tuple[dict[str, Any], list[str]]:
    qs = _qspec(args)
    _odd(qs)
    weyl.enumerate_w(args.cache)
    checks = spectrum.verify(qs, jobs=args.jobs)
    payload = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
    lines = [f"verify q = {qs.p}^{qs.m} = {qs.q}"]
    for c in checks:
        lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
    ok = all(c.passed for c in checks)
    lines.append("all checks passed" if ok else "some checks FAILED")
    return _report("verify", _inputs(qs), {"passed": ok}, payload), lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="e7spectra", description="Element orders of almost simple groups with socle E7(q).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, q: bool = True) -> None:
        if q:
            p.add_argument("--p", type=int, required=True, help="characteristic")
            p.add_argument("--m", type=int, default=1, help="q = p^m (default 1)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--cache", default=None, help=f"Weyl group cache file (env {weyl.CACHE_ENV})")
        p.add_argument("--jobs", type=int, default=spectrum.default_jobs(), help="parallel workers")

    p = sub.add_parser("nu", help="closed-form maximal orders for a coset")
    common(p)
    p.add_argument("--coset", default="1", help="1, delta, phi^k or phi^k-delta")
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("order-check", help="is n an element order in the coset")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coset", default="1")
    p.set_defaults(func=cmd_order_check)

    p = sub.add_parser("eta", help="eta for one subsystem and Weyl class")
    common(p)
    p.add_argument("--subsystem", required=True)
    p.add_argument("--class", dest="class_index", type=int, default=0)
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("weyl-info", help="facts about W(E7) and the subsystem normalizers")
    common(p, q=False)
    p.add_argument("--subsystem", default=None)
    p.set_defaults(func=cmd_weyl_info)

    p = sub.add_parser("verify", help="brute-force check against the closed forms")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def _emit_text(lines: Sequence[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        report, lines = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StructuralError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.format == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        _emit_text(lines)
    # timing goes to stderr so stdout stays reproducible
    print(f"elapsed {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return EXIT_FAIL if report.get("passed") is False else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
