"""Command-line front end.

Every subcommand runs one library operation and prints a short report, or a
JSON report with ``--json``.  Data produced by a command (a cochain, a form,
a twisted algebra) is also written to ``-o PATH`` when given.  Exit status is
0 on success, 1 when the mathematics says no (obstructed, not a cocycle,
invalid algebra) and 2 on malformed input.

Subcommands may be written hyphenated (``algebra-analyze``) or as two words
(``algebra analyze``).
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from . import formal
from .cohomology import NotACocycle, is_abelian_3_cocycle, trace, trivialize_3cocycle
from .forms import GroupTooLarge, NotAQuadraticForm, UnsupportedValues, cocycle_from_form, enumerate_pm1_forms
from .groups import FiniteAbelianGroup, NotASubgroup, format_element, parse_group_spec
from .io import (
    InputError,
    algebra_from_json,
    algebra_to_json,
    cochain2_to_json,
    cochain_from_json,
    cochain_to_json,
    dump_json,
    form_from_json,
    form_to_json,
    load_json,
    show_scalar,
)
from .testbed import (
    NotProportional,
    TraceNotCosetConstant,
    ZeroComposite,
    apply_twist,
    coset_module_build,
    obstruction_report,
    validate,
    verify_extension,
)

__all__ = ["main", "run", "COMMANDS"]

COMMANDS = (
    "cocycle-check",
    "cocycle-trace",
    "trivialize",
    "from-form",
    "series-verify",
    "algebra-analyze",
    "algebra-extend",
    "algebra-verify",
    "forms-enumerate",
)
_PREFIXES = {c.split("-")[0] for c in COMMANDS if "-" in c}


class _Failure(Exception):
    """A mathematical negative; carries the report to print."""

    def __init__(self, report: dict):
        super().__init__(report.get("summary", ""))
        self.report = report


# ---------------------------------------------------------------------------
# argument handling


def _group_arg(text: str) -> FiniteAbelianGroup:
    try:
        return parse_group_spec(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid group {text!r}; expected orders like 4,2") from None


def _exponents_arg(text: str) -> tuple:
    try:
        exps = tuple(int(e) for e in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid exponents {text!r}") from None
    if len(exps) != len(formal.COORDINATES):
        raise argparse.ArgumentTypeError(
            f"need {len(formal.COORDINATES)} exponents, for {', '.join(formal.COORDINATES)}")
    return exps


def _parse_subgroup(text: str, group: FiniteAbelianGroup) -> list:
    """``"0,2"`` on a cyclic group, ``"(0,0);(1,1)"`` in general."""
    try:
        if "(" in text:
            elems = [tuple(int(c) for c in m.split(",")) for m in re.findall(r"\(([^()]*)\)", text)]
        else:
            elems = [(int(c),) for c in re.split(r"[,;]", text) if c.strip()]
        return [group.normalize(x) for x in elems]
    except ValueError:
        raise InputError(f"--subgroup: cannot read {text!r} as elements of {group!r}") from None


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vaobstruction", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="print a JSON report")
        sp.add_argument("-o", "--output", metavar="PATH", help="write the produced data here")
        return sp

    for name, text in (("cocycle-check", "check the pentagon and hexagon identities"),
                       ("cocycle-trace", "the quadratic form i -> Omega(i,i)"),
                       ("trivialize", "find lambda with d2(lambda) = cocycle, or report the obstruction")):
        sp = add(name, text)
        sp.add_argument("--group", type=_group_arg)
        sp.add_argument("--cocycle", required=True, metavar="PATH")
    sp = add("from-form", "an abelian 3-cocycle with a given trace")
    sp.add_argument("--group", type=_group_arg)
    sp.add_argument("--form", required=True, metavar="PATH")
    sp = add("series-verify", "check expansion diagrams coefficient by coefficient")
    sp.add_argument("--exponents", type=_exponents_arg, required=True,
                    help="six integers for " + ",".join(formal.COORDINATES))
    sp.add_argument("--frontier", type=int, default=8)
    sp.add_argument("--diagram", choices=sorted(formal.DIAGRAMS) + ["all"], default="all")
    for name, text in (("algebra-analyze", "derive the cocycle of a graded algebra and decide extendability"),
                       ("algebra-extend", "apply the correcting twist and emit the new algebra"),
                       ("algebra-verify", "check associativity and skew-symmetry")):
        sp = add(name, text)
        sp.add_argument("algebra", metavar="ALGEBRA.json")
        if name == "algebra-analyze":
            sp.add_argument("--subgroup", help="also build coset modules over this subgroup")
    sp = add("forms-enumerate", "list the +-1 valued quadratic forms on a group")
    sp.add_argument("--group", type=_group_arg, required=True)
    return p


def _normalize_argv(argv: list) -> list:
    if len(argv) >= 2 and argv[0] in _PREFIXES and f"{argv[0]}-{argv[1]}" in COMMANDS:
        return [f"{argv[0]}-{argv[1]}"] + argv[2:]
    return argv


# ---------------------------------------------------------------------------
# commands


def _load_cocycle(args):
    return cochain_from_json(load_json(args.cocycle), args.group)


def _not_cocycle(exc: NotACocycle) -> _Failure:
    return _Failure({"ok": False, "summary": f"not an abelian 3-cocycle: {exc.report.describe()}",
                     "checks": exc.report.to_dict()})


def _values(Q) -> str:
    return ", ".join(f"Q({format_element(Q.group.element(a))})={show_scalar(v)}" for a, v in enumerate(Q.values()))


def cmd_cocycle_check(args):
    rep = is_abelian_3_cocycle(_load_cocycle(args))
    out = {"ok": rep.ok, "checks": rep.to_dict()}
    if not rep.ok:
        raise _Failure({**out, "summary": f"not an abelian 3-cocycle: {rep.describe()}"})
    return {**out, "summary": f"abelian 3-cocycle: {rep.describe()}"}, None


def cmd_cocycle_trace(args):
    try:
        Q = trace(_load_cocycle(args))
    except NotACocycle as exc:
        raise _not_cocycle(exc) from None
    data = form_to_json(Q)
    return {"ok": True, "summary": _values(Q), "form": data}, data


def cmd_trivialize(args):
    try:
        tr = trivialize_3cocycle(_load_cocycle(args))
    except NotACocycle as exc:
        raise _not_cocycle(exc) from None
    Q = tr.trace
    if tr.obstructed:
        where = "; ".join(f"i={format_element(x)}, Q({format_element(x)})={show_scalar(Q(x))}" for x in tr.witness)
        raise _Failure({"ok": False, "obstructed": True, "summary": f"obstructed at {where}",
                        "witness": [format_element(x) for x in tr.witness], "form": form_to_json(Q)})
    data = cochain2_to_json(tr.cochain)
    return {"ok": True, "obstructed": False, "summary": "trivializable: d2(lambda) equals the cocycle",
            "lambda": data}, data


def cmd_from_form(args):
    Q = form_from_json(load_json(args.form), args.group)
    try:
        c = cocycle_from_form(Q)
    except NotAQuadraticForm as exc:
        raise _Failure({"ok": False, "summary": f"not a quadratic form: {exc.report.describe()}",
                        "checks": exc.report.to_dict()}) from None
    except UnsupportedValues as exc:
        raise _Failure({"ok": False, "summary": str(exc)}) from None
    data = cochain_to_json(c)
    summary = "cocycle is identically 1" if c.is_one() else "cocycle with trace " + _values(Q)
    return {"ok": True, "summary": summary, "cocycle": data}, data


def cmd_series_verify(args):
    if args.frontier < 0:
        raise InputError("--frontier must be non-negative")
    names = sorted(formal.DIAGRAMS) if args.diagram == "all" else [args.diagram]
    reports = [formal.verify_diagram(d, args.exponents, args.frontier) for d in names]
    out = {"ok": all(r.ok for r in reports),
           "exponents": list(args.exponents),
           "frontier": args.frontier,
           "diagrams": [{"diagram": r.diagram, "ok": r.ok, "comparisons": r.comparisons,
                         "detail": r.describe()} for r in reports],
           "summary": "\n".join(r.describe() for r in reports)}
    if not out["ok"]:
        raise _Failure(out)
    return out, None


def _load_algebra(args):
    a = algebra_from_json(load_json(args.algebra))
    rep = validate(a)
    if not rep.ok:
        raise _Failure({"ok": False, "summary": f"invalid algebra: {rep.describe()}", "checks": rep.to_dict()})
    return a


def _analysis(a):
    try:
        return obstruction_report(a)
    except (ZeroComposite, NotProportional) as exc:
        raise _Failure({"ok": False, "summary": f"no structure constants: {exc}"}) from None
    except NotACocycle as exc:
        raise _not_cocycle(exc) from None


def cmd_algebra_analyze(args):
    """Without ``--subgroup`` the status is extendability of the whole algebra;
    with it, whether the subgroup part extends and carries coset modules."""
    a = _load_algebra(args)
    rep = _analysis(a)
    out = {"extendable": rep.extendable, "cocycle": cochain_to_json(rep.cocycle),
           "form": form_to_json(rep.form), "notes": list(rep.notes)}
    lines = ["trace: " + _values(rep.form)] + list(rep.notes)
    if rep.extendable:
        out["lambda"] = cochain2_to_json(rep.twist)
        lines.append("extendable; correcting twist lambda emitted")
    else:
        where = "; ".join(f"i={format_element(x)}, Q({format_element(x)})={show_scalar(rep.form(x))}"
                          for x in rep.witness)
        out["witness"] = [format_element(x) for x in rep.witness]
        lines.append(f"obstructed at {where}")
    ok = rep.extendable
    if args.subgroup is not None:
        build = _coset_build(a, _parse_subgroup(args.subgroup, a.group))
        out["coset_build"] = build
        lines.append(build["summary"])
        ok = build["ok"]
    out = {"ok": ok, **out, "summary": "\n".join(lines)}
    if not ok:
        raise _Failure(out)
    return out, out.get("lambda")


def _coset_build(a, subgroup) -> dict:
    try:
        b = coset_module_build(a, subgroup)
    except TraceNotCosetConstant as exc:
        return {"ok": False, "summary": f"coset modules: {exc}"}
    except (NotASubgroup, ValueError) as exc:
        raise InputError(f"--subgroup: {exc}") from None
    ok = b.ok
    summary = (f"coset modules over {len(b.modules)} cosets: "
               + ("module and intertwiner data trivial" if ok else "nontrivial module data"))
    return {"ok": ok, "cosets": len(b.modules), "matches_pullback": b.matches_pullback,
            "quotient_form": form_to_json(b.quotient_form), "twist": cochain2_to_json(b.twist),
            "summary": summary}


def cmd_algebra_extend(args):
    a = _load_algebra(args)
    rep = _analysis(a)
    if not rep.extendable:
        where = ", ".join(format_element(x) for x in rep.witness)
        raise _Failure({"ok": False, "summary": f"obstructed at {where}; nothing to extend",
                        "witness": [format_element(x) for x in rep.witness]})
    twisted = apply_twist(a, rep.twist)
    check = verify_extension(twisted)
    data = algebra_to_json(twisted)
    out = {"ok": check.ok, "summary": "twisted algebra: " + check.describe(), "algebra": data,
           "lambda": cochain2_to_json(rep.twist)}
    if not check.ok:  # pragma: no cover - the twist is correct by construction
        raise _Failure(out)
    return out, data


def cmd_algebra_verify(args):
    a = _load_algebra(args)
    rep = verify_extension(a)
    out = {"ok": rep.ok, "checked": rep.checked, "summary": rep.describe()}
    if not rep.ok:
        out.update(condition=rep.condition, at=list(rep.at))
        raise _Failure(out)
    return out, None


def cmd_forms_enumerate(args):
    try:
        forms = enumerate_pm1_forms(args.group)
    except GroupTooLarge as exc:
        raise InputError(str(exc)) from None
    data = {"group": list(args.group.cyclic_orders), "forms": [form_to_json(Q)["Q"] for Q in forms]}
    lines = [f"{len(forms)} forms"] + [_values(Q) for Q in forms]
    return {"ok": True, "count": len(forms), "forms": data["forms"], "summary": "\n".join(lines)}, data


_HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


# ---------------------------------------------------------------------------
# entry points


def run(argv=None, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _normalize_argv(list(sys.argv[1:] if argv is None else argv))
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    data = None
    try:
        report, data = _HANDLERS[args.command](args)
        status = 0
    except _Failure as f:
        report, status = f.report, 1
    except InputError as exc:
        print(f"{args.command}: input error: {exc}", file=stderr)
        return 2
    report = {"command": args.command, **report}
    if args.json:
        stdout.write(dump_json(report))
    else:
        stdout.write(report["summary"] + "\n")
    if args.output and data is not None:
        Path(args.output).write_text(dump_json(data))
    return status


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
