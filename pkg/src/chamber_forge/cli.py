"""Command-line front end: ``chamber-forge <verb> ...``.

Every command prints one JSON report on stdout.  Exit codes:

0
    every requested predicate holds;
1
    a predicate fails, a search gives up or a budget runs out (the report
    carries the witness);
2
    unreadable or invalid input, a violated precondition, or a size guard.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from . import io as cfio
from .cox import find_linearization, ray_data
from .dvr import (
    UnipotentAction,
    bounded_family_report,
    is_constant_family,
    orbit_table,
    recession_fan,
    special_fiber_components,
)
from .errors import (
    BudgetExceeded,
    ChamberForgeError,
    NonConvexSupport,
    NotAFan,
    NotPointed,
    NotStable,
    SearchExhausted,
)
from .monoids import AffineMonoid, fiber_checks, hilbert_basis_of, saturate_monoid
from .polyhedral import (
    MatrixGroup,
    fan_validate,
    is_complete,
    is_projective,
    is_smooth,
    is_stable,
    saturate,
)
from .refinement import DEFAULT_BUDGET, equivariant_smooth_refine, good_fan
from .rootdata import (
    PRESETS,
    boundary_strata,
    build_root_datum,
    diagram_automorphisms,
    dominant_chamber,
    preset,
    weyl_fan,
    weyl_group,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_FAN_RANK = 4
MAX_COX_RAYS = 12


class UsageError(Exception):
    """Precondition or guard violation: exit code 2."""


def _emit(args, command, inputs, verdicts, witnesses, started, extra=None) -> None:
    timing = {"seconds": round(time.perf_counter() - started, 6)} if args.timing else None
    rep = cfio.report(command, inputs, verdicts, witnesses, timing)
    if extra:
        rep.update(extra)
    sys.stdout.write(cfio.dumps(rep))


def _load_fan(path):
    doc = cfio.read_document(path)
    f = cfio.fan_from_document(doc)
    if f.rank > MAX_FAN_RANK:
        raise UsageError(f"fan rank {f.rank} exceeds the guard of {MAX_FAN_RANK}")
    return doc, f


def _write_output(args, doc):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(cfio.dumps(doc))


# --------------------------------------------------------------------------
# fan


def cmd_fan_check(args) -> int:
    started = time.perf_counter()
    doc, f = _load_fan(args.path)
    inputs = {"fan": doc}
    verdicts, witnesses = {"valid": True}, {}
    if args.smooth:
        v = is_smooth(f)
        verdicts["smooth"] = v.ok
        if v.witness:
            cone, index = v.witness
            witnesses["smooth"] = {"cone": [list(f.rays[i]) for i in sorted(cone)], "index": index}
    if args.complete:
        try:
            v = is_complete(f)
            verdicts["complete"] = v.ok
            if not v.ok:
                witnesses["complete"] = v.witness
        except ChamberForgeError as exc:
            verdicts["complete"] = False
            witnesses["complete"] = str(exc)
    if args.projective:
        try:
            v = is_projective(f)
            verdicts["projective"] = v.ok
            if v.ok:
                witnesses["projective"] = {
                    "support_function": [
                        {"cone": sorted(c), "functional": list(m)} for c, m in sorted(
                            v.witness.items(), key=lambda e: sorted(e[0]))
                    ]
                }
            else:
                witnesses["projective"] = {"farkas": v.witness}
        except NonConvexSupport as exc:
            verdicts["projective"] = False
            witnesses["projective"] = str(exc)
    if args.stable:
        gdoc = cfio.read_document(args.stable)
        g = cfio.group_from_document(gdoc)
        inputs["group"] = gdoc
        if g.rank != f.rank:
            raise UsageError("group rank does not match the fan rank")
        v = is_stable(f, g)
        verdicts["stable"] = v.ok
        if v.witness:
            witnesses["stable"] = v.witness
    _emit(args, "fan check", inputs, verdicts, witnesses, started)
    return EXIT_OK if all(verdicts.values()) else EXIT_FAIL


def cmd_fan_saturate(args) -> int:
    started = time.perf_counter()
    doc, f = _load_fan(args.path)
    gdoc = cfio.read_document(args.group)
    g = cfio.group_from_document(gdoc)
    if g.rank != f.rank:
        raise UsageError("group rank does not match the fan rank")
    try:
        out = saturate(f, g)
    except ChamberForgeError as exc:
        _emit(args, "fan saturate", {"fan": doc, "group": gdoc}, {"saturated": False},
              {"error": str(exc)}, started)
        return EXIT_FAIL
    odoc = cfio.fan_to_document(out)
    _write_output(args, odoc)
    _emit(args, "fan saturate", {"fan": doc, "group": gdoc},
          {"saturated": True, "stable": bool(is_stable(out, g))}, {}, started, {"fan": odoc})
    return EXIT_OK


# --------------------------------------------------------------------------
# refine


def cmd_refine(args) -> int:
    started = time.perf_counter()
    budget = args.budget
    if args.preset:
        rd = _root_datum(args)
        inputs = {"preset": rd.name, "form": rd.form.value, "budget": budget}
        try:
            res = good_fan(rd, budget=budget)
        except BudgetExceeded as exc:
            _emit(args, "refine", inputs, {"smooth": False}, {"error": str(exc)}, started,
                  {"trace": exc.trace.as_dict() if exc.trace else None})
            return EXIT_FAIL
        odoc = cfio.fan_to_document(res.fan)
        _write_output(args, odoc)
        extra = {
            "fan": odoc,
            "saturation": cfio.fan_to_document(res.saturated),
            "trace": res.trace.as_dict(),
        }
        _emit(args, "refine", inputs, dict(res.checks), {}, started, extra)
        return EXIT_OK if all(res.checks.values()) else EXIT_FAIL
    if not args.fan:
        raise UsageError("give either --preset or --fan")
    doc, f = _load_fan(args.fan)
    inputs = {"fan": doc, "budget": budget}
    if args.group:
        gdoc = cfio.read_document(args.group)
        g = cfio.group_from_document(gdoc)
        inputs["group"] = gdoc
    else:
        g = MatrixGroup.trivial(f.rank)
    if g.rank != f.rank:
        raise UsageError("group rank does not match the fan rank")
    try:
        g.elements()
        out, trace = equivariant_smooth_refine(f, g, budget)
    except NotStable as exc:
        raise UsageError(str(exc)) from exc
    except BudgetExceeded as exc:
        _emit(args, "refine", inputs, {"smooth": False}, {"error": str(exc)}, started,
              {"trace": exc.trace.as_dict() if exc.trace else None})
        return EXIT_FAIL
    verdicts = {
        "valid": fan_validate(out).ok,
        "smooth": bool(is_smooth(out)),
        "stable": bool(is_stable(out, g)),
    }
    odoc = cfio.fan_to_document(out)
    _write_output(args, odoc)
    _emit(args, "refine", inputs, verdicts, {}, started, {"fan": odoc, "trace": trace.as_dict()})
    return EXIT_OK if all(verdicts.values()) else EXIT_FAIL


# --------------------------------------------------------------------------
# rootdatum


def _root_datum(args):
    if getattr(args, "cartan", None):
        try:
            rows = [[int(x) for x in row.split()] for row in args.cartan.split(";")]
        except ValueError as exc:
            raise cfio.DocumentError(f"cannot parse Cartan matrix: {exc}") from exc
        return build_root_datum(rows, args.form, "custom")
    key = (args.preset or "").upper()
    if key not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
    return preset(key, args.form)


def cmd_rootdatum(args) -> int:
    started = time.perf_counter()
    rd = _root_datum(args)
    inputs = {"cartan": [list(r) for r in rd.cartan], "form": rd.form.value}
    if args.action == "weylfan":
        wf = weyl_fan(rd)
        chamber = dominant_chamber(rd)
        verdicts = {"complete": bool(is_complete(wf)), "smooth": bool(is_smooth(wf))}
        witnesses = {
            "weyl_order": weyl_group(rd).order,
            "maximal_cones": len(wf.maximal_cones),
            "chamber_rays": [list(r) for r in chamber.rays],
            "chamber_index": chamber.index,
            "diagram_automorphisms": diagram_automorphisms(rd).order,
        }
        odoc = cfio.fan_to_document(wf)
        _write_output(args, odoc)
        _emit(args, "rootdatum weylfan", inputs, verdicts, witnesses, started, {"fan": odoc})
        return EXIT_OK
    if rd.form.value != "adjoint":
        raise UsageError("boundary strata are defined for the adjoint form")
    poset = boundary_strata(rd)
    strata = [
        {"roots": [rd.simple_labels[i] for i in sorted(s.roots)],
         "face_rays": [list(r) for r in s.face.rays], "codim": s.codim}
        for s in poset.strata
    ]
    _emit(args, "rootdatum strata", inputs, {"subset_lattice": len(poset) == 2 ** rd.rank},
          {"count": len(poset), "strata": strata}, started)
    return EXIT_OK


# --------------------------------------------------------------------------
# monoid


def cmd_monoid(args) -> int:
    started = time.perf_counter()
    text = args.generators
    try:
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    except OSError:
        pass
    gens = cfio.generators_from_json(cfio.loads(text))
    q = AffineMonoid.of(gens)
    inputs = {"generators": [list(g) for g in q.generators], "mode": args.mode}
    if args.mode == "saturate":
        res = saturate_monoid(q)
        _emit(args, "monoid", inputs, {"saturated": res.is_saturated, "pointed": res.pointed},
              res.as_dict(), started)
        return EXIT_OK
    if args.mode == "hilbert":
        try:
            basis = hilbert_basis_of(q.generators, q.ambient)
        except NotPointed as exc:
            _emit(args, "monoid", inputs, {"pointed": False}, {"error": str(exc)}, started)
            return EXIT_FAIL
        _emit(args, "monoid", inputs, {"pointed": True},
              {"hilbert_basis": [list(b) for b in basis]}, started)
        return EXIT_OK
    checks = fiber_checks(q)
    _emit(args, "monoid", inputs, checks.as_dict(), {}, started)
    return EXIT_OK


# --------------------------------------------------------------------------
# dvr and the counterexample


def cmd_dvr_analyze(args) -> int:
    started = time.perf_counter()
    doc = cfio.read_document(args.path)
    d = cfio.dvr_fan_from_document(doc)
    try:
        rec = recession_fan(d)
    except NotAFan as exc:
        _emit(args, "dvr analyze", {"dvr_fan": doc}, {"recession_is_fan": False},
              {"error": str(exc)}, started)
        return EXIT_FAIL
    sf = special_fiber_components(d)
    _emit(args, "dvr analyze", {"dvr_fan": doc},
          {"recession_is_fan": True, "constant_family": is_constant_family(d)},
          {"recession_fan": cfio.fan_to_document(rec),
           "special_fiber": {"count": sf.count, "vertices": [list(v) for v in sf.vertices]}},
          started)
    return EXIT_OK


def _parse_matrix(text: str):
    try:
        vals = [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise cfio.DocumentError(f"cannot parse matrix {text!r}") from exc
    if len(vals) != 4:
        raise UsageError("--matrix takes four integers (row-major 2x2)")
    return ((vals[0], vals[1]), (vals[2], vals[3]))


def cmd_counterexample(args) -> int:
    started = time.perf_counter()
    try:
        u = UnipotentAction(_parse_matrix(args.matrix))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not u.is_unipotent():
        raise UsageError(f"{list(map(list, u.matrix))} is not a nontrivial unipotent matrix")
    if args.ray_bound < 1:
        raise UsageError("--ray-bound must be at least 1")
    rep = bounded_family_report(u, args.ray_bound)
    table = orbit_table(u, (0, 1), 100)
    distinct = len({v for _, v in table}) == len(table)
    inputs = {"matrix": [list(r) for r in u.matrix], "ray_bound": args.ray_bound}
    witnesses = rep.as_dict(full=args.full)
    witnesses["orbit_table"] = [[n, list(v)] for n, v in table]
    verdicts = {"all_refuted": rep.all_refuted, "no_library_bugs": not rep.library_bugs,
                "orbit_distinct": distinct}
    _emit(args, "counterexample", inputs, verdicts, witnesses, started)
    return EXIT_OK if all(verdicts.values()) else EXIT_FAIL


# --------------------------------------------------------------------------
# cox


def cmd_cox(args) -> int:
    started = time.perf_counter()
    doc, f = _load_fan(args.path)
    k = len(ray_data(f))
    if k > MAX_COX_RAYS:
        raise UsageError(f"{k} rays exceed the guard of {MAX_COX_RAYS} for pattern enumeration")
    inputs = {"fan": doc, "box": args.box}
    try:
        lin = find_linearization(f, args.box)
    except SearchExhausted as exc:
        _emit(args, "cox", inputs, {"linearization_found": False},
              {"error": str(exc), "box": exc.box}, started)
        return EXIT_FAIL
    verdicts = {"linearization_found": True, "semistable_equals_nondegenerate": lin.verified,
                "stable": lin.stable}
    _emit(args, "cox", inputs, verdicts, lin.as_dict(), started)
    return EXIT_OK if lin.verified else EXIT_FAIL


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timing", action="store_true",
                        help="add wall-clock timing to the report (breaks byte-identity)")

    p = argparse.ArgumentParser(prog="chamber-forge", description=__doc__.splitlines()[0],
                                parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    fan = sub.add_parser("fan", help="fan predicates and saturation")
    fsub = fan.add_subparsers(dest="action", required=True)
    chk = fsub.add_parser("check", parents=[common], help="run predicates on a FanDocument")
    chk.add_argument("path")
    chk.add_argument("--smooth", action="store_true")
    chk.add_argument("--complete", action="store_true")
    chk.add_argument("--projective", action="store_true")
    chk.add_argument("--stable", metavar="GROUP", help="group document to test stability against")
    chk.set_defaults(func=cmd_fan_check)
    sat = fsub.add_parser("saturate", parents=[common], help="saturate a fan under a finite group")
    sat.add_argument("path")
    sat.add_argument("--group", required=True)
    sat.add_argument("-o", "--output", help="also write the resulting FanDocument here")
    sat.set_defaults(func=cmd_fan_saturate)

    ref = sub.add_parser("refine", parents=[common], help="equivariant smooth refinement")
    ref.add_argument("--preset", help="root datum preset: " + ", ".join(sorted(PRESETS)))
    ref.add_argument("--form", default="adjoint", choices=["adjoint", "sc"])
    ref.add_argument("--fan", help="FanDocument to refine instead of a preset")
    ref.add_argument("--group", help="group document (with --fan); default trivial")
    ref.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ref.add_argument("-o", "--output")
    ref.set_defaults(func=cmd_refine)

    rd = sub.add_parser("rootdatum", help="Weyl fans and boundary strata")
    rdsub = rd.add_subparsers(dest="action", required=True)
    for name in ("weylfan", "strata"):
        q = rdsub.add_parser(name, parents=[common])
        q.add_argument("--preset")
        q.add_argument("--cartan", help='rows separated by ";", e.g. "2 -1; -1 2"')
        q.add_argument("--form", default="adjoint", choices=["adjoint", "sc"])
        if name == "weylfan":
            q.add_argument("-o", "--output")
        q.set_defaults(func=cmd_rootdatum)

    mon = sub.add_parser("monoid", parents=[common], help="affine monoid saturation")
    mon.add_argument("generators", help="JSON array (or file), e.g. '[[0,1],[2,1]]' or '[2,3]'")
    mode = mon.add_mutually_exclusive_group(required=True)
    mode.add_argument("--saturate", dest="mode", action="store_const", const="saturate")
    mode.add_argument("--hilbert", dest="mode", action="store_const", const="hilbert")
    mode.add_argument("--fiber-checks", dest="mode", action="store_const", const="fiber-checks")
    mon.set_defaults(func=cmd_monoid)

    dvr = sub.add_parser("dvr", help="fans over a DVR")
    dsub = dvr.add_subparsers(dest="action", required=True)
    an = dsub.add_parser("analyze", parents=[common])
    an.add_argument("path")
    an.set_defaults(func=cmd_dvr_analyze)

    ce = sub.add_parser("counterexample", parents=[common],
                        help="refute unipotent-stable complete fans in a bounded family")
    ce.add_argument("--matrix", default="1 1 0 1")
    ce.add_argument("--ray-bound", type=int, default=2)
    ce.add_argument("--full", action="store_true", help="include every candidate verdict")
    ce.set_defaults(func=cmd_counterexample)

    cox = sub.add_parser("cox", parents=[common], help="find and verify a GIT linearization")
    cox.add_argument("path")
    cox.add_argument("--box", type=int, default=None)
    cox.set_defaults(func=cmd_cox)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, cfio.DocumentError) as exc:
        sys.stderr.write(f"chamber-forge: error: {exc}\n")
        return EXIT_USAGE
    except ChamberForgeError as exc:
        # remaining library errors are precondition failures on the input
        sys.stderr.write(f"chamber-forge: error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
