"""Command-line front end: ``vkt parse | invariants | family | fuzz | selftest``.

Exit codes: 0 success, 1 findings (fuzz violations, failed self-test),
2 input error, 3 resource guard.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable

from . import builtins
from .bracket import TooLarge, bracket_contract, bracket_state_sum, f_poly, n_bracket
from .carrier import MAX_SURFACE_CROSSINGS, carrying_surface, obstruction_test
from .codec import CodecError, code_of, diagram_to_json, emit_gauss, parse_gauss, realize, to_gauss
from .diagram import Diagram, DiagramError, components, random_diagram, random_move, writhe
from .laurent import D, LaurentPoly
from .wirtinger import (abelianization, builtin_group, count_homs, format_presentation, presentation,
                        simplify)

EXIT_OK, EXIT_FINDINGS, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- helpers ----------------------------------------------------------------------------

def _jobs(arg: int | None) -> int:
    if arg is not None:
        return max(1, arg)
    try:
        return max(1, int(os.environ.get("VKT_JOBS", "1")))
    except ValueError:
        raise InputError("VKT_JOBS must be an integer") from None


def _pmap(fn: Callable, items: list, jobs: int) -> list:
    """Order-preserving map, in worker processes when ``jobs > 1``."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _load_input(args) -> tuple[Diagram, dict]:
    given = [x for x in (args.code, args.file, args.name) if x is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --code, --file, --name")
    if args.code is not None:
        try:
            d = realize(parse_gauss(args.code))
        except CodecError as e:
            raise InputError(f"--code: {e}") from None
        return d, {"code": emit_gauss(parse_gauss(args.code))}
    if args.file is not None:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"--file: {e}") from None
        try:
            if text.lstrip().startswith("{"):
                from .codec import diagram_from_json
                d = diagram_from_json(text)
            else:
                d = realize(parse_gauss(text))
        except (CodecError, ValueError, KeyError) as e:
            raise InputError(f"--file {args.file}: {e}") from None
        return d, {"file": args.file, "code": code_of(d)}
    b = _load_builtin(args.name)
    return b.diagram(), {"name": b.name, "code": b.code, "version": b.version, "status": b.status}


def _load_builtin(name: str) -> builtins.Builtin:
    try:
        return builtins.load(name)
    except KeyError as e:
        raise InputError(str(e.args[0])) from None
    except (FileNotFoundError, builtins.ChecksumError) as e:
        raise InputError(f"built-in {name!r} is unavailable: {e}") from None


def _poly_out(p: LaurentPoly, fmt: str):
    return p.to_json() if fmt == "json" else str(p)


def _emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        _emit_text(report, out, 0)


def _emit_text(obj: Any, out, indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                out.write(f"{pad}{k}:\n")
                _emit_text(v, out, indent + 1)
            else:
                out.write(f"{pad}{k}: {_flat_text(v)}\n")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                out.write(f"{pad}-\n")
                _emit_text(v, out, indent + 1)
            else:
                out.write(f"{pad}- {_flat_text(v)}\n")
    else:
        out.write(f"{pad}{obj}\n")


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _flat_text(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _check_states(d: Diagram, max_states: int | None) -> None:
    if max_states is not None and 2 ** d.n > max_states:
        raise TooLarge(f"{2 ** d.n} states exceed --max-states {max_states}")


# -- invariants --------------------------------------------------------------------------

def compute_invariants(d: Diagram, opts: dict) -> tuple[dict, dict]:
    """Invariant block and per-invariant timings (ms) for one diagram."""
    fmt = opts["format"]
    inv: dict[str, Any] = {}
    tm: dict[str, int] = {}
    kw = {"max_frontier": opts.get("max_frontier")}

    def timed(key, fn):
        t0 = time.perf_counter()
        val = fn()
        tm[key] = round((time.perf_counter() - t0) * 1000)
        return val

    if opts.get("bracket"):
        inv["bracket"] = _poly_out(timed("bracket", lambda: bracket_contract(d, **kw)), fmt)
    if opts.get("nbracket"):
        N = opts["nbracket"]
        p = timed("nbracket", lambda: n_bracket(d, N, **kw))
        inv["nbracket"] = {"N": N, "poly": _poly_out(p, fmt), "equals_unknot": p == D ** (N - 1)}
    if opts.get("fpoly"):
        inv["fpoly"] = _poly_out(timed("fpoly", lambda: f_poly(d, **kw)), fmt)
    if opts.get("group"):
        def grp():
            pres = presentation(d)
            simp = simplify(pres)
            homs = {}
            for gname in opts.get("groups") or ("S3", "S4"):
                hc = count_homs(simp, builtin_group(gname), simplify_first=False)
                homs[gname] = {"total": hc.total, "nonabelian": hc.nonabelian}
            return {"generators": len(pres.generators), "relators": len(pres.relators),
                    "simplified": format_presentation(simp), "abelianization": abelianization(pres),
                    "homs": homs}
        inv["group"] = timed("group", grp)
    if opts.get("genus"):
        inv["genus"] = timed("genus", lambda: carrying_surface(d).genus)
    if opts.get("obstruct"):
        _check_states(d, opts.get("max_states"))
        inv["obstruction"] = timed("obstruction", lambda: obstruction_test(d, MAX_SURFACE_CROSSINGS).to_json())
    return inv, tm


def _invariant_opts(args) -> dict:
    return {
        "format": args.format, "bracket": args.bracket, "nbracket": args.nbracket, "fpoly": args.fpoly,
        "group": args.group, "groups": args.groups, "genus": args.genus, "obstruct": args.obstruct,
        "max_states": args.max_states, "max_frontier": args.max_frontier,
    }


def cmd_invariants(args) -> int:
    d, source = _load_input(args)
    opts = _invariant_opts(args)
    if not any(opts[k] for k in ("bracket", "nbracket", "fpoly", "group", "genus", "obstruct")):
        opts["bracket"] = True
    if opts["nbracket"] is not None and opts["nbracket"] < 1:
        raise InputError("--nbracket must be >= 1")
    inv, tm = compute_invariants(d, opts)
    report = {"input": {**source, "crossings": d.n, "components": components(d)[0], "writhe": writhe(d)},
              "invariants": inv}
    if args.timings:
        report["timings_ms"] = tm
    _emit(report, args.format)
    return EXIT_OK


# -- parse --------------------------------------------------------------------------------

def cmd_parse(args) -> int:
    d, source = _load_input(args)
    report = {"input": source, "canonical": code_of(d), "crossings": d.n,
              "components": components(d)[0], "writhe": writhe(d),
              "diagram": json.loads(diagram_to_json(d))}
    _emit(report, args.format)
    return EXIT_OK


# -- family -------------------------------------------------------------------------------

def _t_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
            return list(range(lo, hi + 1)) if lo <= hi else list(range(lo, hi - 1, -1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad t-range {text!r}; use e.g. 0..5 or 0,1,3") from None


def _family_row(job) -> dict:
    base_code, sites, t, opts = job
    base = realize(parse_gauss(base_code))
    d = builtins.family_member(base, sites, t)
    inv, _ = compute_invariants(d, opts)
    br = bracket_contract(d, max_frontier=opts.get("max_frontier"))
    return {"t": t, "crossings": d.n, "code": code_of(d), "bracket_poly": br, "invariants": inv}


def _stated_form(t: int) -> LaurentPoly:
    """-A^(3t): the closed form as usually stated for family B."""
    return LaurentPoly.monomial(3 * t, -1)


def _recursive_form(t: int) -> LaurentPoly:
    """(-A)^(3t): what the one-twist skein recursion gives."""
    return LaurentPoly.monomial(3 * t, -1 if t % 2 else 1)


def cmd_family(args) -> int:
    if args.name is None:
        raise InputError("family needs --name of a built-in with declared twist sites (k_d or k_m)")
    b = _load_builtin(args.name)
    if not b.sites:
        raise InputError(f"built-in {b.name!r} declares no twist site")
    ts = _t_range(args.t)
    opts = _invariant_opts(args)
    opts["bracket"] = False
    jobs = [(b.code, b.sites, t, opts) for t in ts]
    rows = _pmap(_family_row, jobs, _jobs(args.jobs))
    base_bracket = bracket_contract(b.diagram())
    forms = {"-A^{3t}": True, "(-A)^{3t}": True}
    out_rows = []
    for r in rows:
        t, br = r["t"], r["bracket_poly"]
        row = {"t": t, "crossings": r["crossings"], "bracket": _poly_out(br, args.format)}
        if b.family == "A":
            row["check"] = "ok" if br == base_bracket else "MISMATCH"
        elif b.family == "B":
            hits = {"-A^{3t}": br == _stated_form(t), "(-A)^{3t}": br == _recursive_form(t)}
            for k, v in hits.items():
                forms[k] = forms[k] and v
            row["check"] = ",".join(k for k, v in hits.items() if v) or "MISMATCH"
        if r["invariants"]:
            row["invariants"] = r["invariants"]
        if args.code_out:
            row["code"] = r["code"]
        out_rows.append(row)
    report: dict[str, Any] = {"input": {"name": b.name, "code": b.code, "family": b.family,
                                        "sites": [s.to_json() for s in b.sites]},
                              "rows": out_rows}
    if b.family == "A":
        report["closed_form"] = "bracket equals the base bracket for every t"
        report["holds"] = all(r["check"] == "ok" for r in out_rows)
    elif b.family == "B":
        report["closed_form"] = {k: v for k, v in forms.items()}
        report["holds"] = all(r["check"] != "MISMATCH" for r in out_rows)
    _emit(report, args.format)
    return EXIT_OK if report.get("holds", True) else EXIT_FINDINGS


# -- fuzz ---------------------------------------------------------------------------------

def _fuzz_one(job) -> dict | None:
    seed, crossings, moves, with_groups, bug = job
    from .wirtinger import symmetric_group
    rng = random.Random(seed)
    d0 = random_diagram(crossings, seed)
    S3 = symmetric_group(3)

    def brk(d):
        p = bracket_contract(d)
        if bug and d.n and d.signs[0] < 0:  # deliberate defect for the harness self-test
            p = p.mirror()
        return p

    def fp(d):
        w = writhe(d)
        return LaurentPoly.monomial(-3 * w, -1 if w % 2 else 1) * brk(d)

    ref_b, ref_f = brk(d0), fp(d0)
    ref_h = count_homs(presentation(d0), S3).as_tuple() if with_groups else None
    d = d0
    history = []
    for _ in range(moves):
        kinds = ("RII-add", "RII-remove", "RIII", "RI-add", "RI-remove")
        step = random_move(d, rng, kinds)
        if step is None:
            break
        move, loc, nd = step
        history.append((move, loc))
        ri = move.startswith("RI-")
        bad = None
        if not ri and brk(nd) != ref_b:
            bad = "bracket"
        elif fp(nd) != ref_f:
            bad = "fpoly"
        elif with_groups and nd.n <= 14 and count_homs(presentation(nd), S3).as_tuple() != ref_h:
            bad = "homs"
        if bad:
            return {"seed": seed, "invariant": bad, "start": code_of(d0),
                    "reproducer": {"before": code_of(d), "move": move, "location": _jsonable(loc),
                                   "after": code_of(nd)},
                    "moves_applied": len(history)}
        d = nd
        if ri:
            ref_b = brk(d)
    return None


def _jsonable(loc: dict) -> dict:
    out = {}
    for k, v in loc.items():
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def cmd_fuzz(args) -> int:
    jobs = [(args.seed + i, args.crossings, args.moves, args.groups_check, args.inject_bug)
            for i in range(args.diagrams)]
    results = _pmap(_fuzz_one, jobs, _jobs(args.jobs))
    violations = [r for r in results if r]
    report = {"seed": args.seed, "diagrams": args.diagrams, "crossings": args.crossings,
              "moves": args.moves, "violations": len(violations),
              "first_violation": violations[0] if violations else None}
    _emit(report, args.format)
    return EXIT_FINDINGS if violations else EXIT_OK


# -- selftest -----------------------------------------------------------------------------

def cmd_selftest(args) -> int:
    checks = []

    def check(name, ok):
        checks.append({"check": name, "ok": bool(ok)})

    kink = realize(parse_gauss("O1+U1+"))
    check("kink bracket is -A^3", bracket_contract(kink) == LaurentPoly.monomial(3, -1))
    check("kink f-polynomial is 1", f_poly(kink) == LaurentPoly.constant(1))
    for N in range(1, 5):
        check(f"unknot {N}-strand bracket is d^{N - 1}", n_bracket(Diagram.unknot(), N) == D ** (N - 1))
    for seed in range(20):
        d = random_diagram(6, seed)
        check(f"contraction equals state sum (seed {seed})", bracket_contract(d) == bracket_state_sum(d))
    k = builtins.diagram("kishino")
    check("Kishino bracket is 1", bracket_contract(k) == LaurentPoly.constant(1))
    check("Kishino 2-strand bracket is d", n_bracket(k, 2) == D)
    check("Kishino genus is 2", carrying_surface(k).genus == 2)
    ok = all(c["ok"] for c in checks)
    _emit({"checks": checks, "passed": ok}, args.format)
    return EXIT_OK if ok else EXIT_FINDINGS


# -- argument parsing ---------------------------------------------------------------------

def _add_input(p):
    p.add_argument("--code", help="inline signed Gauss code, e.g. 'O1+U2+O3+U1+O2+U3+'")
    p.add_argument("--file", help="file holding a Gauss code or a diagram JSON document")
    p.add_argument("--name", help="built-in: " + ", ".join(builtins.NAMES))


def _add_common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default $VKT_JOBS or 1)")


def _add_invariant_flags(p):
    p.add_argument("--bracket", action="store_true")
    p.add_argument("--nbracket", type=int, metavar="N")
    p.add_argument("--fpoly", action="store_true")
    p.add_argument("--group", action="store_true", help="presentation, abelianization and hom counts")
    p.add_argument("--groups", nargs="+", metavar="G", help="hom-count targets (default S3 S4; also Zk)")
    p.add_argument("--genus", action="store_true")
    p.add_argument("--obstruct", action="store_true", help="cancellation-curve obstruction certificate")
    p.add_argument("--max-states", type=int, help="abort (exit 3) if a state enumeration exceeds this")
    p.add_argument("--max-frontier", type=int, help="abort (exit 3) if a contraction frontier exceeds this")
    p.add_argument("--timings", action="store_true", help="add timings_ms (makes output non-deterministic)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vkt", description="Invariants of virtual knot diagrams.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate a code and print its canonical form")
    _add_input(p)
    _add_common(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("invariants", help="compute invariants of one diagram")
    _add_input(p)
    _add_common(p)
    _add_invariant_flags(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("family", help="twist family of a built-in diagram")
    p.add_argument("--name", required=True, help="k_d (family A) or k_m (family B)")
    p.add_argument("--t", default="0..5", help="t values: 'lo..hi' or a comma list")
    p.add_argument("--code-out", action="store_true", help="include each member's Gauss code")
    _add_common(p)
    _add_invariant_flags(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("fuzz", help="random move sequences; checks invariance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--diagrams", type=int, default=100)
    p.add_argument("--crossings", type=int, default=5)
    p.add_argument("--moves", type=int, default=50)
    p.add_argument("--groups-check", action="store_true", help="also compare S3 hom counts")
    p.add_argument("--inject-bug", action="store_true", help=argparse.SUPPRESS)
    _add_common(p)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("selftest", help="quick built-in consistency checks")
    _add_common(p)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"vkt: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (CodecError, DiagramError) as e:
        print(f"vkt: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except TooLarge as e:
        print(f"vkt: resource guard: {e}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
