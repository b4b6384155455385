"""Command-line entry point.

    weilcoh gcoh    --json '{"group": {"generators": 1, "relations": []}, "phi": [[1]]}'
    weilcoh rgamma  --input module.json --max-chain 8
    weilcoh splice  --json '{"preset": "elliptic", "q": 5, "a": 2}'
    weilcoh zeta    --json '{"q": 5, "genus": 1, "counts": [4]}' --n 1
    weilcoh check   lemma4.2 --seed 3 --samples 50

Exit status: 0 when every verdict passes, 1 when some verdict fails,
2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import jsonio
from .checks import SUITES, run_suite
from .errors import IdentityViolation, WeilCohError
from .fga import FgAbGroup
from .gmod import canonical_invariants_to_coinvariants, coinvariants, cup_e, invariants
from .jsonio import InputError
from .matrix import Matrix
from .weil_cohomology import (
    Preset,
    elliptic_preset,
    point_preset,
    projective_line_preset,
    splice,
    validate_bounds,
)
from .weil_complex import cofinal_chain, gamma_star, level_cohomology, r1_gamma_star
from .zeta import (
    HodgeTable,
    special_value_check,
    weil_warnings,
    zeta_elliptic,
    zeta_point,
    zeta_projective_line,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# levels above this get no explicit level-cohomology verdict in rgamma reports
REPORT_LEVEL_BOUND = 12


def _structure(g: FgAbGroup) -> str:
    parts = [f"Z/{d}" for d in g.invariant_factors] + ["Z"] * g.free_rank
    return " + ".join(parts) if parts else "0"


def _group_report(g: FgAbGroup) -> dict:
    return {"structure": _structure(g), "presentation": jsonio.dump_group(g)}


def _read_input(args) -> Any:
    if args.json is not None:
        text, origin = args.json, "--json"
    elif args.input is not None:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
        origin = args.input
    else:
        raise InputError("no input: pass --input PATH or --json STRING")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{origin}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# ---------------------------------------------------------------------------
# subcommands; each returns (report, passed)


def cmd_gcoh(obj, args) -> tuple:
    m = jsonio.load_gmodule(obj)
    H0, _ = invariants(m)
    H1, _ = coinvariants(m)
    e = cup_e(m)
    ok = e.equals(canonical_invariants_to_coinvariants(m))
    report = {
        "module": jsonio.dump_gmodule(m),
        "H0": _group_report(H0),
        "H1": _group_report(H1),
        "cup_e": jsonio.dump_matrix(e.matrix),
        "cup_e_equals_canonical_map": "pass" if ok else "fail",
    }
    return report, ok


def _colimit_report(c) -> dict:
    out = {"kind": c.kind}
    if c.group is not None:
        out["structure"] = _structure(c.group)
    if c.rank is not None:
        out["rank"] = c.rank
    return out


def _level_report(m: int, base) -> tuple:
    try:
        lc = level_cohomology(m, base)
    except IdentityViolation as exc:
        return {"level": m, "exact": "fail", "reason": str(exc)}, False
    return {"level": m, "H0": _structure(lc.H0), "H1": _structure(lc.H1), "exact": "pass"}, True


def _system_report(r) -> dict:
    return {
        "chain": r.chain,
        "objects": [_structure(g) for g in r.objects],
        "transitions": [jsonio.dump_matrix(t.matrix) for t in r.transitions],
        "stabilized": r.stabilized,
        "stabilization_index": r.stabilization_index,
        "stabilization_level": None if r.stabilization_index is None else r.chain[r.stabilization_index],
        "colimit": _colimit_report(r.colimit),
        "certified": r.certified,
    }


def cmd_rgamma(obj, args) -> tuple:
    wrapped = isinstance(obj, dict) and "base" in obj
    base = jsonio.load_gmodule(obj["base"] if wrapped else obj, "base" if wrapped else "")
    max_chain = args.max_chain
    wanted = [m for m in cofinal_chain(max_chain) if m <= REPORT_LEVEL_BOUND]
    if wrapped and "level" in obj:
        level = jsonio.load_int(obj["level"], "level")
        if level < 1:
            raise InputError("'level' must be a positive integer")
        wanted = sorted(set(wanted) | {level})
    ok = True
    levels = []
    for m in wanted:
        entry, good = _level_report(m, base)
        levels.append(entry)
        ok = ok and good
    report = {
        "module": jsonio.dump_gmodule(base),
        "gamma_star": _system_report(gamma_star(base, max_chain)),
        "R1_gamma_star": _system_report(r1_gamma_star(base, max_chain)),
        "levels": levels,
    }
    return report, ok


_PRESETS = {"point", "P1", "elliptic"}


def _preset_from(obj) -> Preset:
    name = obj.get("preset")
    if name not in _PRESETS:
        raise InputError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}")
    q = jsonio.load_int(obj.get("q", 5), "q")
    if q < 2:
        raise InputError("q must be a prime power")
    if name == "point":
        return point_preset(q)
    if name == "P1":
        return projective_line_preset(q)
    if "a" not in obj:
        raise InputError("elliptic preset needs the trace of Frobenius 'a'")
    return elliptic_preset(q, jsonio.load_int(obj["a"], "a"))


def _custom_preset(obj, d: int, n: int, q: int = 0) -> Preset:
    etale, rational, deltas = jsonio.load_splice_input(obj)
    data = splice(etale, rational, deltas)
    w = data.get(2 * n)
    size = w.rank if w is not None and w.is_finitely_generated() else 0
    if "pairing" in obj:
        pairing = jsonio.load_matrix(obj["pairing"], size, size, "pairing")
    else:
        pairing = Matrix.identity(size)
    return Preset("custom", q, d, n, etale, rational, deltas, pairing)


def _chi_report(p: Preset) -> tuple:
    chi_e, chi_r = p.chi_e(), p.chi_regulator()
    return {"e_complex": jsonio.dump_rational(chi_e), "regulator": jsonio.dump_rational(chi_r),
            "agree": chi_e == chi_r}, chi_e == chi_r


def cmd_splice(obj, args) -> tuple:
    if not isinstance(obj, dict):
        raise InputError("splice input must be an object")
    if "preset" in obj:
        p = _preset_from(obj)
    elif not obj:
        return {"degrees": {}}, True
    else:
        n = args.n if args.n is not None else obj.get("n")
        d = obj.get("d")
        if n is None or d is None:
            etale, rational, deltas = jsonio.load_splice_input(obj)
            data = splice(etale, rational, deltas)
            return {"degrees": {str(i): jsonio.dump_degree(w) for i, w in data.items()}}, True
        p = _custom_preset(obj, jsonio.load_int(d, "d"), jsonio.load_int(n, "n"))
    data = p.splice()
    bounds = validate_bounds(data, p.d, p.n)
    report = {
        "d": p.d,
        "n": p.n,
        "degrees": {str(i): jsonio.dump_degree(w) for i, w in data.items()},
        "bounds": {"bound": bounds.bound, "passed": bounds.passed, "violations": bounds.violations},
    }
    ok = bounds.passed
    if "preset" in obj or "pairing" in obj:
        report["chi"], agree = _chi_report(p)
        ok = ok and agree
    return report, ok


def _curve_genus(z) -> int | None:
    """Genus when ``z`` has the shape of a curve zeta function, else None."""
    if z.denominator == ((0, 1), (1, 1)) and z.extra == (1,) and len(z.numerator) % 2 == 1:
        return (len(z.numerator) - 1) // 2
    return None


def cmd_zeta(obj, args) -> tuple:
    if not isinstance(obj, dict):
        raise InputError("zeta input must be an object")
    warnings_out = []
    preset = None
    if "preset" in obj:
        preset = _preset_from(obj)
        q = preset.q
        if preset.name == "point":
            z, h = zeta_point(q), HodgeTable.point()
        elif preset.name == "P1":
            z, h = zeta_projective_line(q), HodgeTable.curve(0)
        else:
            z, h = zeta_elliptic(q, jsonio.load_int(obj["a"], "a")), HodgeTable.curve(1)
        n = preset.n if args.n is None else args.n
    else:
        z = jsonio.load_zeta(obj)
        genus = jsonio.load_int(obj["genus"], "genus") if "genus" in obj else _curve_genus(z)
        if "numerator" in obj:
            warnings_out = weil_warnings(z)
        if "hodge" in obj:
            h = jsonio.load_hodge(obj["hodge"])
        elif genus is not None:
            h = HodgeTable.curve(genus)
        else:
            raise InputError("missing field 'hodge' (needed when no genus is given)")
        n = args.n if args.n is not None else jsonio.load_int(obj.get("n", 1), "n")
        if "cohomology" in obj:
            preset = _custom_preset(obj["cohomology"], h.d, n, z.q)
        elif "chi_weil" not in obj and genus in (0, 1) and n == 1:
            preset = projective_line_preset(z.q) if genus == 0 else elliptic_preset(z.q, -z.numerator[1])
    report = {"zeta": jsonio.dump_zeta(z)}
    if warnings_out:
        report["weil_warnings"] = warnings_out
    ok = True
    rank = None
    if "chi_weil" in obj:
        chi = jsonio.load_rational(obj["chi_weil"], "chi_weil")
        if chi <= 0:
            raise InputError("chi_weil must be positive")
        rank = jsonio.load_int(obj["rank_H2n"], "rank_H2n") if "rank_H2n" in obj else None
        chis = [chi]
    elif preset is not None:
        if preset.n != n:
            raise InputError(f"cohomology data is for n = {preset.n}, but n = {n} was requested")
        report["chi"], ok = _chi_report(preset)
        chis = [preset.chi_e(), preset.chi_regulator()]
        w = preset.splice().get(2 * n)
        rank = w.rank if w is not None else 0
    else:
        raise InputError("give 'chi_weil', 'cohomology', or a genus 0/1 curve at n = 1")
    reports = [special_value_check(z, n, c, h, rank) for c in chis]
    report["special_value"] = jsonio.dump_report(reports[0])
    ok = ok and all(bool(r) for r in reports)
    return report, ok


def cmd_check(obj, args) -> tuple:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(name, seed=args.seed, samples=args.samples) for name in names]
    report = {
        "seed": args.seed,
        "suites": [
            {
                "suite": r.name,
                "checked": r.checked,
                "failures": len(r.failures),
                "verdict": "pass" if r.passed else "fail",
                "counterexamples": r.failures[:10],
                "rerun": f"weilcoh check {r.name} --seed {args.seed}"
                + ("" if args.samples is None else f" --samples {args.samples}"),
            }
            for r in results
        ],
    }
    return report, all(r.passed for r in results)


# ---------------------------------------------------------------------------
# output


def _text(obj, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, dict) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return json.dumps(v)
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _json(obj, indent: int = 0) -> str:
    """Indented JSON that keeps lists of scalars (matrix rows, coefficients) on one line."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{inner}{json.dumps(k)}: {_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and obj and not _flat_list(obj):
        items = [inner + _json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(_json(report) + "\n")
    else:
        out.write("\n".join(_text(report)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="PATH", help="read JSON input from a file")
    src.add_argument("--json", metavar="STRING", help="inline JSON input")
    common.add_argument("--max-chain", type=int, default=8, metavar="K", help="length of the lcm(1..k) chain (default 8)")
    common.add_argument("--samples", type=int, default=None, metavar="N", help="sample count for randomized suites")
    common.add_argument("--seed", type=int, default=0, metavar="S", help="random seed (default 0)")
    common.add_argument("--n", type=int, default=None, metavar="WEIGHT", help="weight n")
    common.add_argument("--format", choices=["json", "text"], default="json")

    parser = argparse.ArgumentParser(prog="weilcoh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gcoh", parents=[common], help="H^0, H^1 and cup with e for a G-module")
    sub.add_parser("rgamma", parents=[common], help="level complexes and the colimits gamma_* / R^1 gamma_*")
    sub.add_parser("splice", parents=[common], help="Weil-etale groups from etale and rational data")
    sub.add_parser("zeta", parents=[common], help="special value check for a zeta function")
    p = sub.add_parser("check", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    return parser


_COMMANDS = {"gcoh": cmd_gcoh, "rgamma": cmd_rgamma, "splice": cmd_splice, "zeta": cmd_zeta, "check": cmd_check}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.max_chain < 1:
        err.write("error: --max-chain must be at least 1\n")
        return EXIT_INPUT
    if args.samples is not None and args.samples < 1:
        err.write("error: --samples must be at least 1\n")
        return EXIT_INPUT
    try:
        obj = None if args.command == "check" else _read_input(args)
        report, ok = _COMMANDS[args.command](obj, args)
    except (WeilCohError, KeyError, TypeError, ValueError) as exc:
        kind = type(exc).__name__
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        if isinstance(exc, KeyError) and not isinstance(msg, str):
            msg = f"missing field {msg!r}"
        elif isinstance(exc, KeyError):
            msg = f"missing field {msg!r}" if not msg.startswith("unknown") else msg
        err.write(f"error: {kind}: {msg}\n")
        return EXIT_INPUT
    if args.command == "check":
        report = {"seed": report.pop("seed"), **report}
    _emit(report, args.format, out)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
