"""JSON encodings of the package's values.

Exact values (matrix entries, orders, coefficients, rationals) are written as
decimal strings, ``"12"`` or ``"-3/4"``, so no consumer ever rounds them.
Counts and indices (ranks, degrees, levels) stay plain JSON integers.
Parsers accept numbers or strings.  Floats are rejected everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .errors import WeilCohError
from .fga import FgAbGroup, Homomorphism, abelian_group
from .gmod import GModule, QMod, make_gmodule
from .matrix import Matrix
from .weil_cohomology import DivMap, TameGroup, WeilDegreeData
from .zeta import HodgeTable, SpecialValueReport, ZetaFunction, zeta_from_counts_curve

class InputError(WeilCohError, ValueError):
    """Malformed JSON input; the message names the offending field."""


def dump_int(n: int) -> str:
    return str(int(n))


def dump_rational(x) -> str:
    return str(Fraction(x))


def _where(path: str) -> str:
    return f" at {path}" if path else ""


def load_int(x: Any, path: str = "") -> int:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"expected an integer{_where(path)}, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise InputError(f"expected an integer{_where(path)}, got {x!r}")


def load_rational(x: Any, path: str = "") -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"expected an exact rational{_where(path)}, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise InputError(f"expected a rational like \"3/4\"{_where(path)}, got {x!r}")


def _require(obj: Any, key: str, path: str):
    if not isinstance(obj, dict):
        raise InputError(f"expected an object{_where(path)}")
    if key not in obj:
        raise InputError(f"missing field '{key}'{_where(path)}")
    return obj[key]


def _int_rows(rows: Any, path: str, ncols: int = None) -> list:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InputError(f"expected a list of lists{_where(path)}")
    out = [[load_int(x, f"{path}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    widths = {len(r) for r in out}
    if len(widths) > 1:
        raise InputError(f"ragged matrix{_where(path)}")
    if ncols is not None and out and widths != {ncols}:
        raise InputError(f"rows must have {ncols} entries{_where(path)}")
    return out


# groups and maps ------------------------------------------------------


def dump_group(g: FgAbGroup) -> dict:
    rel = g.relations
    return {
        "generators": g.num_generators,
        "relations": [[dump_int(x) for x in rel.column(j)] for j in range(rel.cols)],
    }


def load_group(obj: Any, path: str = "group") -> FgAbGroup:
    """``{"generators": n, "relations": [column, ...]}`` or the shorthand ``{"invariants": [d, ...]}``."""
    if isinstance(obj, dict) and "invariants" in obj:
        inv = obj["invariants"]
        if not isinstance(inv, list):
            raise InputError(f"'invariants' must be a list{_where(path)}")
        ds = [load_int(x, f"{path}.invariants[{i}]") for i, x in enumerate(inv)]
        if any(d < 0 for d in ds):
            raise InputError(f"invariants must be non-negative{_where(path)}")
        return abelian_group(ds)
    n = load_int(_require(obj, "generators", path), f"{path}.generators")
    if n < 0:
        raise InputError(f"'generators' must be non-negative{_where(path)}")
    cols = _int_rows(obj.get("relations", []), f"{path}.relations", n)
    return FgAbGroup(n, Matrix.from_columns(cols, n))


def dump_matrix(m: Matrix) -> list:
    return [[dump_int(x) for x in row] for row in m.to_rows()]


def dump_hom(h: Homomorphism) -> dict:
    return {"matrix": dump_matrix(h.matrix)}


def load_matrix(rows: Any, nrows: int, ncols: int, path: str) -> Matrix:
    out = _int_rows(rows, path, ncols)
    if len(out) != nrows:
        raise InputError(f"expected {nrows} rows{_where(path)}, got {len(out)}")
    return Matrix.from_rows(out, ncols)


def dump_gmodule(m: GModule) -> dict:
    return {"group": dump_group(m.underlying), "phi": dump_matrix(m.phi.matrix)}


def load_gmodule(obj: Any, path: str = "") -> GModule:
    g = load_group(_require(obj, "group", path), f"{path}.group" if path else "group")
    n = g.num_generators
    phi = load_matrix(_require(obj, "phi", path), n, n, f"{path}.phi" if path else "phi")
    return make_gmodule(g, phi)


def dump_qmod(v: QMod) -> dict:
    return {"dim": v.dimension, "phi": [[dump_rational(x) for x in r] for r in v.phi]}


def load_qmod(obj: Any, path: str = "") -> QMod:
    n = load_int(_require(obj, "dim", path), "dim")
    rows = _require(obj, "phi", path)
    if not isinstance(rows, list) or len(rows) != n:
        raise InputError(f"'phi' must have {n} rows")
    return QMod(n, [[load_rational(x, f"phi[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)])


# splice data ----------------------------------------------------------


def dump_tame(t: TameGroup) -> dict:
    out = {"Z": t.lattice_rank, "Q": t.rational_rank, "QmodZ": t.codivisible_rank, "finite": dump_group(t.finite_part)}
    if t.char_p:
        out["char_p"] = t.char_p
    return out


def load_tame(obj: Any, path: str) -> TameGroup:
    if not isinstance(obj, dict):
        raise InputError(f"expected an object{_where(path)}")
    unknown = set(obj) - {"Z", "Q", "QmodZ", "finite", "char_p"}
    if unknown:
        raise InputError(f"unknown field(s) {sorted(unknown)}{_where(path)}")
    finite = obj.get("finite")
    if finite is None:
        fin = abelian_group([])
    elif isinstance(finite, list):
        fin = load_group({"invariants": finite}, f"{path}.finite")
    else:
        fin = load_group(finite, f"{path}.finite")
    char_p = obj.get("char_p")
    return TameGroup(
        load_int(obj.get("Z", 0), f"{path}.Z"),
        load_int(obj.get("Q", 0), f"{path}.Q"),
        load_int(obj.get("QmodZ", 0), f"{path}.QmodZ"),
        fin,
        None if char_p is None else load_int(char_p, f"{path}.char_p"),
    )


def _degree_map(obj: Any, name: str) -> dict:
    if obj is None:
        return {}
    if not isinstance(obj, dict):
        raise InputError(f"'{name}' must be an object keyed by degree")
    out = {}
    for k, v in obj.items():
        try:
            out[int(k)] = v
        except ValueError:
            raise InputError(f"degree key {k!r} in '{name}' is not an integer") from None
    return out


def load_splice_input(obj: Any) -> tuple:
    """``(etale, rational, deltas)`` from the splice JSON schema.

    A delta is ``{"matrix": [[...]]}`` or one of the presets ``"full"`` / ``"zero"``,
    whose shape is read off the neighbouring ranks.
    """
    if not isinstance(obj, dict):
        raise InputError("splice input must be an object")
    etale = {i: load_tame(v, f"etale.{i}") for i, v in _degree_map(obj.get("etale"), "etale").items()}
    rational = {
        i: load_int(v, f"rational_ranks.{i}") for i, v in _degree_map(obj.get("rational_ranks"), "rational_ranks").items()
    }
    deltas = {}
    for i, v in _degree_map(obj.get("deltas"), "deltas").items():
        b = rational.get(i - 1, 0)
        c = etale.get(i + 1, TameGroup()).codivisible_rank
        if v == "full":
            deltas[i] = DivMap.full(b, c)
        elif v == "zero":
            deltas[i] = DivMap.zero(b, c)
        elif isinstance(v, dict) and "matrix" in v:
            rows = v["matrix"]
            if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
                raise InputError(f"deltas.{i}.matrix must be a list of lists")
            mat = [[load_rational(x, f"deltas.{i}.matrix[{r}][{j}]") for j, x in enumerate(row)] for r, row in enumerate(rows)]
            src = load_int(v.get("source_rank", len(mat[0]) if mat else b), f"deltas.{i}.source_rank")
            tgt = load_int(v.get("target_rank", len(mat)), f"deltas.{i}.target_rank")
            deltas[i] = DivMap(src, tgt, mat)
        else:
            raise InputError(f"deltas.{i} must be {{\"matrix\": ...}}, \"full\" or \"zero\"")
    return etale, rational, deltas


def dump_degree(w: WeilDegreeData) -> dict:
    out = {
        "sub": str(w.sub),
        "quot": str(w.quot),
        "finitely_generated": w.is_finitely_generated(),
        "non_canonical_extension": w.non_canonical,
    }
    if w.is_finitely_generated():
        out["rank"] = w.rank
        out["torsion_order"] = dump_int(w.torsion_order)
        out["split_model"] = dump_group(w.split_model)
    else:
        out["rational_dimension"] = w.rational_dimension
    return out


# zeta -----------------------------------------------------------------


def load_zeta(obj: Any) -> ZetaFunction:
    q = load_int(_require(obj, "q", ""), "q")
    if "counts" in obj or "genus" in obj:
        g = load_int(_require(obj, "genus", ""), "genus")
        counts = obj.get("counts", [])
        if not isinstance(counts, list):
            raise InputError("'counts' must be a list")
        fe = obj.get("use_functional_equation")
        return zeta_from_counts_curve(q, g, [load_int(c, f"counts[{i}]") for i, c in enumerate(counts)], fe)
    num = _require(obj, "numerator", "")
    if not isinstance(num, list):
        raise InputError("'numerator' must be a list of coefficients, constant term first")
    weights = obj.get("denominator_weights", [[0, 1], [1, 1]])
    if not isinstance(weights, list) or any(not isinstance(p, list) or len(p) != 2 for p in weights):
        raise InputError("'denominator_weights' must be a list of [w, multiplicity] pairs")
    extra = obj.get("extra", [1])
    return ZetaFunction(
        q,
        tuple(load_int(c, f"numerator[{i}]") for i, c in enumerate(num)),
        tuple((load_int(w, "denominator_weights"), load_int(m, "denominator_weights")) for w, m in weights),
        tuple(load_int(c, f"extra[{i}]") for i, c in enumerate(extra)),
    )


def dump_zeta(z: ZetaFunction) -> dict:
    return {
        "q": dump_int(z.q),
        "numerator": [dump_int(c) for c in z.numerator],
        "denominator_weights": [[w, m] for w, m in z.denominator],
        "extra": [dump_int(c) for c in z.extra],
    }


def load_hodge(obj: Any) -> HodgeTable:
    rows = _int_rows(obj, "hodge")
    return HodgeTable(len(rows) - 1, rows)


def dump_report(r: SpecialValueReport) -> dict:
    out = {
        "n": r.n,
        "pole_order": r.pole_order,
        "leading_value": dump_rational(r.leading_value),
        "sign": r.sign,
        "chi_weil": dump_rational(r.chi_weil),
        "chi_hodge_exponent": r.chi_hodge_exponent,
        "verdict": "pass" if r.passed else "fail",
    }
    if r.rank_h2n is not None:
        out["rank_H2n_W"] = r.rank_h2n
        out["rank_matches_pole_order"] = r.rank_matches
    if r.notes:
        out["notes"] = list(r.notes)
    return out
