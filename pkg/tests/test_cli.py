import io
import json
import subprocess
import sys

import pytest

from weilcoh import checks
from weilcoh.checks import SuiteResult
from weilcoh.cli import main

Z_TRIVIAL = '{"group": {"generators": 1, "relations": []}, "phi": [[1]]}'
Z5_TIMES_2 = '{"group": {"invariants": [5]}, "phi": [[2]]}'
Z_NEG = '{"group": {"generators": 1, "relations": []}, "phi": [[-1]]}'


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    return code, (json.loads(out) if out else None), err


# gcoh ------------------------------------------------------------------------


def test_gcoh_trivial_Z():
    code, rep, _ = run_json("gcoh", "--json", Z_TRIVIAL)
    assert code == 0
    assert rep["H0"]["structure"] == "Z" and rep["H1"]["structure"] == "Z"
    assert rep["cup_e"] == [["1"]] and rep["cup_e_equals_canonical_map"] == "pass"


def test_gcoh_Z5():
    code, rep, _ = run_json("gcoh", "--json", Z5_TIMES_2)
    assert code == 0 and rep["H0"]["structure"] == "0" and rep["H1"]["structure"] == "0"


def test_gcoh_non_automorphism():
    code, out, err = run("gcoh", "--json", '{"group": {"invariants": [5]}, "phi": [[5]]}')
    assert code == 2 and out == "" and "NotAutomorphism" in err


def test_parse_error_has_position():
    code, _, err = run("gcoh", "--json", '{"group": {"invariants": [5]},\n "phi": [[2]]')
    assert code == 2 and "line 2" in err and "column" in err


def test_missing_field_is_named():
    code, _, err = run("gcoh", "--json", '{"group": {"invariants": [5]}}')
    assert code == 2 and "'phi'" in err


def test_input_file(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(Z_TRIVIAL)
    assert run("gcoh", "--input", str(p))[0] == 0
    code, _, err = run("gcoh", "--input", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err


def test_no_input():
    code, _, err = run("gcoh")
    assert code == 2 and "no input" in err


# rgamma ------------------------------------------------------------------------


def test_rgamma_trivial_Z():
    code, rep, _ = run_json("rgamma", "--json", Z_TRIVIAL)
    assert code == 0
    g, r1 = rep["gamma_star"], rep["R1_gamma_star"]
    assert g["stabilized"] and g["colimit"] == {"kind": "FinitelyGenerated", "structure": "Z"}
    assert r1["colimit"] == {"kind": "RationalizedFree", "rank": 1}
    assert r1["transitions"][0] == [["2"]]
    assert all(lv["exact"] == "pass" for lv in rep["levels"])


def test_rgamma_negation_even_levels():
    code, rep, _ = run_json("rgamma", "--json", Z_NEG)
    objs = dict(zip(rep["gamma_star"]["chain"], rep["gamma_star"]["objects"]))
    assert objs[1] == "0" and all(objs[m] == "Z" for m in objs if m % 2 == 0)


def test_rgamma_Z5_stabilizes_at_multiple_of_4():
    code, rep, _ = run_json("rgamma", "--json", json.dumps({"base": json.loads(Z5_TIMES_2), "level": 4}))
    g = rep["gamma_star"]
    assert g["stabilization_level"] % 4 == 0 and g["colimit"]["structure"] == "Z/5"
    assert {"level": 4, "H0": "Z/5", "H1": "Z/5", "exact": "pass"} in rep["levels"]


def test_rgamma_max_chain():
    code, rep, _ = run_json("rgamma", "--json", Z_TRIVIAL, "--max-chain", "3")
    assert rep["gamma_star"]["chain"] == [1, 2, 6]
    assert run("rgamma", "--json", Z_TRIVIAL, "--max-chain", "0")[0] == 2


# splice ------------------------------------------------------------------------


def test_splice_elliptic_preset():
    code, rep, _ = run_json("splice", "--json", '{"preset": "elliptic", "q": 5, "a": 2}')
    assert code == 0
    d = rep["degrees"]
    assert d["1"]["torsion_order"] == "4" and d["1"]["rank"] == 0
    assert d["2"]["rank"] == 1 and d["2"]["torsion_order"] == "4"
    assert d["3"]["rank"] == 1
    assert rep["bounds"]["passed"] and rep["chi"]["agree"]


def test_splice_P1_preset():
    code, rep, _ = run_json("splice", "--json", '{"preset": "P1", "q": 7}')
    assert rep["degrees"]["2"]["sub"] == "Z" and rep["degrees"]["3"]["quot"] == "Z"
    assert rep["chi"]["e_complex"] == "1/6"


def test_splice_empty():
    code, rep, _ = run_json("splice", "--json", "{}")
    assert code == 0 and rep == {"degrees": {}}


def test_splice_schema_with_bounds():
    data = {
        "etale": {"1": {"finite": [4]}, "2": {"Z": 1}, "4": {"QmodZ": 1}},
        "rational_ranks": {"2": 1},
        "deltas": {"3": "full"},
        "d": 1,
        "n": 1,
        "pairing": [[2]],
    }
    code, rep, _ = run_json("splice", "--json", json.dumps(data))
    assert code == 0 and rep["chi"]["regulator"] == "1/8"


def test_splice_bound_violation_exits_1():
    data = {"etale": {"5": {"Z": 1}}, "d": 1, "n": 1}
    code, rep, _ = run_json("splice", "--json", json.dumps(data))
    assert code == 1 and rep["bounds"]["violations"] == [5]


def test_splice_shape_error():
    data = {"etale": {"2": {"Z": 1}}, "rational_ranks": {"0": 1}, "deltas": {"1": {"matrix": [[1]]}}}
    code, _, err = run("splice", "--json", json.dumps(data))
    assert code == 2 and "InconsistentShapes" in err


def test_splice_unknown_preset():
    assert run("splice", "--json", '{"preset": "K3"}')[0] == 2


# zeta ------------------------------------------------------------------------


def test_zeta_elliptic_counts():
    code, rep, _ = run_json("zeta", "--json", '{"q": 5, "genus": 1, "counts": [4]}', "--n", "1")
    sv = rep["special_value"]
    assert code == 0 and sv["verdict"] == "pass" and sv["leading_value"] == "1"
    assert rep["zeta"]["numerator"] == ["1", "-2", "5"]


def test_zeta_P1():
    code, rep, _ = run_json("zeta", "--json", '{"preset": "P1", "q": 3}', "--n", "1")
    sv = rep["special_value"]
    assert code == 0 and sv["leading_value"] == "3/2" and sv["chi_weil"] == "1/2"
    assert sv["chi_hodge_exponent"] == 1


def test_zeta_point():
    code, rep, _ = run_json("zeta", "--json", '{"preset": "point", "q": 7}', "--n", "0")
    assert code == 0 and rep["special_value"]["verdict"] == "pass"


def test_zeta_inconsistent_counts_reports_coefficient():
    code, _, err = run("zeta", "--json", '{"q": 3, "genus": 2, "counts": [4, 11]}')
    assert code == 2 and "a_2" in err and "not an integer" in err
    code, _, err = run("zeta", "--json", '{"q": 5, "genus": 1, "counts": [20]}')
    assert code == 2 and "InconsistentCounts" in err


def test_zeta_explicit_chi_failure_exits_1():
    code, rep, _ = run_json("zeta", "--json", '{"q": 3, "genus": 2, "counts": [4, 10], "chi_weil": "1/3"}')
    assert code == 1 and rep["special_value"]["verdict"] == "fail"


def test_zeta_numerator_input_infers_genus_and_warns():
    with pytest.warns(UserWarning, match="inverse root"):
        code, rep, _ = run_json("zeta", "--json", '{"q": 5, "numerator": [1, -1, 1], "chi_weil": "1/4"}')
    assert len(rep["weil_warnings"]) == 2


def test_zeta_needs_chi_source():
    code, _, err = run("zeta", "--json", '{"q": 3, "genus": 2, "counts": [4, 10]}')
    assert code == 2 and "chi_weil" in err


def test_zeta_with_cohomology_data():
    data = {
        "q": 7, "genus": 1, "counts": [7], "n": 1,
        "cohomology": {
            "etale": {"1": {"finite": [6]}, "2": {"Z": 1, "finite": [7]}, "4": {"QmodZ": 1}},
            "rational_ranks": {"2": 1},
            "deltas": {"3": "full"},
        },
    }
    code, rep, _ = run_json("zeta", "--json", json.dumps(data))
    assert code == 0 and rep["chi"]["agree"] and rep["special_value"]["leading_value"] == "7/6"


# check ------------------------------------------------------------------------


def test_check_suite():
    code, rep, _ = run_json("check", "thm4.3", "--seed", "2")
    assert code == 0 and rep["seed"] == 2
    s = rep["suites"][0]
    assert s["suite"] == "thm4.3" and s["failures"] == 0 and s["checked"] > 0


def test_check_small_samples():
    code, rep, _ = run_json("check", "prop4.4", "--samples", "5")
    assert code == 0 and rep["suites"][0]["verdict"] == "pass"


def test_check_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        main(["check", "nope"], io.StringIO(), io.StringIO())
    assert exc.value.code == 2


def test_check_failure_dumps_counterexample(monkeypatch):
    def broken(seed=0, samples=3):
        res = SuiteResult("lemma4.1", seed)
        res.record(False, "planted", module={"group": {"invariants": ["2"]}, "phi": [["1"]]})
        return res

    monkeypatch.setitem(checks.SUITES, "lemma4.1", broken)
    code, rep, _ = run_json("check", "lemma4.1", "--seed", "9")
    s = rep["suites"][0]
    assert code == 1 and s["verdict"] == "fail"
    assert s["counterexamples"][0]["identity"] == "planted"
    assert s["rerun"] == "weilcoh check lemma4.1 --seed 9"


def test_text_format():
    code, out, _ = run("gcoh", "--json", Z_TRIVIAL, "--format", "text")
    assert code == 0 and "H0:" in out and "structure: Z" in out


def test_output_is_deterministic():
    first = run("check", "lemma4.2", "--seed", "5", "--samples", "20")
    second = run("check", "lemma4.2", "--seed", "5", "--samples", "20")
    assert first == second
    assert run("rgamma", "--json", Z5_TIMES_2) == run("rgamma", "--json", Z5_TIMES_2)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "weilcoh", "zeta", "--json", '{"preset": "P1", "q": 3}', "--n", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["special_value"]["leading_value"] == "3/2"
