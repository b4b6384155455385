import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weilcoh import jsonio
from weilcoh.errors import InconsistentCounts, NotAutomorphism
from weilcoh.fga import abelian_group
from weilcoh.gmod import QMod, make_gmodule
from weilcoh.jsonio import InputError
from weilcoh.matrix import Matrix
from weilcoh.weil_cohomology import tame


def test_numbers_are_decimal_strings():
    assert jsonio.dump_int(5) == "5"
    assert jsonio.dump_int(-(2 ** 80)) == str(-(2 ** 80))
    assert jsonio.dump_rational(Fraction(-3, 4)) == "-3/4"
    assert jsonio.dump_rational(2) == "2"


def test_load_numbers():
    assert jsonio.load_int(7) == 7 and jsonio.load_int(" -12 ") == -12
    assert jsonio.load_int(str(10 ** 30)) == 10 ** 30
    assert jsonio.load_rational("6/8") == Fraction(3, 4) and jsonio.load_rational(3) == 3
    for bad in (1.5, True, "x", None, [1]):
        with pytest.raises(InputError):
            jsonio.load_int(bad, "field")
    with pytest.raises(InputError, match="at chi"):
        jsonio.load_rational(0.5, "chi")
    with pytest.raises(InputError):
        jsonio.load_rational("1/0")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 30), max_size=4))
def test_group_round_trip(inv):
    g = abelian_group(inv)
    back = jsonio.load_group(json.loads(json.dumps(jsonio.dump_group(g))))
    assert back.num_generators == g.num_generators and back.relations == g.relations


def test_group_shorthand_and_errors():
    assert jsonio.load_group({"invariants": [2, 0]}).structure() == ((2,), 1)
    with pytest.raises(InputError, match="generators"):
        jsonio.load_group({"relations": []})
    with pytest.raises(InputError, match="rows must have 2"):
        jsonio.load_group({"generators": 2, "relations": [[1]]})
    with pytest.raises(InputError):
        jsonio.load_group({"invariants": [-1]})
    with pytest.raises(InputError):
        jsonio.load_group([1, 2])


def test_gmodule_round_trip():
    m = make_gmodule(abelian_group([5, 0]), Matrix.from_rows([[2, 0], [0, -1]]))
    back = jsonio.load_gmodule(jsonio.dump_gmodule(m))
    assert back.phi.matrix == m.phi.matrix and back.underlying.relations == m.underlying.relations


def test_gmodule_errors():
    with pytest.raises(InputError, match="phi"):
        jsonio.load_gmodule({"group": {"invariants": [5]}})
    with pytest.raises(InputError, match="1 rows"):
        jsonio.load_gmodule({"group": {"invariants": [5]}, "phi": [[1], [1]]})
    with pytest.raises(NotAutomorphism):
        jsonio.load_gmodule({"group": {"invariants": [5]}, "phi": [[0]]})


def test_qmod_round_trip():
    v = QMod(2, [[0, -1], [1, Fraction(1, 2)]])
    back = jsonio.load_qmod(jsonio.dump_qmod(v))
    assert back.phi == v.phi


def test_tame_round_trip_and_errors():
    t = tame(1, 2, 1, finite=[4])
    assert jsonio.load_tame(jsonio.dump_tame(t), "x") == t
    assert jsonio.load_tame({"Z": 1, "finite": [4]}, "x") == tame(1, finite=[4])
    with pytest.raises(InputError, match="unknown"):
        jsonio.load_tame({"Z": 1, "R": 2}, "x")


def test_splice_input_presets_infer_shapes():
    etale, rational, deltas = jsonio.load_splice_input(
        {"etale": {"0": {"Z": 1}, "2": {"QmodZ": 1}}, "rational_ranks": {"0": 1}, "deltas": {"1": "full"}}
    )
    assert deltas[1].source_rank == 1 and deltas[1].target_rank == 1
    _, _, deltas = jsonio.load_splice_input(
        {"etale": {"2": {"QmodZ": 2}}, "rational_ranks": {"0": 1}, "deltas": {"1": {"matrix": [["1/2"], [0]]}}}
    )
    assert deltas[1].matrix == ((Fraction(1, 2),), (Fraction(0),))
    with pytest.raises(InputError, match="degree key"):
        jsonio.load_splice_input({"etale": {"one": {}}})
    with pytest.raises(InputError):
        jsonio.load_splice_input({"deltas": {"1": "half"}})


def test_load_zeta_forms():
    z = jsonio.load_zeta({"q": 5, "genus": 1, "counts": [4]})
    assert z.numerator == (1, -2, 5)
    z2 = jsonio.load_zeta({"q": 5, "numerator": [1, "-2", 5], "denominator_weights": [[0, 1], [1, 1]]})
    assert z2 == z
    assert jsonio.load_zeta(json.loads(json.dumps(jsonio.dump_zeta(z)))) == z
    with pytest.raises(InconsistentCounts):
        jsonio.load_zeta({"q": 5, "genus": 1, "counts": [20]})
    with pytest.raises(InputError):
        jsonio.load_zeta({"q": 5, "numerator": [1, 0.5]})
    with pytest.raises(InputError):
        jsonio.load_zeta({"q": 5, "numerator": [1], "denominator_weights": [[0]]})


def test_load_hodge():
    assert jsonio.load_hodge([[1, 2], [2, 1]]).d == 1
    with pytest.raises(InputError):
        jsonio.load_hodge([[1, 2], [2]])
