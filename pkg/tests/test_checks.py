import random

import pytest

from weilcoh.checks import (
    SUITES,
    SuiteResult,
    random_finite_gmodule,
    random_finite_order_qmod,
    random_unimodular,
    run_suite,
)
from weilcoh.gmod import QMod
from weilcoh.matrix import Matrix

SMALL = {"lemma2.2": 2, "prop3.2": 3, "thm3.3": 3, "lemma4.1": 5, "lemma4.2": 5,
         "thm4.3": 2, "prop4.4": 5, "thm6.2-e": 5, "thm8.1-cross": 3}


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_pass_on_small_samples(name):
    res = run_suite(name, seed=11, samples=SMALL[name])
    assert res.passed and res.checked > 0, res.failures[:3]


def test_unknown_suite():
    with pytest.raises(KeyError, match="unknown suite"):
        run_suite("lemma9.9")


def test_suite_result_records_failures():
    r = SuiteResult("x", 0)
    r.record(True, "a")
    r.record(False, "b", m=3)
    assert r.checked == 2 and not r and r.failures == [{"identity": "b", "m": 3}]


def test_same_seed_same_samples():
    a = [random_finite_gmodule(random.Random(4)) for _ in range(3)]
    b = [random_finite_gmodule(random.Random(4)) for _ in range(3)]
    assert [m.phi.matrix for m in a] == [m.phi.matrix for m in b]


def test_random_objects_are_valid():
    rng = random.Random(0)
    for _ in range(20):
        U = random_unimodular(rng, 3, 6)
        assert abs(U.det()) == 1
        m = random_finite_gmodule(rng, max_order=100)
        assert m.underlying.is_finite() and m.underlying.order <= 100
        v, order = random_finite_order_qmod(rng)
        assert isinstance(v, QMod) and order <= 6
        assert v.phi_power(order) == [[int(i == j) for j in range(v.dimension)] for i in range(v.dimension)]
