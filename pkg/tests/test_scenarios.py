from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import brute_threshold, floor_readings

from vaguelogic.checker import evaluate
from vaguelogic.errors import VagueLogicError
from vaguelogic.formula import TRUE, And, Def, Not, Prop, Report
from vaguelogic.scenarios.sensor import (
    MIDPOINT,
    SensorModel,
    inequivalence_threshold,
    intransitivity_witness,
    reading_equality_transitive,
    report_equivalent,
    sensor_report,
    single_grain_stable,
)
from vaguelogic.scenarios.sorites import (
    HEAP,
    S,
    SoritesConfig,
    build_sorites_structure,
    induction_failure_points,
    inductive_conjunction,
    sorites_report,
    sticky_policy,
    threshold_policy,
)
from vaguelogic.scenarios.williamson import (
    TALL,
    WilliamsonConfig,
    WilliamsonModel,
    build_williamson_model,
    c_eval,
    check_c_dr_equivalence,
    dr_threshold_exceptions,
    metric_report,
    set_identity_holds,
    williamson_report,
)
from vaguelogic.structures import VagueStructure, validate

# -- sensor ---------------------------------------------------------------------------


@pytest.mark.parametrize("n, expected", [(16, [1, 2]), (0, [0]), (9, [0, 1]), (3, [0]), (25, [2])])
def test_readings(n, expected):
    assert list(SensorModel().readings(n)) == expected


@given(st.integers(0, 400), st.integers(1, 12), st.integers(0, 11), st.booleans())
def test_readings_match_floor_formula(n, g, delta, clamp):
    delta = delta % g
    got = list(SensorModel(g, delta, clamp).readings(n))
    want = sorted(set(floor_readings(n, g, delta, clamp)))
    assert got == want


def test_unclamped_readings_go_negative():
    assert list(SensorModel(clamp=False).readings(2)) == [-1, 0]


def test_sensor_validation():
    with pytest.raises(ValueError):
        SensorModel(granularity=0)
    with pytest.raises(ValueError):
        SensorModel(indeterminacy=10)
    with pytest.raises(ValueError):
        SensorModel(mode="stochastic")
    with pytest.raises(ValueError):
        SensorModel().readings(-1)


def test_report_equivalent():
    assert report_equivalent(0, 1)
    assert not report_equivalent(0, 2)
    assert report_equivalent(3, 3)
    with pytest.raises(ValueError):
        report_equivalent(-1, 0)


def test_intransitivity_triples():
    assert intransitivity_witness(SensorModel(mode=MIDPOINT)) == (0, 10, 20)
    assert intransitivity_witness(SensorModel(1, 0, mode=MIDPOINT)) == (0, 1, 2)
    assert intransitivity_witness(SensorModel(mode=MIDPOINT, tolerance=0)) is None
    with pytest.raises(ValueError):
        intransitivity_witness(SensorModel(), variant="sometimes")


def _brute_triple(model, cap, variant):
    def rel(a, b, quant):
        return quant(abs(x - y) <= model.tolerance for x in model.readings(a) for y in model.readings(b))

    for a, b, c in product(range(cap + 1), repeat=3):
        if variant == "must" and rel(a, b, all) and rel(b, c, all) and not rel(a, c, any):
            return (a, b, c)
        if variant == "may":
            for x, y, z in product(model.readings(a), model.readings(b), model.readings(c)):
                if abs(x - y) <= 1 and abs(y - z) <= 1 and abs(x - z) > 1:
                    return (a, b, c)
    return None


@pytest.mark.parametrize("variant", ["may", "must"])
def test_possibilistic_triples_match_brute_force(variant):
    model = SensorModel()
    got = intransitivity_witness(model, cap=30, variant=variant)
    assert got == _brute_triple(model, 30, variant)
    assert got is not None


@pytest.mark.parametrize("g, delta", [(10, 4), (10, 0), (1, 0), (5, 2), (4, 3)])
def test_threshold_matches_oracle(g, delta):
    assert inequivalence_threshold(SensorModel(g, delta), cap=120) == brute_threshold(g, delta, 120)


def test_threshold_values():
    assert inequivalence_threshold(SensorModel()) == 28
    assert inequivalence_threshold(SensorModel(indeterminacy=0)) == 20
    assert inequivalence_threshold(SensorModel(1, 0)) == 2


def test_threshold_rejects_midpoint():
    with pytest.raises(ValueError):
        inequivalence_threshold(SensorModel(mode=MIDPOINT))


def test_sensor_invariants():
    assert single_grain_stable(SensorModel())
    assert single_grain_stable(SensorModel(mode=MIDPOINT))
    assert reading_equality_transitive(SensorModel())


def test_sensor_report_shape():
    r = sensor_report(SensorModel(), table_upto=20)
    assert r["readingsTable"]["16"] == [1, 2]
    assert r["intransitivityTriple"]["midpoint"] == [0, 10, 20]
    assert r["inequivalenceThreshold"] == 28
    assert r["singleGrainStable"] and r["readingEqualityTransitive"]


# -- sorites --------------------------------------------------------------------------


@pytest.fixture(scope="module")
def sorites():
    return build_sorites_structure()


def test_sorites_structure_is_valid(sorites):
    M = sorites.structure
    assert validate(M) == []
    assert M.plausible[0] == frozenset(range(len(M.worlds)))
    assert {n for n, _, _ in sorites.states} == set(range(61))


def test_sorites_extremes(sorites):
    M = sorites.structure
    for w, (n, _, _) in enumerate(sorites.states):
        assert evaluate(M, w, 1, S(60))
        if n == 1:
            assert not evaluate(M, w, 1, Report(1, HEAP))
            assert evaluate(M, w, 1, S(2)) and not evaluate(M, w, 1, S(1))


def test_inductive_conjunction_falsified(sorites):
    M = sorites.structure
    phi = inductive_conjunction(60)
    assert not all(evaluate(M, w, 1, phi) for w in range(len(M.worlds)))


def test_failure_points_recheck(sorites):
    M = sorites.structure
    pairs = induction_failure_points(sorites)
    assert pairs
    for w, v in pairs:
        assert v in sorites.remove_grain[w]
        assert evaluate(M, w, 1, Report(1, HEAP)) and not evaluate(M, v, 1, Report(1, HEAP))
        assert (sorites.states[w][0], sorites.states[v][0]) == (30, 29)


def test_failure_points_are_exhaustive(sorites):
    M = sorites.structure
    want = [
        (w, v)
        for w in range(len(M.worlds))
        for v in sorted(sorites.remove_grain[w])
        if evaluate(M, w, 1, Report(1, HEAP)) and not evaluate(M, v, 1, Report(1, HEAP))
    ]
    assert induction_failure_points(sorites) == want


def test_remove_grain_saturates(sorites):
    index = {st: k for k, st in enumerate(sorites.states)}
    w = index[(40, 4, 3)]
    assert {sorites.states[v] for v in sorites.remove_grain[w]} == {(39, 3, 3)}
    assert sorites.remove_grain[index[(0, 0, 1)]] == frozenset()


def test_sorites_report(sorites):
    r = sorites_report(sorites)
    assert r["extremesOk"] and r["inductiveStepFalsified"] and r["vacuousInstanceOk"]
    assert r["failureTransitions"] == [(30, 29)]
    assert r["thresholdPolicy"] == {"kind": "threshold", "threshold": 3}


def test_sticky_policy_keeps_first_answer():
    model = build_sorites_structure(SoritesConfig(policy=sticky_policy(3)))
    pairs = induction_failure_points(model)
    assert pairs
    # a first-asked heap answer survives the next removal
    assert all(model.states[w][2] >= 1 for w, _ in pairs)


def test_possibilistic_sorites_still_fails_somewhere():
    model = build_sorites_structure(SoritesConfig(max_grains=40, sensor=SensorModel()))
    assert validate(model.structure) == []
    assert induction_failure_points(model)


def test_policy_contract():
    with pytest.raises(ValueError):
        SoritesConfig(policy=lambda r, a: True)
    with pytest.raises(ValueError):
        SoritesConfig(policy=threshold_policy(9))
    with pytest.raises(ValueError):
        SoritesConfig(max_grains=1)


# -- williamson -----------------------------------------------------------------------


@pytest.fixture(scope="module")
def williamson():
    return build_williamson_model()


def _world(model, t, e=None):
    t = Fraction(t)
    return next(w for w, (u, x) in enumerate(model.points) if u == t and (e is None or x == Fraction(e)))


def test_williamson_structure(williamson):
    M = williamson.structure
    assert validate(M) == []
    a = williamson.config.alpha
    assert all(abs(t - e) <= a / 2 for t, e in williamson.points)
    assert len(williamson.points) == 145


def test_c_eval_examples(williamson):
    assert all(c_eval(williamson, w, TRUE) for w in range(len(williamson.points)))
    assert c_eval(williamson, _world(williamson, 172), TALL)
    assert not c_eval(williamson, _world(williamson, 170), TALL)


def test_c_eval_rejects_agent_relative_formulas(williamson):
    # p true for agent 1 only, so C p has no agent-free meaning
    M = VagueStructure(2, ["o"], [["a"], ["b"]], [(0, 0, 0)], [{0}, {0}], {"p": [{0}, set()]})
    fake = WilliamsonModel(williamson.config, M, ((Fraction(170), Fraction(170)),))
    with pytest.raises(VagueLogicError):
        c_eval(fake, 0, Prop("p"))


def test_equivalence_and_threshold(williamson):
    eq = check_c_dr_equivalence(williamson)
    assert eq.ok and eq.boundary_mismatches == ()
    assert dr_threshold_exceptions(williamson) == ([], [])
    M = williamson.structure
    dr = Def(1, Report(1, TALL))
    for w, (t, _) in enumerate(williamson.points):
        assert evaluate(M, w, 1, dr) == (t >= 172)
    assert evaluate(M, _world(williamson, 172), 1, dr)
    assert not evaluate(M, _world(williamson, Fraction(343, 2)), 1, dr)


def test_equivalence_for_contradiction(williamson):
    assert check_c_dr_equivalence(williamson, And(TALL, Not(TALL))).ok


def test_truncated_grid_reports_boundary_exceptions():
    model = build_williamson_model(WilliamsonConfig(lo=170, margin=0))
    assert check_c_dr_equivalence(model).ok
    interior, boundary = dr_threshold_exceptions(model)
    assert interior == [] and boundary
    assert williamson_report(model)["boundaryExceptions"]


def test_set_identity_and_metric(williamson):
    assert set_identity_holds(williamson)
    m = metric_report(williamson)
    assert m["symmetric"] and m["triangle"] and m["selfDistanceZero"]
    assert m["distinctWorldsAtZero"] > 0


def test_williamson_config_validation():
    with pytest.raises(ValueError):
        WilliamsonConfig(h=Fraction(2, 3))
    with pytest.raises(ValueError):
        WilliamsonConfig(alpha=0)
    with pytest.raises(ValueError):
        WilliamsonConfig(lo=180, hi=170)
    with pytest.raises(ValueError):
        WilliamsonConfig(t_star=Fraction(701, 4))


@pytest.mark.parametrize("alpha, h", [(1, Fraction(1, 2)), (2, 1), (3, Fraction(1, 2))])
def test_equivalence_on_other_grids(alpha, h):
    model = build_williamson_model(WilliamsonConfig(alpha=alpha, h=h))
    assert check_c_dr_equivalence(model).ok
    assert dr_threshold_exceptions(model)[0] == []
    assert set_identity_holds(model)
