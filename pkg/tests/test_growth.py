import json
import math

import jsonschema
import pytest

from grigorchuk.elements import E
from grigorchuk.groups import build_group
from grigorchuk.growth import (
    GROWTH_SCHEMA, NeedsLargerTable, ResourceCap, ball_prefix_experiment,
    check_anti_contracting, check_contracting, enumerate_ball, free_product_bound,
    growth_exponent_fit, paper_constants, table_to_csv, table_to_json,
)
from grigorchuk.groups import OracleSequence
from grigorchuk.words import equal, inverse, is_identity

from oracles import ActionOracle, naive_ball

KNOWN_BALL = [1, 5, 11, 23, 40, 68, 108, 176, 271, 427, 643]


@pytest.fixture(scope="module")
def table(ctx_xi):
    return enumerate_ball(ctx_xi, 10)


def test_known_ball_sizes(table):
    assert table.ball == KNOWN_BALL
    assert table.sphere[:4] == [1, 4, 6, 12]
    assert table.complete and table.radius == 10


def test_element_sets_match_naive_oracle(ctx_xi, table):
    action = ActionOracle(depth=12)
    _, layers = naive_ball(action, 6)
    for n in range(7):
        expected = {action.key(w) for layer in layers[: n + 1] for w in layer}
        got = {action.key(table.word(i)) for i in range(table.ball[n])}
        assert len(got) == table.ball[n]
        assert got == expected


def test_counts_match_independent_dedup(ctx_xi, table):
    counts, _ = naive_ball(ActionOracle(depth=12), 10,
                           exact=lambda u, v: is_identity(ctx_xi, u + inverse(v)))
    assert counts == table.ball


def test_counts_for_non_torsion_oracle(ctx_eta):
    t = enumerate_ball(ctx_eta, 8)
    counts, _ = naive_ball(ActionOracle(ctx_eta.generators, depth=10), 8,
                           exact=lambda u, v: is_identity(ctx_eta, u + inverse(v)))
    assert counts == t.ball


def test_infinite_dihedral_case():
    t = enumerate_ball(build_group("(0)*"), 12)
    assert t.ball == [2 * n + 1 for n in range(13)]


def test_words_are_geodesic_and_represent_keys(ctx_xi, table):
    for i in range(0, len(table), 7):
        w = table.word(i)
        assert len(w) == table.length(i)
        assert table.index[table.keys[i]] == i
    assert table.word_of(E) == ""
    assert table.length_of(table.keys[-1]) == 10


def test_growth_bounds(table):
    b = table.ball
    for n in range(1, len(b)):
        assert b[n] > b[n - 1]
        assert b[n] <= free_product_bound(n)
    for m in range(len(b)):
        for n in range(len(b) - m):
            assert b[m + n] <= b[m] * b[n]


def test_worker_count_does_not_change_table(ctx_xi):
    one = enumerate_ball(ctx_xi, 9)
    many = enumerate_ball(ctx_xi, 9, workers=3)
    assert one.keys == many.keys
    assert list(one.parent) == list(many.parent) and one.letter == many.letter
    assert json.dumps(table_to_json(one)) == json.dumps(table_to_json(many))


def test_element_cap(ctx_xi):
    t = enumerate_ball(ctx_xi, 10, max_elements=200)
    assert not t.complete and "cap" in t.stop_reason
    assert t.ball == KNOWN_BALL[:8]
    assert len(t) == 176
    with pytest.raises(ResourceCap):
        enumerate_ball(ctx_xi, 10, max_elements=200, strict=True)


def test_time_budget(ctx_xi):
    t = enumerate_ball(ctx_xi, 12, time_budget=0.0)
    assert not t.complete and t.radius == 1


def test_negative_radius(ctx_xi):
    with pytest.raises(ValueError):
        enumerate_ball(ctx_xi, -1)


def test_sub_generating_set(ctx_xi):
    # a and d generate the dihedral group of order 8
    t = enumerate_ball(ctx_xi, 6, letters="ad")
    assert t.ball[-1] == 8


def test_contraction_holds(ctx_xi, table):
    rep = check_contracting(ctx_xi, table)
    assert rep.ok and rep.checked == 2 * len(table)
    anti = check_anti_contracting(ctx_xi, table)
    assert anti.ok and anti.checked == len(table)


def test_contraction_violations_are_reported(ctx_xi, table):
    rep = check_contracting(ctx_xi, table, ratio=0.5, constant=0.0)
    assert rep.violations > 0 and rep.witness is not None
    assert rep.worst_excess > 0
    anti = check_anti_contracting(ctx_xi, table, ratio=1.0, constant=0.0)
    assert not anti.ok


def test_companion_needs_larger_table(ctx_xi, table):
    with pytest.raises(NeedsLargerTable):
        check_contracting(ctx_xi, table, max_elements=20)


def test_anti_contracting_level_two(ctx_xi):
    t = enumerate_ball(ctx_xi, 7)
    assert check_anti_contracting(ctx_xi, t, level=2, ratio=4.0, constant=3.0).ok
    with pytest.raises(ValueError):
        check_anti_contracting(ctx_xi, t, level=0)


def test_prefix_experiment_small():
    xi = OracleSequence.parse("(012)*")
    other = OracleSequence.parse("012(0)*")
    cmp = ball_prefix_experiment(xi, other, 3)
    assert cmp.radius == 4 and cmp.complete and cmp.agree
    assert ball_prefix_experiment(xi, other, 0).asserted is False
    with pytest.raises(ValueError):
        ball_prefix_experiment(xi, OracleSequence.parse("(021)*"), 2)


def test_prefix_experiment_records_budget_stop():
    xi = OracleSequence.parse("(012)*")
    cmp = ball_prefix_experiment(xi, OracleSequence.parse("0120(1)*"), 4, max_elements=100)
    assert not cmp.complete and cmp.radius < 8 and cmp.agree


def test_exponent_fit(table):
    fit = growth_exponent_fit(table)
    assert 0.4 < fit.alpha < 1.0
    with pytest.raises(ValueError):
        growth_exponent_fit(enumerate_ball(table.ctx, 4))


def test_constants():
    c = paper_constants()
    assert c.rho_residual < 1e-12
    assert math.isclose(c.alpha0, math.log(2) / math.log(2 / c.rho))
    assert abs(c.eta_plus ** 3 - c.eta_plus ** 2 - 2 * c.eta_plus - 4) < 1e-12


def test_exports(table):
    data = table_to_json(table)
    jsonschema.validate(data, GROWTH_SCHEMA)
    assert data["rows"][3] == {"n": 3, "ball": 23, "sphere": 12}
    csv = table_to_csv(table).splitlines()
    assert csv[0] == "n,ball,sphere" and csv[2] == "1,5,4"
    bad = dict(data, rows=[{"n": 0, "ball": 0, "sphere": 1}])
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, GROWTH_SCHEMA)


def test_equal_on_table_words(ctx_xi, table):
    # distinct table entries are distinct elements
    for i in range(1, 40):
        assert not equal(ctx_xi, table.word(i), table.word(i - 1))
