from fractions import Fraction

import pytest

from horocalc.cartan import (
    DirectionFrame,
    bound_audit_lower,
    bound_audit_upper,
    central_with_barycenter,
    distinctness_witness,
    perp_pairing6,
    pick_witness_barycenter,
    stabilizer_escape,
)
from horocalc.errors import BudgetExceededError, DegenerateInputError
from horocalc.groups import parse_word, standard_group
from horocalc.winding import cartan_path_oracle


def test_direction_frames():
    f = DirectionFrame.from_direction((1, 1))
    assert f.u_perp == (-1, 1)
    assert f.parity == "both-odd"
    assert DirectionFrame.from_direction((2, 4)).u == (1, 2)
    assert DirectionFrame.from_direction((1, 2)).parity == "mixed-parity"
    assert DirectionFrame.from_direction((-3, 0)).parity == "axis"
    with pytest.raises(DegenerateInputError):
        DirectionFrame.from_direction((0, 0))


def test_central_with_barycenter_exact():
    for b1 in range(-5, 6):
        for b2 in range(-5, 6):
            elem, word = central_with_barycenter((b1, b2))
            assert elem.endpoint == (0, 0)
            assert elem.area == 0
            assert elem.barycenter == (Fraction(b1), Fraction(b2))
            # independent confirmation through the winding oracle
            end, area, bary = cartan_path_oracle(word)
            assert (end, area, bary) == ((0, 0), 0, (Fraction(b1), Fraction(b2)))


def test_central_with_barycenter_spot_words():
    elem, word = central_with_barycenter((1, 0))
    assert word[:1] == ("x",) and len(word) == 10
    assert elem.barycenter == (1, 0)
    elem, word = central_with_barycenter((2, 1))
    assert len(word) == 2 * 3 + 8
    assert elem.barycenter == (2, 1)


def test_bound_audit_lower_small():
    rep = bound_audit_lower((1, 1), 4, 2)
    assert rep.extremal_at_zero
    assert rep.fitted_m == 0
    deltas = {r["delta"]: r for r in rep.per_delta}
    assert deltas[0]["words"] == 6  # monotone words to (2,2)
    assert deltas[0]["max6"] == rep.reference6
    # parity skips odd deltas entirely
    assert 1 not in deltas


def test_bound_audit_lower_axis():
    rep = bound_audit_lower((1, 0), 6, 2)
    assert rep.extremal_at_zero
    deltas = {r["delta"]: r for r in rep.per_delta}
    assert deltas[0]["words"] == 1  # the straight word is unique


def test_bound_audit_lower_loops():
    rep = bound_audit_lower((1, 1), 0, 4)
    deltas = {r["delta"]: r for r in rep.per_delta}
    assert deltas[0]["words"] == 1  # the empty word
    assert deltas[4]["max6"] > 0  # a unit square can tilt the barycenter
    assert rep.fitted_m is not None and rep.fitted_m >= 0


def test_bound_audit_lower_budget():
    with pytest.raises(BudgetExceededError):
        bound_audit_lower((1, 1), 12, 2)
    with pytest.raises(DegenerateInputError):
        bound_audit_lower((1, 1), 4, 2, mode="banana")


def test_bound_audit_lower_search_mode():
    exact = bound_audit_lower((1, 1), 6, 2)
    sampled = bound_audit_lower((1, 1), 6, 2, mode="search", samples=3000)
    ex = {r["delta"]: r["max6"] for r in exact.per_delta}
    sm = {r["delta"]: r["max6"] for r in sampled.per_delta}
    for d, v in sm.items():
        assert v <= ex[d]


def test_bound_audit_upper_identity():
    rep = bound_audit_upper((1, 1), (), [2, 4, 6])
    assert all(r["diff"] == 0 for r in rep.rows)
    assert rep.complete


def test_bound_audit_upper_bounded_pairing():
    # h = [x,y]^-1: <B(h); u_perp> = 0, area -1: differences stay O(1)
    rep = bound_audit_upper((1, 1), parse_word("y x y~ x~"), [2, 4, 6, 8])
    assert rep.perp_pairing == 0
    assert rep.area == -1
    assert all(r["diff"] <= 4 for r in rep.rows)
    assert rep.fitted_c2 is not None and rep.fitted_c2_improved is not None


def test_bound_audit_upper_zero_pairing_witness():
    # z_b with b = (-1,-1) against u = (1,1): pairing exactly 0
    _, word = central_with_barycenter((-1, -1))
    rep = bound_audit_upper((1, 1), word, [2, 4, 6])
    assert rep.perp_pairing == 0
    assert all(r["diff"] <= 6 for r in rep.rows)


def test_bound_audit_upper_rejects_noncentral():
    with pytest.raises(DegenerateInputError):
        bound_audit_upper((1, 1), parse_word("x"), [2])


def test_bound_audit_upper_mixed_parity_no_improved():
    rep = bound_audit_upper((1, 2), parse_word("x y x~ y~"), [3])
    assert rep.parity == "mixed-parity"
    assert rep.fitted_c2_improved is None


def test_pick_witness_barycenter():
    assert pick_witness_barycenter((-1, -1), (1, 1)) == (-1, 0)
    b = pick_witness_barycenter((1, 0), (0, 1))
    fu = DirectionFrame.from_direction((1, 0))
    fv = DirectionFrame.from_direction((0, 1))
    assert -(b[0] * fu.u_perp[0] + b[1] * fu.u_perp[1]) > 0
    assert -(b[0] * fv.u_perp[0] + b[1] * fv.u_perp[1]) <= 0
    with pytest.raises(DegenerateInputError):
        pick_witness_barycenter((1, 1), (2, 2))


def test_distinctness_witness_small():
    rep = distinctness_witness((-1, -1), (1, 1), powers=(1,), horizon=8)
    assert rep.witness_b == (-1, 0)
    assert rep.u_min_value >= 1
    assert rep.u_values[1] == sorted(rep.u_values[1], reverse=True)
    assert rep.v_values[1][-1] <= rep.u_values[1][-1]


def test_stabilizer_escape_report():
    rep = stabilizer_escape((1, 1), parse_word("x"), powers=(0, 1), horizon=10)
    assert rep.m == -1
    assert rep.base_values[0] == 0 and rep.translated_values[0] == 0
    assert rep.gaps[0] == 0
    assert rep.gaps[1] >= 0


def test_stabilizer_escape_precondition():
    with pytest.raises(DegenerateInputError):
        stabilizer_escape((1, 1), parse_word("x y"), powers=(1,))
    with pytest.raises(DegenerateInputError):
        stabilizer_escape((1, 1), parse_word("x"), powers=(1,), m_override=1)


def test_perp_pairing_scaled():
    g = standard_group("cartan").evaluate(parse_word("x y x~ y~"))
    # B = (1/2, 1/2), u_perp = (-1, 1): pairing 0
    assert perp_pairing6(g, (-1, 1)) == 0
    assert perp_pairing6(g, (0, 1)) == 3
