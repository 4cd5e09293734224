from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trilink import bounds as b
from trilink.diagram import generic_direction, project
from trilink.generators import walk
from trilink.linkset import check_link, enumerate_links
from trilink.realize import Realization3, schlegel
from trilink.shelling import find_shelling


def digits_oracle(x: int) -> int:
    with b.unlimited_int_digits():
        return len(str(abs(x)))


# --- reference values ----------------------------------------------------------

def test_shellable_display_at_five():
    assert b.shellable_display(5) == 25088 * 25 + 6085 * 5 + 376 == 658001
    assert b.cr_bound_from_p(10, 35) == 658001**2 == 432965316001
    # closed form agrees with the polynomial at k = 2n, p = 7n
    for n in range(5, 60):
        assert b.shellable_display(n) == 2 * n + b.expansion_count_bound(7 * n)


def test_cr_bound_from_p_examples():
    assert b.cr_bound_from_p(3, 0) == 379**2 == 143641
    assert b.cr_bound_from_p(10, 5) == (10 + 12800 + 4345 + 376) ** 2 == 17531**2
    with pytest.raises(b.BoundsError):
        b.cr_bound_from_p(2, 5)


def test_named_bounds_at_five():
    out = b.cr_bounds_all(5, 10)
    assert out["thm_1_1_1"] == 100
    assert out["thm_1_1_2"] == 625 * 10**9
    assert out["thm_1_1_3"] == b.Power(2, 20250)
    assert b.as_int(out["thm_1_1_3"]) == 2**20250
    assert out["shellable_inequality"] and out["general_inequality"]


def test_digit_counts():
    # 20250 * log10(2) = 6095.86..., so 2^20250 has 6096 digits
    assert b.Power(2, 20250).digits() == digits_oracle(2**20250) == 6096
    lo, hi = b.p_interval(5, b.NONE)
    assert hi.digits() == digits_oracle(2**5000 - 1) == 1506


def test_shellable_inequality_range():
    assert all(b.shellable_inequality_holds(n) for n in range(5, 1001))


def test_general_inequality_range():
    assert all(b.general_inequality_holds(n) for n in range(5, 9))


def test_p_intervals():
    assert b.p_interval(5, b.POLYTOPAL) == (5, 5)
    assert b.p_interval(9, b.SHELLABLE) == (9, 63)
    with pytest.raises(b.BoundsError):
        b.p_interval(4, b.POLYTOPAL)
    with pytest.raises(b.BoundsError):
        b.p_interval(5, "magic")


def test_d_intervals():
    assert b.d_interval(5, 5, 5) == (Fraction(-19, 3), 17521)
    assert b.d_interval(9, 9, 63)[1] == 2087251
    # p_lo = 3n(n + 5/3) is the root of the lower bound
    for n in (5, 6, 12):
        assert b.d_interval(n, 3 * n * n + 5 * n, 10**6)[0] == 0


def test_cr_bounds_all_errors():
    with pytest.raises(b.BoundsError, match="2n"):
        b.cr_bounds_all(5, 11)
    with pytest.raises(b.BoundsError):
        b.cr_bounds_all(4, 3)
    with pytest.raises(b.BoundsError):
        b.cr_bounds_all(5, 2)


# --- properties -------------------------------------------------------------

@given(st.integers(3, 10**6), st.integers(0, 10**9), st.integers(1, 100))
def test_cr_bound_is_monotone(k, p, step):
    assert b.cr_bound_from_p(k, p) < b.cr_bound_from_p(k + step, p)
    assert b.cr_bound_from_p(k, p) < b.cr_bound_from_p(k, p + step)


@given(st.integers(0, 10**400))
def test_decimal_digits(x):
    assert b.decimal_digits(x) == digits_oracle(x)


@given(st.integers(2, 12), st.integers(0, 3000), st.integers(-1, 1))
def test_power_matches_expansion(base, exponent, offset):
    p = b.Power(base, exponent, offset)
    v = base**exponent + offset
    assert p.value() == v
    if v > 0:
        assert p.digits() == digits_oracle(v)
        assert p.log2_floor() <= v.bit_length() - 1


@settings(max_examples=60)
@given(st.integers(0, 2**70), st.integers(1, 60))
def test_is_below_agrees_with_int(x, exponent):
    bound = b.Power(2, exponent, -1)
    assert b.is_below(x, bound) == (x < 2**exponent - 1)
    sq = b.ExpansionSquare(3, b.Power(2, exponent, -1))
    assert b.is_below(x, sq) == (x < sq.value())


def test_large_power_digits_use_logarithms():
    p = b.Power(2, 210_000)
    assert p.digits() == digits_oracle(2**210_000)
    p = b.Power(2, 200 * 187**2, -1)
    assert p.digits() == int(200 * 187**2 * 0.30102999566398120) + 1


# --- reports ----------------------------------------------------------------

def test_report_round_trip_and_applicability(join):
    r = schlegel(join)
    l = check_link(join.triangulation, [(1, 2, 3), (4, 5, 6)])
    dg = project(r, l, generic_direction(r, l))
    rep = b.report(join.triangulation, l, r, None, dg)
    assert rep.certificate == b.POLYTOPAL
    assert rep.cr_bounds["thm_1_1_1"] == 324
    assert rep.achieved <= 15 < 324
    assert "thm_1_1_1" in rep.applicable
    assert b.BoundReport.from_json_obj(rep.to_json_obj()) == rep


def test_report_without_evidence_only_uses_general_bound():
    t = walk(30, 1).triangulation
    l = next(enumerate_links(t, 1, 3))
    rep = b.report(t, l)
    assert rep.certificate == b.NONE
    assert rep.applicable == ("thm_1_1_3",)
    assert "S^3 assumed" in rep.s3_status
    again = b.BoundReport.from_json_obj(rep.to_json_obj())
    assert again == rep


def test_report_with_shelling():
    t = walk(30, 1).triangulation
    l = next(enumerate_links(t, 1, 3))
    order = find_shelling(t).order
    rep = b.report(t, l, shelling_order=order)
    assert rep.certificate == b.SHELLABLE
    assert rep.p_interval == (t.n, 7 * t.n)
    bad = list(order)
    bad[1], bad[-1] = bad[-1], bad[1]
    with pytest.raises(b.BoundsError, match="shelling order fails"):
        b.report(t, l, shelling_order=bad)


def test_report_simplex_full_evidence(simplex):
    r = schlegel(simplex)
    l = check_link(simplex.triangulation, [(1, 2, 3)])
    dg = project(r, l, generic_direction(r, l))
    rep = b.report(simplex.triangulation, l, r, find_shelling(simplex.triangulation).order, dg)
    assert rep.achieved == 0 and rep.cr_bounds["thm_1_1_1"] == 100
    assert rep.certificate == b.POLYTOPAL


def test_straight_line_embedding_without_witness(join):
    r = schlegel(join)
    plain = Realization3(r.coords, r.host, r.omitted_facet)
    l = check_link(join.triangulation, [(1, 2, 3), (4, 5, 6)])
    rep = b.report(join.triangulation, l, plain)
    assert rep.certificate == b.STRAIGHT_LINE
    assert "thm_1_1_1" not in rep.applicable and "straight_line_k2" in rep.applicable


def test_report_check_catches_violations():
    rep = b.build_report(5, 3, b.POLYTOPAL)
    rep.achieved = 9
    with pytest.raises(b.BoundsError, match="straight_line_k2"):
        rep.check()
    rep = b.build_report(5, 10, b.SHELLABLE)
    rep.achieved = 625 * 10**9
    with pytest.raises(b.BoundsError, match="thm_1_1_2"):
        rep.check()


def test_report_is_fast_for_large_n():
    import time

    start = time.perf_counter()
    rep = b.build_report(187, 40, b.NONE)
    b.BoundReport.from_json_obj(rep.to_json_obj())
    assert time.perf_counter() - start < 2.0
