"""The four zeta-value relation families and their verification reports."""

from fractions import Fraction
from functools import partial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from assoclab.ncseries import duality_partner, zeta_of
from assoclab.relations import (
    A_val,
    B_val,
    TaylorH,
    _F,
    _depth_pairs,
    enum_I,
    g_val,
    hseries_div,
    hseries_elementary,
    lhs_A,
    lhs_B,
    lhs_C,
    lhs_D,
    multi_binom,
    qint_series,
    rhs_A,
    tau,
    tau_decompose,
    verify_A,
    verify_B,
    verify_C,
    verify_D,
    w_val,
)
from assoclab.solver import solve_generic


@pytest.fixture(scope="module")
def cand4():
    return solve_generic(4, seed=7)


# -- Taylor arithmetic -------------------------------------------------------

def test_taylor_arithmetic():
    f = TaylorH(3, [Fraction(1), Fraction(2)])
    g = TaylorH(3, [Fraction(1), 0, Fraction(1)])
    assert (f * g).c == (Fraction(1), Fraction(2), Fraction(1), Fraction(2))
    assert (f + g).c[0] == 2
    assert (f - g).c[2] == -1
    assert (-f).c[1] == -2
    assert f.scale(3).c[1] == 6
    assert (f / 2).c[1] == 1
    assert f.coeff(5) == 0
    assert f == TaylorH(3, [Fraction(1), Fraction(2), 0, 0])
    assert f != g


def test_taylor_reciprocal():
    f = TaylorH(4, [Fraction(1), Fraction(-1)])
    inv = f.reciprocal()
    assert inv.c == (1, 1, 1, 1, 1)
    assert (f * inv).c == (1, 0, 0, 0, 0)
    assert hseries_div(TaylorH(4, [Fraction(1)]), f) == inv
    with pytest.raises(ValueError, match="zero constant term"):
        TaylorH(2, [0, Fraction(1)]).reciprocal()


def test_taylor_order_mismatch():
    with pytest.raises(ValueError, match="truncation orders differ"):
        TaylorH(3, [1]) + TaylorH(2, [1])


def test_elementary_series():
    s = hseries_elementary("sinh", 2, 5)
    assert s.c == (0, 2, 0, Fraction(8, 6), 0, Fraction(32, 120))
    c = hseries_elementary("cosh", 1, 4)
    assert c.c == (1, 0, Fraction(1, 2), 0, Fraction(1, 24))
    e = hseries_elementary("exp", 1, 3)
    assert e.c == (1, 1, Fraction(1, 2), Fraction(1, 6))
    sh = hseries_elementary("sinh_over_h", 3, 4)
    assert sh.c == (3, 0, Fraction(27, 6), 0, Fraction(243, 120))
    with pytest.raises(ValueError, match="unknown series kind"):
        hseries_elementary("tanh", 1, 3)


def test_quantum_integer_series():
    assert qint_series(1, 6).c == (1, 0, 0, 0, 0, 0, 0)
    assert qint_series(2, 4).c == (2, 0, Fraction(1, 4), 0, Fraction(1, 192))
    for n in (3, 5, 8):
        assert qint_series(n, 0).c[0] == n
    with pytest.raises(ValueError, match="positive"):
        qint_series(0, 4)


# -- combinatorial ingredients ----------------------------------------------

def test_interleave_examples():
    assert tau((1,), (1,)) == (2,)
    assert tau((2,), (3,)) == (1, 4)
    assert tau((1, 2), (2, 1)) == (3, 1, 2)
    with pytest.raises(ValueError, match="positive"):
        tau((0,), (1,))
    with pytest.raises(ValueError, match="equal length"):
        tau((1, 2), (1,))
    with pytest.raises(ValueError, match="admissible"):
        tau_decompose((2, 1))
    with pytest.raises(ValueError, match="admissible"):
        tau_decompose(())


@settings(max_examples=150, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(1, 5), st.integers(1, 5)), min_size=1, max_size=5
    )
)
def test_interleave_decompose_roundtrip(pairs):
    p = tuple(a for a, _ in pairs)
    q = tuple(b for _, b in pairs)
    assert tau_decompose(tau(p, q)) == (p, q)
    idx = tau(p, q)
    assert tau(*tau_decompose(idx)) == idx


def test_multi_binom():
    assert multi_binom((1, 2), (1, 1)) == 6
    assert multi_binom((3, 4, 5), (0, 0, 0)) == 1
    assert multi_binom((2, 7), (5, 1)) == multi_binom((5, 1), (2, 7))
    with pytest.raises(ValueError, match="length mismatch"):
        multi_binom((1,), (1, 2))


def test_transfer_matrix_for_the_sinh_family():
    for N in (2, 3, 5, Fraction(7, 2)):
        assert g_val((1,), N) == 0
        assert g_val((2,), N) == -(N - 1) * (N - 2)
    assert g_val((1, 2), 3) == -2
    for N in range(2, 7):
        for idx in ((2,), (3,), (1, 2), (2, 2), (1, 1, 2)):
            assert isinstance(g_val(idx, N), int)
    with pytest.raises(ValueError, match="positive"):
        g_val((0, 2), 3)


def test_transfer_matrix_for_the_quantum_integer_family():
    assert w_val((1,), (1,)) == Fraction(-1008)
    for p, q in _depth_pairs(8):
        assert w_val(p, q) == w_val(tuple(reversed(q)), tuple(reversed(p)))
        assert tau(tuple(reversed(q)), tuple(reversed(p))) == duality_partner(tau(p, q))
    with pytest.raises(ValueError, match="positive"):
        w_val((1, 0), (1, 1))


def test_triple_enumeration():
    assert enum_I(2, 1) == (((1,), (1,), (0,)),)
    assert enum_I(3, 1) == (
        ((1,), (1,), (1,)),
        ((2,), (1,), (0,)),
        ((1,), (2,), (0,)),
    )
    assert enum_I(1, 1) == ()
    assert enum_I(2, 2) == ()
    for (p, q, r) in enum_I(6, 2):
        assert p[0] >= 1
        assert all(b >= 1 for b in q)
        assert all(a + c >= 1 for a, c in zip(p, r))
        assert sum(p) + sum(q) + sum(r) == 6


def test_single_sum_weight_zero_factor_knob():
    # with the literal reading every wt(r)=0 triple drops out
    assert A_val((1,), (1,), (0,), Fraction(5), "pa1", 0) == 0
    # the calibrated default keeps the factor at 2, independent of x
    for x in (Fraction(3), Fraction(5), Fraction(-2)):
        assert A_val((1,), (1,), (0,), x) == -4
    with pytest.raises(ValueError, match="trailing"):
        A_val((1,), (1,), (0,), Fraction(2), "bogus")


def test_double_sum_weight_is_the_cancelled_product():
    t1 = ((1,), (1,), (1,))
    t2 = ((2,), (1,), (1,))
    for x in (Fraction(3), Fraction(7, 2)):
        lhs = A_val(*t1, x) * A_val(*t2, x) * _F(x, 2, Fraction(2))
        rhs = B_val(t1, t2, x) * _F(x, 1, Fraction(2)) * _F(x, 1, Fraction(2))
        assert lhs == rhs


# -- left sides ---------------------------------------------------------------

def test_left_side_leading_terms():
    for N in (2, 3, Fraction(5, 2)):
        la = lhs_A(N, 4)
        assert la.c[0] == 1
        assert la.c[1] == 0
        assert la.c[2] == Fraction(1 - N * N, 6)
        assert lhs_B(N, 2).c[0] == 1
        assert lhs_C(N, 2).c[0] == N
        assert lhs_C(N, 2).c[2] == N * (N * N - 1) * Fraction(1, 3)
    d = lhs_D(4)
    assert d.c[0] == 7
    assert d.c[1] == 0
    assert d.c[2] == -42


# -- verification -------------------------------------------------------------

def test_all_four_relations_hold_exactly(candidates):
    cand = candidates[0]
    zf = partial(zeta_of, cand.phi)
    ra = verify_A(zf, cand.mu2, 2, 6, phi_source=cand.source)
    rb = verify_B(zf, cand.mu2, 3, 6, phi_source=cand.source)
    rc = verify_C(zf, cand.mu2, 2, 6, phi_source=cand.source)
    rd = verify_D(zf, cand.mu2, 6, phi_source=cand.source)
    for rep in (ra, rb, rc, rd):
        assert rep.passed is True
        assert rep.tolerance == "exact"
        assert all(r["value"] == "0" for r in rep.residuals)
        assert {r["degree"] for r in rep.residuals} == set(range(7))
    assert rd.N is None
    assert rc.convention == "resummed"
    assert rc.calibration["h2_lhs"] == rc.calibration["h2_expected"]
    d = ra.as_dict()
    assert set(d) == {
        "relation", "phi_source", "mu", "N", "residuals",
        "tolerance", "pass", "elapsed_ms",
    }
    assert d["phi_source"] == cand.source


def test_relation_A_holds_at_sampled_scalar_points(candidates):
    # both sides are rational in the sampling variable, so distinct sample
    # points beyond the degree bound pin the identity itself
    cand = candidates[0]
    zf = partial(zeta_of, cand.phi)
    samples = [2, 3, 4, 5,
               Fraction(5, 2), Fraction(7, 3), Fraction(9, 4),
               Fraction(11, 5), Fraction(13, 6)]
    assert len(samples) == 6 + 3
    for N in samples:
        assert verify_A(zf, cand.mu2, N, 6).passed
    for N in samples:
        if N != 1:
            assert verify_B(zf, cand.mu2, N, 5).passed


def test_odd_weight_groups_vanish_on_their_own(cand4):
    phi5 = solve_generic(5, seed=3)
    zf = partial(zeta_of, phi5.phi)
    _, odd = rhs_A(zf, phi5.mu2, 2, 5)
    assert set(odd) == {3, 5}
    assert all(v == 0 for v in odd.values())


def test_printed_double_sum_breaks_at_weight_four(cand4):
    zf = partial(zeta_of, cand4.phi)
    for convention, defect in (("printed-pa1", "28/15"), ("printed-pa", "22/15")):
        rep = verify_C(zf, cand4.mu2, 2, 4, convention=convention)
        assert rep.passed is False
        values = {r["degree"]: r["value"] for r in rep.residuals}
        assert values[2] == "0"
        assert values[4] == defect
        assert rep.calibration["trailing"] == convention.split("-")[1]
        assert rep.calibration["f0"] == "2"
        assert rep.as_dict()["convention"] == convention


def test_verify_rejects_bad_arguments(cand4):
    zf = partial(zeta_of, cand4.phi)
    with pytest.raises(ValueError, match="N = 1"):
        verify_B(zf, cand4.mu2, 1, 4)
    with pytest.raises(ValueError, match="unknown convention"):
        verify_C(zf, cand4.mu2, 2, 4, convention="resum")


def test_relation_A_numeric(kz10):
    with mp.workdps(60):
        rep = verify_A(
            partial(zeta_of, kz10.phi),
            kz10.mu2,
            2,
            6,
            tol=mp.mpf(10) ** -40,
            one=mp.mpf(1),
            phi_source="kz",
        )
    assert rep.passed is True
    assert rep.tolerance != "exact"
    assert rep.mu.startswith("mu^2 = -39.478")
