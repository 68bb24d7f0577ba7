"""Group-law objects: axioms, n-series, logarithms, serialization."""

from fractions import Fraction

import pytest

from efgl.rings import RingSpec
from efgl.fgl import (FGLError, FormalGroupLaw, additive_fgl, cp_coefficients,
                      honda_fgl, multiplicative_fgl, restrict_to_variable,
                      to_rational_coefficients, weierstrass_chart_checks,
                      weierstrass_chart_series, weierstrass_fgl,
                      weierstrass_ring)
from efgl.series import TruncatedSeries


@pytest.mark.parametrize("law", [
    additive_fgl(cap=6),
    multiplicative_fgl(cap=6),
    honda_fgl(2, 1, 6),
    honda_fgl(3, 2, 6),
    weierstrass_fgl(cap=6),
])
def test_axioms_hold(law):
    for name, ok, detail in law.check_axioms():
        assert ok, "%s: %s" % (name, detail)


def test_additive_n_series_is_scaling():
    A = additive_fgl(cap=8)
    for n in (-3, -1, 0, 2, 5):
        s = A.n_series(n)
        z = TruncatedSeries.variable(A.ring, "z", ("z",), A.cap)
        assert (s - z * n).is_zero()


def test_multiplicative_two_series():
    M = multiplicative_fgl(cap=8)
    two = M.n_series(2)
    z = TruncatedSeries.variable(M.ring, "z", ("z",), M.cap)
    assert (two - (z * 2 + z * z)).is_zero()


def test_multiplicative_inverse_series_alternates():
    M = multiplicative_fgl(cap=6)
    inv = M.n_series(-1)
    z = TruncatedSeries.variable(M.ring, "z", ("z",), M.cap)
    want = -z + z ** 2 - z ** 3 + z ** 4 - z ** 5 + z ** 6
    assert (inv - want).is_zero()


def test_n_series_composes_multiplicatively():
    M = multiplicative_fgl(cap=6)
    lhs = M.n_series(6)
    rhs = M.n_series(2).compose(M.n_series(3))
    assert (lhs - rhs).is_zero()


def test_inverse_cancels_in_the_law():
    W = weierstrass_fgl(cap=6)
    inv = W.n_series(-1)
    z = TruncatedSeries.variable(W.ring, "z", ("z",), W.cap)
    paired = W.F.subs({"z1": z, "z2": inv})
    assert paired.is_zero()


def test_honda_two_series_is_frobenius_mod_two():
    H = honda_fgl(2, 1, 8)
    two = H.n_series(2)
    z = TruncatedSeries.variable(H.ring, "z", ("z",), H.cap)
    mod2 = RingSpec("Zmod:2")
    resid = (two - z ** 2).map_coefficients(
        lambda c: mod2.from_int(c.data.get((), 0)), ring=mod2)
    assert resid.is_zero()


def test_log_exp_round_trip_over_q():
    M = to_rational_coefficients(multiplicative_fgl(cap=8))
    ms = M.log_coefficients(6)
    # log(1+z) has coefficients (-1)^n / (n+1)
    assert ms[0] == M.ring.one
    assert ms[1] == M.ring.element(Fraction(-1, 2))
    assert ms[2] == M.ring.element(Fraction(1, 3))


def test_cp_coefficients_of_multiplicative_law():
    M = to_rational_coefficients(multiplicative_fgl(cap=8))
    seq = cp_coefficients(M, 4)
    signs = [M.ring.element(Fraction((-1) ** n)) for n in range(5)]
    assert seq == signs


def test_restrict_to_variable_gives_unit_arms():
    M = multiplicative_fgl(cap=6)
    left = restrict_to_variable(M.F, 0)
    z = TruncatedSeries.variable(M.ring, "z", ("z",), 6)
    assert (left - z).is_zero()


def test_serialization_round_trip():
    W = weierstrass_fgl(cap=5)
    text = W.to_json()
    W2 = FormalGroupLaw.from_json(text, name="reloaded")
    assert (W.F - W2.F).is_zero()
    for name, ok, _ in W2.check_axioms():
        assert ok, name


def test_chart_checks_all_pass():
    for name, ok, detail in weierstrass_chart_checks(chart_cap=8,
                                                     axiom_cap=5):
        assert ok, "%s: %s" % (name, detail)


def test_chart_series_leading_coefficients():
    ring = weierstrass_ring()
    u = weierstrass_chart_series(ring, 9)
    assert u.coefficient((3,)) == ring.from_int(4)
    assert u.coefficient((7,)) == ring.var("g2") * (-16)
    assert u.coefficient((9,)) == ring.var("g3") * (-64)
    for k in (0, 1, 2, 4, 5, 6, 8):
        assert u.coefficient((k,)).is_zero()


def test_law_requires_standard_variables():
    R = RingSpec("Z")
    bad = TruncatedSeries.variable(R, "a", ("a", "b"), 4)
    with pytest.raises(FGLError):
        FormalGroupLaw(R, bad, 4)
