"""Truncated multivariate series: exact coefficients, reversion, calculus."""

import random
from fractions import Fraction

import pytest

from efgl.rings import RingSpec
from efgl.series import SeriesError, TruncatedSeries, geometric_sum, \
    lagrange_reverse


Z = RingSpec("Z")
Q = RingSpec("Q")


def t_var(ring=Z, cap=10):
    return TruncatedSeries.variable(ring, "t", ("t",), cap)


def test_geometric_inverse():
    t = t_var(cap=8)
    one_minus = 1 - t
    inv = one_minus.inverse()
    for k in range(9):
        assert inv.coefficient((k,)) == Z.one
    assert (one_minus * inv - 1).is_zero()


def test_reversion_catalan_signs():
    # t + t^2 reverts to the signed Catalan series
    t = t_var(cap=7)
    f = t + t * t
    g = f.reverse()
    expected = [1, -1, 2, -5, 14, -42, 132]
    got = [g.coefficient((k,)) for k in range(1, 8)]
    assert [c for c in got] == [Z.from_int(n) for n in expected]
    assert (f.compose(g) - t).is_zero()
    assert (g.compose(f) - t).is_zero()


def test_lagrange_reverse_agrees_with_newton():
    t = TruncatedSeries.variable(Q, "t", ("t",), 9)
    f = t + t ** 3 * Fraction(1, 2) + t ** 4 * Fraction(-2, 3)
    assert (lagrange_reverse(f) - f.reverse()).is_zero()


def test_reverse_requires_unit_linear_term():
    t = t_var()
    with pytest.raises(SeriesError):
        (t * 2).reverse()
    with pytest.raises(SeriesError):
        (1 + t).reverse()


def test_inverse_requires_unit_constant():
    t = t_var()
    with pytest.raises(SeriesError):
        t.inverse()


def test_truncation_is_a_hard_cap():
    t = t_var(cap=5)
    f = (1 + t) ** 9
    assert f.coefficient((5,)) == Z.from_int(126)
    assert f.coefficient((6,)) == Z.zero
    assert f.truncate((2,)).coefficient((3,)) == Z.zero


def test_multivariate_substitution():
    R = RingSpec("Z", ["a"])
    F = TruncatedSeries.variable(R, "x", ("x", "y"), (6, 6), 6)
    G = TruncatedSeries.variable(R, "y", ("x", "y"), (6, 6), 6)
    law = F + G + F * G * R.var("a")
    x = TruncatedSeries.variable(R, "x", ("x",), 6)
    diag = law.subs({"x": TruncatedSeries.variable(R, "z", ("z",), 6),
                     "y": TruncatedSeries.variable(R, "z", ("z",), 6)})
    z = TruncatedSeries.variable(R, "z", ("z",), 6)
    assert (diag - (z * 2 + z * z * R.var("a"))).is_zero()
    del x


def test_substitution_needs_zero_constant_term():
    t = t_var()
    with pytest.raises(SeriesError):
        t.subs({"t": 1 + t})


def test_derivative_integrate_round_trip():
    t = TruncatedSeries.variable(Q, "t", ("t",), 8)
    f = t ** 2 * Fraction(3, 7) + t ** 5 * Fraction(-1, 2)
    assert (f.derivative("t").integrate("t") - f).is_zero()


def test_geometric_sum_matches_closed_form():
    t = t_var(cap=6)
    g = geometric_sum(t)
    assert (g * (1 - t) - 1).is_zero()


def test_order_and_constant_term():
    t = t_var()
    assert (t ** 3 - t ** 5).order() == 3
    assert (t - t).order() is None
    assert (1 + t).constant_term() == Z.one


def test_map_coefficients_changes_ring():
    R = RingSpec("Z", ["u"])
    S = RingSpec("Z", ["w"])
    t = TruncatedSeries.variable(R, "t", ("t",), 4)
    f = t * R.var("u") + t * t * 3
    g = f.map_coefficients(
        lambda c: sum(n * S.var("w") ** e[0] for e, n in c.data.items())
        if c.data else S.zero,
        ring=S)
    assert g.coefficient((1,)) == S.var("w")
    assert g.coefficient((2,)) == S.from_int(3)


def test_random_series_ring_axioms():
    rng = random.Random(4422)
    t = t_var(cap=6)
    for _ in range(20):
        coeffs = [rng.randrange(-4, 5) for _ in range(6)]
        f = sum((t ** (k + 1) * c for k, c in enumerate(coeffs)),
                TruncatedSeries.zero(Z, ("t",), 6))
        g = t * rng.randrange(1, 5) + t ** 2 * rng.randrange(-3, 4)
        assert (f * g - g * f).is_zero()
        assert ((f + g) ** 2 - f * f - f * g * 2 - g * g).is_zero()
