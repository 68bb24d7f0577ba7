"""Curve-side checks: division polynomials, torsion algebra, gluing square."""

import pytest

from efgl.rings import RingSpec
from efgl.elliptic import (EllipticError, WeierstrassCurve,
                           classification_checks, completion_checks,
                           division_polynomial, division_polynomial_checks,
                           tate_square_check, torsion_algebra)


@pytest.fixture(scope="module")
def torsion5():
    """One shared 5-torsion model of y^2 = 4x^3 - 4x - 1 (built once)."""
    curve = WeierstrassCurve(RingSpec("Q"), 4, 1)
    return torsion_algebra(curve, 5, nu=2)


def test_division_polynomial_checks_pass():
    for name, ok, detail in division_polynomial_checks():
        assert ok, "%s: %s" % (name, detail)


def test_division_polynomial_degrees():
    curve = WeierstrassCurve(RingSpec("Q"), 4, 1)
    # psi_n for odd n is a polynomial in x of degree (n^2 - 1) / 2
    for n in (3, 5, 7):
        psi, parity = division_polynomial(curve, n)
        assert parity == 0
        assert psi.degree() == (n * n - 1) // 2


def test_singular_cubic_is_rejected():
    # g2^3 = 27 g3^2 makes the discriminant vanish
    with pytest.raises(EllipticError):
        WeierstrassCurve(RingSpec("Q"), 3, 1)


def test_small_prime_is_rejected():
    curve = WeierstrassCurve(RingSpec("Q"), 4, 1)
    with pytest.raises(EllipticError):
        torsion_algebra(curve, 3)
    with pytest.raises(EllipticError):
        torsion_algebra(curve, 9)


def test_torsion_algebra_certificates(torsion5):
    assert torsion5.ok
    names = {n for n, ok, _ in torsion5.checks}
    assert "division-poly-degree" in names
    assert "rank-det-route" in names
    assert "rank-smith-route" in names
    for name, ok, detail in torsion5.checks:
        assert ok, "%s: %s" % (name, detail)


def test_completion_kills_the_generator(torsion5):
    checks = completion_checks(torsion5, cap=30, samples=4, seed=99)
    assert checks
    for name, ok, detail in checks:
        assert ok, "%s: %s" % (name, detail)


def test_tate_square_samples(torsion5):
    report = tate_square_check(torsion5, cap=30, samples=6, seed=7)
    assert report.ok
    # fixed probes ride along with the requested random samples
    assert len(report.surjectivity_samples) >= 6
    assert len(report.pullback_samples) >= 6
    for name, ok, detail in report.checks:
        assert ok, "%s: %s" % (name, detail)


def test_classification_images():
    checks = classification_checks(cap=8)
    by_name = {n: ok for n, ok, _ in checks}
    for slot in (1, 2, 3, 5):
        assert by_name["generator-image-x%d" % slot]
    assert by_name["generator-image-x4"]
    assert by_name["generator-image-x6"]
    assert all(by_name.values())
