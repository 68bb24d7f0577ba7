"""Sector-indexed group data: torsion data, deformations, decompositions."""

import random

import pytest

from efgl.equivariant import (CharacterGroup, CrtBlock, EquivariantError,
                              TateEFGL, TateGroupDatum, TwoSectorEFGL,
                              crt_decompose, crt_decomposition_checks,
                              efgl_axiom_check, efgl_from_tate,
                              euler_translates, lubin_tate_relation_checks,
                              lubin_tate_z2_images,
                              multiplicative_presentation_checks,
                              split_multiplicative_efgl,
                              strickland_relation_check, tate_coproduct_checks,
                              tate_crt_datum, tate_group_algebra,
                              tate_multiplicativity_checks,
                              tate_worked_example_checks,
                              z2_deformation_build, z2_deformation_checks)
from efgl.fgl import multiplicative_fgl
from efgl.rings import RingSpec


def assert_all(checks):
    for name, ok, detail in checks:
        assert ok, "%s: %s" % (name, detail)


def test_character_group_axioms():
    for p, r in ((2, 1), (2, 2), (3, 1), (5, 1)):
        assert_all(CharacterGroup(p, r).axiom_checks())


def test_tate_group_algebra_component_count():
    alg = tate_group_algebra(1, 2, p=2)
    assert alg.kind == "product"
    assert len(alg.components) == 4
    # component i carries the relation t^4 - q^i over the level-4 algebra
    rels = [c.relation_exprs[0] for c in alg.components]
    assert rels[0] == "t^4-1"
    assert rels[1] == "t^4-q"
    assert all("q" in r for r in rels[2:])


def test_level_must_dominate_torsion_order():
    with pytest.raises(EquivariantError):
        tate_group_algebra(2, 1, p=2)


def test_nonunit_alpha_is_rejected_eagerly():
    with pytest.raises(EquivariantError):
        TateGroupDatum(p=2, r=1, alpha="1+s")
    # but an invertible expression in the scale variable is fine
    TateGroupDatum(p=2, r=1, alpha="q")


def test_worked_example_checks():
    assert_all(tate_worked_example_checks())


def test_coproduct_checks_at_two_primes():
    assert_all(tate_coproduct_checks(TateGroupDatum(p=2, r=1)))
    assert_all(tate_coproduct_checks(TateGroupDatum(p=3, r=1)))


def test_two_series_obstruction_checks():
    assert_all(tate_multiplicativity_checks())


def test_axiom_suite_p2():
    assert_all(TateEFGL(TateGroupDatum(p=2, r=1)).axiom_checks())


def test_axiom_suite_p3():
    assert_all(efgl_axiom_check(efgl_from_tate(TateGroupDatum(p=3, r=1))))


def test_split_model_is_multiplicative_but_unverifiable():
    split = split_multiplicative_efgl(r=1)
    facts = split.multiplicativity()
    assert facts["is_multiplicative"]
    assert facts["obstruction_zero"]
    with pytest.raises(EquivariantError):
        split.axiom_checks()


def test_euler_translates_of_inverse():
    # over Z[x]/(x^5) the inverse node [-1]x alternates signs
    R = RingSpec("Z", ["x"], relations=["x^5"])
    M = multiplicative_fgl(ring=R, cap=4)
    x = R.var("x")
    z = euler_translates(M, x, -1)
    node = -x + x ** 2 - x ** 3 + x ** 4
    assert z.coefficient((0,)) == node
    assert z.coefficient((1,)) == R.one + node
    assert z.coefficient((2,)).is_zero()


def test_two_sector_axiom_suite():
    assert_all(TwoSectorEFGL(6).axiom_checks())


def test_two_sector_obstruction_is_the_correction():
    model = TwoSectorEFGL(6)
    facts = model.multiplicativity()
    assert not facts["obstruction_zero"]
    assert facts["obstruction"], "expected a nonzero obstruction table"
    by_name = {n: ok for n, ok, _ in z2_deformation_checks(6)}
    assert by_name["correction-term"]
    assert by_name["deformed-correction-relation"]


def test_deformation_checks_pass_at_two_caps():
    assert_all(z2_deformation_checks(6))
    assert_all(z2_deformation_checks(8))


def test_deformation_images_shape():
    model, images = z2_deformation_build(6)
    # q-tail: q_k = -u(u+2) w^k for k >= 3
    u = images.ring.var("u")
    w = images.ring.var("w")
    for k in range(3, images.J + 2):
        assert (images.q[k] + u * (u + 2) * w ** k).is_zero()
    assert_all(strickland_relation_check(images))


def test_presentation_images_of_multiplicative_law():
    assert_all(multiplicative_presentation_checks(6))


@pytest.mark.parametrize("h", [1, 2])
def test_height_h_relation_residuals(h):
    assert_all(lubin_tate_relation_checks(h, cap=6))


def test_divisibility_zero_test_is_honest():
    S = lubin_tate_z2_images(1, cap=6)
    ok, _ = S.zero_test(S.relation)
    assert ok
    ok, _ = S.zero_test(S.relation * S.ring.var("w"))
    assert ok
    ok, _ = S.zero_test(S.ring.var("u"))
    assert not ok
    ok, _ = S.zero_test(S.relation + 1)
    assert not ok


def test_crt_checks_pass():
    assert_all(crt_decomposition_checks(samples=5, seed=11, iterations=2,
                                        cap=10))


def test_crt_random_recombination_loop():
    datum = tate_crt_datum()
    rng = random.Random(60061)
    for _ in range(6):
        u0 = datum.random_input(rng, 10)
        dec = crt_decompose(datum, u0, iterations=2, cap=10)
        assert dec.ok
        for name, parts in dec.blocks.items():
            assert parts["ok"], "%s: %s" % (name, parts["note"])


def test_crt_rejects_overlapping_columns():
    ring = RingSpec("Q", ["q"], invert=["q"])
    with pytest.raises(EquivariantError):
        CrtBlock("bad", ring, [0, 1], {1: -1})


def test_crt_rejects_non_dyadic_input():
    from efgl.series import TruncatedSeries
    datum = tate_crt_datum()
    u0 = datum.zero_input(8)
    blk = datum.blocks[0]
    u0[blk.name][0] = TruncatedSeries(
        blk.ring, ("z",), 8, terms={(0,): blk.ring.element("1/3")})
    with pytest.raises(EquivariantError):
        crt_decompose(datum, u0, iterations=1, cap=8)
