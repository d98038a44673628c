"""Witness-level derivations: axis quotient, annihilator, relation element,
order semigroup, bounded membership, weights, and full pack validation."""

import random
from fractions import Fraction

import pytest

from h14cert import (
    LaurentPoly,
    WitnessInvalid,
    WitnessPack,
    axis_map,
    axis_quotient,
    build_annihilator,
    check_twist,
    choose_weights,
    clearing_exponent,
    format_report,
    from_univar,
    inversion_map,
    is_normal,
    jacobian_rank_at,
    linear_part,
    plain_vars,
    realize_annihilator,
    semigroup_orders,
    subalgebra_member,
    validate_pack,
    x_vars,
)
from genutil import random_pipeline_data, random_poly, random_univar

V2 = x_vars(2)
X1 = LaurentPoly.variable(V2, "x1")
X2 = LaurentPoly.variable(V2, "x2")

# the running example pair: f = x1^3 + x1*x2 + x2, g = x1^2 + x2, with the
# invariant generators of the order-two action behind them
DEMO_F = X1 ** 3 + X1 * X2 + X2
DEMO_G = X1 ** 2 + X2
DEMO_GENS = [
    X1 ** 2 + X2,
    X1 ** 4 - 2 * X1 ** 3 + 2 * X1 ** 2 * X2 + 2 * X1 ** 2 - 2 * X1 * X2 + X2 ** 2,
    X1 ** 3 - X1 ** 2 + X1 * X2,
]
DEMO_REL = (
    -(X1 ** 4) * X2 + 2 * X1 ** 3 * X2 - 2 * X1 ** 2 * X2 ** 2
    + 2 * X1 * X2 ** 2 - X2 ** 3 + X2 ** 2
)


def u1(coeffs):
    return from_univar(V2, "x1", {k: Fraction(v) for k, v in coeffs.items()})


# -- axis quotient ------------------------------------------------------


def test_axis_quotient_demo():
    assert axis_quotient(DEMO_F, DEMO_G) == X1


def test_axis_quotient_trivial_and_errors():
    assert axis_quotient(DEMO_G, DEMO_G) == LaurentPoly.one(V2)
    with pytest.raises(WitnessInvalid):
        axis_quotient(X1, X1 ** 2)  # degree drops below the divisor
    with pytest.raises(WitnessInvalid):
        axis_quotient(X1, X2)  # eps(g) = 0
    with pytest.raises(WitnessInvalid):
        axis_quotient(X1 ** 2 + X1, X1 ** 2)  # quotient would need 1/x1


def test_axis_quotient_recovers_random_factor():
    rng = random.Random(1234)
    for _ in range(30):
        g_axis = random_univar(rng, V2, rng.randint(1, 3))
        h = random_univar(rng, V2, rng.randint(0, 3))
        f = g_axis * h + X2 * random_poly(rng, V2, max_terms=2, exp_hi=2)
        g = g_axis + X2 * random_poly(rng, V2, max_terms=2, exp_hi=2)
        assert axis_quotient(f, g) == h


# -- annihilator and relation element -----------------------------------


def test_annihilator_linear_case():
    # eps(g) = x1 of degree one: Ann(T) = T - (eps f rewritten in G)
    f = X1 ** 2 + X2
    g = X1 + 5 * X2
    ann = build_annihilator(f, g)
    assert ann.degree == 1
    assert ann.is_monic()
    gv = plain_vars("G")
    G = LaurentPoly.variable(gv, "G")
    assert ann.coeff(0) == -(G ** 2)
    # the same pair as itself: Ann(T) = T - G
    ann2 = build_annihilator(g, g)
    assert ann2.degree == 1 and ann2.coeff(0) == -G


def test_annihilator_demo_is_t2_minus_g3():
    ann = build_annihilator(DEMO_F, DEMO_G)
    gv = plain_vars("G")
    G = LaurentPoly.variable(gv, "G")
    assert ann.degree == 2
    assert ann.is_monic()
    assert ann.coeff(1).is_zero()
    assert ann.coeff(0) == -(G ** 3)


def test_annihilator_kills_the_axis_image():
    """Defining property on random pipeline pairs: substituting eps(f) for
    the variable and eps(g) for G gives the zero polynomial."""
    rng = random.Random(500)
    eps = axis_map(2)
    for _ in range(15):
        rw = random_pipeline_data(rng)
        got = rw.ann.eval_poly(eps.apply(rw.f), coeff_images={"G": eps.apply(rw.g)})
        assert got.is_zero()
        assert rw.ann.is_monic()
        assert rw.ann.degree == eps.apply(rw.g).degree_in("x1")


def test_realize_annihilator_demo():
    ann = build_annihilator(DEMO_F, DEMO_G)
    rel = realize_annihilator(ann, DEMO_F, DEMO_G)
    assert rel == DEMO_REL
    assert rel == DEMO_F ** 2 - DEMO_G ** 3
    assert axis_map(2).apply(rel).is_zero()


# -- semigroup of x1-orders ---------------------------------------------


def test_semigroup_orders_two_generators():
    table = semigroup_orders([u1({2: 1}), u1({3: 1})], 12)
    assert table.sorted_orders() == [0] + list(range(2, 13))
    assert not is_normal(table)


def test_semigroup_orders_single_generator_is_normal():
    table = semigroup_orders([u1({2: 1})], 8)
    assert table.sorted_orders() == [0, 2, 4, 6, 8]
    assert is_normal(table)


def test_semigroup_orders_binomial_generator():
    # k[x1^2 + x1^3] realizes only the even orders below 9
    table = semigroup_orders([u1({2: 1, 3: 1})], 8)
    assert table.sorted_orders() == [0, 2, 4, 6, 8]
    assert is_normal(table)


def test_semigroup_demo_generators_not_normal():
    eps = axis_map(2)
    table = semigroup_orders([eps.apply(g) for g in DEMO_GENS], 12)
    orders = table.sorted_orders()
    assert 2 in orders and 3 in orders
    assert not is_normal(table)


def test_semigroup_constant_parts_do_not_matter():
    with_const = semigroup_orders([u1({0: 5, 2: 1})], 8)
    without = semigroup_orders([u1({2: 1})], 8)
    assert with_const.orders == without.orders


def test_semigroup_bound_guards():
    with pytest.raises(WitnessInvalid):
        semigroup_orders([u1({3: 1})], 2)  # bound below a generator degree
    table = semigroup_orders([u1({4: 1, 5: 1})], 6)
    with pytest.raises(WitnessInvalid):
        is_normal(table)  # bound 6 cannot probe 2 * min-order = 8
    with pytest.raises(WitnessInvalid):
        semigroup_orders([X1 ** -1], 4)  # poles rejected


def test_is_normal_trivial_cases():
    assert is_normal(semigroup_orders([], 4))
    assert is_normal(semigroup_orders([u1({0: 3})], 4))  # constants only


# -- bounded membership ---------------------------------------------------


def test_subalgebra_member_positive():
    gens = [u1({2: 1}), u1({3: 1})]
    assert subalgebra_member(u1({2: 1, 3: 1}), gens, 12)
    assert subalgebra_member(u1({6: 1}), gens, 12)
    assert subalgebra_member(u1({0: 7}), gens, 12)
    assert subalgebra_member(LaurentPoly.zero(V2), gens, 12)


def test_subalgebra_member_negative():
    gens = [u1({2: 1}), u1({3: 1})]
    assert not subalgebra_member(X1, gens, 12)
    assert not subalgebra_member(u1({5: 1}), [u1({2: 1})], 12)


def test_subalgebra_member_demo_quotient_outside():
    eps = axis_map(2)
    collapsed = [eps.apply(g) for g in DEMO_GENS]
    assert not subalgebra_member(X1, collapsed, 12)
    for g in collapsed:
        assert subalgebra_member(g, collapsed, 12)


def test_subalgebra_member_guards():
    with pytest.raises(WitnessInvalid):
        subalgebra_member(u1({13: 1}), [u1({2: 1})], 12)
    with pytest.raises(WitnessInvalid):
        subalgebra_member(X1 ** -1, [u1({2: 1})], 12)


# -- weights, twist conditions, clearing exponent -------------------------


def test_check_twist_demo_weights():
    h = X1
    tw = check_twist(inversion_map((5,), h), DEMO_F, DEMO_G, h, DEMO_REL)
    assert tw.ok
    assert tw.fgh_polynomial and tw.rel_in_x1
    assert tw.failing_term == ""


def test_check_twist_insufficient_weight():
    h = X1
    tw = check_twist(inversion_map((4,), h), DEMO_F, DEMO_G, h, DEMO_REL)
    assert not tw.ok
    assert tw.failing_term != ""


def test_check_twist_wrong_quotient():
    zero = LaurentPoly.zero(V2)
    tw = check_twist(inversion_map((5,), zero), DEMO_F, DEMO_G, zero, DEMO_REL)
    assert not tw.fgh_polynomial
    assert "f - g*h" in tw.failing_term


def test_choose_weights_demo():
    assert choose_weights(DEMO_F, DEMO_G, X1, DEMO_REL) == (5,)


def test_choose_weights_guards():
    with pytest.raises(WitnessInvalid):
        choose_weights(DEMO_F, DEMO_G, LaurentPoly.zero(V2), DEMO_REL)
    with pytest.raises(WitnessInvalid):
        choose_weights(DEMO_F, DEMO_G, X1, LaurentPoly.zero(V2))


def test_choose_weights_random_pipeline():
    rng = random.Random(808)
    for _ in range(10):
        rw = random_pipeline_data(rng)
        assert len(rw.weights) == rw.n - 1
        assert all(w >= 1 for w in rw.weights)
        tw = check_twist(rw.twist, rw.f, rw.g, rw.h, rw.rel)
        assert tw.ok


def test_clearing_exponent_demo():
    h = X1
    twist = inversion_map((5,), h)
    e = clearing_exponent(twist, DEMO_REL, DEMO_F, 2)
    assert e == 3
    # with d = 1 no mixed term occurs, so e = 1 suffices
    assert clearing_exponent(twist, DEMO_REL, DEMO_F, 1) == 1


def test_clearing_exponent_requires_divisible_relation():
    h = LaurentPoly.zero(V2)
    twist = inversion_map((1,), h)
    # x2 twists to x1*x2 (order 1); x1^2*x2 twists to order -1: not in x1*k[x]
    with pytest.raises(WitnessInvalid):
        clearing_exponent(twist, X1 ** 2 * X2, DEMO_F, 2)
    with pytest.raises(WitnessInvalid):
        clearing_exponent(twist, LaurentPoly.zero(V2), DEMO_F, 2)


# -- linear algebra helpers ----------------------------------------------


def test_linear_part():
    p = 3 + 2 * X1 - 5 * X2 + X1 * X2 + X1 ** 2
    assert linear_part(p) == 2 * X1 - 5 * X2
    assert linear_part(LaurentPoly.const(V2, 4)).is_zero()


def test_jacobian_rank_at():
    fam = [X1 ** 2 + X2, X1 ** 3]
    assert jacobian_rank_at(fam, (1, 1)) == 2
    assert jacobian_rank_at(fam, (0, 0)) == 1
    assert jacobian_rank_at([], ()) == 0


# -- full pack validation --------------------------------------------------


def demo_pack(**kw):
    return WitnessPack(n=2, gens=list(DEMO_GENS), f=DEMO_F, g=DEMO_G, **kw)


def test_validate_pack_demo_passes():
    resolved, rep = validate_pack(demo_pack())
    assert rep.ok, format_report(rep)
    assert resolved is not None
    assert resolved.h == X1
    assert resolved.d == 2
    assert resolved.weights == (5,)
    assert resolved.clearing == 3
    assert resolved.rel == DEMO_REL
    names = [c.name for c in rep.checks]
    assert names[0] == "pack-shape"
    assert "semigroup-non-normal" in names
    assert "quotient-outside-subring" in names


def test_validate_pack_stored_fields_checked():
    resolved, rep = validate_pack(demo_pack(h=X1))
    assert rep.ok
    bad, rep = validate_pack(demo_pack(h=X1 + 1))
    assert bad is None
    assert not rep["axis-quotient"].ok
    # a stored clearing exponent may exceed the minimum but not undercut it
    ok, rep = validate_pack(demo_pack(clearing=5))
    assert ok is not None and ok.clearing == 5
    bad, rep = validate_pack(demo_pack(clearing=2))
    assert bad is None
    assert not rep["clearing-exponent"].ok


def test_validate_pack_weight_override_fails_cleanly():
    resolved, rep = validate_pack(demo_pack(), weights_override=(4,))
    assert resolved is None
    assert not rep["weights-twist"].ok
    assert rep["weights-twist"].detail != ""


def test_validate_pack_degenerate_pair_rejected():
    # f = g forces a vanishing relation element
    pack = WitnessPack(n=2, gens=list(DEMO_GENS), f=DEMO_G, g=DEMO_G)
    resolved, rep = validate_pack(pack)
    assert resolved is None
    assert not rep["relation-nonzero"].ok


def test_validate_pack_shape_gate():
    pack = WitnessPack(n=1, gens=[X1], f=X1, g=X1)
    resolved, rep = validate_pack(pack)
    assert resolved is None
    assert not rep["pack-shape"].ok
    assert len(rep.checks) == 1


def test_validate_pack_normal_subring_rejected():
    # a single even generator collapses to a normal subring: no witness
    pack = WitnessPack(n=2, gens=[DEMO_G], f=DEMO_F, g=DEMO_G)
    resolved, rep = validate_pack(pack)
    assert resolved is None
    assert not rep["semigroup-non-normal"].ok
