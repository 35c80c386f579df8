"""Presentation loading, axiom verification, variants, iterated coproducts
and the four dual actions."""

from __future__ import annotations

import pytest

from conftest import all_mutations, mutate_presentation
from quasihopf.exactnum import HALF, ONE, Scalar, ZERO
from quasihopf.multilinear import Functional, TensorElement, tensor_product
from quasihopf.qha import (AxiomViolation, BadCounitNormalization, BadPlan,
                           QhaPresentation, SingularAntipode, antipode_inverse,
                           dual_action, hit_element_left, hit_element_right,
                           hit_functional_left, hit_functional_right,
                           iterated_coproduct, load_and_validate, variant,
                           verify_axioms)
from quasihopf.workbench import catalog_build


def test_catalog_presentations_pass_axioms(h2, h8p, h8m, baseline):
    for pres in (h2, h8p, h8m, baseline):
        report = verify_axioms(pres)
        assert report.passed(), report.render_text()


def test_trivial_phi_with_alpha_g_violates_zigzag(h2):
    """Keeping alpha = g while flattening the reassociator breaks the
    normalization X1 beta S(X2) alpha X3 = 1: the oracle evaluates it to g."""
    trivial_phi = TensorElement(3, 2, {(0, 0, 0): ONE})
    broken = QhaPresentation(
        name="H2-broken", dim=2, basis=h2.basis, field_tag=h2.field_tag,
        mult=h2.mult, unit=h2.unit, counit=h2.counit, coproduct=h2.coproduct,
        phi=trivial_phi, phi_inv=trivial_phi, antipode=h2.antipode,
        alpha=h2.alpha, beta=h2.beta)
    # independent evaluation of the zig-zag with plain loops
    acc = TensorElement.zero(1, 2)
    for (a, b, c), v in trivial_phi.entries.items():
        term = h2.multiply(h2.basis_element(a), h2.beta)
        term = h2.multiply(term, h2.antipode.apply(h2.basis_element(b)))
        term = h2.multiply(term, h2.alpha)
        term = h2.multiply(term, h2.basis_element(c))
        acc = acc + term.scale(v)
    assert acc == h2.basis_element(1)  # evaluates to g, not 1
    with pytest.raises(AxiomViolation) as err:
        load_and_validate(broken)
    assert "q6" in err.value.check


def test_load_rescales_alpha_beta(h2):
    scaled = QhaPresentation(
        name="H2-scaled", dim=2, basis=h2.basis, field_tag=h2.field_tag,
        mult=h2.mult, unit=h2.unit, counit=h2.counit, coproduct=h2.coproduct,
        phi=h2.phi, phi_inv=h2.phi_inv, antipode=h2.antipode,
        alpha=h2.alpha.scale(Scalar.of(2)), beta=h2.beta.scale(HALF))
    loaded = load_and_validate(scaled)
    assert h2.counit(loaded.alpha) == ONE
    assert h2.counit(loaded.beta) == ONE
    assert loaded.alpha == h2.alpha and loaded.beta == h2.beta


def test_load_rejects_noninvertible_phi(h2):
    from quasihopf.qha import NonInvertiblePhi
    bad = QhaPresentation(
        name="H2-flat", dim=2, basis=h2.basis, field_tag=h2.field_tag,
        mult=h2.mult, unit=h2.unit, counit=h2.counit, coproduct=h2.coproduct,
        phi=h2.phi, phi_inv=TensorElement(3, 2, {(0, 0, 0): ONE}),
        antipode=h2.antipode, alpha=h2.alpha, beta=h2.beta)
    with pytest.raises(NonInvertiblePhi):
        load_and_validate(bad)


def test_load_rejects_bad_counit_normalization(h2):
    bad = QhaPresentation(
        name="H2-bad", dim=2, basis=h2.basis, field_tag=h2.field_tag,
        mult=h2.mult, unit=h2.unit, counit=h2.counit, coproduct=h2.coproduct,
        phi=h2.phi, phi_inv=h2.phi_inv, antipode=h2.antipode,
        alpha=h2.alpha.scale(Scalar.of(2)), beta=h2.beta)
    with pytest.raises(BadCounitNormalization):
        load_and_validate(bad)


def test_every_single_mutation_fails_axioms_h2(h2):
    """Bumping any one structure constant by 1 must break at least one
    axiom row (exhaustive over every slot of the two-dimensional example)."""
    count = 0
    for mutated in all_mutations(h2):
        count += 1
        try:
            report = verify_axioms(mutated)
        except Exception:
            continue  # a crash counts as a detected corruption
        assert not report.passed(), f"mutation {mutated.name} went unnoticed"
    assert count == 3 * 8 + 4 + 3 * 2 + 2


def test_sampled_mutations_fail_axioms_h8(h8p):
    import random
    rng = random.Random(13)
    pool = list(all_mutations(h8p))
    for mutated in rng.sample(pool, 20):
        try:
            report = verify_axioms(mutated)
        except Exception:
            continue
        assert not report.passed(), f"mutation {mutated.name} went unnoticed"


# -- variants -------------------------------------------------------------------


def test_variants_pass_axioms(h2, h8p, baseline):
    for pres in (h2, h8p, baseline):
        for which in ("op", "cop", "opcop"):
            assert verify_axioms(variant(pres, which)).passed()


def test_variant_round_trips(h2, h8p):
    for pres in (h2, h8p):
        for which in ("op", "cop", "opcop"):
            assert variant(variant(pres, which), which) == pres


def test_cop_of_h2_values(h2):
    cop = variant(h2, "cop")
    flipped = TensorElement(3, 2, {(c, b, a): v
                                   for (a, b, c), v in h2.phi_inv.entries.items()})
    assert cop.phi == flipped
    assert cop.alpha == h2.basis_element(1)  # Si(alpha) = g
    assert cop.beta == h2.unit


def test_op_of_baseline_is_itself(baseline):
    assert variant(baseline, "op") == baseline


def test_variant_unknown(h2):
    with pytest.raises(ValueError):
        variant(h2, "flip")


# -- antipode inverse --------------------------------------------------------------


def test_antipode_inverse_h2_identity(h2):
    from quasihopf.multilinear import LinearOperator
    assert antipode_inverse(h2) == LinearOperator.identity(2)


def test_antipode_inverse_h8_values(h8p, h8m):
    """Known inverse values: Si(x) = -(p+ -+ i p-) x and Si(x^2) = -+ i x^2."""
    for pres, sign in ((h8p, 1), (h8m, -1)):
        si = antipode_inverse(pres)
        n = pres.dim
        i_s = Scalar.gaussian(0, sign)
        pplus = TensorElement(1, n, {(0,): HALF, (1,): HALF})
        pminus = TensorElement(1, n, {(0,): HALF, (1,): -HALF})
        x = pres.basis_element(2)
        mix = pplus + pminus.scale(-i_s)
        assert si.apply(x) == pres.multiply(mix, x).scale(Scalar.of(-1))
        x2 = pres.basis_element(4)
        assert si.apply(x2) == x2.scale(-i_s)


def test_singular_antipode(h2):
    from quasihopf.multilinear import LinearOperator
    broken = QhaPresentation(
        name="H2-singular", dim=2, basis=h2.basis, field_tag=h2.field_tag,
        mult=h2.mult, unit=h2.unit, counit=h2.counit, coproduct=h2.coproduct,
        phi=h2.phi, phi_inv=h2.phi_inv,
        antipode=LinearOperator(2, [h2.unit, h2.unit]),
        alpha=h2.alpha, beta=h2.beta)
    with pytest.raises(SingularAntipode):
        antipode_inverse(broken)


# -- iterated coproducts --------------------------------------------------------------


def test_iterated_coproduct_grouplike(h2):
    g = h2.basis_element(1)
    plan = ((".", "."), ".")
    assert iterated_coproduct(h2, g, plan) == TensorElement(2 + 1, 2, {(1, 1, 1): ONE})


def test_iterated_coproduct_plans_differ_by_phi(h8p):
    """(Delta x id)Delta and (id x Delta)Delta are conjugate under the
    reassociator, for every basis element."""
    from quasihopf.multilinear import mult_pointwise
    for i in range(h8p.dim):
        h = h8p.basis_element(i)
        left_plan = iterated_coproduct(h8p, h, ((".", "."), "."))
        right_plan = iterated_coproduct(h8p, h, (".", (".", ".")))
        conjugated = mult_pointwise(
            h8p.mult, mult_pointwise(h8p.mult, h8p.phi, left_plan), h8p.phi_inv)
        assert right_plan == conjugated


def test_iterated_coproduct_x_expansion(h8p):
    """plan (., (., .)) on x agrees with substituting the stored
    coproduct of x into itself (oracle built with public tensor ops)."""
    from quasihopf.multilinear import apply_on_leg
    x = h8p.basis_element(2)
    expected = apply_on_leg(h8p.coproduct, h8p.coproduct.apply(x), 1)
    assert iterated_coproduct(h8p, x, (".", (".", "."))) == expected


def test_iterated_coproduct_bad_plans(h2):
    with pytest.raises(BadPlan):
        iterated_coproduct(h2, h2.unit, ("x", "."))
    with pytest.raises(BadPlan):
        iterated_coproduct(h2, h2.unit, (".", ".", "."))
    with pytest.raises(BadPlan):
        iterated_coproduct(h2, tensor_product(h2.unit, h2.unit), ".")


# -- dual actions ----------------------------------------------------------------------


def test_dual_action_posts(h8p):
    """(h -> f)(h') = f(h' h), (f <- h)(h') = f(h h'), f -> h = f(h_2) h_1,
    h <- f = f(h_1) h_2, checked against direct evaluation."""
    n = h8p.dim
    h = h8p.basis_element(3)
    f = Functional([Scalar.of(k % 3 - 1) for k in range(n)])
    lhit = dual_action(h8p, "lhit", h, f)
    rhit = dual_action(h8p, "rhit", f, h)
    for j in range(n):
        hp = h8p.basis_element(j)
        assert lhit(hp) == f(h8p.multiply(hp, h))
        assert rhit(hp) == f(h8p.multiply(h, hp))
    from quasihopf.multilinear import contract
    d = h8p.coproduct.apply(h)
    assert dual_action(h8p, "lhit_on_dual", f, h) == contract(f, d, 1)
    assert dual_action(h8p, "rhit_on_dual", h, f) == contract(f, d, 0)


def test_g_hits_dual_basis(h2):
    p_g = Functional.dual_basis(2, 1)
    hit = hit_functional_left(h2, h2.basis_element(1), p_g)
    # oracle: (g -> P_g)(h) = P_g(h g); on basis 1 -> P_g(g) = 1, g -> P_g(1) = 0
    assert hit == Functional.dual_basis(2, 0)


def test_unit_hit_is_identity(h8p):
    f = Functional([Scalar.of(k) for k in range(8)])
    assert hit_functional_left(h8p, h8p.unit, f) == f
    assert hit_functional_right(h8p, f, h8p.unit) == f


def test_mu_hits_integral(ctx_h8p):
    """Contract the modular functional against the coproduct of the left
    integral; cross-checked against a direct contraction."""
    h8p = ctx_h8p.pres
    left = hit_element_left(h8p, ctx_h8p.mu, ctx_h8p.t)
    from quasihopf.multilinear import contract
    assert left == contract(ctx_h8p.mu, h8p.coproduct.apply(ctx_h8p.t), 1)
    right = hit_element_right(h8p, ctx_h8p.t, ctx_h8p.mu)
    assert right == contract(ctx_h8p.mu, h8p.coproduct.apply(ctx_h8p.t), 0)


def test_dual_action_unknown_kind(h2):
    with pytest.raises(ValueError):
        dual_action(h2, "sideways", None)
