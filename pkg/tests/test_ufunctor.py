from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadfun.abgroup import AbHom, cyclic
from quadfun.functordata import CrossEffect2, TensorFunctor, T2, u_functor
from quadfun.theory import Morphism, freemod, gamma
from quadfun.ufunctor import (
    cr2_of_U,
    decompose_U_EvE,
    involution_on_cr2,
    lambda_rings,
    quadratic_map_check,
    t11_intertwines,
    t11_of_cr2U,
    t1_of_U,
    t2_U_EvE_decomposition,
    t2_of_U,
    u_group,
    u_post,
    u_pre,
)


@pytest.mark.parametrize("th, x, y, rank", [(gamma(), 1, 1, 1), (gamma(), 1, 2, 2), (freemod(2), 1, 2, 3), (freemod(2), 2, 1, 3)], ids=str)
def test_u_group_is_free_on_nonzero_maps(th, x, y, rank):
    ug = u_group(th, x, y)
    assert ug.group.invariants == (0,) * rank
    assert th.zero(x, y) not in ug.index


def test_u_post_of_zero_is_zero(finite_theory):
    assert u_post(finite_theory, finite_theory.zero(2, 1)).is_zero()


def test_u_pre_is_contravariant(finite_theory):
    th = finite_theory
    for g in th.homs(1, 2):
        for h in th.homs(2, 2):
            lhs = u_pre(th, th.compose(h, g), 2)
            rhs = u_pre(th, g, 2).compose(u_pre(th, h, 2))
            assert lhs.equals(rhs)


@pytest.mark.parametrize(
    "th, cr2, t1, t2, t11",
    [
        (gamma(), (), (0,), (0,), ()),
        (freemod(2), (0,), (2,), (4,), (2,)),
    ],
    ids=["gamma", "freemod2"],
)
def test_quotients_of_u(th, cr2, t1, t2, t11):
    split, quot = cr2_of_U(th)
    assert split.group.invariants == cr2 == quot.invariants
    assert t1_of_U(th)[0].invariants == t1
    assert t2_of_U(th)[0].invariants == t2
    assert t11_of_cr2U(th)[0].invariants == t11


def test_cr2_generator_for_freemod2():
    th = freemod(2)
    split, _ = cr2_of_U(th)
    u = u_functor(th)
    basis = u.basis(2)
    (gen,) = split.iota.images
    expected = {basis.index(th.morphism(1, 2, [[1, 1]])): 1, basis.index(th.injection(1, 2)): -1, basis.index(th.injection(2, 2)): -1}
    assert gen in (expected, {k: -v for k, v in expected.items()})


@pytest.mark.parametrize("th", [gamma(), freemod(2), freemod(3)], ids=repr)
def test_degenerate_cross_effects_vanish(th):
    assert cr2_of_U(th, 1, 0)[0].group.is_trivial()
    assert t2_of_U(th, 0)[0].is_trivial()
    assert t11_of_cr2U(th, 1, 0)[0].is_trivial()


@pytest.mark.parametrize(
    "th, lam, lam_bar, lam_bbar",
    [(gamma(), (0,), (0,), (0,)), (freemod(2), (0,), (2,), (4,)), (freemod(3), (0, 0), (3,), (3, 3))],
    ids=["gamma", "freemod2", "freemod3"],
)
def test_lambda_rings(th, lam, lam_bar, lam_bbar):
    rings = lambda_rings(th)
    assert rings.lam.group.invariants == lam
    assert rings.lam_bar.group.invariants == lam_bar
    assert rings.lam_bbar.group.invariants == lam_bbar
    for ring in rings:
        assert ring.check() == []


def test_involution_on_u_tensor_u_swaps(gamma_theory):
    u = u_functor(gamma_theory)
    uu = TensorFunctor(u, u)
    t = involution_on_cr2(uu)
    assert t.domain.invariants == (0, 0)
    assert t.compose(t).equals(AbHom.identity(t.domain))
    assert not t.equals(AbHom.identity(t.domain))
    assert t.matrix.entries in ((0, 1, 1, 0),)


@pytest.mark.parametrize("th", [gamma(), freemod(2), freemod(3)], ids=repr)
def test_involutions_square_to_one(th):
    for F in (u_functor(th), T2(u_functor(th))):
        t = involution_on_cr2(F)
        assert t.compose(t).equals(AbHom.identity(t.domain))
    assert t11_intertwines(th)


def test_u_eve_decomposition_counts():
    th = freemod(2)
    d = decompose_U_EvE(th)
    assert d.u2.value(1).invariants == (0, 0, 0)
    assert d.target(1)[0].invariants == (0, 0, 0)


@pytest.mark.parametrize("th", [gamma(), freemod(2)], ids=repr)
def test_u_eve_decomposition_small(th):
    assert decompose_U_EvE(th).verify(2)


def test_t2_u_eve_at_e():
    d = t2_U_EvE_decomposition(freemod(2))
    assert d.t2u2.value(1).invariants == (2, 4, 4)
    assert d.target(1)[0].invariants == (2, 4, 4)
    assert d.verify(2)


def test_t2_u_eve_retraction_formula():
    th = freemod(2)
    d = t2_U_EvE_decomposition(th)
    r = d.retraction(1)
    u = d.base.u
    basis = d.base.u2.basis(1)
    nu = u.ngens(1)
    for j, h in enumerate(basis):
        f, g = th.components(h, (1, 1))
        a, b = u.element(f), u.element(g)
        expected = {**a, **{nu + i: c for i, c in b.items()}, **{2 * nu + i * nu + k: 1 for i in a for k in b}}
        assert r.codomain.equal(r.images[j], expected)


# -- quadratic maps -----------------------------------------------------------


def third_difference_oracle(values: dict[tuple[int, int], int], modulus: int = 4) -> bool:
    pts = list(itertools.product(range(2), repeat=2))

    def add(x, y):
        return tuple((a + b) % 2 for a, b in zip(x, y))

    phi = dict(values)
    phi[(0, 0)] = 0
    return all(
        (phi[add(add(x, y), z)] - phi[add(x, y)] - phi[add(x, z)] - phi[add(y, z)] + phi[x] + phi[y] + phi[z]) % modulus == 0
        for x in pts
        for y in pts
        for z in pts
    )


def test_linear_map_is_quadratic():
    th = freemod(2)
    verdict = quadratic_map_check(th, {th.identity(1): {0: 1}}, 1, 1, cyclic(4))
    assert verdict.quadratic and verdict.factors_through_t2


@given(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)))
def test_quadratic_map_criteria_match_oracle(vals):
    th = freemod(2)
    points = [(1, 0), (0, 1), (1, 1)]
    table = {th.morphism(1, 2, [p]): {0: v} for p, v in zip(points, vals) if v}
    verdict = quadratic_map_check(th, table, 1, 2, cyclic(4))
    assert verdict.cross_effect_bilinear == verdict.factors_through_t2
    assert verdict.quadratic == third_difference_oracle(dict(zip(points, vals)))


def test_quadratic_map_rejects_nonzero_at_zero():
    th = freemod(2)
    with pytest.raises(ValueError):
        quadratic_map_check(th, {th.zero(1, 1): {0: 1}}, 1, 1, cyclic(4))


def test_cross_effect_of_u_on_gamma_is_zero(gamma_theory):
    assert CrossEffect2(u_functor(gamma_theory)).value(1, 1).is_trivial()
    assert Morphism(1, 1, (1,)) == gamma_theory.identity(1)
