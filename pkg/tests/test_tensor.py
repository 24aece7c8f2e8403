from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadfun.abgroup import AbHom, cyclic
from quadfun.functordata import T1, T2, TensorFunctor, morphisms_up_to, u_functor
from quadfun.qmodule import ModuleError, i1_embed, lambda_bar_module, qm2_violator, s2_of_functor
from quadfun.tensor import (
    counit_epsilon,
    cross_effect_gamma,
    decomposition,
    e_tensor_iso,
    linear_counit_agrees,
    presentations_agree,
    qtensor,
    qtensor_morphism,
    roundtrip,
    t1_module_functor,
    tensor_functor,
    unit_eta,
)
from quadfun.theory import freemod, gamma


def uu_gamma():
    u = u_functor(gamma())
    return TensorFunctor(u, u)


def t2u_f2():
    return T2(u_functor(freemod(2)))


_cache: dict[str, object] = {}


def module(name):
    if name not in _cache:
        _cache[name] = {
            "UU-gamma": lambda: s2_of_functor(uu_gamma()),
            "T2U-f2": lambda: s2_of_functor(t2u_f2()),
            "Lbar-f2": lambda: lambda_bar_module(freemod(2)),
            "repaired": lambda: qm2_violator(repaired=True),
        }[name]()
    return _cache[name]


@pytest.mark.parametrize(
    "name, n, invariants",
    [
        ("UU-gamma", 0, ()),
        ("UU-gamma", 1, (0,)),
        ("UU-gamma", 2, (0,) * 4),
        ("UU-gamma", 3, (0,) * 9),
        ("T2U-f2", 1, (4,)),
        ("T2U-f2", 2, (2, 4, 4)),
        ("T2U-f2", 3, (2, 2, 2, 4, 4, 4)),
        ("Lbar-f2", 2, (2, 2)),
    ],
)
def test_tensor_values(name, n, invariants):
    pres = qtensor(module(name).theory, n, module(name))
    assert pres.group.invariants == invariants
    assert pres.commutes()
    assert pres.agrees_with_alternative()


@pytest.mark.parametrize("name", ["UU-gamma", "T2U-f2", "repaired"])
@pytest.mark.parametrize("n", [1, 2])
def test_generator_relation_presentation_agrees(name, n):
    assert presentations_agree(module(name), n)


@pytest.mark.parametrize("name", ["UU-gamma", "T2U-f2", "Lbar-f2", "repaired"])
def test_e_tensor_iso(name):
    iso = e_tensor_iso(module(name))
    assert iso.verify()
    assert iso.t2_tensor_iso


@pytest.mark.parametrize("name", ["UU-gamma", "T2U-f2", "repaired"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_decomposition(name, n):
    assert decomposition(module(name), n).verify()


@pytest.mark.parametrize("name", ["UU-gamma", "T2U-f2", "repaired"])
def test_gamma_iso_for_quadratic_modules(name):
    res = cross_effect_gamma(module(name), 1, 1)
    assert res.is_iso and res.injective


def test_decomposition_fails_for_violator():
    assert decomposition(qm2_violator(), 1).verify()
    assert not decomposition(qm2_violator(), 2).verify()


def test_gamma_not_injective_for_violator():
    res = cross_effect_gamma(qm2_violator(), 1, 1)
    assert not res.injective
    assert res.witness is not None


def test_tensor_functor_rejects_non_proto():
    M = module("UU-gamma")
    bad = dataclasses.replace(M, T=-M.T, H=dict(M.H))
    with pytest.raises(ModuleError):
        tensor_functor(bad)


@pytest.mark.parametrize("make", [uu_gamma, t2u_f2], ids=["UU-gamma", "T2U-f2"])
def test_roundtrip(make):
    rt = roundtrip(make(), N=2)
    assert rt.ok, rt.to_report().failures()[:1]


def test_counit_and_unit_on_gamma():
    F = uu_gamma()
    eps = counit_epsilon(F, N=3)
    assert eps.isomorphic_through(3) == {0: True, 1: True, 2: True, 3: True}
    assert eps.naturality_failure() is None
    eta = unit_eta(module("UU-gamma"))
    assert eta.check().ok and eta.is_iso()


@pytest.mark.parametrize("th", [gamma(), freemod(2)], ids=repr)
def test_linear_counit(th):
    assert linear_counit_agrees(T1(u_functor(th)))


def test_linear_counit_rejects_quadratic_functor():
    with pytest.raises(ModuleError):
        linear_counit_agrees(uu_gamma())


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_t1_module_functor_values(n):
    F = t1_module_functor(freemod(2), cyclic(2))
    assert F.value(n).invariants == (2,) * n
    if n == 1:
        assert F.s1_iso().is_iso()


def test_t1_module_over_gamma_is_free_tensor():
    F = t1_module_functor(gamma(), cyclic(3))
    assert F.value(2).invariants == (3, 3)
    M = i1_embed(gamma(), cyclic(3))
    assert tensor_functor(M).value(2).invariants == (3, 3)


@settings(max_examples=30)
@given(st.data())
def test_tensor_is_functorial(data):
    M = module("T2U-f2")
    th = M.theory
    maps = morphisms_up_to(th, 2)
    f = data.draw(st.sampled_from(maps))
    g = data.draw(st.sampled_from([h for h in maps if h.source == f.target]))
    lhs = qtensor_morphism(th.compose(g, f), M)
    rhs = qtensor_morphism(g, M).compose(qtensor_morphism(f, M))
    assert lhs.equals(rhs)


@settings(max_examples=20)
@given(st.integers(0, 3))
def test_identity_goes_to_identity(n):
    M = module("UU-gamma")
    qt = tensor_functor(M)
    assert qtensor_morphism(M.theory.identity(n), M).equals(AbHom.identity(qt.value(n)))
