from __future__ import annotations

import dataclasses
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadfun.abgroup import AbHom, cyclic, free, from_invariants
from quadfun.functordata import T1, T2, TensorFunctor, u_functor
from quadfun.qmodule import (
    ModuleError,
    QModMorphism,
    check_proto,
    check_quadratic,
    i1_embed,
    is_proto,
    is_quadratic,
    lambda_bar_module,
    module_from_json,
    module_to_json,
    qm2_violator,
    random_element_check,
    s2_of_functor,
    tensor_over_lambda,
    tensor_over_ring,
)
from quadfun.qmodule import _right_precomposition
from quadfun.functordata import BilinearCrossEffect
from quadfun.theory import freemod, gamma


def s2_uu_gamma():
    u = u_functor(gamma())
    return s2_of_functor(TensorFunctor(u, u))


def s2_t2u_f2():
    return s2_of_functor(T2(u_functor(freemod(2))))


MODULES = {
    "S2(UU)/gamma": s2_uu_gamma,
    "S2(T2U)/f2": s2_t2u_f2,
    "I1(Z/2)/gamma": lambda: i1_embed(gamma(), cyclic(2)),
    "I1(Z/2)/f2": lambda: i1_embed(freemod(2), cyclic(2)),
    "I1(Lbar)/gamma": lambda: lambda_bar_module(gamma()),
    "I1(Lbar)/f2": lambda: lambda_bar_module(freemod(2)),
    "repaired": lambda: qm2_violator(repaired=True),
}


@pytest.mark.parametrize("name", list(MODULES))
def test_quadratic_modules_pass(name):
    M = MODULES[name]()
    report = check_quadratic(M)
    assert report.ok, report.failures()[:1]
    assert random_element_check(M, samples=10)


def test_s2_of_u_tensor_u_shape():
    M = s2_uu_gamma()
    assert M.me.invariants == (0,)
    assert M.mee.invariants == (0, 0)
    assert M.T.matrix.entries == (0, 1, 1, 0)
    assert M.P.matrix.entries == (1, 1)
    assert all(h.is_zero() for h in M.H.values())


def test_s2_of_t2u_shape():
    M = s2_t2u_f2()
    assert M.me.invariants == (4,)
    assert M.mee.invariants == (2,)


def test_s2_of_linear_functor_is_i1():
    th = freemod(2)
    F = T1(u_functor(th))
    M = s2_of_functor(F)
    assert M.mee.is_trivial()
    N = lambda_bar_module(th)
    assert M.me.isomorphic(N.me)
    for a, h in N.act_e.items():
        assert M.act_e[a].equals(h)


def test_negated_t_fails_only_p_symmetry():
    M = s2_uu_gamma()
    bad = dataclasses.replace(M, T=-M.T, H=dict(M.H))
    failing = {c.id for c in check_proto(bad).failures()}
    assert failing == {"P.symmetric"}


def test_qm2_violator_boundary():
    V = qm2_violator()
    assert is_proto(V) and not is_quadratic(V)
    assert {c.id for c in check_quadratic(V).failures()} == {"QM2"}
    W = qm2_violator(repaired=True)
    assert is_proto(W) and is_quadratic(W)


def test_failures_carry_witnesses():
    report = check_quadratic(qm2_violator())
    for c in report.failures():
        assert c.witness is not None
        assert json.dumps(c.to_json())


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_i1_over_gamma_any_cyclic(n):
    assert is_quadratic(i1_embed(gamma(), cyclic(n)))


def test_i1_rejects_action_not_through_lambda_bar():
    th = freemod(3)
    two = th.morphism(1, 1, [[2]])
    # [2] acting as the identity on Z is not a ring map from Λ̄ = Z/3
    with pytest.raises(ModuleError):
        i1_embed(th, free(1), {two: AbHom.identity(free(1))})


def test_i1_requires_all_actions():
    th = freemod(3)
    with pytest.raises(ModuleError):
        i1_embed(th, cyclic(3))


def test_tensor_over_lambda_examples():
    th = gamma()
    M = s2_uu_gamma()
    q = BilinearCrossEffect(u_functor(th)).value(1, 1)
    t = tensor_over_lambda(th, q, _right_precomposition(th, q, 2), M)
    assert t.group.is_trivial()
    # Λ ⊗_Λ Λ̄ ≅ Λ̄ over FreeMod(Z/2)
    th = freemod(2)
    lam = u_functor(th).value(1)
    N = lambda_bar_module(th)
    t = tensor_over_lambda(th, lam, _right_precomposition(th, lam, 1), N)
    assert t.group.invariants == (2,)


def test_tensor_over_integers_with_trivial_actions():
    a, b = cyclic(2), cyclic(4)
    t = tensor_over_ring(a, {"1": AbHom.identity(a)}, b, {"1": AbHom.identity(b)})
    assert t.group.invariants == (2,)


@pytest.mark.parametrize("name", ["S2(UU)/gamma", "S2(T2U)/f2", "I1(Z/2)/f2", "repaired"])
def test_json_roundtrip(name):
    M = MODULES[name]()
    desc = module_to_json(M)
    N = module_from_json(json.loads(json.dumps(desc)))
    assert module_to_json(N) == desc
    assert is_quadratic(N) == is_quadratic(M)


def test_json_schema_rejects_bad_descriptor():
    import jsonschema

    with pytest.raises(jsonschema.ValidationError):
        module_from_json({"theory": {"kind": "gamma"}, "me": [0], "mee": []})
    with pytest.raises(ModuleError):
        module_from_json({"theory": {"kind": "gamma"}, "me": [0], "mee": [0], "P": [[1, 1]]})


def test_module_morphisms():
    M = s2_uu_gamma()
    ident = QModMorphism.identity(M)
    assert ident.check().ok and ident.is_iso()
    assert ident.compose(ident).equals(ident)
    # the swap of M_ee is an automorphism commuting with T, P and H = 0
    swap = QModMorphism(M, M, AbHom.identity(M.me), M.T)
    assert swap.check().ok
    assert swap.compose(swap).equals(ident)
    assert swap.inverse().equals(swap)
    bad = QModMorphism(M, M, AbHom.identity(M.me) * 2, M.T)
    assert not bad.check().ok


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_random_element_checks(seed):
    assert random_element_check(MODULES["S2(T2U)/f2"](), samples=5, seed=seed)


@settings(max_examples=20)
@given(st.integers(-3, 3))
def test_scaled_p_stays_quadratic_when_h_vanishes(k):
    # with H = 0 every axiom is homogeneous in P
    M = s2_uu_gamma()
    scaled = dataclasses.replace(M, P=M.P * k, H=dict(M.H))
    assert is_quadratic(scaled)


def test_structure_map_shapes_are_checked():
    M = s2_uu_gamma()
    with pytest.raises(ModuleError):
        dataclasses.replace(M, P=AbHom.zero(M.me, M.me), H=dict(M.H))
    assert from_invariants([0]).isomorphic(M.me)
