from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadfun.abgroup import coinvariants, from_invariants
from quadfun.functordata import T2, TensorFunctor, u_functor
from quadfun.qmodule import ModuleError, i1_embed, lambda_bar_module, qm2_violator, s2_of_functor
from quadfun.ringoid import (
    axiom_correspondence,
    build_ringoid,
    check_associativity,
    check_rmodule,
    chi_iso,
    end_e_matches_lambda_bbar,
    qmodule_from_rmodule,
    rmodule_from_qmodule,
    roundtrip_equal,
)
from quadfun.theory import freemod, gamma
from quadfun.ufunctor import t11_of_cr2U

THEORIES = {"gamma": gamma, "f2": lambda: freemod(2), "f3": lambda: freemod(3)}


def s2_uu(th):
    u = u_functor(th)
    return s2_of_functor(TensorFunctor(u, u))


@pytest.fixture(scope="module", params=list(THEORIES))
def ringoid(request):
    return build_ringoid(THEORIES[request.param]())


def test_associativity(ringoid):
    rep = check_associativity(ringoid)
    assert rep.ok, rep.violations[:1]
    assert sum(rep.counts.values()) > 0
    assert rep.to_report().ok


def test_end_e_is_lambda_bbar(ringoid):
    assert end_e_matches_lambda_bbar(ringoid)


def test_identities_are_units(ringoid):
    R = ringoid
    for a, b in [("e", "e"), ("e", "ee"), ("ee", "e"), ("ee", "ee")]:
        for f in range(R.ngens(a, b)):
            x = {f: 1}
            assert R.equal(a, b, R.compose((a, a, b), x, R.identity(a)), x)
            assert R.equal(a, b, R.compose((a, b, b), R.identity(b), x), x)


@pytest.mark.parametrize(
    "name, end_e, e_to_ee, ee_to_e, end_ee",
    [
        ("gamma", (0,), (), (0,), (0, 0)),
        ("f2", (4,), (2,), (2,), (2, 2)),
        ("f3", (3, 3), (3,), (3,), (3, 3)),
    ],
)
def test_hom_groups(name, end_e, e_to_ee, ee_to_e, end_ee):
    R = build_ringoid(THEORIES[name]())
    assert R.hom("e", "e").invariants == end_e
    assert R.hom("e", "ee").invariants == e_to_ee
    assert R.hom("ee", "e").invariants == ee_to_e
    assert R.hom("ee", "ee").invariants == end_ee
    assert R.hom("e", "ee").isomorphic(t11_of_cr2U(R.theory)[0])


def test_unknown_composition_type():
    R = build_ringoid(gamma())
    with pytest.raises(ValueError):
        R.compose_gens(("e", "x", "e"), 0, 0)


@pytest.mark.parametrize(
    "make, coinv",
    [
        (lambda: s2_uu(gamma()), (0,)),
        (lambda: s2_of_functor(T2(u_functor(freemod(2)))), (2,)),
        (lambda: qm2_violator(), (2,)),
    ],
    ids=["UU-gamma", "T2U-f2", "violator"],
)
def test_chi_iso(make, coinv):
    M = make()
    R = build_ringoid(M.theory)
    chi = chi_iso(R, M.mee, M.ee_action, M.T)
    assert chi.verify()
    assert chi.coinvariants.invariants == coinv
    assert chi.tensor.isomorphic(coinvariants(M.mee, M.T)[0])


def test_chi_rejects_non_involution():
    M = s2_uu(gamma())
    R = build_ringoid(M.theory)
    with pytest.raises(ModuleError):
        chi_iso(R, M.mee, M.ee_action, M.T * 2)


MODULES = {
    "UU-gamma": lambda: s2_uu(gamma()),
    "T2U-f2": lambda: s2_of_functor(T2(u_functor(freemod(2)))),
    "Lbar-f3": lambda: lambda_bar_module(freemod(3)),
    "I1-gamma": lambda: i1_embed(gamma(), from_invariants([2, 0])),
    "violator": qm2_violator,
    "repaired": lambda: qm2_violator(repaired=True),
}


@pytest.mark.parametrize("name", list(MODULES))
def test_roundtrip_through_rmodules(name):
    M = MODULES[name]()
    D = rmodule_from_qmodule(M)
    N = qmodule_from_rmodule(D)
    assert roundtrip_equal(M, N)


@pytest.mark.parametrize("name", list(MODULES))
def test_axiom_correspondence(name):
    corr = axiom_correspondence(MODULES[name]())
    assert corr.agree
    assert corr.qm2 == (name != "violator")


def test_violator_fails_rm2_only():
    D = rmodule_from_qmodule(qm2_violator())
    failing = {c.id for c in check_rmodule(D).failures()}
    assert failing == {"RM2"}


def test_roundtrip_detects_changes():
    M = s2_uu(gamma())
    N = dataclasses.replace(M, P=M.P * 2, H=dict(M.H))
    assert not roundtrip_equal(M, N)


@settings(max_examples=25)
@given(st.integers(-4, 4))
def test_axiom_correspondence_on_scaled_h(k):
    # scaling the repaired module's H keeps the proto axioms and can break QM2
    M = qm2_violator(repaired=True)
    N = dataclasses.replace(M, H={xi: h * k for xi, h in M.H.items()})
    corr = axiom_correspondence(N)
    assert corr.agree


@settings(max_examples=15)
@given(st.data())
def test_composition_is_bilinear(data):
    R = build_ringoid(freemod(2))
    types = data.draw(st.sampled_from([("e", "e", "ee"), ("ee", "e", "ee"), ("e", "ee", "e"), ("ee", "ee", "e")]))
    A, B, C = types
    vec = lambda a, b: st.dictionaries(st.integers(0, R.ngens(a, b) - 1), st.integers(-3, 3), max_size=2)
    f1, f2 = data.draw(vec(A, B)), data.draw(vec(A, B))
    g = data.draw(vec(B, C))
    summed = {k: f1.get(k, 0) + f2.get(k, 0) for k in set(f1) | set(f2)}
    lhs = R.compose(types, g, summed)
    rhs = {k: R.compose(types, g, f1).get(k, 0) + R.compose(types, g, f2).get(k, 0) for k in range(R.ngens(A, C))}
    assert R.equal(A, C, lhs, rhs)
