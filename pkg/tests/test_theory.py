from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadfun.theory import (
    Morphism,
    cogroup_ops,
    enumerate_homs,
    freegroup,
    freemod,
    gamma,
    invert_word,
    reduce_word,
    theory_from_descriptor,
)

FINITE = [gamma(), freemod(2), freemod(3)]


def words(letters: int, max_len: int = 6):
    return st.lists(st.sampled_from([x for i in range(1, letters + 1) for x in (i, -i)]), max_size=max_len).map(reduce_word)


def word_tuples(source: int, target: int, max_len: int = 4):
    return st.tuples(*[words(target, max_len) for _ in range(source)]).map(lambda ws: Morphism(source, target, tuple(ws)))


@pytest.mark.parametrize("th", FINITE, ids=repr)
def test_associativity_exhaustive(th):
    homs = {(a, b): enumerate_homs(th, a, b) for a in range(3) for b in range(3)}
    for a, b, c, d in itertools.product(range(3), repeat=4):
        if len(homs[(a, b)]) * len(homs[(b, c)]) * len(homs[(c, d)]) > 20000:
            continue
        for f in homs[(a, b)]:
            for g in homs[(b, c)]:
                gf = th.compose(g, f)
                for h in homs[(c, d)]:
                    assert th.compose(th.compose(h, g), f) == th.compose(h, gf)


@pytest.mark.parametrize("th", FINITE + [freegroup()], ids=repr)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_injection_retraction_identities(th, n):
    for k in range(1, n + 1):
        for p in range(1, n + 1):
            composite = th.compose(th.retraction(k, n), th.injection(p, n))
            assert composite == (th.identity(1) if k == p else th.zero(1, 1))
        assert th.compose(th.fold(n), th.injection(k, n)) == th.identity(1)
    assert th.compose(th.switch(), th.switch()) == th.identity(2)
    assert th.compose(th.fold(2), th.switch()) == th.fold(2)


@pytest.mark.parametrize("th", FINITE, ids=repr)
def test_index_out_of_range(th):
    with pytest.raises(ValueError):
        th.injection(3, 2)
    with pytest.raises(ValueError):
        th.retraction(0, 2)


def test_fold_in_freemod2_is_all_ones():
    assert freemod(2).fold(3) == Morphism(3, 1, ((1,), (1,), (1,)))


@pytest.mark.parametrize(
    "th, n, m, count",
    [(gamma(), 1, 1, 2), (gamma(), 1, 2, 3), (gamma(), 2, 2, 9), (freemod(2), 1, 2, 4), (freemod(2), 2, 2, 16), (freemod(3), 1, 1, 3)],
    ids=str,
)
def test_hom_counts(th, n, m, count):
    homs = enumerate_homs(th, n, m)
    assert len(homs) == count == len(set(homs))
    assert homs == enumerate_homs(th, n, m)
    assert th.zero(n, m) in homs


def test_freegroup_refuses_enumeration():
    with pytest.raises(NotImplementedError):
        enumerate_homs(freegroup(), 1, 1)


def test_gamma_collapse_composition():
    th = gamma()
    f = th.morphism(1, 1, [1])
    collapse = th.morphism(1, 1, [0])
    assert th.compose(collapse, f) == th.zero(1, 1)


def test_freemod_composition_is_matrix_product():
    th = freemod(2)
    f = th.morphism(1, 2, [[1, 1]])
    g = th.morphism(2, 1, [[1], [1]])
    assert th.compose(g, f) == th.zero(1, 1)


def test_freegroup_substitution_example():
    th = freegroup()
    g = th.morphism(2, 2, [[1, 2], [-2]])
    f = th.morphism(1, 2, [[1, 2]])
    assert th.compose(g, f).data == ((1,),)


@pytest.mark.parametrize("th", FINITE + [freegroup()], ids=repr)
def test_components_roundtrip(th):
    parts = [th.injection(1, 2), th.injection(2, 2)]
    assert th.from_components(parts) == th.identity(2)
    assert th.from_components([th.zero(1, 2)] * 2) == th.zero(2, 2)
    f = th.from_components([th.injection(2, 2), th.injection(1, 2)])
    assert th.decompose(f) == [th.injection(2, 2), th.injection(1, 2)]


def test_gamma_fold_through_map():
    th = gamma()
    assert th.from_components([th.identity(1), th.identity(1)]) == th.fold(2)


def test_cogroup_structure_examples():
    th = freegroup()
    ops = cogroup_ops(th)
    assert ops.comultiplication.data == ((1, 2),)
    for k in (1, 2):
        assert th.compose(th.retraction(k, 2), ops.comultiplication) == th.identity(1)
    assert th.bullet(th.injection(1, 2), th.injection(2, 2)).data == ((1, 2),)
    with pytest.raises(TypeError):
        cogroup_ops(gamma())


@given(word_tuples(2, 2), word_tuples(2, 2), word_tuples(2, 2))
def test_bullet_is_a_group_law(f, g, h):
    th = freegroup()
    zero = th.zero(2, 2)
    assert th.bullet(f, zero) == f == th.bullet(zero, f)
    assert th.bullet(f, th.bullet_inverse(f)) == zero
    assert th.bullet(th.bullet(f, g), h) == th.bullet(f, th.bullet(g, h))


@given(word_tuples(2, 3), word_tuples(2, 3), word_tuples(3, 2))
def test_postcomposition_is_a_homomorphism(f, g, h):
    th = freegroup()
    assert th.compose(h, th.bullet(f, g)) == th.bullet(th.compose(h, f), th.compose(h, g))


@given(word_tuples(1, 2), word_tuples(2, 3), word_tuples(3, 2))
def test_freegroup_associativity(f, g, h):
    th = freegroup()
    assert th.compose(th.compose(h, g), f) == th.compose(h, th.compose(g, f))


@given(words(3, 10))
def test_reduce_and_invert(w):
    assert reduce_word(w) == w
    assert reduce_word(w + invert_word(w)) == ()
    assert invert_word(invert_word(w)) == w


@pytest.mark.parametrize(
    "desc, kind",
    [({"kind": "gamma"}, "gamma"), ({"kind": "freemod", "modulus": 2}, "freemod"), ({"kind": "freegroup"}, "freegroup")],
)
def test_descriptors_roundtrip(desc, kind):
    th = theory_from_descriptor(desc)
    assert th.kind == kind and th.descriptor() == desc


def test_morphism_validation():
    with pytest.raises(ValueError):
        gamma().morphism(1, 1, [2])
    with pytest.raises(ValueError):
        freegroup().morphism(1, 1, [[2]])
    with pytest.raises(ValueError):
        theory_from_descriptor({"kind": "freemod"})
