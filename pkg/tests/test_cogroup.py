from __future__ import annotations

import random

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadfun.abgroup import AbHom
from quadfun.cogroup import (
    BASIC_COMMUTATOR,
    SquareGroupFunctor,
    check_cogroup_module,
    check_square_group,
    commutator,
    confluence_check,
    default_family,
    deviation_h,
    evaluate_on_free,
    evaluate_word_morphism,
    functoriality_check,
    hall_petrescu_check,
    in_cross_effect,
    magnus_c12,
    magnus_coefficient,
    power_expansion_matches,
    random_word,
    square_group,
    square_group_from_json,
    square_group_to_cogroup_module,
    t11_class,
    word_power,
)
from quadfun.functordata import binomial
from quadfun.theory import freegroup, reduce_word


def heisenberg(word, a=1, b=2):
    """Upper unitriangular 3x3 image of a word; entry (0, 2) is the X_a X_b Magnus coefficient."""
    m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for x in word:
        s = 1 if x > 0 else -1
        if abs(x) == a:
            g = [[1, s, 0], [0, 1, 0], [0, 0, 1]]
        elif abs(x) == b:
            g = [[1, 0, 0], [0, 1, s], [0, 0, 1]]
        else:
            continue
        m = [[sum(m[i][k] * g[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    return m


words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=10).map(reduce_word)


Z12 = lambda: square_group([0], [0], [[1]], [[2]], "(Z,Z,1,2)")
Z00 = lambda: square_group([0], [0], [[0]], [[0]], "(Z,Z,0,0)")
Z2 = lambda: square_group([2], [2], [[1]], [[0]], "(Z/2,Z/2,1,0)")


@pytest.mark.parametrize(
    "S, ok",
    [(Z12(), True), (Z00(), True), (Z2(), True), (square_group([0], [0], [[1]], [[1]]), False)],
    ids=["Z12", "Z00", "Z2", "Z11"],
)
def test_check_square_group(S, ok):
    assert check_square_group(S).ok is ok


def test_square_group_shapes():
    with pytest.raises(ValueError):
        square_group([0], [0], [[1, 1]], [[2]])


@pytest.mark.parametrize("n", range(-4, 5))
def test_translation_examples(n):
    a = square_group_to_cogroup_module(Z12())
    assert a.act(n).equals(AbHom.identity(a.me) * (n * n))
    assert a.T.equals(AbHom.identity(a.mee))
    assert a.H2.is_zero()
    b = square_group_to_cogroup_module(Z00())
    assert b.act(n).equals(AbHom.identity(b.me) * n)
    c = square_group_to_cogroup_module(Z2())
    assert c.act(n).equals(AbHom.identity(c.me) * n)
    assert c.T.equals(-AbHom.identity(c.mee)) and c.T.equals(AbHom.identity(c.mee))


def test_translation_rejects_non_square_group():
    with pytest.raises(ValueError):
        square_group_to_cogroup_module(square_group([0], [0], [[1]], [[1]]))


@pytest.mark.parametrize("S", default_family(), ids=repr)
def test_translated_modules_satisfy_relations(S):
    rep = check_cogroup_module(square_group_to_cogroup_module(S))
    assert rep.ok, rep.failures()[:1]
    assert S.T.compose(S.T).equals(AbHom.identity(S.mee))


def test_zeroed_h2_breaks_relations():
    S = square_group([0], [0], [[1]], [[0]])
    C = square_group_to_cogroup_module(S)
    C.H2 = AbHom.zero(C.H2.domain, C.H2.codomain)
    failing = {c.id for c in check_cogroup_module(C).failures()}
    assert {"T3", "T6"} <= failing


def test_deviation_examples():
    th = freegroup()
    dev = deviation_h(th.identity(1))
    assert dev.word == () and dev.in_kernel and dev.t11 == 0
    two = deviation_h(th.power(2))
    assert two.word == reduce_word((1, 2, 1, 2, -2, -2, -1, -1))
    assert two.t11 == 1


@pytest.mark.parametrize("n", range(-3, 6))
def test_deviation_of_powers(n):
    dev = deviation_h(freegroup().power(n))
    assert dev.in_kernel
    assert dev.t11 == binomial(n)


def test_basic_commutator_class():
    assert in_cross_effect(BASIC_COMMUTATOR)
    assert t11_class(BASIC_COMMUTATOR) == 1
    with pytest.raises(ValueError):
        t11_class((1,))
    with pytest.raises(ValueError):
        t11_class((1, 3, -1, -3))


@given(words)
def test_magnus_matches_heisenberg_oracle(w):
    assert magnus_c12(w) == heisenberg(w)[0][2]
    assert magnus_coefficient(w, 3, 1) == heisenberg(w, 3, 1)[0][2]


@given(words.filter(lambda w: all(abs(x) <= 2 for x in w)), words.filter(lambda w: all(abs(x) <= 2 for x in w)))
def test_t11_class_is_additive_on_commutators(u, v):
    # [u, v] lies in the cross-effect only when u, v are in distinct letters; use u(x1), v(x2)
    u1 = tuple(x for x in u if abs(x) == 1)
    v2 = tuple(x for x in v if abs(x) == 2)
    w = commutator(reduce_word(v2), reduce_word(u1))
    sum_u = sum(1 if x > 0 else -1 for x in u1)
    sum_v = sum(1 if x > 0 else -1 for x in v2)
    assert t11_class(w) == sum_u * sum_v


@pytest.mark.parametrize("S", [Z12(), Z00(), Z2()], ids=repr)
@pytest.mark.parametrize("n", range(-5, 6))
def test_power_expansion(S, n):
    assert power_expansion_matches(S, n)


def test_power_expansion_is_square_for_z12():
    ev = evaluate_on_free(Z12(), 1)
    for n in range(-5, 6):
        assert ev.expand(word_power((1,), n), {0: 1}) == ({0: n * n} if n else {})


def test_product_of_two_letters():
    S = Z12()
    ev = evaluate_on_free(S, 2)
    a = {0: 1}
    expected = {**ev.e(1, a), **ev.e(2, a)}
    expected.update(ev.bracket_basis(1, 2, S.H(a)))
    assert ev.equal(ev.expand((1, 2), a), expected)


@pytest.mark.parametrize("S", default_family(), ids=repr)
def test_commutator_has_no_linear_part(S):
    ev = evaluate_on_free(S, 2)
    for k in range(S.me.num_gens):
        v = ev.expand(commutator((1,), (2,)), {k: 1})
        assert all(g >= 2 * ev.ne or c == 0 for g, c in v.items())
        assert ev.equal(v, ev.expand(commutator((1,), (2,)), {k: 1}, "left"))


def test_expand_rejects_unreduced_words():
    ev = evaluate_on_free(Z12(), 2)
    with pytest.raises(ValueError):
        ev.expand((1, -1), {0: 1})
    with pytest.raises(ValueError):
        ev.expand((3,), {0: 1})
    with pytest.raises(ValueError):
        ev.expand((1,), {0: 1}, "middle")


@pytest.mark.parametrize("n", range(0, 6))
def test_hall_petrescu(n):
    assert hall_petrescu_check(n)


def test_hall_petrescu_range():
    with pytest.raises(ValueError):
        hall_petrescu_check(6)


@pytest.mark.parametrize("S", default_family(), ids=repr)
def test_confluence_on_random_words(S):
    rng = random.Random(7)
    count, bad = confluence_check(S, [random_word(rng, 3, 6) for _ in range(60)])
    assert bad is None and count == 60


@settings(max_examples=40)
@given(words)
def test_confluence_property(w):
    for S in default_family():
        assert confluence_check(S, [w])[1] is None


@pytest.mark.parametrize("S", default_family(), ids=repr)
def test_functoriality(S):
    assert functoriality_check(S, samples=15, seed=3) is None


@settings(max_examples=30)
@given(words, words)
def test_functoriality_property(u, v):
    th = freegroup()
    f = th.morphism(2, 3, [u, v])
    g = th.morphism(3, 2, [(1, 2), (-2,), (2, 1, -2)])
    S = default_family()[-1]
    lhs = evaluate_word_morphism(S, th.compose(g, f))
    assert lhs.equals(evaluate_word_morphism(S, g).compose(evaluate_word_morphism(S, f)))


def test_word_morphism_from_tuples():
    S = Z12()
    h = evaluate_word_morphism(S, [(1, 2)], target=2)
    assert h.domain.invariants == (0,)
    assert h.codomain.invariants == (0, 0, 0)
    with pytest.raises(ValueError):
        evaluate_word_morphism(S, [(1, -1)], target=1)


def test_square_group_functor_is_quadratic_shaped():
    F = SquareGroupFunctor(Z12())
    assert [F.value(n).invariants for n in range(4)] == [(), (0,), (0,) * 3, (0,) * 6]


def test_json_descriptor():
    S = square_group_from_json({"name": "x", "me": [0], "mee": [0], "H": [[1]], "P": [[2]]})
    assert check_square_group(S).ok
    with pytest.raises(jsonschema.ValidationError):
        square_group_from_json({"me": [0], "mee": [0], "H": [[1]]})
    with pytest.raises(jsonschema.ValidationError):
        square_group_from_json({"me": [-1], "mee": [0], "H": [[1]], "P": [[2]]})
