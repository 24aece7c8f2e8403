from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadfun.abgroup import (
    AbHom,
    FpAbGroup,
    HomError,
    IntMatrix,
    cokernel,
    coinvariants,
    cyclic,
    direct_sum,
    free,
    from_invariants,
    image,
    kernel,
    pushout,
    smith_normal_form,
    tensor,
)


def determinant_divisors(m: IntMatrix) -> list[int]:
    """Invariant factors from gcds of k x k minors (independent of the elimination code)."""
    out, prev = [], 1
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for rows in itertools.combinations(range(m.rows), k):
            for cols in itertools.combinations(range(m.cols), k):
                sub = IntMatrix.from_rows([[m[i, j] for j in cols] for i in rows], k)
                g = math.gcd(g, sub.determinant())
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


small_matrices = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r).map(
            lambda rows: IntMatrix.from_rows(rows, c)
        )
    )
)


def test_snf_example():
    m = IntMatrix.from_rows([[2, 4], [6, 8]])
    d, left, right = smith_normal_form(m)
    assert d.diagonal_entries() == (2, 4)
    assert left @ m @ right == d
    assert left.is_unimodular() and right.is_unimodular()


@pytest.mark.parametrize("n", [1, 2, 4])
def test_snf_identity_and_zero(n):
    ident = IntMatrix.identity(n)
    assert smith_normal_form(ident) == (ident, ident, ident)
    zero = IntMatrix.zero(n, n + 1)
    d, left, right = smith_normal_form(zero)
    assert d == zero and left == IntMatrix.identity(n) and right == IntMatrix.identity(n + 1)


@given(small_matrices)
def test_snf_properties(m):
    d, left, right = smith_normal_form(m)
    assert left @ m @ right == d
    assert d.is_diagonal()
    assert left.is_unimodular() and right.is_unimodular()
    entries = [x for x in d.diagonal_entries()]
    nonzero = [x for x in entries if x]
    assert all(x > 0 for x in nonzero)
    assert entries[: len(nonzero)] == nonzero  # zeros last
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert nonzero == determinant_divisors(m)
    assert smith_normal_form(m) == (d, left, right)  # deterministic


@pytest.mark.parametrize(
    "gens, rels, invariants",
    [
        (1, [{0: 2}], (2,)),
        (2, [{0: 2}, {1: 4}], (2, 4)),
        (2, [{0: 2, 1: 4}, {0: 6, 1: 8}], (2, 4)),
        (2, [{0: 1, 1: 1}], (0,)),
        (3, [], (0, 0, 0)),
        (1, [{0: 1}], ()),
        (2, [{0: 6}, {1: 4}], (2, 12)),
    ],
)
def test_invariants(gens, rels, invariants):
    assert FpAbGroup(gens, rels).invariants == invariants


def test_element_equality_modulo_relations():
    g = cyclic(4)
    assert g.equal({0: 5}, {0: 1})
    assert g.gen(0) * 4 == g.zero()
    assert len(g.elements()) == 4


def test_kernel_and_cokernel_examples():
    z = free(1)
    c, proj = cokernel(AbHom(z, z, [{0: 2}]))
    assert c.invariants == (2,)
    k, incl = kernel(AbHom(free(2), z, [{0: 1}, {0: 1}]))
    assert k.invariants == (0,)
    v = incl.images[0]
    assert v in ({0: 1, 1: -1}, {0: -1, 1: 1})
    c, _ = cokernel(AbHom(free(3), z, [{}, {}, {0: 4}]))
    assert c.invariants == (4,)


@given(small_matrices)
def test_kernel_image_rank_bookkeeping(m):
    dom, cod = free(m.cols), free(m.rows)
    h = AbHom(dom, cod, m)
    k, incl = kernel(h)
    assert h.compose(incl).is_zero()
    assert incl.is_injective()
    assert k.rank + image(h).rank == dom.rank
    c, proj = cokernel(h)
    assert proj.compose(h).is_zero()
    assert proj.is_surjective()


@pytest.mark.parametrize(
    "parts, invariants",
    [([[0], [2]], (2, 0)), ([], ()), ([[2], [4]], (2, 4)), ([[3], [5]], (15,))],
)
def test_direct_sum(parts, invariants):
    s, inj, proj = direct_sum([from_invariants(p) for p in parts])
    assert s.invariants == invariants
    for i, (a, b) in enumerate(zip(inj, proj)):
        assert b.compose(a).equals(AbHom.identity(a.domain))


@pytest.mark.parametrize(
    "a, b, invariants",
    [([2], [3], ()), ([0], [2, 0], (2, 0)), ([2], [4], (2,)), ([6], [4], (2,)), ([0, 0], [0], (0, 0))],
)
def test_tensor(a, b, invariants):
    t, _ = tensor(from_invariants(a), from_invariants(b))
    assert t.invariants == invariants


@given(st.integers(0, 12), st.integers(0, 12))
def test_tensor_of_cyclics_is_gcd(m, n):
    t, _ = tensor(cyclic(m) if m != 1 else free(0), cyclic(n) if n != 1 else free(0))
    if m == 1 or n == 1:
        assert t.is_trivial()
        return
    g = math.gcd(m, n)
    assert t.invariants == (() if g == 1 else (g,))


def test_pushout_examples():
    z = free(1)
    p, _, _ = pushout(AbHom.identity(z), AbHom.identity(z))
    assert p.invariants == (0,)
    zero = free(0)
    b, c = cyclic(2), cyclic(3)
    p, _, _ = pushout(AbHom.zero(zero, b), AbHom.zero(zero, c))
    assert p.invariants == (6,)
    p, in_b, in_c = pushout(AbHom(z, z, [{0: 2}]), AbHom(z, z, [{0: 3}]))
    assert p.invariants == (0,)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_pushout_universal_on_random_cocones(a, b, x, y):
    z = free(1)
    f, g = AbHom(z, z, [{0: a}]), AbHom(z, z, [{0: b}])
    p, in_b, in_c = pushout(f, g)
    assert in_b.compose(f).equals(in_c.compose(g))
    # a cocone (x, y) into Z factors through p exactly when x a = y b
    factors = AbHom.is_well_defined(p, z, [{0: x}, {0: y}])
    assert factors == (x * a == y * b)


@pytest.mark.parametrize(
    "group, t_images, invariants",
    [([0, 0], [{1: 1}, {0: 1}], (0,)), ([2, 0], [{0: 1}, {1: 1}], (2, 0)), ([0], [{0: -1}], (2,))],
)
def test_coinvariants(group, t_images, invariants):
    a = from_invariants(group)
    c, _ = coinvariants(a, AbHom(a, a, t_images))
    assert c.invariants == invariants


def test_coinvariants_rejects_non_involution():
    a = free(1)
    with pytest.raises(ValueError):
        coinvariants(a, AbHom(a, a, [{0: 2}]))


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_coinvariants_invariant_under_conjugation(p, q):
    # conjugate the swap on Z^2 by the unimodular matrix [[1, p], [0, 1]] [[1, 0], [q, 1]]
    a = free(2)
    swap = AbHom(a, a, [{1: 1}, {0: 1}])
    u = AbHom(a, a, IntMatrix.from_rows([[1, p], [0, 1]]) @ IntMatrix.from_rows([[1, 0], [q, 1]]))
    t = u.compose(swap).compose(u.inverse())
    assert coinvariants(a, t)[0].invariants == coinvariants(a, swap)[0].invariants


def test_hom_rejects_ill_defined_images():
    with pytest.raises(HomError):
        AbHom(cyclic(2), free(1), [{0: 1}])
    assert AbHom(cyclic(2), cyclic(4), [{0: 2}]).codomain.invariants == (4,)
