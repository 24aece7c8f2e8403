"""The reduced standard projective functor ``U_E`` and what is built from it.

``U_E(X)`` is free abelian on the nonzero morphisms ``E -> X``.  This module
exposes its cross-effects in kernel and quotient form, the Taylorization
quotients ``T_1 U``, ``T_2 U`` and ``T_{11} cr_2 U`` with their projections,
the rings ``Λ = U(E)``, ``Λ̄ = T_1U(E)``, ``Λ̄̄ = T_2U(E)``, ``Λ̄ ⊗ Λ̄`` and the
wreath ring, the decomposition of ``U_{E∨E}`` and of its quadratization,
and the two equivalent tests for a map of hom-sets to be quadratic.

Conventions: ``Λ`` multiplies by composition, ``α · β = α ∘ β``; it acts on
``U(X)`` from the right by precomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

from .abgroup import (
    AbHom,
    FpAbGroup,
    Vector,
    direct_sum,
    tensor,
    vadd,
    vshift,
    vsum,
)
from .functordata import (
    BilinearCrossEffect,
    CrossEffect2,
    CrossEffect2Quotient,
    CrossEffectSplitting,
    Functor,
    FunctorialityError,
    T1,
    T11,
    T2,
    TensorFunctor,
    cross_effect_splitting,
    morphisms_up_to,
    u_functor,
)
from .theory import Morphism, Theory


@dataclass
class UGroup:
    """``U_X(Y)``: free on nonzero morphisms ``X -> Y`` (``X``, ``Y`` given by rank)."""

    source: int
    target: int
    group: FpAbGroup
    basis: list[Morphism]
    index: dict[Morphism, int]


def u_group(theory: Theory, x: int, y: int) -> UGroup:
    u = u_functor(theory, x)
    basis = u.basis(y)
    return UGroup(x, y, u.value(y), basis, {h: i for i, h in enumerate(basis)})


def u_post(theory: Theory, f: Morphism, source: int = 1) -> AbHom:
    """``U_{E^{∨source}}(f)``: postcomposition with ``f``."""
    return u_functor(theory, source).map(f)


def u_pre(theory: Theory, g: Morphism, target: int) -> AbHom:
    """Precomposition with ``g : W -> X`` as a map ``U_X(Y) -> U_W(Y)``."""
    return u_functor(theory, g.target).pre(g, target)


@dataclass
class QuotientProjection:
    source: FpAbGroup
    target: FpAbGroup
    projection: AbHom

    def is_surjective(self) -> bool:
        return self.projection.is_surjective()


def _projection(base: FpAbGroup, quot: FpAbGroup) -> QuotientProjection:
    return QuotientProjection(base, quot, AbHom(base, quot, [{i: 1} for i in range(base.num_gens)], check=False))


# ---------------------------------------------------------------------------
# cross-effects and quotients of U


class PresentationMismatch(ArithmeticError):
    """Two presentations of the same group turned out not to agree."""


def cr2_of_U(theory: Theory, x: int = 1, y: int = 1) -> tuple[CrossEffectSplitting, FpAbGroup]:
    """Kernel-form splitting of ``U(X ∨ Y)`` and the quotient-form cross-effect.

    The composite ``ι`` followed by the quotient map must be an isomorphism.
    """
    u = u_functor(theory)
    split = cross_effect_splitting(u, x, y)
    if not split.verify():
        raise PresentationMismatch("cross-effect splitting does not decompose the identity")
    quot = CrossEffect2Quotient(u).value(x, y)
    comparison = AbHom(split.group, quot, split.iota.images, check=False)
    if not comparison.is_iso():
        raise PresentationMismatch("kernel and quotient cross-effects differ")
    return split, quot


def t1_of_U(theory: Theory, x: int = 1) -> tuple[FpAbGroup, QuotientProjection]:
    u = u_functor(theory)
    q = T1(u).value(x)
    return q, _projection(u.value(x), q)


def t2_of_U(theory: Theory, x: int = 1) -> tuple[FpAbGroup, QuotientProjection]:
    u = u_functor(theory)
    q = T2(u).value(x)
    return q, _projection(u.value(x), q)


def t11_of_cr2U(theory: Theory, x: int = 1, y: int = 1) -> tuple[FpAbGroup, QuotientProjection]:
    """``T_{11} cr_2 U(X, Y)`` as a quotient of ``U(X ∨ Y)``, cross-checked against ``T_{11}`` of the kernel form."""
    u = u_functor(theory)
    direct = BilinearCrossEffect(u).value(x, y)
    cr = CrossEffect2(u)
    other = T11(cr).value(x, y)
    comparison = AbHom(other, direct, cr.inclusion(x, y).images)
    if not comparison.is_iso():
        raise PresentationMismatch("the two bilinearizations of cr2 U differ")
    return direct, _projection(u.value(x + y), direct)


# ---------------------------------------------------------------------------
# rings


class PresentedRing:
    """A ring whose additive group is presented on labelled generators.

    ``mult(i, j)`` gives the product of generators ``i`` and ``j`` as a
    vector; it is extended bilinearly.
    """

    def __init__(
        self,
        name: str,
        group: FpAbGroup,
        keys: Sequence[Hashable],
        unit: Vector,
        mult: Callable[[int, int], Vector],
    ) -> None:
        self.name = name
        self.group = group
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.unit = unit
        self._mult = mult
        self._table: dict[tuple[int, int], Vector] = {}

    def mult_gens(self, i: int, j: int) -> Vector:
        key = (i, j)
        v = self._table.get(key)
        if v is None:
            v = self._mult(i, j)
            self._table[key] = v
        return v

    def product(self, x: Mapping[int, int], y: Mapping[int, int]) -> Vector:
        return vsum((a * b, self.mult_gens(i, j)) for i, a in x.items() for j, b in y.items())

    def equal(self, x: Mapping[int, int], y: Mapping[int, int]) -> bool:
        return self.group.equal(x, y)

    def check(self) -> list[str]:
        """Violations of descent, unit and associativity on generators (empty when sound)."""
        g = self.group
        n = g.num_gens
        problems = []
        for r in g.relation_basis:
            for j in range(n):
                if not g.is_zero(self.product(r, {j: 1})):
                    problems.append(f"descent(left): relation {r} times generator {j}")
                if not g.is_zero(self.product({j: 1}, r)):
                    problems.append(f"descent(right): generator {j} times relation {r}")
        for j in range(n):
            if not g.equal(self.product(self.unit, {j: 1}), {j: 1}):
                problems.append(f"unit(left) at generator {j}")
            if not g.equal(self.product({j: 1}, self.unit), {j: 1}):
                problems.append(f"unit(right) at generator {j}")
        for i in range(n):
            for j in range(n):
                ij = self.mult_gens(i, j)
                for k in range(n):
                    if not g.equal(self.product(ij, {k: 1}), self.product({i: 1}, self.mult_gens(j, k))):
                        problems.append(f"associativity at ({i}, {j}, {k})")
        return problems

    def __repr__(self) -> str:
        return f"<PresentedRing {self.name} {self.group.invariants}>"


@dataclass
class LambdaRings:
    lam: PresentedRing
    lam_bar: PresentedRing
    lam_bbar: PresentedRing
    lam_bar_tensor: PresentedRing
    wreath: PresentedRing

    def __iter__(self):
        return iter((self.lam, self.lam_bar, self.lam_bbar, self.lam_bar_tensor, self.wreath))


def _composition_ring(theory: Theory, name: str, group: FpAbGroup) -> PresentedRing:
    u = u_functor(theory)
    basis = u.basis(1)
    ident = u.element(theory.identity(1))

    def mult(i: int, j: int) -> Vector:
        return u.element(theory.compose(basis[i], basis[j]))

    return PresentedRing(name, group, basis, ident, mult)


def tensor_ring(a: PresentedRing, b: PresentedRing, name: str = "") -> PresentedRing:
    """``a ⊗ b`` with componentwise multiplication; generator ``(i, j)`` has index ``i * nb + j``."""
    t, bil = tensor(a.group, b.group)
    nb = b.group.num_gens
    keys = [(ka, kb) for ka in a.keys for kb in b.keys]

    def mult(p: int, q: int) -> Vector:
        return bil(a.mult_gens(p // nb, q // nb), b.mult_gens(p % nb, q % nb))

    return PresentedRing(name or f"{a.name}⊗{b.name}", t, keys, bil(a.unit, b.unit), mult)


def wreath_ring(base: PresentedRing, factor: PresentedRing, name: str = "wreath") -> PresentedRing:
    """``(R ⊗ R) ≀ S_2`` on ``base = R ⊗ R`` (with ``factor = R``).

    Generators ``(k, 0)`` stand for ``k`` and ``(k, 1)`` for ``k t``; products
    follow ``(r + s t)(r' + s' t) = (r r' + s τ(s')) + (r s' + s τ(r')) t``
    where ``τ`` swaps tensor factors.
    """
    s, _, _ = direct_sum([base.group, base.group])
    n = base.group.num_gens
    nf = factor.group.num_gens
    keys = [(k, 0) for k in base.keys] + [(k, 1) for k in base.keys]

    def swap(v: Mapping[int, int]) -> Vector:
        return {(i % nf) * nf + i // nf: c for i, c in v.items()}

    def mult(p: int, q: int) -> Vector:
        (i, ti), (j, tj) = divmod(p, n)[::-1], divmod(q, n)[::-1]
        right = {j: 1} if ti == 0 else swap({j: 1})
        prod = base.product({i: 1}, right)
        return vshift(prod, n * ((ti + tj) % 2))

    return PresentedRing(name, s, keys, dict(base.unit), mult)


def lambda_rings(theory: Theory) -> LambdaRings:
    u = u_functor(theory)
    lam = _composition_ring(theory, "Λ", u.value(1))
    lam_bar = _composition_ring(theory, "Λ̄", T1(u).value(1))
    lam_bbar = _composition_ring(theory, "Λ̄̄", T2(u).value(1))
    lbt = tensor_ring(lam_bar, lam_bar, "Λ̄⊗Λ̄")
    wr = wreath_ring(lbt, lam_bar)
    for ring in (lam, lam_bar, lam_bbar, lbt, wr):
        problems = ring.check()
        if problems:
            raise ArithmeticError(f"ring {ring.name} is not sound: {problems[0]}")
    return LambdaRings(lam, lam_bar, lam_bbar, lbt, wr)


# ---------------------------------------------------------------------------
# involutions


def involution_on_cr2(F: Functor, n: int = 1) -> AbHom:
    """``T^F = ι^{-1} F(switch) ι`` on ``cr_2 F(X, X)``."""
    return _switch_on_cr2(CrossEffect2(F), n)


def _switch_on_cr2(cr: CrossEffect2, n: int) -> AbHom:
    th = cr.theory
    incl = cr.inclusion(n, n)
    sw = th.switch(n)
    images = []
    for x in incl.images:
        y = incl.lift(cr.F.apply(sw, x))
        if y is None:
            raise FunctorialityError("switch leaves the cross-effect", x)
        images.append(y)
    return AbHom(cr.value(n, n), cr.value(n, n), images)


def involution_on_t11(theory: Theory) -> AbHom:
    """Switch on ``T_{11} cr_2 U(E, E)`` (quotient of ``U(E ∨ E)``)."""
    u = u_functor(theory)
    q = BilinearCrossEffect(u).value(1, 1)
    sw = theory.switch()
    return AbHom(q, q, [u.image(sw, j) for j in range(u.ngens(2))])


def t11_intertwines(theory: Theory) -> bool:
    """``t_{11} ∘ T^U = T ∘ t_{11}`` on ``cr_2 U(E, E)``."""
    u = u_functor(theory)
    cr = CrossEffect2(u)
    t_cr = involution_on_cr2(u)
    t_q = involution_on_t11(theory)
    q = t_q.domain
    t11 = AbHom(cr.value(1, 1), q, cr.inclusion(1, 1).images, check=False)
    return t11.compose(t_cr).equals(t_q.compose(t11))


# ---------------------------------------------------------------------------
# decompositions of U_{E∨E} and T_2 U_{E∨E}


class UEvEDecomposition:
    """``U_{E∨E} ≅ U_E ⊕ U_E ⊕ U_E ⊗ U_E`` via ``σ(h) = (h i_1, h i_2, h i_1 ⊗ h i_2)``.

    The inverse ``τ`` sends ``f ⊗ g`` to ``(f, g) - f r_1 - g r_2``.
    """

    def __init__(self, theory: Theory) -> None:
        self.theory = theory
        self.u = u_functor(theory)
        self.u2 = u_functor(theory, 2)
        self.uu = TensorFunctor(self.u, self.u)

    def target(self, n: int) -> tuple[FpAbGroup, list[AbHom], list[AbHom]]:
        return direct_sum([self.u.value(n), self.u.value(n), self.uu.value(n)])

    def _parts(self, h: Morphism) -> tuple[Morphism, Morphism]:
        f, g = self.theory.components(h, (1, 1))
        return f, g

    def sigma(self, n: int) -> AbHom:
        s, _, _ = self.target(n)
        nu = self.u.ngens(n)
        images = []
        for h in self.u2.basis(n):
            f, g = self._parts(h)
            a, b = self.u.element(f), self.u.element(g)
            ab = {i * nu + j: 1 for i in a for j in b}
            images.append(vadd(vadd(a, vshift(b, nu)), vshift(ab, 2 * nu)))
        return AbHom(self.u2.value(n), s, images, check=False)

    def tau(self, n: int) -> AbHom:
        th = self.theory
        s, _, _ = self.target(n)
        basis = self.u.basis(n)
        zero = th.zero(1, n)
        el = self.u2.element
        images = []
        for f in basis:
            images.append(el(th.copair([f, zero])))
        for g in basis:
            images.append(el(th.copair([zero, g])))
        for f in basis:
            for g in basis:
                images.append(vsum(((1, el(th.copair([f, g]))), (-1, el(th.copair([f, zero]))), (-1, el(th.copair([zero, g]))))))
        return AbHom(s, self.u2.value(n), images, check=False)

    def target_map(self, f: Morphism) -> AbHom:
        n, m = f.source, f.target
        s, _, _ = self.target(n)
        t, _, _ = self.target(m)
        a, b = self.u.map(f), self.uu.map(f)
        mu = self.u.ngens(m)
        images = [vshift(v, 0) for v in a.images] + [vshift(v, mu) for v in a.images] + [vshift(v, 2 * mu) for v in b.images]
        return AbHom(s, t, images, check=False)

    def verify(self, N: int = 3) -> bool:
        for n in range(N + 1):
            sg, tu = self.sigma(n), self.tau(n)
            if not sg.compose(tu).equals(AbHom.identity(sg.codomain)):
                return False
            if not tu.compose(sg).equals(AbHom.identity(sg.domain)):
                return False
        for f in morphisms_up_to(self.theory, N):
            if not self.target_map(f).compose(self.sigma(f.source)).equals(self.sigma(f.target).compose(self.u2.map(f))):
                return False
        return True


def decompose_U_EvE(theory: Theory) -> UEvEDecomposition:
    return UEvEDecomposition(theory)


class T2UEvEDecomposition:
    """``T_2 U_{E∨E} ≅ T_2 U_E ⊕ T_2 U_E ⊕ T_1 U_E ⊗ T_1 U_E`` with injection ``I`` and retraction ``R``.

    ``I(t_2 f, t_2 g, f̄ ⊗ ḡ) = t_2(f r_1) + t_2(g r_2) + t_2((f, g) - f r_1 - g r_2)`` and
    ``R(t_2 h) = (t_2(h i_1), t_2(h i_2), h̄ i_1 ⊗ h̄ i_2)``; both are checked to be
    well defined on the presented groups.
    """

    def __init__(self, theory: Theory) -> None:
        self.theory = theory
        self.base = UEvEDecomposition(theory)
        u = self.base.u
        self.t2u = T2(u)
        self.t1u = T1(u)
        self.t1t1 = TensorFunctor(self.t1u, self.t1u)
        self.t2u2 = T2(self.base.u2)

    def target(self, n: int) -> tuple[FpAbGroup, list[AbHom], list[AbHom]]:
        return direct_sum([self.t2u.value(n), self.t2u.value(n), self.t1t1.value(n)])

    def injection(self, n: int) -> AbHom:
        s, _, _ = self.target(n)
        tau = self.base.tau(n)
        return AbHom(s, self.t2u2.value(n), tau.images)

    def retraction(self, n: int) -> AbHom:
        s, _, _ = self.target(n)
        sigma = self.base.sigma(n)
        return AbHom(self.t2u2.value(n), s, sigma.images)

    def target_map(self, f: Morphism) -> AbHom:
        m = f.target
        s, _, _ = self.target(f.source)
        t, _, _ = self.target(m)
        a, b = self.t2u.map(f), self.t1t1.map(f)
        mu = self.t2u.ngens(m)
        images = [dict(v) for v in a.images] + [vshift(v, mu) for v in a.images] + [vshift(v, 2 * mu) for v in b.images]
        return AbHom(s, t, images, check=False)

    def verify(self, N: int = 3) -> bool:
        for n in range(N + 1):
            i, r = self.injection(n), self.retraction(n)
            if not r.compose(i).equals(AbHom.identity(i.domain)):
                return False
            if not i.compose(r).equals(AbHom.identity(r.domain)):
                return False
        for f in morphisms_up_to(self.theory, N):
            if not self.target_map(f).compose(self.retraction(f.source)).equals(self.retraction(f.target).compose(self.t2u2.map(f))):
                return False
        return True


def t2_U_EvE_decomposition(theory: Theory) -> T2UEvEDecomposition:
    return T2UEvEDecomposition(theory)


# ---------------------------------------------------------------------------
# quadratic maps


@dataclass
class QuadraticMapVerdict:
    cross_effect_bilinear: bool
    factors_through_t2: bool

    @property
    def quadratic(self) -> bool:
        return self.cross_effect_bilinear


def quadratic_map_check(
    theory: Theory,
    table: Mapping[Morphism, Mapping[int, int]],
    x: int,
    y: int,
    target: FpAbGroup,
) -> QuadraticMapVerdict:
    """Test a map ``φ : C(X, Y) -> A`` with ``φ(0) = 0`` for being quadratic, in two ways.

    (a) ``cr_2 φ(ξ) = φ(∇ξ) - φ(r_1 ξ) - φ(r_2 ξ)``, extended linearly to
    ``cr_2 U_X(Y, Y)``, factors through ``t_{11}``;
    (b) the linear extension ``U_X(Y) -> A`` factors through ``t_2``.
    The two answers must agree.
    """
    zero = theory.zero(x, y)
    if table.get(zero):
        raise ValueError("φ must vanish on the zero morphism")
    u = u_functor(theory, x)

    def phi(f: Morphism) -> Vector:
        return dict(table.get(f, {})) if not theory.is_zero(f) else {}

    # (a)
    fold = theory.codiagonal(y, 2)
    r1 = theory.summand_retraction((y, y), 1)
    r2 = theory.summand_retraction((y, y), 2)
    cr_images = []
    for xi in u.basis(2 * y):
        cr_images.append(
            vsum(
                (
                    (1, phi(theory.compose(fold, xi))),
                    (-1, phi(theory.compose(r1, xi))),
                    (-1, phi(theory.compose(r2, xi))),
                )
            )
        )
    cr = CrossEffect2(u)
    t11 = T11(cr).value(y, y)
    on_cr = [vsum((c, cr_images[j]) for j, c in k.items()) for k in cr.inclusion(y, y).images]
    a = AbHom.is_well_defined(t11, target, on_cr)
    # (b)
    t2 = T2(u).value(y)
    b = AbHom.is_well_defined(t2, target, [phi(h) for h in u.basis(y)])
    if a != b:
        raise ArithmeticError("the two quadratic-map criteria disagree")
    return QuadraticMapVerdict(a, b)


__all__ = [
    "LambdaRings",
    "PresentationMismatch",
    "PresentedRing",
    "QuadraticMapVerdict",
    "QuotientProjection",
    "T2UEvEDecomposition",
    "UEvEDecomposition",
    "UGroup",
    "cr2_of_U",
    "decompose_U_EvE",
    "involution_on_cr2",
    "involution_on_t11",
    "lambda_rings",
    "quadratic_map_check",
    "t11_intertwines",
    "t11_of_cr2U",
    "t1_of_U",
    "t2_U_EvE_decomposition",
    "t2_of_U",
    "tensor_ring",
    "u_group",
    "u_post",
    "u_pre",
    "wreath_ring",
]
