"""The quadratic tensor product ``X ⊗ M`` and the unit and counit of ``𝕋_2 ⊣ 𝕊_2``.

``X ⊗ M`` is the pushout of

    B = T_2U(X) ⊗_Λ M_e  <-φ-  A  -ψ->  C = ((T_1U(X) ⊗ T_1U(X)) ⊗_{Λ̄⊗Λ̄} M_ee)_{S_2}

where the source ``A`` is replaced by a free group on the symbols that
generate its image; the pushout only sees the images.  Generators of ``X ⊗ M`` are therefore

* ``f ⊗ a``: index ``f * n_e + k`` for ``f`` the ``f``-th nonzero map ``E -> X``;
* ``[f, g] ⊗ m``: index ``offset + (f * n_U + g) * n_ee + l``.

A second pushout, whose left leg is built through the comparison
isomorphism ``T_{11}cr_2U ≅ cr_2T_2U``, and a third presentation by the
generators and relations are computed alongside and must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .abgroup import (
    AbHom,
    FpAbGroup,
    Vector,
    direct_sum,
    kernel,
    pushout,
    tensor,
    vadd,
    vsum,
)
from .functordata import (
    CrossEffect2,
    Functor,
    T1,
    T2,
    check_natural,
    induced_cr2_map,
    morphisms_up_to,
    t11_cr2_comparison,
    u_functor,
)
from .qmodule import (
    ModuleError,
    QModMorphism,
    QuadraticCModule,
    check_proto,
    s2_of_functor,
    tensor_over_ring,
)
from .report import Report
from .theory import Morphism, Theory


@dataclass
class TensorPresentation:
    """The pushout square at one object and the alternative presentations."""

    rank: int
    b: FpAbGroup
    c: FpAbGroup
    phi: AbHom
    psi: AbHom
    group: FpAbGroup
    in_b: AbHom
    in_c: AbHom
    alternative: FpAbGroup

    def commutes(self) -> bool:
        """``φ̂ ∘ φ = ψ̂ ∘ ψ``."""
        return self.in_b.compose(self.phi).equals(self.in_c.compose(self.psi))

    def agrees_with_alternative(self) -> bool:
        return _same_presentation(self.group, self.alternative)


def _same_presentation(a: FpAbGroup, b: FpAbGroup) -> bool:
    """Identity on generators is well defined in both directions."""
    if a.num_gens != b.num_gens:
        return False
    ident = [{i: 1} for i in range(a.num_gens)]
    return AbHom.is_well_defined(a, b, ident) and AbHom.is_well_defined(b, a, ident)


class QuadraticTensorFunctor(Functor):
    """``X ↦ X ⊗ M``."""

    def __init__(self, M: QuadraticCModule, check: bool = True) -> None:
        if check:
            report = check_proto(M)
            if not report.ok:
                raise ModuleError("module is not proto-quadratic", report.failures()[0].to_json())
        super().__init__(M.theory, f"-⊗{M.name or 'M'}")
        self.M = M
        self.u = u_functor(M.theory)
        self.ne = M.me.num_gens
        self.nee = M.mee.num_gens
        self._presentations: dict[int, TensorPresentation] = {}

    # -- generator layout --------------------------------------------------

    def n_u(self, n: int) -> int:
        return self.u.ngens(n)

    def offset(self, n: int) -> int:
        return self.n_u(n) * self.ne

    def ngens(self, n: int) -> int:
        nu = self.n_u(n)
        return nu * self.ne + nu * nu * self.nee

    def gen_b(self, n: int, f: int, k: int) -> int:
        return f * self.ne + k

    def gen_c(self, n: int, f: int, g: int, l: int) -> int:
        return self.offset(n) + (f * self.n_u(n) + g) * self.nee + l

    def decode(self, n: int, j: int) -> tuple:
        """``("b", f, k)`` or ``("c", f, g, l)``."""
        off = self.offset(n)
        if j < off:
            return ("b",) + divmod(j, self.ne)
        fg, l = divmod(j - off, self.nee)
        f, g = divmod(fg, self.n_u(n))
        return ("c", f, g, l)

    def elem_b(self, n: int, f: Morphism, x: Mapping[int, int]) -> Vector:
        """``f ⊗ x`` for ``x ∈ M_e``."""
        i = self.u.index(f)
        if i is None:
            return {}
        return {self.gen_b(n, i, k): c for k, c in x.items() if c}

    def elem_c(self, n: int, f: Morphism, g: Morphism, x: Mapping[int, int]) -> Vector:
        """``[f, g] ⊗ x`` for ``x ∈ M_ee``."""
        i, j = self.u.index(f), self.u.index(g)
        if i is None or j is None:
            return {}
        return {self.gen_c(n, i, j, l): c for l, c in x.items() if c}

    # -- the pushout --------------------------------------------------------

    def _corners(self, n: int) -> tuple[FpAbGroup, FpAbGroup]:
        th, M, u = self.theory, self.M, self.u
        basis = u.basis(n)
        endos = th.nonzero_homs(1, 1)
        t2 = T2(u).value(n)
        right_b = {lam: AbHom(t2, t2, [u.element(th.compose(f, lam)) for f in basis], check=False) for lam in endos}
        b = tensor_over_ring(t2, right_b, M.me, {lam: M.act_e[lam] for lam in endos}).group
        t1 = T1(u).value(n)
        pair, bil = tensor(t1, t1)
        right_c = {}
        for a in endos:
            for bb in endos:
                images = [bil(u.element(th.compose(f, a)), u.element(th.compose(g, bb))) for f in basis for g in basis]
                right_c[(a, bb)] = AbHom(pair, pair, images, check=False)
        rel = tensor_over_ring(pair, right_c, M.mee, {k: M.act_ee[k] for k in right_c})
        nu, nee = len(basis), self.nee
        swaps = []
        for f in range(nu):
            for g in range(nu):
                for l in range(nee):
                    swaps.append(vadd({(f * nu + g) * nee + l: 1}, {(g * nu + f) * nee + i: c for i, c in M.T.images[l].items()}, -1))
        c = FpAbGroup(rel.group.num_gens, list(rel.group.relation_basis) + swaps, name="C")
        return b, c

    def _legs(self, n: int, b: FpAbGroup, c: FpAbGroup, via_comparison: bool) -> tuple[AbHom, AbHom]:
        th, M, u = self.theory, self.M, self.u
        basis = u.basis(n)
        nu, ne, nee = len(basis), self.ne, self.nee
        r1, r2 = th.retraction(1, 2), th.retraction(2, 2)
        phi: list[Vector] = []
        psi: list[Vector] = []

        def b_gen(h: Morphism, k: int) -> Vector:
            i = u.index(h)
            return {} if i is None else {i * ne + k: 1}

        if not via_comparison:
            xis = u.basis(2)
            for f in basis:
                for g in basis:
                    fg = th.copair([f, g])
                    for xi in xis:
                        for k in range(ne):
                            phi.append(
                                vsum(
                                    (
                                        (1, b_gen(th.compose(fg, xi), k)),
                                        (-1, b_gen(th.compose(f, th.compose(r1, xi)), k)),
                                        (-1, b_gen(th.compose(g, th.compose(r2, xi)), k)),
                                    )
                                )
                            )
                            fi, gi = u.index(f), u.index(g)
                            psi.append({(fi * nu + gi) * nee + l: v for l, v in M.H[xi].images[k].items()})
        else:
            comp = _comparison(th)
            cr_u = CrossEffect2(u)
            incl_u = cr_u.inclusion(1, 1)
            cr_t2 = CrossEffect2(T2(u))
            incl_t2 = cr_t2.inclusion(1, 1)
            inv = comp.inverse
            if inv is None:
                raise ArithmeticError("the comparison map is not invertible")
            xis = u.basis(2)
            for f in basis:
                for g in basis:
                    fg = th.copair([f, g])
                    fi, gi = u.index(f), u.index(g)
                    for cgen in range(incl_t2.domain.num_gens):
                        eta = incl_t2.images[cgen]
                        back = incl_u(inv.images[cgen])
                        for k in range(ne):
                            phi.append(vsum((c, b_gen(th.compose(fg, xis[j]), k)) for j, c in eta.items()))
                            hval = vsum((c, M.H[xis[j]].images[k]) for j, c in back.items())
                            psi.append({(fi * nu + gi) * nee + l: v for l, v in hval.items()})
        for f in range(nu):
            for l in range(nee):
                phi.append({f * ne + k: v for k, v in M.P.images[l].items()})
                psi.append({(f * nu + f) * nee + l: 1})
        source = FpAbGroup(len(phi), name="free cover")
        return AbHom(source, b, phi, check=False), AbHom(source, c, psi, check=False)

    def presentation(self, n: int) -> TensorPresentation:
        pres = self._presentations.get(n)
        if pres is None:
            b, c = self._corners(n)
            phi, psi = self._legs(n, b, c, via_comparison=False)
            group, in_b, in_c = pushout(phi, psi)
            phi2, psi2 = self._legs(n, b, c, via_comparison=True)
            alt, _, _ = pushout(phi2, psi2)
            pres = TensorPresentation(n, b, c, phi, psi, group, in_b, in_c, alt)
            self._presentations[n] = pres
        return pres

    def relations(self, n: int) -> Iterator[Vector]:
        return iter(self.presentation(n).group.relation_basis)

    def value(self, n: int) -> FpAbGroup:
        g = self._values.get(n)
        if g is None:
            g = self.presentation(n).group
            self._values[n] = g
        return g

    def image(self, f: Morphism, j: int) -> Vector:
        n = f.source
        kind = self.decode(n, j)
        if kind[0] == "b":
            _, i, k = kind
            h = self.u.image(f, i)
            return {} if not h else {self.gen_b(f.target, next(iter(h)), k): 1}
        _, i, g, l = kind
        hi, hg = self.u.image(f, i), self.u.image(f, g)
        if not hi or not hg:
            return {}
        return {self.gen_c(f.target, next(iter(hi)), next(iter(hg)), l): 1}

    # -- generators and relations ---------------------------------------------

    def generator_relation_group(self, n: int) -> FpAbGroup:
        """``X ⊗ M`` presented by the symbols ``f ⊗ a``, ``[f, g] ⊗ m`` and their relations."""
        th, M, u = self.theory, self.M, self.u
        basis = u.basis(n)
        endos = th.nonzero_homs(1, 1)
        rels: list[Vector] = []
        r1, r2 = th.retraction(1, 2), th.retraction(2, 2)

        def b(h: Morphism, x: Mapping[int, int]) -> Vector:
            return self.elem_b(n, h, x)

        def c(h: Morphism, k: Morphism, x: Mapping[int, int]) -> Vector:
            return self.elem_c(n, h, k, x)

        for f in basis:
            for beta in endos:  # Λ-balanced
                for k in range(self.ne):
                    rels.append(vadd(b(th.compose(f, beta), {k: 1}), b(f, M.act_e[beta].images[k]), -1))
            for r in M.me.relation_basis:  # relations of M_e
                rels.append(b(f, r))
        for rho in T2(u).value(n).relation_basis:  # factor through T_2U
            for k in range(self.ne):
                rels.append({self.gen_b(n, i, k): v for i, v in rho.items()})
        for f in basis:
            for g in basis:
                for a in endos:  # Λ⊗Λ-balanced brackets
                    for bb in endos:
                        for l in range(self.nee):
                            rels.append(vadd(c(th.compose(f, a), th.compose(g, bb), {l: 1}), c(f, g, M.act_ee[(a, bb)].images[l]), -1))
                for r in M.mee.relation_basis:  # relations of M_ee
                    rels.append(c(f, g, r))
                for l in range(self.nee):  # symmetry through T
                    rels.append(vadd(c(f, g, {l: 1}), c(g, f, M.T.images[l]), -1))
        nu = len(basis)
        for v in T1(u).value(n).relation_basis:  # brackets factor through T_1U
            for gi in range(nu):
                for l in range(self.nee):
                    rels.append({self.gen_c(n, fi, gi, l): cf for fi, cf in v.items()})
        for f in basis:  # [f, f] ⊗ m = f ⊗ Pm
            for l in range(self.nee):
                rels.append(vadd(c(f, f, {l: 1}), b(f, M.P.images[l]), -1))
        for f in basis:  # deviation of f ⊗ a from additivity is [f, g] ⊗ H
            for g in basis:
                fg = th.copair([f, g])
                for xi in u.basis(2):
                    for k in range(self.ne):
                        rels.append(
                            vsum(
                                (
                                    (1, b(th.compose(fg, xi), {k: 1})),
                                    (-1, b(th.compose_all(f, r1, xi), {k: 1})),
                                    (-1, b(th.compose_all(g, r2, xi), {k: 1})),
                                    (-1, c(f, g, M.H[xi].images[k])),
                                )
                            )
                        )
        return FpAbGroup(self.ngens(n), [r for r in rels if r], name="generators/relations")


_COMPARISONS: dict[int, object] = {}


def _comparison(theory: Theory):
    key = id(theory)
    if key not in _COMPARISONS:
        _COMPARISONS[key] = t11_cr2_comparison(u_functor(theory))
    return _COMPARISONS[key]


_TENSOR_CACHE: dict[int, QuadraticTensorFunctor] = {}


def tensor_functor(M: QuadraticCModule, check: bool = True) -> QuadraticTensorFunctor:
    """Shared ``- ⊗ M`` for a module object."""
    qt = _TENSOR_CACHE.get(id(M))
    if qt is None or qt.M is not M:
        qt = QuadraticTensorFunctor(M, check=check)
        _TENSOR_CACHE[id(M)] = qt
    return qt


def qtensor(theory: Theory, rank: int, M: QuadraticCModule) -> TensorPresentation:
    if theory is not M.theory:
        raise ModuleError("module lives over a different theory")
    return tensor_functor(M).presentation(rank)


def qtensor_morphism(f: Morphism, M: QuadraticCModule) -> AbHom:
    return tensor_functor(M).map(f)


def presentations_agree(M: QuadraticCModule, n: int) -> bool:
    """The pushout and the presentation by generators and relations define the same group."""
    qt = tensor_functor(M)
    return _same_presentation(qt.value(n), qt.generator_relation_group(n))


# ---------------------------------------------------------------------------
# E ⊗ M ≅ M_e and the decomposition of (E^{∨n}) ⊗ M


@dataclass
class InversePair:
    forward: AbHom
    backward: AbHom | None

    def verify(self) -> bool:
        if self.backward is None:
            return False
        return self.backward.compose(self.forward).equals(AbHom.identity(self.forward.domain)) and self.forward.compose(
            self.backward
        ).equals(AbHom.identity(self.backward.domain))


@dataclass
class ETensorIso(InversePair):
    t2_tensor_iso: bool


def e_tensor_iso(M: QuadraticCModule) -> ETensorIso:
    """``E ⊗ M -> M_e``: ``α ⊗ a ↦ αa``, ``[α, β] ⊗ m ↦ P(α⊗β)m``; inverse ``a ↦ 1 ⊗ a``."""
    qt = tensor_functor(M)
    th, u = M.theory, qt.u
    basis = u.basis(1)
    images = []
    for j in range(qt.ngens(1)):
        kind = qt.decode(1, j)
        if kind[0] == "b":
            _, i, k = kind
            images.append(M.act_e[basis[i]].images[k])
        else:
            _, i, g, l = kind
            images.append(M.P(M.act_ee[(basis[i], basis[g])].images[l]))
    forward = AbHom(qt.value(1), M.me, images)
    ident = th.identity(1)
    backward = AbHom(M.me, qt.value(1), [qt.elem_b(1, ident, {k: 1}) for k in range(M.me.num_gens)])
    # t_2 ⊗ 1 : U(E) ⊗_Λ M_e -> T_2U(E) ⊗_Λ M_e
    endos = th.nonzero_homs(1, 1)
    left = {lam: M.act_e[lam] for lam in endos}
    groups = []
    for g in (u.value(1), T2(u).value(1)):
        right = {lam: AbHom(g, g, [u.element(th.compose(f, lam)) for f in basis], check=False) for lam in endos}
        groups.append(tensor_over_ring(g, right, M.me, left).group)
    t2 = AbHom(groups[0], groups[1], [{i: 1} for i in range(groups[0].num_gens)])
    return ETensorIso(forward, backward, t2.is_iso())


def decomposition(M: QuadraticCModule, n: int) -> InversePair:
    """``M_e^n ⊕ M_ee^{C(n,2)} -> E^{∨n} ⊗ M`` via ``i_k ⊗ a`` and ``[i_k, i_l] ⊗ m``, with its inverse."""
    qt = tensor_functor(M)
    th = M.theory
    parts = [M.me] * n + [M.mee] * (n * (n - 1) // 2)
    s, _, _ = direct_sum(parts)
    images: list[Vector] = []
    for k in range(1, n + 1):
        for a in range(M.me.num_gens):
            images.append(qt.elem_b(n, th.injection(k, n), {a: 1}))
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            for m in range(M.mee.num_gens):
                images.append(qt.elem_c(n, th.injection(k, n), th.injection(l, n), {m: 1}))
    forward = AbHom(s, qt.value(n), images)
    # fails to be invertible exactly when M is not quadratic enough for the decomposition
    return InversePair(forward, forward.inverse() if forward.is_iso() else None)


# ---------------------------------------------------------------------------
# γ : (T_1U(X) ⊗ T_1U(Y)) ⊗_{Λ̄⊗Λ̄} M_ee -> cr_2(- ⊗ M)(X, Y)


@dataclass
class GammaResult:
    gamma: AbHom
    is_iso: bool
    witness: Vector | None

    @property
    def injective(self) -> bool:
        return self.witness is None


def cross_effect_gamma(M: QuadraticCModule, x: int, y: int) -> GammaResult:
    """``γ((f ⊗ g) ⊗ m) = ι^{-1}([i_1 f, i_2 g] ⊗ m)``; a witness is a nonzero kernel element."""
    qt = tensor_functor(M)
    th, u = M.theory, qt.u
    endos = th.nonzero_homs(1, 1)
    tx, ty = T1(u).value(x), T1(u).value(y)
    pair, bil = tensor(tx, ty)
    bx, by = u.basis(x), u.basis(y)
    right = {}
    for a in endos:
        for b in endos:
            images = [bil(u.element(th.compose(f, a)), u.element(th.compose(g, b))) for f in bx for g in by]
            right[(a, b)] = AbHom(pair, pair, images, check=False)
    dom = tensor_over_ring(pair, right, M.mee, {k: M.act_ee[k] for k in right}).group
    cr = CrossEffect2(qt)
    incl = cr.inclusion(x, y)
    i1, i2 = th.summand_inclusion((x, y), 1), th.summand_inclusion((x, y), 2)
    images = []
    for f in bx:
        for g in by:
            for l in range(M.mee.num_gens):
                v = qt.elem_c(x + y, th.compose(i1, f), th.compose(i2, g), {l: 1})
                lifted = incl.lift(v)
                if lifted is None:
                    raise ArithmeticError("bracket element outside the cross-effect")
                images.append(lifted)
    gam = AbHom(dom, cr.value(x, y), images)
    k, kincl = kernel(gam)
    witness = None
    for z in kincl.images:
        if not dom.is_zero(z):
            witness = z
            break
    return GammaResult(gam, witness is None and gam.is_surjective(), witness)


# ---------------------------------------------------------------------------
# counit, unit, triangle identities


@dataclass
class Counit:
    functor: Functor
    module: QuadraticCModule
    tensor: QuadraticTensorFunctor
    maps: dict[int, AbHom]

    def component(self, n: int) -> AbHom:
        if n not in self.maps:
            self.maps[n] = _counit_component(self.functor, self.tensor, n)
        return self.maps[n]

    def isomorphic_through(self, N: int) -> dict[int, bool]:
        return {n: self.component(n).is_iso() for n in range(N + 1)}

    def naturality_failure(self, N: int = 2) -> tuple[Morphism, int] | None:
        return check_natural(self.component, self.tensor, self.functor, N, morphisms_up_to(self.functor.theory, N))


def _counit_component(F: Functor, qt: QuadraticTensorFunctor, n: int) -> AbHom:
    th, u = F.theory, qt.u
    basis = u.basis(n)
    incl = CrossEffect2(F).inclusion(1, 1)
    images = []
    for j in range(qt.ngens(n)):
        kind = qt.decode(n, j)
        if kind[0] == "b":
            _, i, k = kind
            images.append(F.image(basis[i], k))
        else:
            _, i, g, l = kind
            images.append(F.apply(th.copair([basis[i], basis[g]]), incl.images[l]))
    return AbHom(qt.value(n), F.value(n), images)


def counit_epsilon(F: Functor, M: QuadraticCModule | None = None, N: int = 3) -> Counit:
    """``ε_X : X ⊗ 𝕊_2F -> F(X)``, ``f ⊗ a ↦ F(f)a``, ``[f, g] ⊗ m ↦ F((f, g))ι m``."""
    M = M if M is not None else s2_of_functor(F)
    qt = tensor_functor(M)
    eps = Counit(F, M, qt, {})
    for n in range(N + 1):
        eps.component(n)
    return eps


def unit_eta(M: QuadraticCModule) -> QModMorphism:
    """``η_M : M -> 𝕊_2(- ⊗ M)``: ``a ↦ 1 ⊗ a``, ``m ↦ ι^{-1}([i_1, i_2] ⊗ m)``."""
    th = M.theory
    qt = tensor_functor(M)
    S = s2_of_functor(qt)
    eta_e = AbHom(M.me, S.me, [qt.elem_b(1, th.identity(1), {k: 1}) for k in range(M.me.num_gens)])
    incl = CrossEffect2(qt).inclusion(1, 1)
    images = []
    for l in range(M.mee.num_gens):
        y = incl.lift(qt.elem_c(2, th.injection(1, 2), th.injection(2, 2), {l: 1}))
        if y is None:
            raise ArithmeticError("bracket element outside the cross-effect")
        images.append(y)
    eta_ee = AbHom(M.mee, S.mee, images)
    return QModMorphism(M, S, eta_e, eta_ee)


def tensor_map(phi: QModMorphism, n: int) -> AbHom:
    """``X ⊗ φ : X ⊗ M -> X ⊗ N``."""
    src, tgt = tensor_functor(phi.source), tensor_functor(phi.target)
    basis = src.u.basis(n)
    images = []
    for j in range(src.ngens(n)):
        kind = src.decode(n, j)
        if kind[0] == "b":
            _, i, k = kind
            images.append(tgt.elem_b(n, basis[i], phi.phi_e.images[k]))
        else:
            _, i, g, l = kind
            images.append(tgt.elem_c(n, basis[i], basis[g], phi.phi_ee.images[l]))
    return AbHom(src.value(n), tgt.value(n), images)


def s2_of_counit(eps: Counit, S: QuadraticCModule) -> QModMorphism:
    """``𝕊_2(ε_F) : 𝕊_2(- ⊗ 𝕊_2F) -> 𝕊_2F``."""
    e = eps.component(1)
    ee = induced_cr2_map(eps.tensor, eps.functor, eps.component(2))
    return QModMorphism(S, eps.module, e, ee)


@dataclass
class RoundTrip:
    eta_iso: bool
    eta_morphism: bool
    epsilon_iso: dict[int, bool]
    naturality_failure: tuple[Morphism, int] | None
    triangle_s2: bool
    triangle_tensor: dict[int, bool]

    @property
    def ok(self) -> bool:
        return (
            self.eta_iso
            and self.eta_morphism
            and all(self.epsilon_iso.values())
            and self.naturality_failure is None
            and self.triangle_s2
            and all(self.triangle_tensor.values())
        )

    def to_report(self) -> Report:
        r = Report("roundtrip")
        r.add("eta.morphism", "η is a module morphism", self.eta_morphism)
        r.add("eta.iso", "η is an isomorphism", self.eta_iso)
        for n, ok in sorted(self.epsilon_iso.items()):
            r.add("epsilon.iso", f"ε at rank {n}", ok, n)
        r.add("epsilon.natural", "naturality squares, ranks ≤ 2", self.naturality_failure is None, self.naturality_failure)
        r.add("triangle.s2", "𝕊₂(ε)∘η = 1", self.triangle_s2)
        for n, ok in sorted(self.triangle_tensor.items()):
            r.add("triangle.tensor", f"ε∘(-⊗η) = 1 at rank {n}", ok, n)
        return r


def roundtrip(F: Functor, N: int = 3, naturality_rank: int = 2, triangle_rank: int = 2) -> RoundTrip:
    """Unit, counit and both triangle identities for ``F`` and ``M = 𝕊_2F``."""
    M = s2_of_functor(F)
    eps = counit_epsilon(F, M, N)
    eta = unit_eta(M)
    eta_ok = eta.check().ok
    eta_iso = eta.is_iso()
    S = eta.target
    # 𝕊_2(ε_F) ∘ η_{𝕊_2F} = 1
    tri1 = s2_of_counit(eps, S).compose(eta).equals(QModMorphism.identity(M))
    # ε_{-⊗M} ∘ (- ⊗ η_M) = 1
    qt = tensor_functor(M)
    eps_t = Counit(qt, S, tensor_functor(S), {})
    tri2 = {}
    for n in range(triangle_rank + 1):
        tri2[n] = eps_t.component(n).compose(tensor_map(eta, n)).equals(AbHom.identity(qt.value(n)))
    return RoundTrip(eta_iso, eta_ok, eps.isomorphic_through(N), eps.naturality_failure(naturality_rank), tri1, tri2)


# ---------------------------------------------------------------------------
# linear modules: 𝕋_1


class T1ModuleFunctor(Functor):
    """``𝕋_1(N)(X) = T_1U(X) ⊗_Λ̄ N`` on generators ``(f, k) -> f * n_N + k``."""

    def __init__(self, theory: Theory, group: FpAbGroup, action: Mapping[Morphism, AbHom], name: str = "") -> None:
        super().__init__(theory, name or f"T1mod{group.invariants}")
        self.group = group
        self.action = dict(action)
        self.u = u_functor(theory)
        ident = theory.identity(1)
        self.action.setdefault(ident, AbHom.identity(group))

    def ngens(self, n: int) -> int:
        return self.u.ngens(n) * self.group.num_gens

    def relations(self, n: int) -> Iterator[Vector]:
        th, u = self.theory, self.u
        t1 = T1(u).value(n)
        basis = u.basis(n)
        endos = th.nonzero_homs(1, 1)
        right = {lam: AbHom(t1, t1, [u.element(th.compose(f, lam)) for f in basis], check=False) for lam in endos}
        return iter(tensor_over_ring(t1, right, self.group, {lam: self.action[lam] for lam in endos}).group.relation_basis)

    def image(self, f: Morphism, j: int) -> Vector:
        i, k = divmod(j, self.group.num_gens)
        h = self.u.image(f, i)
        return {} if not h else {next(iter(h)) * self.group.num_gens + k: 1}

    def s1_iso(self) -> AbHom:
        """``𝕋_1(N)(E) -> N``, ``α ⊗ a ↦ αa``."""
        basis = self.u.basis(1)
        images = [self.action[basis[j // self.group.num_gens]].images[j % self.group.num_gens] for j in range(self.ngens(1))]
        return AbHom(self.value(1), self.group, images)


def t1_module_functor(theory: Theory, group: FpAbGroup, action: Mapping[Morphism, AbHom] | None = None) -> T1ModuleFunctor:
    return T1ModuleFunctor(theory, group, action or {})


def linear_counit_agrees(F: Functor, N: int = 2) -> bool:
    """For linear ``F``, ``ε`` factors as the ``𝕋_1𝕊_1`` counit after ``X ⊗ M ≅ 𝕋_1(F(E))(X)``."""
    M = s2_of_functor(F)
    if not M.mee.is_trivial():
        raise ModuleError("functor is not linear")
    endos = F.theory.nonzero_homs(1, 1)
    t1m = T1ModuleFunctor(F.theory, M.me, {a: M.act_e[a] for a in endos})
    qt = tensor_functor(M)
    eps = counit_epsilon(F, M, N)
    for n in range(N + 1):
        basis = qt.u.basis(n)
        ne = M.me.num_gens
        comp_images = []
        for j in range(qt.ngens(n)):
            kind = qt.decode(n, j)
            comp_images.append({kind[1] * ne + kind[2]: 1} if kind[0] == "b" else {})
        comp = AbHom(qt.value(n), t1m.value(n), comp_images)
        lin = AbHom(t1m.value(n), F.value(n), [F.image(basis[j // ne], j % ne) for j in range(t1m.ngens(n))])
        if not comp.is_iso() or not lin.compose(comp).equals(eps.component(n)) or not lin.is_iso():
            return False
    return True


__all__ = [
    "Counit",
    "ETensorIso",
    "GammaResult",
    "InversePair",
    "QuadraticTensorFunctor",
    "RoundTrip",
    "T1ModuleFunctor",
    "TensorPresentation",
    "counit_epsilon",
    "cross_effect_gamma",
    "decomposition",
    "e_tensor_iso",
    "linear_counit_agrees",
    "presentations_agree",
    "qtensor",
    "qtensor_morphism",
    "roundtrip",
    "s2_of_counit",
    "t1_module_functor",
    "tensor_functor",
    "tensor_map",
    "unit_eta",
]
