"""Quadratic and proto-quadratic modules over a theory with finite hom-sets.

A module is the datum ``(M_e, M_ee, Ĥ, T, P)``:

* ``M_e`` with a left ``Λ``-action, one endomorphism per nonzero ``α : E -> E``;
* ``M_ee`` with an action of pairs ``(α, β)`` (read as ``ᾱ ⊗ β̄``) and an
  involution ``T``;
* ``P : M_ee -> M_e``;
* ``Ĥ : T_{11}cr_2U(E, E) ⊗_Λ M_e -> M_ee``, stored as one map
  ``H[ξ] = Ĥ(t_{11}ρ ξ ⊗ -) : M_e -> M_ee`` per nonzero ``ξ : E -> E ∨ E``.

Every axiom is additive in the module variable, so the checks run over
generators of ``M_e`` and ``M_ee``; :func:`random_element_check` re-checks the
main identities on random combinations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping, Sequence

import jsonschema

from .abgroup import (
    TRIVIAL,
    AbHom,
    FpAbGroup,
    IntMatrix,
    Vector,
    from_invariants,
    quotient,
    tensor,
    vadd,
    vsum,
)
from .functordata import (
    BilinearCrossEffect,
    CrossEffect2,
    Functor,
    T1,
    T2,
    cross_effect,
    u_functor,
)
from .report import Report
from .theory import Morphism, Theory, theory_from_descriptor, THEORY_SCHEMA
from .ufunctor import involution_on_cr2


class ModuleError(ValueError):
    """Structure maps are malformed or violate a required law."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class NotQuadraticError(ModuleError):
    pass


# ---------------------------------------------------------------------------
# relative tensor products


@dataclass
class RelativeTensor:
    """``A ⊗_R B`` on generator pairs ``(i, j) -> i * nb + j``.

    ``right`` and ``left`` give, for each ring generator key, the right action
    on ``A`` and the left action on ``B``; balanced relations
    ``(x·λ) ⊗ b - x ⊗ (λ·b)`` are imposed for every key and every pair of
    generators.
    """

    a: FpAbGroup
    b: FpAbGroup
    group: FpAbGroup

    def pair(self, i: int, j: int) -> int:
        return i * self.b.num_gens + j

    def bilinear(self, x: Mapping[int, int], y: Mapping[int, int]) -> Vector:
        nb = self.b.num_gens
        out: Vector = {}
        for i, c in x.items():
            for j, d in y.items():
                k = i * nb + j
                out[k] = out.get(k, 0) + c * d
        return {k: v for k, v in out.items() if v}

    def map(self, f: AbHom, g: AbHom, target: RelativeTensor) -> AbHom:
        """``f ⊗ g`` into another relative tensor (well-definedness is checked)."""
        images = [
            target.bilinear(f.images[i], g.images[j]) for i in range(self.a.num_gens) for j in range(self.b.num_gens)
        ]
        return AbHom(self.group, target.group, images)


def tensor_over_ring(
    a: FpAbGroup,
    right: Mapping[Hashable, AbHom],
    b: FpAbGroup,
    left: Mapping[Hashable, AbHom],
    name: str = "",
) -> RelativeTensor:
    if set(right) != set(left):
        raise ModuleError("left and right actions must be indexed by the same ring generators")
    plain, bil = tensor(a, b)
    rels = list(plain.relation_basis)
    for key, ra in right.items():
        la = left[key]
        if ra.domain.num_gens != a.num_gens or la.domain.num_gens != b.num_gens:
            raise ModuleError("action does not match the module", key)
        for i in range(a.num_gens):
            for j in range(b.num_gens):
                v = vadd(bil(ra.images[i], {j: 1}), bil({i: 1}, la.images[j]), -1)
                if v:
                    rels.append(v)
    return RelativeTensor(a, b, FpAbGroup(plain.num_gens, rels, name=name or "relative tensor"))


def _right_precomposition(theory: Theory, group: FpAbGroup, rank: int) -> dict[Morphism, AbHom]:
    """Right ``Λ``-action ``ξ ↦ ξ ∘ λ`` on a quotient of ``U(E^{∨rank})``."""
    u = u_functor(theory)
    basis = u.basis(rank)
    out = {}
    for lam in u.basis(1):
        out[lam] = AbHom(group, group, [u.element(theory.compose(xi, lam)) for xi in basis], check=False)
    return out


def tensor_over_lambda(
    theory: Theory, a: FpAbGroup, right: Mapping[Morphism, AbHom], module: QuadraticCModule | None = None,
    b: FpAbGroup | None = None, left: Mapping[Morphism, AbHom] | None = None,
) -> RelativeTensor:
    """``A ⊗_Λ B`` with ``B`` either ``module.M_e`` or an explicit left module."""
    if module is not None:
        b = module.me
        left = {lam: module.e_action(lam) for lam in theory.nonzero_homs(1, 1)}
    if b is None or left is None:
        raise ModuleError("a left Λ-module is required")
    return tensor_over_ring(a, right, b, left, name="⊗_Λ")


# ---------------------------------------------------------------------------
# the module datum


@dataclass
class QuadraticCModule:
    theory: Theory
    me: FpAbGroup
    mee: FpAbGroup
    act_e: dict[Morphism, AbHom]
    act_ee: dict[tuple[Morphism, Morphism], AbHom]
    T: AbHom
    P: AbHom
    H: dict[Morphism, AbHom]
    name: str = ""
    _hhat: AbHom | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        th = self.theory
        if not th.enumerable:
            raise ModuleError("quadratic modules need a theory with finite hom-sets")
        endos = th.nonzero_homs(1, 1)
        for a in endos:
            if a not in self.act_e:
                raise ModuleError("missing action of an endomorphism on M_e", a)
            for b in endos:
                if (a, b) not in self.act_ee:
                    raise ModuleError("missing action of a pair on M_ee", (a, b))
        for xi in th.nonzero_homs(1, 2):
            self.H.setdefault(xi, AbHom.zero(self.me, self.mee))
        for h in list(self.act_e.values()):
            _shape(h, self.me, self.me, "Λ-action")
        for h in self.act_ee.values():
            _shape(h, self.mee, self.mee, "pair action")
        for h in self.H.values():
            _shape(h, self.me, self.mee, "H")
        _shape(self.T, self.mee, self.mee, "T")
        _shape(self.P, self.mee, self.me, "P")

    # -- actions with zero morphisms allowed -------------------------------

    def e_action(self, alpha: Morphism) -> AbHom:
        if self.theory.is_zero(alpha):
            return AbHom.zero(self.me, self.me)
        return self.act_e[alpha]

    def ee_action(self, alpha: Morphism, beta: Morphism) -> AbHom:
        if self.theory.is_zero(alpha) or self.theory.is_zero(beta):
            return AbHom.zero(self.mee, self.mee)
        return self.act_ee[(alpha, beta)]

    def h(self, xi: Morphism) -> AbHom:
        if self.theory.is_zero(xi):
            return AbHom.zero(self.me, self.mee)
        return self.H[xi]

    def lambda_element_action(self, x: Mapping[int, int]) -> AbHom:
        """Action of an element of ``Λ`` given over the basis of nonzero endomorphisms."""
        basis = u_functor(self.theory).basis(1)
        out = AbHom.zero(self.me, self.me)
        for i, c in x.items():
            out = out + self.act_e[basis[i]] * c
        return out

    # -- Ĥ as a single map ------------------------------------------------

    def hhat_domain(self) -> RelativeTensor:
        th = self.theory
        q = BilinearCrossEffect(u_functor(th)).value(1, 1)
        return tensor_over_lambda(th, q, _right_precomposition(th, q, 2), self)

    def hhat(self, check: bool = True) -> AbHom:
        """``Ĥ`` on ``T_{11}cr_2U(E, E) ⊗_Λ M_e``; raises if the ``H[ξ]`` do not descend."""
        dom = self.hhat_domain()
        basis = u_functor(self.theory).basis(2)
        images = [self.H[xi].images[k] for xi in basis for k in range(self.me.num_gens)]
        return AbHom(dom.group, self.mee, images, check=check)

    def coker_P(self) -> tuple[FpAbGroup, AbHom]:
        return quotient(self.me, self.P.images, name="coker P")

    def __repr__(self) -> str:
        return f"<QuadraticCModule {self.name or '?'} M_e={self.me.invariants} M_ee={self.mee.invariants}>"


def _shape(h: AbHom, dom: FpAbGroup, cod: FpAbGroup, what: str) -> None:
    if h.domain.num_gens != dom.num_gens or h.codomain.num_gens != cod.num_gens:
        raise ModuleError(f"{what} has the wrong shape")


ProtoQuadraticCModule = QuadraticCModule


# ---------------------------------------------------------------------------
# axiom checks


def _ring_relations(theory: Theory, which: str) -> tuple[Vector, ...]:
    u = u_functor(theory)
    q = T1(u) if which == "bar" else T2(u)
    return q.value(1).relation_basis


def check_proto(M: QuadraticCModule) -> Report:
    """All axioms of a proto-quadratic module, one report line per instance."""
    th = M.theory
    r = Report("check_proto")
    endos = th.nonzero_homs(1, 1)
    ident = th.identity(1)
    id_e = AbHom.identity(M.me)
    id_ee = AbHom.identity(M.mee)
    # each map is a homomorphism of the presented groups
    structure: list[tuple[tuple, AbHom]] = [(("act_e", a), v) for a, v in M.act_e.items()]
    structure += [(("act_ee", ab), v) for ab, v in M.act_ee.items()]
    structure += [(("T",), M.T), (("P",), M.P)]
    structure += [(("H", xi), v) for xi, v in M.H.items()]
    for key, h in structure:
        bad = h.first_violation()
        r.add("well_defined", "structure maps", bad is None, {"map": key, "relation": bad})

    # M_e is a left Λ-module
    r.compare("lambda.unit", "Λ-module", M.e_action(ident), id_e, ident)
    for a in endos:
        for b in endos:
            r.compare("lambda.composition", "Λ-module", M.e_action(th.compose(a, b)), M.act_e[a].compose(M.act_e[b]), (a, b))

    # M_ee is a Λ̄⊗Λ̄-module: pairs compose, unit, and the kernel of Λ -> Λ̄ acts trivially
    r.compare("pair.unit", "Λ̄⊗Λ̄-module", M.ee_action(ident, ident), id_ee, ident)
    for a in endos:
        for b in endos:
            for c in endos:
                for d in endos:
                    lhs = M.ee_action(th.compose(a, c), th.compose(b, d))
                    r.compare("pair.composition", "Λ̄⊗Λ̄-module", lhs, M.act_ee[(a, b)].compose(M.act_ee[(c, d)]), (a, b, c, d))
    basis = u_functor(th).basis(1)
    for rel in _ring_relations(th, "bar"):
        for b in endos:
            left = vsum_maps(M, [(c, M.act_ee[(basis[i], b)]) for i, c in rel.items()], M.mee)
            right = vsum_maps(M, [(c, M.act_ee[(b, basis[i])]) for i, c in rel.items()], M.mee)
            r.add("pair.descent", "Λ̄⊗Λ̄-module", left.is_zero(), {"relation": rel, "other": b, "slot": 1})
            r.add("pair.descent", "Λ̄⊗Λ̄-module", right.is_zero(), {"relation": rel, "other": b, "slot": 2})

    # symmetric module
    r.compare("T.involution", "T² = 1", M.T.compose(M.T), id_ee)
    for a in endos:
        for b in endos:
            r.compare("T.equivariant", "T(ᾱ⊗β̄) = (β̄⊗ᾱ)T", M.T.compose(M.act_ee[(a, b)]), M.act_ee[(b, a)].compose(M.T), (a, b))

    # P
    r.compare("P.symmetric", "PT = P", M.P.compose(M.T), M.P)
    for a in endos:
        r.compare("P.diagonal", "P(ᾱ⊗ᾱ) = αP", M.P.compose(M.act_ee[(a, a)]), M.act_e[a].compose(M.P), a)

    # Ĥ descends to T11cr2U(E,E) ⊗_Λ M_e
    try:
        M.hhat(check=True)
        r.add("H.descends", "Ĥ well defined", True)
    except Exception as exc:  # HomError carries the offending relation
        r.add("H.descends", "Ĥ well defined", False, {"relation": getattr(exc, "witness", None)})

    # Ĥ is a morphism of symmetric Λ̄⊗Λ̄-modules
    xis = th.nonzero_homs(1, 2)
    sw = th.switch()
    for xi in xis:
        for a in endos:
            for b in endos:
                moved = th.compose(th.coproduct_map([a, b]), xi)
                r.compare("H.equivariant", "Ĥ(ᾱ⊗β̄ ξ) = (ᾱ⊗β̄)Ĥ(ξ)", M.h(moved), M.act_ee[(a, b)].compose(M.H[xi]), (xi, a, b))
        r.compare("H.symmetric", "Ĥ(Tξ) = TĤ(ξ)", M.h(th.compose(sw, xi)), M.T.compose(M.H[xi]), xi)

    # QM1
    fold, r1, r2 = th.fold(2), th.retraction(1, 2), th.retraction(2, 2)
    for xi in xis:
        lhs = M.e_action(th.compose(fold, xi))
        rhs = M.e_action(th.compose(r1, xi)) + M.e_action(th.compose(r2, xi)) + M.P.compose(M.H[xi])
        r.compare("QM1", "(∇ξ)a = (r₁ξ)a + (r₂ξ)a + PĤ(ξ⊗a)", lhs, rhs, xi)

    # consequence: coker P is a Λ̄-module
    _check_coker_p(M, r)
    return r


def _check_coker_p(M: QuadraticCModule, r: Report) -> None:
    th = M.theory
    q, proj = M.coker_P()
    basis = u_functor(th).basis(1)
    for a in th.nonzero_homs(1, 1):
        moved = proj.compose(M.act_e[a]).compose(M.P)
        r.add("cokerP.stable", "coker(P) is a Λ-module", moved.is_zero(), a)
    for rel in _ring_relations(th, "bar"):
        act = vsum_maps(M, [(c, M.act_e[basis[i]]) for i, c in rel.items()], M.me)
        r.add("cokerP.descent", "coker(P) is a Λ̄-module", proj.compose(act).is_zero(), rel)


def vsum_maps(M: QuadraticCModule, terms: Sequence[tuple[int, AbHom]], g: FpAbGroup) -> AbHom:
    out = None
    for c, h in terms:
        out = h * c if out is None else out + h * c
    if out is None:
        return AbHom.zero(g, g)
    return out


def check_quadratic(M: QuadraticCModule) -> Report:
    """:func:`check_proto` plus (QM2) and the factorization of the action through ``Λ̄̄``."""
    r = check_proto(M)
    r.suite = "check_quadratic"
    th = M.theory
    r1, r2 = th.retraction(1, 2), th.retraction(2, 2)
    one_plus_t = AbHom.identity(M.mee) + M.T
    for xi in th.nonzero_homs(1, 2):
        lhs = M.H[xi].compose(M.P)
        rhs = M.ee_action(th.compose(r1, xi), th.compose(r2, xi)).compose(one_plus_t)
        r.compare("QM2", "Ĥ(ξ⊗Pm) = (r₁ξ⊗r₂ξ)(m + Tm)", lhs, rhs, xi)
    basis = u_functor(th).basis(1)
    for rel in _ring_relations(th, "bbar"):
        act = vsum_maps(M, [(c, M.act_e[basis[i]]) for i, c in rel.items()], M.me)
        r.add("lambda_bbar.descent", "Λ acts through Λ̄̄", act.is_zero(), rel)
    return r


def is_proto(M: QuadraticCModule) -> bool:
    return check_proto(M).ok


def is_quadratic(M: QuadraticCModule) -> bool:
    return check_quadratic(M).ok


def random_element_check(M: QuadraticCModule, samples: int = 20, seed: int = 0) -> bool:
    """Re-check QM1, PT = P and Ĥ-symmetry on random non-generator elements."""
    rng = random.Random(seed)
    th = M.theory
    fold, r1, r2, sw = th.fold(2), th.retraction(1, 2), th.retraction(2, 2), th.switch()
    for _ in range(samples):
        a = {i: rng.randint(-5, 5) for i in range(M.me.num_gens)}
        m = {i: rng.randint(-5, 5) for i in range(M.mee.num_gens)}
        if not M.me.equal(M.P(M.T(m)), M.P(m)):
            return False
        for xi in th.nonzero_homs(1, 2):
            lhs = M.e_action(th.compose(fold, xi))(a)
            rhs = vsum(((1, M.e_action(th.compose(r1, xi))(a)), (1, M.e_action(th.compose(r2, xi))(a)), (1, M.P(M.H[xi](a)))))
            if not M.me.equal(lhs, rhs):
                return False
            if not M.mee.equal(M.h(th.compose(sw, xi))(a), M.T(M.H[xi](a))):
                return False
    return True


# ---------------------------------------------------------------------------
# constructions


def i1_embed(theory: Theory, group: FpAbGroup, action: Mapping[Morphism, AbHom] | None = None, name: str = "") -> QuadraticCModule:
    """``I_1(N)``: the module ``(0 -> 0 -> N)`` for a ``Λ̄``-module ``N``.

    ``action`` defaults to the identity for ``E -> E`` and must be given for
    every other nonzero endomorphism.  Raises :class:`ModuleError` if the
    action does not factor through ``Λ̄``.
    """
    endos = theory.nonzero_homs(1, 1)
    act = dict(action or {})
    ident = theory.identity(1)
    act.setdefault(ident, AbHom.identity(group))
    missing = [a for a in endos if a not in act]
    if missing:
        raise ModuleError("action of an endomorphism is missing", missing[0])
    for a in endos:
        bad = act[a].first_violation()
        if bad is not None:
            raise ModuleError("action is not a homomorphism", (a, bad))
    basis = u_functor(theory).basis(1)
    for a in endos:
        for b in endos:
            lhs = AbHom.zero(group, group) if theory.is_zero(theory.compose(a, b)) else act[theory.compose(a, b)]
            if not lhs.equals(act[a].compose(act[b])):
                raise ModuleError("action does not respect composition", (a, b))
    if not act[ident].equals(AbHom.identity(group)):
        raise ModuleError("identity does not act as the identity")
    for rel in _ring_relations(theory, "bar"):
        total = AbHom.zero(group, group)
        for i, c in rel.items():
            total = total + act[basis[i]] * c
        if not total.is_zero():
            raise ModuleError("action does not factor through Λ̄", rel)
    zero_ee = AbHom.zero(TRIVIAL, TRIVIAL)
    return QuadraticCModule(
        theory,
        group,
        TRIVIAL,
        act,
        {(a, b): zero_ee for a in endos for b in endos},
        zero_ee,
        AbHom.zero(TRIVIAL, group),
        {xi: AbHom.zero(group, TRIVIAL) for xi in theory.nonzero_homs(1, 2)},
        name=name or f"I1{group.invariants}",
    )


def lambda_bar_module(theory: Theory) -> QuadraticCModule:
    """``I_1(Λ̄)`` with ``Λ̄`` acting on itself by left multiplication."""
    u = u_functor(theory)
    g = T1(u).value(1)
    act = {a: AbHom(g, g, [u.compose_basis(a, h) for h in u.basis(1)]) for a in theory.nonzero_homs(1, 1)}
    return i1_embed(theory, g, act, name="I1(Λ̄)")


def s2_of_functor(F: Functor, check_degree: bool = True) -> QuadraticCModule:
    """``𝕊_2 F``: ``M_e = F(E)``, ``M_ee = cr_2F(E, E)``, ``T = T^F``, ``P = F(∇)ι``.

    ``H[ξ] = ρ F(ξ)``; whether these descend to ``T_{11}cr_2U(E, E) ⊗_Λ F(E)``
    is checked when the module is verified, not assumed.
    """
    th = F.theory
    if check_degree and not cross_effect(F, 3).group.is_trivial():
        raise NotQuadraticError(f"{F.name} is not quadratic: cr_3 F(E, E, E) ≠ 0")
    me = F.value(1)
    cr = CrossEffect2(F)
    mee = cr.value(1, 1)
    incl = cr.inclusion(1, 1)
    rho = cr.retraction(1, 1)
    endos = th.nonzero_homs(1, 1)
    act_e = {a: F.map(a) for a in endos}
    act_ee = {(a, b): cr.map(a, b) for a in endos for b in endos}
    T = involution_on_cr2(F)
    P = F.map(th.fold(2)).compose(incl)
    H = {xi: rho.compose(F.map(xi)) for xi in th.nonzero_homs(1, 2)}
    return QuadraticCModule(th, me, mee, act_e, act_ee, T, P, H, name=f"S2({F.name})")


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class QModMorphism:
    source: QuadraticCModule
    target: QuadraticCModule
    phi_e: AbHom
    phi_ee: AbHom

    def check(self) -> Report:
        s, t = self.source, self.target
        th = s.theory
        r = Report("qmod_morphism")
        for name, h in (("phi_e", self.phi_e), ("phi_ee", self.phi_ee)):
            r.add("well_defined", "components are homomorphisms", h.first_violation() is None, name)
        endos = th.nonzero_homs(1, 1)
        for a in endos:
            r.compare("lambda.equivariant", "φ_e α = α φ_e", self.phi_e.compose(s.act_e[a]), t.act_e[a].compose(self.phi_e), a)
            for b in endos:
                r.compare(
                    "pair.equivariant", "φ_ee (ᾱ⊗β̄) = (ᾱ⊗β̄) φ_ee",
                    self.phi_ee.compose(s.act_ee[(a, b)]), t.act_ee[(a, b)].compose(self.phi_ee), (a, b),
                )
        r.compare("T", "φ_ee T = T φ_ee", self.phi_ee.compose(s.T), t.T.compose(self.phi_ee))
        r.compare("P", "φ_e P = P φ_ee", self.phi_e.compose(s.P), t.P.compose(self.phi_ee))
        for xi in th.nonzero_homs(1, 2):
            r.compare("H", "φ_ee Ĥ = Ĥ (1 ⊗ φ_e)", self.phi_ee.compose(s.H[xi]), t.H[xi].compose(self.phi_e), xi)
        return r

    def compose(self, other: QModMorphism) -> QModMorphism:
        """``self ∘ other``."""
        return QModMorphism(other.source, self.target, self.phi_e.compose(other.phi_e), self.phi_ee.compose(other.phi_ee))

    @classmethod
    def identity(cls, M: QuadraticCModule) -> QModMorphism:
        return cls(M, M, AbHom.identity(M.me), AbHom.identity(M.mee))

    def is_iso(self) -> bool:
        return self.phi_e.is_iso() and self.phi_ee.is_iso()

    def inverse(self) -> QModMorphism:
        return QModMorphism(self.target, self.source, self.phi_e.inverse(), self.phi_ee.inverse())

    def equals(self, other: QModMorphism) -> bool:
        return self.phi_e.equals(other.phi_e) and self.phi_ee.equals(other.phi_ee)


# ---------------------------------------------------------------------------
# JSON descriptors


_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_GROUP = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_MORPHISM = {"type": "array", "minItems": 3, "maxItems": 3}

MODULE_SCHEMA: dict = {
    "type": "object",
    "required": ["theory", "me", "mee", "P"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "theory": THEORY_SCHEMA,
        "me": _GROUP,
        "mee": _GROUP,
        "act_e": {
            "type": "array",
            "items": {"type": "object", "required": ["alpha", "matrix"], "properties": {"alpha": _MORPHISM, "matrix": _MATRIX}},
        },
        "act_ee": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["alpha", "beta", "matrix"],
                "properties": {"alpha": _MORPHISM, "beta": _MORPHISM, "matrix": _MATRIX},
            },
        },
        "T": _MATRIX,
        "P": _MATRIX,
        "H": {
            "type": "array",
            "items": {"type": "object", "required": ["xi", "matrix"], "properties": {"xi": _MORPHISM, "matrix": _MATRIX}},
        },
    },
}
"""Groups are invariant-factor lists (``0`` for ``Z``); matrices act on
column vectors of generator coordinates, one row per target generator.
Omitted actions of the identity default to the identity, omitted ``H[ξ]``
to zero, omitted ``T`` to the identity."""


def _hom_from_rows(rows: Sequence[Sequence[int]], dom: FpAbGroup, cod: FpAbGroup, what: str) -> AbHom:
    if cod.num_gens == 0:
        return AbHom.zero(dom, cod)
    if len(rows) != cod.num_gens or any(len(row) != dom.num_gens for row in rows):
        raise ModuleError(f"{what}: expected a {cod.num_gens} x {dom.num_gens} matrix")
    return AbHom(dom, cod, IntMatrix.from_rows(rows, dom.num_gens), check=False)


def _rows(h: AbHom) -> list[list[int]]:
    m = h.matrix
    return [list(m.row(i)) for i in range(m.rows)]


def module_from_json(obj: dict) -> QuadraticCModule:
    jsonschema.validate(obj, MODULE_SCHEMA)
    th = theory_from_descriptor(obj["theory"])
    me = from_invariants(obj["me"])
    mee = from_invariants(obj["mee"])
    ident = th.identity(1)
    act_e = {ident: AbHom.identity(me)}
    for item in obj.get("act_e", []):
        a = th.morphism_from_json(item["alpha"])
        act_e[a] = _hom_from_rows(item["matrix"], me, me, "act_e")
    act_ee = {(ident, ident): AbHom.identity(mee)}
    for item in obj.get("act_ee", []):
        key = (th.morphism_from_json(item["alpha"]), th.morphism_from_json(item["beta"]))
        act_ee[key] = _hom_from_rows(item["matrix"], mee, mee, "act_ee")
    T = _hom_from_rows(obj["T"], mee, mee, "T") if "T" in obj else AbHom.identity(mee)
    P = _hom_from_rows(obj["P"], mee, me, "P")
    H = {}
    for item in obj.get("H", []):
        H[th.morphism_from_json(item["xi"])] = _hom_from_rows(item["matrix"], me, mee, "H")
    return QuadraticCModule(th, me, mee, act_e, act_ee, T, P, H, name=obj.get("name", ""))


def module_to_json(M: QuadraticCModule) -> dict:
    """Descriptor of ``M``; groups are first brought to invariant-factor form."""
    me, to_e, from_e = M.me.simplify()
    mee, to_ee, from_ee = M.mee.simplify()

    def conj(h: AbHom, to: AbHom, frm: AbHom) -> list[list[int]]:
        return _rows(to.compose(h).compose(frm))

    return {
        "name": M.name,
        "theory": M.theory.descriptor(),
        "me": list(me.invariants),
        "mee": list(mee.invariants),
        "act_e": [{"alpha": a.to_json(), "matrix": conj(h, to_e, from_e)} for a, h in sorted(M.act_e.items())],
        "act_ee": [
            {"alpha": a.to_json(), "beta": b.to_json(), "matrix": conj(h, to_ee, from_ee)}
            for (a, b), h in sorted(M.act_ee.items())
        ],
        "T": conj(M.T, to_ee, from_ee),
        "P": conj(M.P, to_e, from_ee),
        "H": [{"xi": xi.to_json(), "matrix": conj(h, to_ee, from_e)} for xi, h in sorted(M.H.items())],
    }


def qm2_violator(repaired: bool = False) -> QuadraticCModule:
    """A proto-quadratic module over ``FreeMod(Z/2)`` that fails only (QM2).

    ``M_e = Z/2``, ``M_ee = (Z/2)^2`` with ``T`` the swap and ``P = (1 1)``.
    With ``H = 0`` the identity ``HP = 1 + T`` fails; ``repaired`` sets
    ``H[(1, 1)] = (1, 1)``, which restores it.
    """
    desc: dict = {
        "name": "QM2-repaired" if repaired else "QM2-violator",
        "theory": {"kind": "freemod", "modulus": 2},
        "me": [2],
        "mee": [2, 2],
        "T": [[0, 1], [1, 0]],
        "P": [[1, 1]],
    }
    if repaired:
        desc["H"] = [{"xi": [1, 2, [[1, 1]]], "matrix": [[1], [1]]}]
    return module_from_json(desc)


__all__ = [
    "MODULE_SCHEMA",
    "ModuleError",
    "NotQuadraticError",
    "ProtoQuadraticCModule",
    "QModMorphism",
    "QuadraticCModule",
    "RelativeTensor",
    "check_proto",
    "check_quadratic",
    "i1_embed",
    "is_proto",
    "is_quadratic",
    "lambda_bar_module",
    "module_from_json",
    "module_to_json",
    "qm2_violator",
    "random_element_check",
    "s2_of_functor",
    "tensor_over_lambda",
    "tensor_over_ring",
]
