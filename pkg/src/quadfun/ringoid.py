"""The two-object ringoid ``R`` classifying quadratic functors, and its modules.

Objects are ``e`` and ``ee``.  Hom-groups, with their generator keys:

* ``hom(e, e) = Λ̄̄ = T_2U(E)``, keyed by nonzero ``γ : E -> E``;
* ``hom(e, ee) = cr_2(T_2U)(E, E)`` in quotient form, keyed by nonzero ``ξ : E -> E ∨ E``;
* ``hom(ee, e) = Λ̄ ⊗ Λ̄``, keyed by pairs ``(α, β)``;
* ``hom(ee, ee) = (Λ̄ ⊗ Λ̄) ≀ S_2``, keyed by ``((α, β), s)`` with ``s ∈ {0, 1}``
  standing for ``α ⊗ β`` and ``(α ⊗ β) t``.

Composition ``g ∘ f`` is written ``compose(g, f)`` and is the ring product
``g · f`` on endomorphism rings.  An ``R``-module is a covariant additive
functor ``R -> Ab``; :func:`check_rmodule` verifies this on generators, and the
two mixed-composition laws through ``e -> ee -> e`` and ``ee -> e -> ee`` are
reported as ``RM1`` and ``RM2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

from .abgroup import AbHom, FpAbGroup, Vector, coinvariants, vadd, vsum
from .functordata import CrossEffect2Quotient, T2, u_functor
from .qmodule import ModuleError, QuadraticCModule, check_quadratic, tensor_over_ring
from .report import Report
from .theory import Morphism, Theory
from .ufunctor import LambdaRings, PresentedRing, lambda_rings

OBJECTS = ("e", "ee")


@dataclass
class RingoidR:
    theory: Theory
    rings: LambdaRings
    end_e: PresentedRing
    end_ee: PresentedRing
    hom_e_to_ee: FpAbGroup
    hom_ee_to_e: FpAbGroup
    xi_basis: list[Morphism]
    endo_basis: list[Morphism]

    # -- hom-groups and keys --------------------------------------------

    def hom(self, a: str, b: str) -> FpAbGroup:
        return {
            ("e", "e"): self.end_e.group,
            ("e", "ee"): self.hom_e_to_ee,
            ("ee", "e"): self.hom_ee_to_e,
            ("ee", "ee"): self.end_ee.group,
        }[(a, b)]

    def identity(self, a: str) -> Vector:
        return dict(self.end_e.unit if a == "e" else self.end_ee.unit)

    def ngens(self, a: str, b: str) -> int:
        return self.hom(a, b).num_gens

    def _endo(self, f: Morphism) -> Vector:
        return u_functor(self.theory).element(f)

    def _pair(self, a: Morphism, b: Morphism) -> Vector:
        """``ā ⊗ b̄`` in ``Λ̄ ⊗ Λ̄`` (zero if either factor is zero)."""
        u = u_functor(self.theory)
        x, y = u.element(a), u.element(b)
        n = len(self.endo_basis)
        return {i * n + j: c * d for i, c in x.items() for j, d in y.items()}

    def _pair_keys(self, p: int) -> tuple[Morphism, Morphism]:
        n = len(self.endo_basis)
        return self.endo_basis[p // n], self.endo_basis[p % n]

    def _xi(self, f: Morphism) -> Vector:
        return u_functor(self.theory).element(f)

    # -- composition on generators ---------------------------------------

    def compose_gens(self, types: tuple[str, str, str], g: int, f: int) -> Vector:
        """``g ∘ f`` for generators ``f : A -> B`` and ``g : B -> C``; ``types = (A, B, C)``."""
        th = self.theory
        A, B, C = types
        nb = self.hom_ee_to_e.num_gens
        if (A, B, C) == ("e", "e", "e"):
            return self.end_e.mult_gens(g, f)
        if (A, B, C) == ("e", "e", "ee"):
            return self._xi(th.compose(self.xi_basis[g], self.endo_basis[f]))
        if (A, B, C) == ("ee", "e", "e"):
            gam = self.endo_basis[g]
            a, b = self._pair_keys(f)
            return self._pair(th.compose(gam, a), th.compose(gam, b))
        if (A, B, C) == ("ee", "e", "ee"):
            xi = self.xi_basis[g]
            a, b = self._pair_keys(f)
            x1, x2 = th.compose(th.retraction(1, 2), xi), th.compose(th.retraction(2, 2), xi)
            straight = self._pair(th.compose(x1, a), th.compose(x2, b))
            crossed = self._pair(th.compose(x1, b), th.compose(x2, a))
            return vadd(straight, {k + nb: c for k, c in crossed.items()})
        if (A, B, C) == ("e", "ee", "e"):
            a, b = self._pair_keys(g)
            xi = self.xi_basis[f]
            r1, r2 = th.retraction(1, 2), th.retraction(2, 2)
            return vsum(
                (
                    (1, self._endo(th.compose_all(th.fold(2), th.coproduct_map([a, b]), xi))),
                    (-1, self._endo(th.compose_all(a, r1, xi))),
                    (-1, self._endo(th.compose_all(b, r2, xi))),
                )
            )
        if (A, B, C) == ("ee", "ee", "e"):
            a, b = self._pair_keys(g)
            s, p = divmod(f, nb)
            c, d = self._pair_keys(p)
            if s == 0:
                return self._pair(th.compose(a, c), th.compose(b, d))
            return self._pair(th.compose(b, d), th.compose(a, c))
        if (A, B, C) == ("e", "ee", "ee"):
            s, p = divmod(g, nb)
            a, b = self._pair_keys(p)
            xi = self.xi_basis[f]
            if s == 1:
                xi = th.compose(th.switch(), xi)
            return self._xi(th.compose(th.coproduct_map([a, b]), xi))
        if (A, B, C) == ("ee", "ee", "ee"):
            return self.end_ee.mult_gens(g, f)
        raise ValueError(f"unknown composition type {types}")

    def compose(self, types: tuple[str, str, str], g: Mapping[int, int], f: Mapping[int, int]) -> Vector:
        return vsum((c * d, self.compose_gens(types, i, j)) for i, c in g.items() for j, d in f.items())

    def equal(self, a: str, b: str, x: Mapping[int, int], y: Mapping[int, int]) -> bool:
        return self.hom(a, b).equal(x, y)


def build_ringoid(theory: Theory) -> RingoidR:
    rings = lambda_rings(theory)
    u = u_functor(theory)
    hom_e_ee = CrossEffect2Quotient(T2(u)).value(1, 1)
    return RingoidR(
        theory,
        rings,
        rings.lam_bbar,
        rings.wreath,
        hom_e_ee,
        rings.lam_bar_tensor.group,
        u.basis(2),
        u.basis(1),
    )


# ---------------------------------------------------------------------------
# associativity


@dataclass
class LawCheck:
    law: str
    triple: tuple[int, int, int]
    lhs: Vector
    rhs: Vector
    ok: bool

    def to_json(self) -> dict:
        return {"law": self.law, "triple": list(self.triple), "lhs": _vec(self.lhs), "rhs": _vec(self.rhs), "ok": self.ok}


def _vec(v: Mapping[int, int]) -> list[list[int]]:
    return [[i, c] for i, c in sorted(v.items())]


@dataclass
class AssociativityReport:
    checks: list[LawCheck]
    counts: dict[str, int]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def violations(self) -> list[LawCheck]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> list[dict]:
        """Violations only; a passing ringoid gives an empty list."""
        return [c.to_json() for c in self.violations]

    def to_report(self) -> Report:
        r = Report("ringoid")
        for law, n in sorted(self.counts.items()):
            bad = [c for c in self.violations if c.law == law]
            r.add(law, f"{n} instances", not bad, bad[0].to_json() if bad else None)
        return r


def check_associativity(R: RingoidR) -> AssociativityReport:
    """Descent, units and associativity on every composable generator triple."""
    checks: list[LawCheck] = []
    counts: dict[str, int] = {}

    def record(law: str, triple: tuple[int, int, int], lhs: Vector, rhs: Vector, ok: bool) -> None:
        counts[law] = counts.get(law, 0) + 1
        if not ok:
            checks.append(LawCheck(law, triple, lhs, rhs, ok))

    # descent: relations of either factor compose to zero
    for A, B, C in itertools.product(OBJECTS, repeat=3):
        law = f"descent {A}->{B}->{C}"
        target = R.hom(A, C)
        for rel in R.hom(B, C).relation_basis:
            for j in range(R.ngens(A, B)):
                v = R.compose((A, B, C), rel, {j: 1})
                record(law, (-1, -1, j), v, {}, target.is_zero(v))
        for rel in R.hom(A, B).relation_basis:
            for i in range(R.ngens(B, C)):
                v = R.compose((A, B, C), {i: 1}, rel)
                record(law, (i, -1, -1), v, {}, target.is_zero(v))
    # units
    for A, B in itertools.product(OBJECTS, repeat=2):
        law = f"unit {A}->{B}"
        for j in range(R.ngens(A, B)):
            left = R.compose((A, B, B), R.identity(B), {j: 1})
            right = R.compose((A, A, B), {j: 1}, R.identity(A))
            record(law, (j, j, j), left, {j: 1}, R.equal(A, B, left, {j: 1}))
            record(law, (j, j, j), right, {j: 1}, R.equal(A, B, right, {j: 1}))
    # associativity: (h g) f = h (g f) for f : A -> B, g : B -> C, h : C -> D
    for A, B, C, D in itertools.product(OBJECTS, repeat=4):
        law = f"assoc {A}->{B}->{C}->{D}"
        for f in range(R.ngens(A, B)):
            for g in range(R.ngens(B, C)):
                gf = R.compose_gens((A, B, C), g, f)
                for h in range(R.ngens(C, D)):
                    lhs = R.compose((A, B, D), R.compose_gens((B, C, D), h, g), {f: 1})
                    rhs = R.compose((A, C, D), {h: 1}, gf)
                    record(law, (h, g, f), lhs, rhs, R.equal(A, D, lhs, rhs))
    return AssociativityReport(checks, counts)


def end_e_matches_lambda_bbar(R: RingoidR) -> bool:
    """Composition in ``End(R_e)`` is the ring ``Λ̄̄`` (same convention, same table)."""
    ring = R.rings.lam_bbar
    n = ring.group.num_gens
    return all(
        R.end_e.group.equal(R.compose_gens(("e", "e", "e"), g, f), ring.mult_gens(g, f)) for g in range(n) for f in range(n)
    )


# ---------------------------------------------------------------------------
# χ : (Λ̄ ⊗ Λ̄) ⊗_{wreath} M_ee ≅ coinvariants


@dataclass
class ChiIso:
    tensor: FpAbGroup
    coinvariants: FpAbGroup
    chi: AbHom
    chi_inverse: AbHom

    def verify(self) -> bool:
        return self.chi.compose(self.chi_inverse).equals(AbHom.identity(self.coinvariants)) and self.chi_inverse.compose(
            self.chi
        ).equals(AbHom.identity(self.tensor))


def _wreath_left_action(R: RingoidR, mee: FpAbGroup, act_ee: Callable[[Morphism, Morphism], AbHom], T: AbHom) -> dict:
    """``(α ⊗ β, s) ↦`` the action on ``M_ee`` (``s = 1`` precomposes with ``T``)."""
    out = {}
    nb = R.hom_ee_to_e.num_gens
    for s in (0, 1):
        for p in range(nb):
            a, b = R._pair_keys(p)
            act = act_ee(a, b)
            out[s * nb + p] = act.compose(T) if s else act
    return out


def chi_iso(R: RingoidR, mee: FpAbGroup, act_ee: Callable[[Morphism, Morphism], AbHom], T: AbHom) -> ChiIso:
    """``χ(ᾱ ⊗ β̄ ⊗ m) = π((α ⊗ β) m)`` and ``χ'(π m) = 1 ⊗ 1 ⊗ m``.

    Raises :class:`ModuleError` if ``T`` is not an involution.
    """
    if not T.compose(T).equals(AbHom.identity(mee)):
        raise ModuleError("T is not an involution")
    a = R.hom_ee_to_e
    nb = a.num_gens
    right = {}
    for k in range(R.end_ee.group.num_gens):
        right[k] = AbHom(a, a, [R.compose_gens(("ee", "ee", "e"), i, k) for i in range(nb)], check=False)
    left = _wreath_left_action(R, mee, act_ee, T)
    rel = tensor_over_ring(a, right, mee, left, name="(Λ̄⊗Λ̄)⊗_wr M_ee")
    coinv, pi = coinvariants(mee, T)
    images = []
    for i in range(nb):
        x, y = R._pair_keys(i)
        act = act_ee(x, y)
        for l in range(mee.num_gens):
            images.append(pi(act.images[l]))
    chi = AbHom(rel.group, coinv, images)
    unit = R.rings.lam_bar_tensor.unit
    chi_inv = AbHom(coinv, rel.group, [rel.bilinear(unit, {l: 1}) for l in range(mee.num_gens)])
    return ChiIso(rel.group, coinv, chi, chi_inv)


# ---------------------------------------------------------------------------
# R-modules


@dataclass
class RModuleData:
    """A covariant additive functor ``R -> Ab`` given on generators.

    ``e_action[γ]`` for ``γ`` a generator of ``Λ̄̄``, ``ee_action[k]`` for ``k`` a
    generator of the wreath ring, ``p[k]`` for ``k`` a generator of
    ``Λ̄ ⊗ Λ̄`` (``M_ee -> M_e``) and ``h[ξ]`` for ``ξ`` a generator of
    ``hom(e, ee)`` (``M_e -> M_ee``).
    """

    ringoid: RingoidR
    me: FpAbGroup
    mee: FpAbGroup
    e_action: list[AbHom]
    ee_action: list[AbHom]
    p: list[AbHom]
    h: list[AbHom]

    def action(self, a: str, b: str) -> list[AbHom]:
        return {("e", "e"): self.e_action, ("ee", "ee"): self.ee_action, ("ee", "e"): self.p, ("e", "ee"): self.h}[(a, b)]

    def group(self, a: str) -> FpAbGroup:
        return self.me if a == "e" else self.mee

    def act(self, a: str, b: str, x: Mapping[int, int]) -> AbHom:
        maps = self.action(a, b)
        out = AbHom.zero(self.group(a), self.group(b))
        for i, c in x.items():
            out = out + maps[i] * c
        return out


LAW_NAMES = {("e", "ee", "e"): "RM1", ("ee", "e", "ee"): "RM2"}


def check_rmodule(D: RModuleData) -> Report:
    """Functoriality of ``D`` on generators: descent, units, compositions."""
    R = D.ringoid
    r = Report("rmodule")
    for a, b in itertools.product(OBJECTS, repeat=2):
        for rel in R.hom(a, b).relation_basis:
            r.add(f"descent {a}->{b}", "relations act as zero", D.act(a, b, rel).is_zero(), rel)
    for a in OBJECTS:
        r.compare(f"unit {a}", "identity acts as identity", D.act(a, a, R.identity(a)), AbHom.identity(D.group(a)))
    for A, B, C in itertools.product(OBJECTS, repeat=3):
        law = LAW_NAMES.get((A, B, C), f"functor {A}->{B}->{C}")
        for f in range(R.ngens(A, B)):
            for g in range(R.ngens(B, C)):
                lhs = D.act(A, C, R.compose_gens((A, B, C), g, f))
                rhs = D.action(B, C)[g].compose(D.action(A, B)[f])
                r.compare(law, "M(g f) = M(g) M(f)", lhs, rhs, (g, f))
    return r


def rmodule_from_qmodule(M: QuadraticCModule, R: RingoidR | None = None) -> RModuleData:
    """``p(ᾱ⊗β̄) = P(α⊗β)``, ``h(ξ) = Ĥ(ξ ⊗ -)``, wreath generators act through ``T``."""
    R = R or build_ringoid(M.theory)
    e_action = [M.e_action(g) for g in R.endo_basis]
    ee_action = list(_wreath_left_action(R, M.mee, M.ee_action, M.T).values())
    p = [M.P.compose(M.ee_action(*R._pair_keys(k))) for k in range(R.hom_ee_to_e.num_gens)]
    h = [M.h(xi) for xi in R.xi_basis]
    return RModuleData(R, M.me, M.mee, e_action, ee_action, p, h)


def qmodule_from_rmodule(D: RModuleData, name: str = "") -> QuadraticCModule:
    R = D.ringoid
    th = R.theory
    nb = R.hom_ee_to_e.num_gens
    n = len(R.endo_basis)
    act_e = {g: D.e_action[i] for i, g in enumerate(R.endo_basis)}
    act_ee = {R._pair_keys(k): D.ee_action[k] for k in range(nb)}
    ident = th.identity(1)
    one = R._pair(ident, ident)
    (k0,) = one
    T = D.ee_action[nb + k0]
    P = D.p[k0]
    H = {xi: D.h[i] for i, xi in enumerate(R.xi_basis)}
    if n == 0:
        raise ModuleError("theory has no nonzero endomorphisms")
    return QuadraticCModule(th, D.me, D.mee, act_e, act_ee, T, P, H, name=name)


def roundtrip_equal(M: QuadraticCModule, N: QuadraticCModule) -> bool:
    """Structure maps agree on the same underlying groups."""
    if M.me.num_gens != N.me.num_gens or M.mee.num_gens != N.mee.num_gens:
        return False
    ok = M.T.equals(N.T) and M.P.equals(N.P)
    ok = ok and all(M.act_e[a].equals(N.act_e[a]) for a in M.act_e)
    ok = ok and all(M.act_ee[k].equals(N.act_ee[k]) for k in M.act_ee)
    return ok and all(M.H[xi].equals(N.H[xi]) for xi in M.H)


@dataclass
class AxiomCorrespondence:
    qm1: bool
    qm2: bool
    rm1: bool
    rm2: bool

    @property
    def agree(self) -> bool:
        return self.qm1 == self.rm1 and self.qm2 == self.rm2


def axiom_correspondence(M: QuadraticCModule, R: RingoidR | None = None) -> AxiomCorrespondence:
    """Check (QM1)/(QM2) on ``M`` and (RM1)/(RM2) on its translation independently."""
    q = check_quadratic(M)
    d = check_rmodule(rmodule_from_qmodule(M, R))
    return AxiomCorrespondence(q.passed("QM1"), q.passed("QM2"), d.passed("RM1"), d.passed("RM2"))


__all__ = [
    "AssociativityReport",
    "AxiomCorrespondence",
    "ChiIso",
    "LawCheck",
    "RModuleData",
    "RingoidR",
    "axiom_correspondence",
    "build_ringoid",
    "check_associativity",
    "check_rmodule",
    "chi_iso",
    "end_e_matches_lambda_bbar",
    "qmodule_from_rmodule",
    "rmodule_from_qmodule",
    "roundtrip_equal",
]
