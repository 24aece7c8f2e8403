"""Square groups and quadratic modules over the theory of free groups.

Over free groups a quadratic module reduces to a square group
``M_e -H-> M_ee -P-> M_e`` with ``PHP = 2P`` (``H`` linear here).  The rest of
the structure is recovered from it:

* ``T = HP - 1``;
* ``[n]a = na + C(n, 2) PH(a)``;
* ``H_2 = HPH - 2H``, the coefficient of the commutator ``[i_2, i_1]``.

:class:`FreeEvaluation` computes the associated functor on ``F_n`` by
expanding words with the product rule
``(u v) ⊗ a = u ⊗ a + v ⊗ a + [u, v] ⊗ H(a)`` down to the basis
``e_i ⊗ a``, ``[e_i, e_j] ⊗ m`` (``i < j``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import jsonschema

from .abgroup import AbHom, FpAbGroup, IntMatrix, Vector, direct_sum, free, from_invariants, quotient, vadd, vscale, vsum
from .functordata import Functor, T1, binomial
from .report import Report
from .theory import Morphism, freegroup, invert_word, reduce_word

Word = tuple[int, ...]


# ---------------------------------------------------------------------------
# square groups


@dataclass
class SquareGroup:
    me: FpAbGroup
    mee: FpAbGroup
    H: AbHom
    P: AbHom
    name: str = ""

    def __post_init__(self) -> None:
        if self.H.domain.num_gens != self.me.num_gens or self.H.codomain.num_gens != self.mee.num_gens:
            raise ValueError("H must map M_e to M_ee")
        if self.P.domain.num_gens != self.mee.num_gens or self.P.codomain.num_gens != self.me.num_gens:
            raise ValueError("P must map M_ee to M_e")

    @property
    def T(self) -> AbHom:
        return self.H.compose(self.P) - AbHom.identity(self.mee)

    @property
    def delta(self) -> AbHom:
        """``Δ = HPH - 2H``."""
        return self.H.compose(self.P).compose(self.H) - self.H * 2

    def power_action(self, n: int) -> AbHom:
        """``[n]a = na + C(n, 2) PH(a)``."""
        return AbHom.identity(self.me) * n + self.P.compose(self.H) * binomial(n)

    def __repr__(self) -> str:
        return f"<SquareGroup {self.name or '?'} {self.me.invariants} -> {self.mee.invariants}>"


def square_group(me: Sequence[int], mee: Sequence[int], H: Sequence[Sequence[int]], P: Sequence[Sequence[int]], name: str = "") -> SquareGroup:
    """Build from invariant factors and matrices (rows index target generators)."""
    a, b = from_invariants(me), from_invariants(mee)
    return SquareGroup(a, b, _hom(H, a, b), _hom(P, b, a), name)


def _hom(rows: Sequence[Sequence[int]], dom: FpAbGroup, cod: FpAbGroup) -> AbHom:
    if cod.num_gens == 0:
        return AbHom.zero(dom, cod)
    if len(rows) != cod.num_gens or any(len(r) != dom.num_gens for r in rows):
        raise ValueError(f"expected a {cod.num_gens} x {dom.num_gens} matrix")
    return AbHom(dom, cod, IntMatrix.from_rows(rows, dom.num_gens), check=False)


SQUARE_GROUP_SCHEMA: dict = {
    "type": "object",
    "required": ["me", "mee", "H", "P"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "me": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "mee": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "H": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "P": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "words": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "not": {"const": 0}}}},
    },
}


def square_group_from_json(obj: dict) -> SquareGroup:
    jsonschema.validate(obj, SQUARE_GROUP_SCHEMA)
    return square_group(obj["me"], obj["mee"], obj["H"], obj["P"], obj.get("name", ""))


def check_square_group(S: SquareGroup) -> Report:
    r = Report("square_group")
    r.add("H.well_defined", "H is a homomorphism", S.H.first_violation() is None, S.H.first_violation())
    r.add("P.well_defined", "P is a homomorphism", S.P.first_violation() is None, S.P.first_violation())
    r.compare("PHP=2P", "PHP = 2P", S.P.compose(S.H).compose(S.P), S.P * 2)
    # with H linear the cross-effect (a|b)_H vanishes, so the remaining axioms hold identically
    r.add("cross_effect_H", "(a|b)_H = 0 for linear H", True)
    return r


# ---------------------------------------------------------------------------
# words and their T11 classes


def word_power(word: Sequence[int], n: int) -> Word:
    base = tuple(word) if n >= 0 else invert_word(word)
    return reduce_word(base * abs(n))


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """``[u, v] = u v u^{-1} v^{-1}``."""
    return reduce_word(tuple(u) + tuple(v) + invert_word(u) + invert_word(v))


def abelianization(word: Sequence[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for x in word:
        out[abs(x)] = out.get(abs(x), 0) + (1 if x > 0 else -1)
    return {i: c for i, c in out.items() if c}


def delete_letters(word: Sequence[int], keep: Iterable[int]) -> Word:
    keep = set(keep)
    return reduce_word([x for x in word if abs(x) in keep])


def magnus_c12(word: Sequence[int]) -> int:
    """Coefficient of ``X_1 X_2`` in the Magnus expansion ``x_i ↦ 1 + X_i``."""
    return magnus_coefficient(word, 1, 2)


def magnus_coefficient(word: Sequence[int], a: int, b: int) -> int:
    """Coefficient of ``X_a X_b`` (``a != b``) in the Magnus expansion."""
    if a == b:
        raise ValueError("only mixed coefficients are supported")
    total, seen = 0, 0
    for x in word:
        if abs(x) == a:
            seen += 1 if x > 0 else -1
        elif abs(x) == b:
            total += seen * (1 if x > 0 else -1)
    return total


def in_cross_effect(word: Sequence[int]) -> bool:
    """Both retractions ``E ∨ E -> E`` kill the word."""
    return not delete_letters(word, {1}) and not delete_letters(word, {2})


def t11_class(word: Sequence[int]) -> int:
    """Multiple of ``t_11[i_2, i_1]`` represented by a cross-effect word in two letters."""
    if any(abs(x) > 2 for x in word):
        raise ValueError("word must lie in F_2")
    if not in_cross_effect(word):
        raise ValueError("word is not in the cross-effect")
    return -magnus_c12(word)


BASIC_COMMUTATOR: Word = commutator((2,), (1,))


@dataclass
class Deviation:
    word: Word
    in_kernel: bool
    t11: int


def deviation_h(alpha: Morphism) -> Deviation:
    """``h(α) = ((i_1 • i_2) α) • (i_2 α)^{-1} • (i_1 α)^{-1}`` with its kernel certificate."""
    th = freegroup()
    if alpha.source != 1 or alpha.target != 1:
        raise ValueError("h is defined on endomorphisms of E")
    mu = th.comultiplication()
    i1, i2 = th.injection(1, 2), th.injection(2, 2)
    w = th.bullet(
        th.bullet(th.compose(mu, alpha), th.bullet_inverse(th.compose(i2, alpha))),
        th.bullet_inverse(th.compose(i1, alpha)),
    ).data[0]
    ok = in_cross_effect(w)
    return Deviation(w, ok, t11_class(w) if ok else 0)


# ---------------------------------------------------------------------------
# quadratic modules over free groups


@dataclass
class CogroupQuadModule:
    """``(M_e, M_ee, H_1, H_2, P)``; ``H_2`` is stored on the generator ``t_11[i_2, i_1]``.

    ``Λ = Z[Z \\ 0]`` acts on ``M_e`` through ``power_action``; ``Λ̄ ⊗ Λ̄ ≅ Z``
    acts on ``M_ee`` by ``[n] ⊗ [m] ↦ nm``.
    """

    me: FpAbGroup
    mee: FpAbGroup
    H1: AbHom
    H2: AbHom
    P: AbHom
    power_action: dict[int, AbHom] = field(default_factory=dict)
    name: str = ""

    @property
    def T(self) -> AbHom:
        return self.H1.compose(self.P) - AbHom.identity(self.mee)

    def act(self, n: int) -> AbHom:
        if n not in self.power_action:
            raise KeyError(f"action of [{n}] not tabulated")
        return self.power_action[n]

    def pair_act(self, n: int, m: int) -> AbHom:
        return AbHom.identity(self.mee) * (n * m)


def square_group_to_cogroup_module(S: SquareGroup, bound: int = 8) -> CogroupQuadModule:
    """``T = H_1P - 1``, ``[n]a = na + C(n,2)PH_1 a`` for ``|n| <= bound``, ``H_2 = Δ``."""
    report = check_square_group(S)
    if not report.ok:
        raise ValueError(f"not a square group: {report.failures()[0].id}")
    acts = {n: S.power_action(n) for n in range(-bound, bound + 1)}
    return CogroupQuadModule(S.me, S.mee, S.H, S.delta, S.P, acts, S.name)


def check_cogroup_module(C: CogroupQuadModule, bound: int = 4, multiples: Sequence[int] = (-2, -1, 0, 1, 2)) -> Report:
    """Relations (T1)-(T6) and the derived laws, on ``[n]`` for ``|n| <= bound``.

    Every ``T_11``-coefficient is computed from words, never from a formula.
    """
    th = freegroup()
    r = Report("cogroup_module")
    ident_ee = AbHom.identity(C.mee)
    powers = range(-bound, bound + 1)
    fold = th.fold(2)
    gam_basic = BASIC_COMMUTATOR

    # (T1)
    r.compare("T1", "PH₁P = 2P", C.P.compose(C.H1).compose(C.P), C.P * 2)
    # (T2), with Λ̄ ⊗ Λ̄ ≅ Z acting by scalars
    for n in powers:
        for m in powers:
            lhs = C.H1.compose(C.P).compose(C.pair_act(n, m)) - C.pair_act(m, n).compose(C.H1).compose(C.P)
            r.compare("T2", "H₁P(α⊗β) - (β⊗α)H₁P = α⊗β - β⊗α", lhs, C.pair_act(n, m) - C.pair_act(m, n), (n, m))
    # (T3)
    c = t11_class(gam_basic)
    r.compare("T3", "H₁PH₁ = 2H₁ + H₂", C.H1.compose(C.P).compose(C.H1), C.H1 * 2 + C.H2 * c)
    # (T4)
    sw = th.switch()
    for k in multiples:
        gam = word_power(gam_basic, k)
        tau_gam = th.substitute(sw, gam)
        lhs = C.H1.compose(C.P).compose(C.H2) * t11_class(gam)
        rhs = C.H2 * t11_class(reduce_word(gam + tau_gam))
        r.compare("T4", "H₁PH₂(γ) = H₂(γ•τγ)", lhs, rhs, k)
    # (T5)
    for k in multiples:
        gam = Morphism(1, 2, (word_power(gam_basic, k),))
        folded = th.compose(fold, gam)
        for n in powers:
            for m in powers:
                total = th.bullet(th.bullet(folded, th.power(n)), th.power(m))
                e = sum(abelianization(total.data[0]).values())
                if reduce_word(total.data[0]) != th.power(e).data[0] or abs(e) > max(C.power_action):
                    r.add("T5", "(∇γ•α•β)a", False, {"word": total.data[0]})
                    continue
                rhs = C.act(n) + C.act(m) + C.P.compose(C.pair_act(n, m)).compose(C.H1) + C.P.compose(C.H2) * t11_class(gam.data[0])
                r.compare("T5", "(∇γ•α•β)a = αa + βa + P(α⊗β)H₁a + PH₂(γ⊗a)", C.act(e), rhs, (k, n, m))
    # (T6)
    for n in powers:
        dev = deviation_h(th.power(n))
        r.add("h.in_kernel", "h(α) lies in the cross-effect", dev.in_kernel, n)
        lhs = C.H1.compose(C.act(n))
        rhs = C.H2 * dev.t11 + C.pair_act(n, n).compose(C.H1)
        r.compare("T6", "H₁(αa) = H₂(h(α)⊗a) + (α⊗α)H₁a", lhs, rhs, n)
    # H_2 lives on T11cr2 ⊗_Λ coker(P)
    r.add("H2.cokerP", "H₂P = 0", C.H2.compose(C.P).is_zero())
    for n in powers:
        gam_n = th.compose(Morphism(1, 2, (gam_basic,)), th.power(n)).data[0]
        r.compare("H2.balanced", "H₂(γ[n]⊗a) = H₂(γ⊗[n]a)", C.H2 * t11_class(gam_n), C.H2.compose(C.act(n)), n)
    # action law and equivariance of P
    r.compare("action.unit", "[1] = id", C.act(1), AbHom.identity(C.me))
    for n in powers:
        for m in powers:
            if abs(n * m) <= max(C.power_action):
                r.compare("action.composition", "[m][n] = [mn]", C.act(m).compose(C.act(n)), C.act(m * n), (m, n))
        r.compare("P.equivariant", "P(n⊗n) = [n]P", C.P.compose(C.pair_act(n, n)), C.act(n).compose(C.P), n)
    # T is an involution and H₁P = 1 + T
    T = C.T
    r.compare("T.involution", "(H₁P - 1)² = 1", T.compose(T), ident_ee)
    r.compare("QM2.split", "H₁(Pm) = m + Tm", C.H1.compose(C.P), ident_ee + T)
    return r


# ---------------------------------------------------------------------------
# evaluation on free groups


class FreeEvaluation:
    """The value of the square-group functor on ``F_n`` with word expansion."""

    def __init__(self, S: SquareGroup, n: int) -> None:
        self.S = S
        self.n = n
        self.ne = S.me.num_gens
        self.nee = S.mee.num_gens
        self.pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        self.pair_index = {p: k for k, p in enumerate(self.pairs)}
        self.group, _, _ = direct_sum([S.me] * n + [S.mee] * len(self.pairs))
        self._ph = S.P.compose(S.H)

    # basis
    def e(self, i: int, a: Mapping[int, int]) -> Vector:
        off = (i - 1) * self.ne
        return {off + k: c for k, c in a.items() if c}

    def bracket_basis(self, i: int, j: int, m: Mapping[int, int]) -> Vector:
        """``[e_i, e_j] ⊗ m`` for any ``i, j`` (symmetry through ``T`` and ``[e_i, e_i] = e_i ⊗ P``)."""
        if i == j:
            return self.e(i, self.S.P(m))
        if i > j:
            return self.bracket_basis(j, i, self.S.T(m))
        off = self.n * self.ne + self.pair_index[(i, j)] * self.nee
        return {off + l: c for l, c in m.items() if c}

    def bracket(self, u: Mapping[int, int], v: Mapping[int, int], m: Mapping[int, int]) -> Vector:
        """``[u, v] ⊗ m``, bilinear in the abelianized words."""
        return vsum((p * q, self.bracket_basis(i, j, m)) for i, p in u.items() for j, q in v.items())

    def letter(self, x: int, a: Mapping[int, int]) -> Vector:
        i = abs(x)
        if x > 0:
            return self.e(i, a)
        # x^{-1} ⊗ a = -(x ⊗ a) + x ⊗ PH(a)
        return vadd(self.e(i, self._ph(a)), self.e(i, a), -1)

    def _check_word(self, word: Sequence[int]) -> Word:
        w = tuple(word)
        if reduce_word(w) != w:
            raise ValueError(f"word {w} is not freely reduced")
        if any(abs(x) > self.n for x in w):
            raise ValueError(f"word {w} uses letters beyond rank {self.n}")
        return w

    def expand(self, word: Sequence[int], a: Mapping[int, int], order: str = "right") -> Vector:
        """``w ⊗ a`` in the basis; ``order`` picks where the word is split."""
        w = self._check_word(word)
        ha = self.S.H(a)
        out: Vector = {}
        if order == "right":
            prefix: dict[int, int] = {}
            for x in w:  # w = u x with u the prefix so far
                out = vsum(((1, out), (1, self.letter(x, a)), (1, self.bracket(prefix, {abs(x): 1 if x > 0 else -1}, ha))))
                prefix = vadd(prefix, {abs(x): 1 if x > 0 else -1})
            return out
        if order == "left":
            suffix: dict[int, int] = {}
            for x in reversed(w):  # w = x v with v the suffix so far
                out = vsum(((1, self.letter(x, a)), (1, out), (1, self.bracket({abs(x): 1 if x > 0 else -1}, suffix, ha))))
                suffix = vadd(suffix, {abs(x): 1 if x > 0 else -1})
            return out
        if order == "split":
            return self._expand_split(w, a)
        raise ValueError(f"unknown expansion order {order!r}")

    def _expand_split(self, w: Word, a: Mapping[int, int]) -> Vector:
        # divide and conquer at the midpoint
        if not w:
            return {}
        if len(w) == 1:
            return self.letter(w[0], a)
        mid = len(w) // 2
        u, v = w[:mid], w[mid:]
        return vsum(
            (
                (1, self._expand_split(u, a)),
                (1, self._expand_split(v, a)),
                (1, self.bracket(abelianization(u), abelianization(v), self.S.H(a))),
            )
        )

    def equal(self, x: Mapping[int, int], y: Mapping[int, int]) -> bool:
        return self.group.equal(x, y)


def evaluate_on_free(S: SquareGroup, n: int) -> FreeEvaluation:
    cache = S.__dict__.setdefault("_evaluations", {})
    ev = cache.get(n)
    if ev is None:
        ev = FreeEvaluation(S, n)
        cache[n] = ev
    return ev


def evaluate_word_morphism(S: SquareGroup, f: Morphism | Sequence[Sequence[int]], target: int | None = None) -> AbHom:
    """The induced map ``F(F_m) -> F(F_n)`` of a tuple of ``m`` words in ``n`` letters."""
    if not isinstance(f, Morphism):
        words = tuple(tuple(w) for w in f)
        n = target if target is not None else max((abs(x) for w in words for x in w), default=0)
        f = Morphism(len(words), n, words)
    for w in f.data:
        if reduce_word(w) != tuple(w):
            raise ValueError(f"word {w} is not freely reduced")
    src, tgt = evaluate_on_free(S, f.source), evaluate_on_free(S, f.target)
    images = []
    for i in range(1, f.source + 1):
        for k in range(src.ne):
            images.append(tgt.expand(f.data[i - 1], {k: 1}))
    for i, j in src.pairs:
        u, v = abelianization(f.data[i - 1]), abelianization(f.data[j - 1])
        for l in range(src.nee):
            images.append(tgt.bracket(u, v, {l: 1}))
    return AbHom(src.group, tgt.group, images)


class SquareGroupFunctor(Functor):
    """The quadratic functor ``F_n ↦ M_e^n ⊕ M_ee^{C(n,2)}`` on the free-group theory."""

    def __init__(self, S: SquareGroup) -> None:
        super().__init__(freegroup(), f"F[{S.name or 'S'}]")
        self.S = S

    def ngens(self, n: int) -> int:
        return evaluate_on_free(self.S, n).group.num_gens

    def relations(self, n: int):
        return evaluate_on_free(self.S, n).group.relation_basis

    def value(self, n: int) -> FpAbGroup:
        return evaluate_on_free(self.S, n).group

    def map(self, f: Morphism) -> AbHom:
        h = self._maps.get(f)
        if h is None:
            h = evaluate_word_morphism(self.S, f)
            self._maps[f] = h
        return h

    def image(self, f: Morphism, j: int) -> Vector:
        return self.map(f).images[j]


# ---------------------------------------------------------------------------
# checks used by the acceptance suite


def power_expansion_matches(S: SquareGroup, n: int) -> bool:
    """``x^n ⊗ a`` expands to ``[n]a = na + C(n, 2) PH(a)`` on every generator."""
    ev = evaluate_on_free(S, 1)
    closed = S.power_action(n)
    word = word_power((1,), n)
    return all(ev.equal(ev.expand(word, {k: 1}), closed.images[k]) for k in range(S.me.num_gens))


def hall_petrescu_check(n: int, family: Sequence[SquareGroup] | None = None) -> bool:
    """``h([n]) ≡ C(n, 2)[i_2, i_1]``: on words, and after expansion in every square group of the family."""
    if not 0 <= n <= 5:
        raise ValueError("n must lie in 0..5")
    dev = deviation_h(freegroup().power(n))
    if not dev.in_kernel or dev.t11 != binomial(n):
        return False
    for S in family if family is not None else default_family():
        ev = evaluate_on_free(S, 2)
        for k in range(S.me.num_gens):
            got = ev.expand(dev.word, {k: 1})
            via_commutator = vscale(ev.expand(BASIC_COMMUTATOR, {k: 1}), binomial(n))
            closed = vscale(ev.bracket_basis(1, 2, S.delta.images[k]), binomial(n))
            if not (ev.equal(got, via_commutator) and ev.equal(got, closed)):
                return False
    return True


def random_word(rng: random.Random, letters: int, max_len: int) -> Word:
    while True:
        w = reduce_word([rng.choice([1, -1]) * rng.randint(1, letters) for _ in range(rng.randint(0, max_len))])
        if len(w) <= max_len:
            return w


def confluence_check(S: SquareGroup, words: Iterable[Sequence[int]], letters: int = 3) -> tuple[int, Word | None]:
    """Left, right and split expansions agree; returns (count, first failing word)."""
    ev = evaluate_on_free(S, letters)
    count = 0
    for w in words:
        w = reduce_word(w)
        for k in range(S.me.num_gens):
            right = ev.expand(w, {k: 1}, "right")
            if not (ev.equal(right, ev.expand(w, {k: 1}, "left")) and ev.equal(right, ev.expand(w, {k: 1}, "split"))):
                return count, w
        count += 1
    return count, None


def functoriality_check(S: SquareGroup, samples: int = 30, seed: int = 0, max_len: int = 4) -> Morphism | None:
    """``F(g ∘ f) = F(g) F(f)`` on random word tuples; first failing ``f`` or ``None``."""
    th = freegroup()
    rng = random.Random(seed)
    for _ in range(samples):
        a, b, c = (rng.randint(1, 3) for _ in range(3))
        f = th.morphism(a, b, [random_word(rng, b, max_len) for _ in range(a)])
        g = th.morphism(b, c, [random_word(rng, c, max_len) for _ in range(b)])
        lhs = evaluate_word_morphism(S, th.compose(g, f))
        rhs = evaluate_word_morphism(S, g).compose(evaluate_word_morphism(S, f))
        if not lhs.equals(rhs):
            return f
    return None


def default_family() -> list[SquareGroup]:
    """The square groups exercised by the acceptance suite, plus two with ``Δ ≠ 0``."""
    return [
        square_group([0], [0], [[1]], [[2]], "(Z,Z,1,2)"),
        square_group([0], [0], [[0]], [[0]], "(Z,Z,0,0)"),
        square_group([2], [2], [[1]], [[0]], "(Z/2,Z/2,1,0)"),
        square_group([0], [0], [[1]], [[0]], "(Z,Z,1,0)"),
        identity_i3_square_group(),
    ]


def abelianization_square_group() -> SquareGroup:
    """``G ↦ G^ab`` as the square group ``(Z, 0)``."""
    z, zero = from_invariants([0]), from_invariants([])
    return SquareGroup(z, zero, AbHom.zero(z, zero), AbHom.zero(zero, z), "ab")


def identity_i3_square_group() -> SquareGroup:
    """``G ↦ I(G)/I^3(G)`` for the augmentation ideal, basis ``X, X^2`` and ``X_1X_2, X_2X_1``."""
    return square_group([0, 0], [0, 0], [[1, 1], [0, 1]], [[0, 0], [1, 1]], "I/I^3")


@dataclass
class IdentityBenchmark:
    t1: dict[int, tuple[int, ...]]
    t11_magnus_det: dict[tuple[int, int], int]
    t11_evaluated_rank: dict[tuple[int, int], int]

    @property
    def ok(self) -> bool:
        return (
            all(inv == (0,) * n for n, inv in self.t1.items())
            and all(abs(d) == 1 for d in self.t11_magnus_det.values())
            and all(r == n * m for (n, m), r in self.t11_evaluated_rank.items())
        )


def identity_functor_benchmark(max_rank: int = 3) -> IdentityBenchmark:
    """``T_1(Id)(F_n) ≅ Z^n`` and ``T_11 cr_2(Id)(F_n, F_m) ≅ Z^n ⊗ Z^m`` via word evaluation.

    ``T_1`` is taken of the abelianization functor.  For ``T_11 cr_2`` the basic
    commutators ``[x_k, y_l]`` in ``F_{n+m}`` are detected twice: by the
    unimodular matrix of Magnus coefficients ``X_i Y_j`` and by the rank of
    their images in the bracket summand of ``I/I^3``.
    """
    t1 = {n: T1(SquareGroupFunctor(abelianization_square_group())).value(n).invariants for n in range(1, max_rank + 1)}
    dets: dict[tuple[int, int], int] = {}
    ranks: dict[tuple[int, int], int] = {}
    i3 = identity_i3_square_group()
    for n in range(1, max_rank + 1):
        for m in range(1, max_rank + 1):
            comms = [commutator((k,), (n + l,)) for k in range(1, n + 1) for l in range(1, m + 1)]
            for w in comms:
                if delete_letters(w, range(1, n + 1)) or delete_letters(w, range(n + 1, n + m + 1)):
                    raise AssertionError("commutator left the cross-effect")
            rows = [[magnus_coefficient(w, i, n + j) for w in comms] for i in range(1, n + 1) for j in range(1, m + 1)]
            dets[(n, m)] = IntMatrix.from_rows(rows, len(comms)).determinant()
            ev = evaluate_on_free(i3, n + m)
            offset = (n + m) * ev.ne
            images = [{g - offset: c for g, c in ev.expand(w, {0: 1}).items() if g >= offset} for w in comms]
            if any(any(g < offset for g in ev.expand(w, {0: 1})) for w in comms):
                raise AssertionError("commutator has a linear component")
            span, _ = quotient(free(ev.group.num_gens - offset), images)
            ranks[(n, m)] = ev.group.num_gens - offset - span.rank
    return IdentityBenchmark(t1, dets, ranks)


__all__ = [
    "BASIC_COMMUTATOR",
    "CogroupQuadModule",
    "Deviation",
    "FreeEvaluation",
    "SQUARE_GROUP_SCHEMA",
    "SquareGroup",
    "SquareGroupFunctor",
    "abelianization",
    "check_cogroup_module",
    "check_square_group",
    "commutator",
    "confluence_check",
    "default_family",
    "deviation_h",
    "evaluate_on_free",
    "evaluate_word_morphism",
    "functoriality_check",
    "hall_petrescu_check",
    "identity_functor_benchmark",
    "identity_i3_square_group",
    "abelianization_square_group",
    "magnus_coefficient",
    "magnus_c12",
    "power_expansion_matches",
    "random_word",
    "square_group",
    "square_group_from_json",
    "square_group_to_cogroup_module",
    "t11_class",
    "word_power",
]
