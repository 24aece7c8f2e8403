"""Functors from a theory to abelian groups, evaluated lazily or tabulated.

A :class:`Functor` knows, for every rank ``n``, a generator count, the
relations among generators of ``F(E^{∨n})`` and the image of each generator
under ``F(f)``.  Values and maps are built from this on demand and cached.
Cross-effects, Taylorization quotients and bilinearizations are themselves
functors (or bifunctors) built on top of this interface, so every
construction composes with every other one.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import comb
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .abgroup import (
    AbHom,
    FpAbGroup,
    Vector,
    direct_sum,
    kernel,
    vadd,
    vshift,
    vsum,
)
from .theory import Morphism, Theory


class FunctorialityError(ValueError):
    """A tabulated action fails to respect identities or composition."""

    def __init__(self, message: str, witness: object = None) -> None:
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# functors


class Functor(ABC):
    """A functor ``theory -> Ab`` given on generators."""

    def __init__(self, theory: Theory, name: str = "") -> None:
        self.theory = theory
        self.name = name or type(self).__name__
        self._values: dict[int, FpAbGroup] = {}
        self._maps: dict[Morphism, AbHom] = {}

    @abstractmethod
    def ngens(self, n: int) -> int: ...

    def relations(self, n: int) -> Iterable[Vector]:
        return ()

    @abstractmethod
    def image(self, f: Morphism, j: int) -> Vector:
        """``F(f)`` applied to generator ``j`` of ``F(f.source)``."""

    def value(self, n: int) -> FpAbGroup:
        g = self._values.get(n)
        if g is None:
            g = FpAbGroup(self.ngens(n), self.relations(n), name=f"{self.name}({n})")
            self._values[n] = g
        return g

    def map(self, f: Morphism) -> AbHom:
        h = self._maps.get(f)
        if h is None:
            h = AbHom(self.value(f.source), self.value(f.target), [self.image(f, j) for j in range(self.ngens(f.source))], check=False)
            self._maps[f] = h
        return h

    def apply(self, f: Morphism, x: Mapping[int, int]) -> Vector:
        return vsum((c, self.image(f, j)) for j, c in x.items())

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class ZeroFunctor(Functor):
    def ngens(self, n: int) -> int:
        return 0

    def image(self, f: Morphism, j: int) -> Vector:
        raise IndexError("the zero functor has no generators")


class UFunctor(Functor):
    """``U_{E^{∨s}}``: the free abelian group on nonzero maps ``E^{∨s} -> X``.

    Maps act by postcomposition; the zero morphism is the group zero.
    """

    def __init__(self, theory: Theory, source: int = 1, name: str = "") -> None:
        if not theory.enumerable:
            raise NotImplementedError(f"U needs finite hom-sets; the {theory.kind} theory has none")
        super().__init__(theory, name or ("U" if source == 1 else f"U[{source}]"))
        self.source = source
        self._basis: dict[int, list[Morphism]] = {}
        self._index: dict[int, dict[tuple, int]] = {}
        self._compose_cache: dict[tuple[Morphism, tuple], tuple] = {}

    def basis(self, n: int) -> list[Morphism]:
        b = self._basis.get(n)
        if b is None:
            b = self.theory.nonzero_homs(self.source, n)
            self._basis[n] = b
            self._index[n] = {h.data: i for i, h in enumerate(b)}
        return b

    def index(self, h: Morphism) -> int | None:
        """Generator index of ``h``, ``None`` for the zero morphism."""
        self.basis(h.target)
        return self._index[h.target].get(h.data)

    def ngens(self, n: int) -> int:
        return len(self.basis(n))

    def _post(self, f: Morphism, part: tuple) -> tuple:
        # composition of f with one column block of a basis element, memoised
        key = (f, part)
        out = self._compose_cache.get(key)
        if out is None:
            out = self.theory.compose(f, Morphism(1, f.source, (part,))).data[0]
            self._compose_cache[key] = out
        return out

    def image(self, f: Morphism, j: int) -> Vector:
        h = self.basis(f.source)[j]
        data = tuple(self._post(f, part) for part in h.data)
        self.basis(f.target)
        i = self._index[f.target].get(data)
        return {} if i is None else {i: 1}

    def compose_basis(self, f: Morphism, h: Morphism) -> Vector:
        """``U(f)`` applied to the basis element ``h``."""
        i = self.index(h)
        return {} if i is None else self.image(f, i)

    def element(self, h: Morphism) -> Vector:
        """Basis vector of a morphism (empty for zero)."""
        i = self.index(h)
        return {} if i is None else {i: 1}

    def pre(self, g: Morphism, n: int) -> AbHom:
        """Precomposition ``U_{src}(X) -> U_{g.source}(X)`` by ``g : E^{∨a} -> E^{∨s}``.

        The result lands in the U-functor with source ``g.source``; it is
        returned as a map between the two value groups.
        """
        other = u_functor(self.theory, g.source)
        images = []
        for h in self.basis(n):
            images.append(other.element(self.theory.compose(h, g)))
        return AbHom(self.value(n), other.value(n), images, check=False)


_U_CACHE: dict[tuple[int, int], UFunctor] = {}


def u_functor(theory: Theory, source: int = 1) -> UFunctor:
    """Shared instance of ``U_{E^{∨source}}`` for a theory."""
    key = (id(theory), source)
    u = _U_CACHE.get(key)
    if u is None:
        u = UFunctor(theory, source)
        _U_CACHE[key] = u
    return u


class QuotientFunctor(Functor):
    """``F`` modulo extra relations, on the same generators."""

    def __init__(self, base: Functor, extra: Callable[[int], Iterable[Vector]], name: str) -> None:
        super().__init__(base.theory, name)
        self.base = base
        self._extra = extra

    def ngens(self, n: int) -> int:
        return self.base.ngens(n)

    def relations(self, n: int) -> Iterator[Vector]:
        yield from self.base.value(n).relation_basis
        yield from self._extra(n)

    def image(self, f: Morphism, j: int) -> Vector:
        return self.base.image(f, j)

    def projection(self, n: int) -> AbHom:
        """The quotient map ``F(n) -> F'(n)`` (identity on generators)."""
        return AbHom(self.base.value(n), self.value(n), [{i: 1} for i in range(self.ngens(n))], check=False)


def linearization_relations(F: Functor, n: int) -> Iterator[Vector]:
    """``(F(∇) - F(r_1) - F(r_2)) x`` for all generators ``x`` of ``F(X ∨ X)``."""
    th = F.theory
    fold = th.codiagonal(n, 2)
    r1 = th.summand_retraction((n, n), 1)
    r2 = th.summand_retraction((n, n), 2)
    for j in range(F.ngens(2 * n)):
        v = vsum(((1, F.image(fold, j)), (-1, F.image(r1, j)), (-1, F.image(r2, j))))
        if v:
            yield v


QUADRATIZATION_PATTERNS: tuple[tuple[tuple[int, int, int], int], ...] = (
    ((1, 1, 1), 1),
    ((1, 1, 0), -1),
    ((1, 0, 1), -1),
    ((0, 1, 1), -1),
    ((1, 0, 0), 1),
    ((0, 1, 0), 1),
    ((0, 0, 1), 1),
)


def quadratization_relations(F: Functor, n: int) -> Iterator[Vector]:
    """Seven-term alternating sums over all generators of ``F(X ∨ X ∨ X)``."""
    th = F.theory
    maps = [(th.block_sum(n, p), s) for p, s in QUADRATIZATION_PATTERNS]
    for j in range(F.ngens(3 * n)):
        v = vsum((s, F.image(f, j)) for f, s in maps)
        if v:
            yield v


def T1(F: Functor) -> QuotientFunctor:
    """Linearization ``T_1 F``."""
    return QuotientFunctor(F, lambda n: linearization_relations(F, n), f"T1({F.name})")


def T2(F: Functor) -> QuotientFunctor:
    """Quadratization ``T_2 F``."""
    return QuotientFunctor(F, lambda n: quadratization_relations(F, n), f"T2({F.name})")


class TensorFunctor(Functor):
    """Pointwise tensor product ``F ⊗ G``; generator ``(i, j)`` has index ``i * G.ngens + j``."""

    def __init__(self, F: Functor, G: Functor, name: str = "") -> None:
        super().__init__(F.theory, name or f"{F.name}⊗{G.name}")
        self.F, self.G = F, G

    def ngens(self, n: int) -> int:
        return self.F.ngens(n) * self.G.ngens(n)

    def relations(self, n: int) -> Iterator[Vector]:
        nf, ng = self.F.ngens(n), self.G.ngens(n)
        for r in self.F.value(n).relation_basis:
            for j in range(ng):
                yield {i * ng + j: c for i, c in r.items()}
        for s in self.G.value(n).relation_basis:
            for i in range(nf):
                yield {i * ng + j: c for j, c in s.items()}

    def image(self, f: Morphism, j: int) -> Vector:
        ng, mg = self.G.ngens(f.source), self.G.ngens(f.target)
        a = self.F.image(f, j // ng)
        b = self.G.image(f, j % ng)
        return {p * mg + q: c * d for p, c in a.items() for q, d in b.items()}


# ---------------------------------------------------------------------------
# bifunctors


class Bifunctor(ABC):
    """A functor of two variables, reduced in each."""

    def __init__(self, theory: Theory, name: str = "") -> None:
        self.theory = theory
        self.name = name or type(self).__name__
        self._values: dict[tuple[int, int], FpAbGroup] = {}
        self._maps: dict[tuple[Morphism, Morphism], AbHom] = {}

    @abstractmethod
    def ngens(self, n: int, m: int) -> int: ...

    def relations(self, n: int, m: int) -> Iterable[Vector]:
        return ()

    @abstractmethod
    def image(self, f: Morphism, g: Morphism, j: int) -> Vector: ...

    def value(self, n: int, m: int) -> FpAbGroup:
        key = (n, m)
        v = self._values.get(key)
        if v is None:
            v = FpAbGroup(self.ngens(n, m), self.relations(n, m), name=f"{self.name}({n},{m})")
            self._values[key] = v
        return v

    def map(self, f: Morphism, g: Morphism) -> AbHom:
        key = (f, g)
        h = self._maps.get(key)
        if h is None:
            h = AbHom(
                self.value(f.source, g.source),
                self.value(f.target, g.target),
                [self.image(f, g, j) for j in range(self.ngens(f.source, g.source))],
                check=False,
            )
            self._maps[key] = h
        return h

    def apply(self, f: Morphism, g: Morphism, x: Mapping[int, int]) -> Vector:
        return vsum((c, self.image(f, g, j)) for j, c in x.items())


class CrossEffect2(Bifunctor):
    """``cr_2 F(X, Y)`` as the joint kernel of ``F(r_1), F(r_2)`` on ``F(X ∨ Y)``."""

    def __init__(self, F: Functor) -> None:
        super().__init__(F.theory, f"cr2({F.name})")
        self.F = F
        self._incl: dict[tuple[int, int], AbHom] = {}

    def _build(self, n: int, m: int) -> tuple[FpAbGroup, AbHom]:
        key = (n, m)
        if key not in self._incl:
            F, th = self.F, self.F.theory
            r1 = th.summand_retraction((n, m), 1)
            r2 = th.summand_retraction((n, m), 2)
            target, _, _ = direct_sum([F.value(n), F.value(m)])
            off = F.ngens(n)
            h = AbHom(
                F.value(n + m),
                target,
                [vadd(F.image(r1, j), vshift(F.image(r2, j), off)) for j in range(F.ngens(n + m))],
                check=False,
            )
            k, incl = kernel(h)
            self._values[key] = k
            self._incl[key] = incl
        return self._values[key], self._incl[key]

    def value(self, n: int, m: int) -> FpAbGroup:
        return self._build(n, m)[0]

    def inclusion(self, n: int, m: int) -> AbHom:
        """``ι : cr_2 F(X, Y) -> F(X ∨ Y)``."""
        return self._build(n, m)[1]

    def ngens(self, n: int, m: int) -> int:
        return self.value(n, m).num_gens

    def image(self, f: Morphism, g: Morphism, j: int) -> Vector:
        th = self.theory
        x = self.inclusion(f.source, g.source).images[j]
        y = self.F.apply(th.coproduct_map([f, g]), x)
        out = self.inclusion(f.target, g.target).lift(y)
        if out is None:
            raise FunctorialityError("image of a cross-effect element left the cross-effect", (f, g, j))
        return out

    def retraction(self, n: int, m: int) -> AbHom:
        """``ρ : F(X ∨ Y) -> cr_2 F(X, Y)``, ``ι ρ = 1 - i_1 r_1 - i_2 r_2``."""
        th, F = self.theory, self.F
        incl = self.inclusion(n, m)
        e1 = th.compose(th.summand_inclusion((n, m), 1), th.summand_retraction((n, m), 1))
        e2 = th.compose(th.summand_inclusion((n, m), 2), th.summand_retraction((n, m), 2))
        images = []
        for j in range(F.ngens(n + m)):
            y = vsum(((1, {j: 1}), (-1, F.image(e1, j)), (-1, F.image(e2, j))))
            x = incl.lift(y)
            if x is None:
                raise FunctorialityError("projection onto the cross-effect failed", j)
            images.append(x)
        return AbHom(F.value(n + m), self.value(n, m), images, check=False)


class CrossEffect2Quotient(Bifunctor):
    """``cr_2 F(X, Y)`` as ``F(X ∨ Y) / (i_1 F(X) + i_2 F(Y))``."""

    def __init__(self, F: Functor) -> None:
        super().__init__(F.theory, f"cr2q({F.name})")
        self.F = F

    def ngens(self, n: int, m: int) -> int:
        return self.F.ngens(n + m)

    def relations(self, n: int, m: int) -> Iterator[Vector]:
        th, F = self.theory, self.F
        yield from F.value(n + m).relation_basis
        i1 = th.summand_inclusion((n, m), 1)
        i2 = th.summand_inclusion((n, m), 2)
        for j in range(F.ngens(n)):
            yield F.image(i1, j)
        for j in range(F.ngens(m)):
            yield F.image(i2, j)

    def image(self, f: Morphism, g: Morphism, j: int) -> Vector:
        return self.F.image(self.theory.coproduct_map([f, g]), j)


def bilinearization_relations(B: Bifunctor, n: int, m: int) -> Iterator[Vector]:
    """Linearization relations of ``B`` in each variable separately."""
    th = B.theory
    idn, idm = th.identity(n), th.identity(m)
    fold_n, fold_m = th.codiagonal(n, 2), th.codiagonal(m, 2)
    r1n, r2n = th.summand_retraction((n, n), 1), th.summand_retraction((n, n), 2)
    r1m, r2m = th.summand_retraction((m, m), 1), th.summand_retraction((m, m), 2)
    for j in range(B.ngens(2 * n, m)):
        v = vsum(((1, B.image(fold_n, idm, j)), (-1, B.image(r1n, idm, j)), (-1, B.image(r2n, idm, j))))
        if v:
            yield v
    for j in range(B.ngens(n, 2 * m)):
        v = vsum(((1, B.image(idn, fold_m, j)), (-1, B.image(idn, r1m, j)), (-1, B.image(idn, r2m, j))))
        if v:
            yield v


class T11(Bifunctor):
    """Bilinearization ``T_{11} B`` of a bireduced bifunctor."""

    def __init__(self, B: Bifunctor) -> None:
        super().__init__(B.theory, f"T11({B.name})")
        self.B = B

    def ngens(self, n: int, m: int) -> int:
        return self.B.ngens(n, m)

    def relations(self, n: int, m: int) -> Iterator[Vector]:
        yield from self.B.value(n, m).relation_basis
        yield from bilinearization_relations(self.B, n, m)

    def image(self, f: Morphism, g: Morphism, j: int) -> Vector:
        return self.B.image(f, g, j)

    def projection(self, n: int, m: int) -> AbHom:
        return AbHom(self.B.value(n, m), self.value(n, m), [{i: 1} for i in range(self.ngens(n, m))], check=False)


class BilinearCrossEffect(Bifunctor):
    """``T_{11} cr_2 F(X, Y)`` directly as a quotient of ``F(X ∨ Y)``.

    Relations: ``i_1 F(X)``, ``i_2 F(Y)`` and the images of
    ``F(∇ ∨ 1) - F(r_1 ∨ 1) - F(r_2 ∨ 1)`` on ``F(X ∨ X ∨ Y)`` and of the
    mirrored map on ``F(X ∨ Y ∨ Y)``.
    """

    def __init__(self, F: Functor) -> None:
        super().__init__(F.theory, f"T11cr2({F.name})")
        self.F = F

    def ngens(self, n: int, m: int) -> int:
        return self.F.ngens(n + m)

    def relations(self, n: int, m: int) -> Iterator[Vector]:
        th, F = self.theory, self.F
        yield from CrossEffect2Quotient(F).relations(n, m)
        idn, idm = th.identity(n), th.identity(m)
        fold_n, fold_m = th.codiagonal(n, 2), th.codiagonal(m, 2)
        r1n, r2n = th.summand_retraction((n, n), 1), th.summand_retraction((n, n), 2)
        r1m, r2m = th.summand_retraction((m, m), 1), th.summand_retraction((m, m), 2)
        a = [(1, th.coproduct_map([fold_n, idm])), (-1, th.coproduct_map([r1n, idm])), (-1, th.coproduct_map([r2n, idm]))]
        for j in range(F.ngens(2 * n + m)):
            v = vsum((s, F.image(f, j)) for s, f in a)
            if v:
                yield v
        b = [(1, th.coproduct_map([idn, fold_m])), (-1, th.coproduct_map([idn, r1m])), (-1, th.coproduct_map([idn, r2m]))]
        for j in range(F.ngens(n + 2 * m)):
            v = vsum((s, F.image(f, j)) for s, f in b)
            if v:
                yield v

    def image(self, f: Morphism, g: Morphism, j: int) -> Vector:
        return self.F.image(self.theory.coproduct_map([f, g]), j)


class DiagonalFunctor(Functor):
    """``X -> B(X, X)``."""

    def __init__(self, B: Bifunctor) -> None:
        super().__init__(B.theory, f"Δ{B.name}")
        self.B = B

    def ngens(self, n: int) -> int:
        return self.B.ngens(n, n)

    def value(self, n: int) -> FpAbGroup:
        return self.B.value(n, n)

    def image(self, f: Morphism, j: int) -> Vector:
        return self.B.image(f, f, j)


# ---------------------------------------------------------------------------
# cross-effects of higher order and splittings


@dataclass
class CrossEffectTable:
    """``cr_k F`` at a tuple of objects, with its inclusion into ``F(X_1 ∨ ... ∨ X_k)``."""

    k: int
    ranks: tuple[int, ...]
    group: FpAbGroup
    inclusion: AbHom


def deletion_map(theory: Theory, ranks: Sequence[int], l: int) -> Morphism:
    """``X_1 ∨ ... ∨ X_k -> X_1 ∨ ... (without X_l) ... ∨ X_k`` killing ``X_l``."""
    rest = [r for i, r in enumerate(ranks) if i != l]
    parts = []
    pos = 0
    for i, r in enumerate(ranks):
        if i == l:
            parts.append(theory.zero(r, sum(rest)))
        else:
            parts.append(theory.summand_inclusion(rest, pos + 1))
            pos += 1
    return theory.copair(parts, target=sum(rest))


def cross_effect(F: Functor, k: int, ranks: Sequence[int] | None = None) -> CrossEffectTable:
    """``cr_k F(X_1, ..., X_k)`` as the joint kernel of the ``k`` deletion maps."""
    if k < 1:
        raise ValueError("cross-effects start at k = 1")
    ranks = tuple(ranks) if ranks is not None else (1,) * k
    if len(ranks) != k:
        raise ValueError("one rank per argument is required")
    th = F.theory
    total = sum(ranks)
    targets = []
    maps = []
    for l in range(k):
        d = deletion_map(th, ranks, l)
        maps.append(d)
        targets.append(F.value(total - ranks[l]))
    s, _, _ = direct_sum(targets)
    offsets = list(itertools.accumulate([0] + [t.num_gens for t in targets]))[:-1]
    images = []
    for j in range(F.ngens(total)):
        images.append(vsum((1, vshift(F.image(d, j), off)) for d, off in zip(maps, offsets)))
    h = AbHom(F.value(total), s, images, check=False)
    grp, incl = kernel(h)
    return CrossEffectTable(k, ranks, grp, incl)


def is_polynomial_of_degree(F: Functor, n: int) -> bool:
    """``cr_{n+1} F(E, ..., E) = 0``."""
    return cross_effect(F, n + 1).group.is_trivial()


def degree(F: Functor, limit: int = 3) -> int | None:
    """Smallest ``n <= limit`` with ``F`` polynomial of degree ``n``."""
    for n in range(limit + 1):
        if is_polynomial_of_degree(F, n):
            return n
    return None


@dataclass
class CrossEffectSplitting:
    """Splitting ``F(X ∨ Y) = F(X) ⊕ F(Y) ⊕ cr_2 F(X, Y)``."""

    group: FpAbGroup
    iota: AbHom
    rho: AbHom
    i1: AbHom
    i2: AbHom
    r1: AbHom
    r2: AbHom

    def verify(self) -> bool:
        whole = self.iota.codomain
        total = self.iota.compose(self.rho) + self.i1.compose(self.r1) + self.i2.compose(self.r2)
        return (
            total.equals(AbHom.identity(whole))
            and self.rho.compose(self.iota).equals(AbHom.identity(self.group))
            and self.iota.is_injective()
        )


def cross_effect_splitting(F: Functor, n: int = 1, m: int = 1) -> CrossEffectSplitting:
    th = F.theory
    cr = CrossEffect2(F)
    return CrossEffectSplitting(
        group=cr.value(n, m),
        iota=cr.inclusion(n, m),
        rho=cr.retraction(n, m),
        i1=F.map(th.summand_inclusion((n, m), 1)),
        i2=F.map(th.summand_inclusion((n, m), 2)),
        r1=F.map(th.summand_retraction((n, m), 1)),
        r2=F.map(th.summand_retraction((n, m), 2)),
    )


def pair_retraction(theory: Theory, n: int, i: int, j: int) -> Morphism:
    """``E^{∨n} -> E ∨ E`` sending summand ``i`` to the first and ``j`` to the second copy."""
    parts = []
    for k in range(1, n + 1):
        if k == i:
            parts.append(theory.injection(1, 2))
        elif k == j:
            parts.append(theory.injection(2, 2))
        else:
            parts.append(theory.zero(1, 2))
    return theory.copair(parts, target=2)


def pair_inclusion(theory: Theory, n: int, i: int, j: int) -> Morphism:
    """``E ∨ E -> E^{∨n}`` onto summands ``i`` and ``j``."""
    return theory.copair([theory.injection(i, n), theory.injection(j, n)])


@dataclass
class DecompositionIso:
    """``F(E^{∨n}) ≅ F(E)^n ⊕ cr_2 F(E, E)^{C(n, 2)}`` with explicit inverse."""

    n: int
    forward: AbHom
    backward: AbHom
    pairs: list[tuple[int, int]]

    def verify(self) -> bool:
        return self.forward.compose(self.backward).equals(AbHom.identity(self.backward.domain)) and self.backward.compose(
            self.forward
        ).equals(AbHom.identity(self.forward.domain))


def decomposition_iso(F: Functor, n: int) -> DecompositionIso:
    th = F.theory
    cr = CrossEffect2(F)
    iota, rho = cr.inclusion(1, 1), cr.retraction(1, 1)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    parts = [F.value(1)] * n + [cr.value(1, 1)] * len(pairs)
    s, inj, proj = direct_sum(parts)
    fwd_parts: list[AbHom] = []
    bwd_parts: list[AbHom] = []
    for i in range(1, n + 1):
        fwd_parts.append(F.map(th.retraction(i, n)))
        bwd_parts.append(F.map(th.injection(i, n)))
    for i, j in pairs:
        fwd_parts.append(rho.compose(F.map(pair_retraction(th, n, i, j))))
        bwd_parts.append(F.map(pair_inclusion(th, n, i, j)).compose(iota))
    forward = AbHom.zero(F.value(n), s)
    backward = AbHom.zero(s, F.value(n))
    for k, (fp, bp) in enumerate(zip(fwd_parts, bwd_parts)):
        forward = forward + inj[k].compose(fp)
        backward = backward + bp.compose(proj[k])
    return DecompositionIso(n, forward, backward, pairs)


@dataclass
class ComparisonResult:
    """Two computations of ``T_{11}(cr_2 F)(E, E) ≅ cr_2(T_2 F)(E, E)`` and the map between them."""

    bilinearized: FpAbGroup
    quadratized: FpAbGroup
    comparison: AbHom
    inverse: AbHom | None
    direct: FpAbGroup
    direct_comparison: AbHom
    is_iso: bool


def t11_cr2_comparison(F: Functor) -> ComparisonResult:
    """Compare ``T_{11} cr_2 F`` and ``cr_2 T_2 F`` at ``(E, E)``.

    The map is induced by ``t_2`` on the kernel-form cross-effect; it must
    factor through ``t_{11}``, which :class:`AbHom` construction checks.
    A second route compares the quotient presentations on ``F(E ∨ E)``.
    """
    cr = CrossEffect2(F)
    lhs_b = T11(cr)
    lhs = lhs_b.value(1, 1)
    t2f = T2(F)
    cr_t2 = CrossEffect2(t2f)
    rhs = cr_t2.value(1, 1)
    incl_rhs = cr_t2.inclusion(1, 1)
    images = []
    for x in cr.inclusion(1, 1).images:
        y = incl_rhs.lift(x)
        if y is None:
            raise FunctorialityError("t2 does not map the cross-effect into the cross-effect", x)
        images.append(y)
    comp = AbHom(lhs, rhs, images)
    iso = comp.is_iso()
    inverse = comp.inverse() if iso else None
    direct = BilinearCrossEffect(F).value(1, 1)
    quot = CrossEffect2Quotient(t2f).value(1, 1)
    direct_comp = AbHom(direct, quot, [{i: 1} for i in range(direct.num_gens)])
    return ComparisonResult(lhs, rhs, comp, inverse, direct, direct_comp, iso and direct_comp.is_iso())


# ---------------------------------------------------------------------------
# tabulation


def morphisms_up_to(theory: Theory, N: int) -> list[Morphism]:
    return [f for n in range(N + 1) for m in range(N + 1) for f in theory.homs(n, m)]


_GENERATORS: dict[tuple[int, int], list[Morphism]] = {}


def generating_morphisms(theory: Theory, N: int) -> list[Morphism]:
    """A set ``S`` of morphisms whose composites (with identities) give every morphism of rank ``<= N``.

    Built greedily: a morphism joins ``S`` only when it is not already a
    composite of earlier members.  Closure is tracked under left
    composition with ``S``, which suffices since every word in ``S`` is a
    left product applied to an identity.
    """
    key = (id(theory), N)
    if key in _GENERATORS:
        return _GENERATORS[key]
    allm = morphisms_up_to(theory, N)
    allm.sort(key=lambda f: (max(f.source, f.target), f.source + f.target, f))
    closure = {theory.identity(n) for n in range(N + 1)}
    gens: list[Morphism] = []
    by_source: dict[int, list[Morphism]] = {}

    def absorb(frontier: list[Morphism]) -> None:
        while frontier:
            nxt = []
            for c in frontier:
                for s in by_source.get(c.target, ()):
                    d = theory.compose(s, c)
                    if d not in closure:
                        closure.add(d)
                        nxt.append(d)
            frontier = nxt

    for f in allm:
        if f in closure:
            continue
        gens.append(f)
        by_source.setdefault(f.source, []).append(f)
        closure.add(f)
        frontier = [f] + [theory.compose(f, c) for c in list(closure) if c.target == f.source]
        fresh = []
        for d in frontier:
            if d is f or d not in closure:
                closure.add(d)
                fresh.append(d)
        absorb(fresh)
    _GENERATORS[key] = gens
    return gens


EXHAUSTIVE_PAIR_BUDGET = 20000


def composable_pair_count(theory: Theory, N: int) -> int:
    counts = {(n, m): sum(1 for _ in theory.homs(n, m)) for n in range(N + 1) for m in range(N + 1)}
    return sum(counts[(a, b)] * counts[(b, c)] for a in range(N + 1) for b in range(N + 1) for c in range(N + 1))


def verify_functoriality(F: Functor, N: int, exhaustive: bool | None = None) -> str:
    """Check ``F(1) = 1`` and ``F(g f) = F(g) F(f)`` through rank ``N``.

    Every composable pair is checked when their number is within
    :data:`EXHAUSTIVE_PAIR_BUDGET` (or ``exhaustive`` is true).  Otherwise
    composites ``s ∘ f`` are checked for ``s`` in a generating set and all
    ``f``; by induction on the length of a factorization into generators
    this implies the statement for every pair.  Returns the mode used.
    """
    th = F.theory
    for n in range(N + 1):
        if not F.map(th.identity(n)).equals(AbHom.identity(F.value(n))):
            raise FunctorialityError("identity not preserved", n)
    if exhaustive is None:
        exhaustive = composable_pair_count(th, N) <= EXHAUSTIVE_PAIR_BUDGET
    by_source: dict[int, list[Morphism]] = {}
    allm = morphisms_up_to(th, N)
    for f in allm:
        by_source.setdefault(f.source, []).append(f)
    left = allm if exhaustive else generating_morphisms(th, N)
    for g in left:
        Fg = F.map(g)
        for f in [f for n in range(N + 1) for f in by_source.get(n, ()) if f.target == g.source]:
            lhs = F.map(th.compose(g, f))
            rhs = Fg.compose(F.map(f))
            if lhs.images != rhs.images and not lhs.equals(rhs):
                raise FunctorialityError("composition not preserved", (g, f))
    return "exhaustive" if exhaustive else "generators"


class TabulatedFunctor(Functor):
    """Values through rank ``N`` and the action of every enumerated morphism."""

    def __init__(
        self,
        theory: Theory,
        max_rank: int,
        values: Mapping[int, FpAbGroup],
        maps: Mapping[Morphism, AbHom],
        name: str = "",
        verify: bool = True,
    ) -> None:
        super().__init__(theory, name or "tabulated")
        self.max_rank = max_rank
        self._values = dict(values)
        self._maps = dict(maps)
        self.reduced = values[0].is_trivial() if 0 in values else True
        self.verification = verify_functoriality(self, max_rank) if verify else "skipped"

    def _check_rank(self, n: int) -> None:
        if n > self.max_rank:
            raise ValueError(f"functor tabulated only through rank {self.max_rank}")

    def value(self, n: int) -> FpAbGroup:
        self._check_rank(n)
        return self._values[n]

    def ngens(self, n: int) -> int:
        return self.value(n).num_gens

    def map(self, f: Morphism) -> AbHom:
        self._check_rank(max(f.source, f.target))
        return self._maps[f]

    def image(self, f: Morphism, j: int) -> Vector:
        return self.map(f).images[j]

    def to_json(self) -> dict:
        return {
            "theory": self.theory.descriptor(),
            "max_rank": self.max_rank,
            "name": self.name,
            "values": {
                str(n): {"gens": g.num_gens, "relations": [sorted(r.items()) for r in g.relation_basis], "invariants": list(g.invariants)}
                for n, g in sorted(self._values.items())
            },
            "maps": [{"morphism": f.to_json(), "images": [sorted(v.items()) for v in h.images]} for f, h in sorted(self._maps.items())],
        }

    @classmethod
    def from_json(cls, obj: dict, theory: Theory, verify: bool = True) -> TabulatedFunctor:
        values = {
            int(n): FpAbGroup(v["gens"], [dict(map(tuple, r)) for r in v["relations"]]) for n, v in obj["values"].items()
        }
        maps = {}
        for entry in obj["maps"]:
            f = theory.morphism_from_json(entry["morphism"])
            maps[f] = AbHom(values[f.source], values[f.target], [dict(map(tuple, im)) for im in entry["images"]])
        return cls(theory, int(obj["max_rank"]), values, maps, obj.get("name", ""), verify)


def tabulate(F: Functor, N: int = 3, verify: bool = True, name: str = "") -> TabulatedFunctor:
    th = F.theory
    values = {n: F.value(n) for n in range(N + 1)}
    maps = {f: F.map(f) for f in morphisms_up_to(th, N)}
    return TabulatedFunctor(th, N, values, maps, name or F.name, verify)


def tabulate_u(theory: Theory, N: int = 3) -> TabulatedFunctor:
    return tabulate(u_functor(theory), N, name="U")


def tabulate_tensor_square(theory: Theory, N: int = 3) -> TabulatedFunctor:
    u = u_functor(theory)
    return tabulate(TensorFunctor(u, u), N, name="U⊗U")


def tabulate_t2u(theory: Theory, N: int = 3) -> TabulatedFunctor:
    return tabulate(T2(u_functor(theory)), N, name="T2U")


# ---------------------------------------------------------------------------
# natural transformations


def check_natural(
    eta: Callable[[int], AbHom], F: Functor, G: Functor, N: int, morphisms: Iterable[Morphism] | None = None
) -> tuple[Morphism, int] | None:
    """First failure ``(f, generator)`` of ``G(f) η = η F(f)``, or ``None``."""
    th = F.theory
    for f in morphisms if morphisms is not None else morphisms_up_to(th, N):
        lhs = G.map(f).compose(eta(f.source))
        rhs = eta(f.target).compose(F.map(f))
        j = lhs.first_difference(rhs)
        if j is not None:
            return f, j
    return None


def induced_cr2_map(F: Functor, G: Functor, eta2: AbHom) -> AbHom:
    """``cr_2 F(E, E) -> cr_2 G(E, E)`` induced by a component ``F(E ∨ E) -> G(E ∨ E)``."""
    crf, crg = CrossEffect2(F), CrossEffect2(G)
    images = []
    for x in crf.inclusion(1, 1).images:
        y = crg.inclusion(1, 1).lift(eta2(x))
        if y is None:
            raise FunctorialityError("transformation does not preserve cross-effects", x)
        images.append(y)
    return AbHom(crf.value(1, 1), crg.value(1, 1), images)


def binomial(n: int, k: int = 2) -> int:
    """``C(n, k)`` extended to negative ``n`` by the polynomial formula."""
    if n >= 0:
        return comb(n, k)
    out = 1
    for i in range(k):
        out *= n - i
    for i in range(1, k + 1):
        out //= i
    return out


__all__ = [
    "Bifunctor",
    "BilinearCrossEffect",
    "ComparisonResult",
    "CrossEffect2",
    "CrossEffect2Quotient",
    "CrossEffectSplitting",
    "CrossEffectTable",
    "DecompositionIso",
    "DiagonalFunctor",
    "Functor",
    "FunctorialityError",
    "QuotientFunctor",
    "T1",
    "T11",
    "T2",
    "TabulatedFunctor",
    "TensorFunctor",
    "UFunctor",
    "ZeroFunctor",
    "binomial",
    "check_natural",
    "cross_effect",
    "cross_effect_splitting",
    "decomposition_iso",
    "degree",
    "generating_morphisms",
    "induced_cr2_map",
    "is_polynomial_of_degree",
    "t11_cr2_comparison",
    "tabulate",
    "tabulate_t2u",
    "tabulate_tensor_square",
    "tabulate_u",
    "u_functor",
    "verify_functoriality",
]
