"""Algebraic theories: categories of finitely generated free objects.

Objects are natural numbers ``n`` standing for the ``n``-fold coproduct
``E ∨ ... ∨ E`` of the generating object.  Three concrete theories are
available:

* :class:`GammaTheory` - pointed finite sets, a map ``n -> m`` sends each
  point to a point of ``{0, ..., m}`` with ``0`` the base point;
* :class:`FreeModTheory` - free ``Z/k``-modules, a map is a ``m x n`` matrix
  stored column by column;
* :class:`FreeGroupTheory` - free groups of finite rank, a map ``n -> m`` is
  a tuple of ``n`` reduced words in ``m`` letters.

>>> g = GammaTheory()
>>> f = g.morphism(2, 1, (1, 1))
>>> g.compose(g.retraction(1, 2), g.injection(1, 2)) == g.identity(1)
True
>>> f == g.fold(2)
True
"""

from __future__ import annotations

import itertools
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Morphism:
    """A morphism ``source -> target``; ``data`` is a canonical payload."""

    source: int
    target: int
    data: tuple

    def to_json(self) -> list:
        return [self.source, self.target, _jsonable(self.data)]


def _jsonable(x: Any) -> Any:
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _check_index(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"summand index {k} out of range 1..{n}")


class Theory(ABC):
    """Interface shared by all theories."""

    kind: str = ""
    enumerable: bool = True

    # -- primitive operations ----------------------------------------------

    @abstractmethod
    def morphism(self, source: int, target: int, data: Any) -> Morphism:
        """Validate and normalise a payload."""

    @abstractmethod
    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """``g ∘ f``."""

    @abstractmethod
    def identity(self, n: int) -> Morphism: ...

    @abstractmethod
    def zero(self, n: int, m: int) -> Morphism: ...

    @abstractmethod
    def copair(self, parts: Sequence[Morphism], target: int | None = None) -> Morphism:
        """The map ``X_1 ∨ ... ∨ X_k -> Y`` restricting to ``parts[i]`` on ``X_i``."""

    @abstractmethod
    def components(self, f: Morphism, ranks: Sequence[int]) -> list[Morphism]:
        """Inverse of :meth:`copair`."""

    @abstractmethod
    def summand_inclusion(self, ranks: Sequence[int], k: int) -> Morphism:
        """Coproduct injection of the ``k``-th summand (1-based)."""

    @abstractmethod
    def summand_retraction(self, ranks: Sequence[int], k: int) -> Morphism:
        """Projection onto the ``k``-th summand, zero on the others (1-based)."""

    def homs(self, n: int, m: int) -> Iterator[Morphism]:
        raise NotImplementedError(f"hom-sets of the {self.kind} theory are not enumerable")

    @abstractmethod
    def descriptor(self) -> dict: ...

    # -- derived operations ------------------------------------------------

    def is_zero(self, f: Morphism) -> bool:
        return f == self.zero(f.source, f.target)

    def injection(self, k: int, n: int) -> Morphism:
        """``i_k : E -> E^{∨n}``."""
        _check_index(k, n)
        return self.summand_inclusion((1,) * n, k)

    def retraction(self, k: int, n: int) -> Morphism:
        """``r_k : E^{∨n} -> E``."""
        _check_index(k, n)
        return self.summand_retraction((1,) * n, k)

    def from_components(self, parts: Sequence[Morphism]) -> Morphism:
        """Copair of maps ``E -> X`` into a map ``E^{∨n} -> X``."""
        if any(p.source != 1 for p in parts):
            raise ValueError("components must have source E")
        return self.copair(parts)

    def decompose(self, f: Morphism) -> list[Morphism]:
        """Restrictions ``f ∘ i_k`` of a map out of ``E^{∨n}``."""
        return self.components(f, (1,) * f.source)

    def nonzero_homs(self, n: int, m: int) -> list[Morphism]:
        return [f for f in self.homs(n, m) if not self.is_zero(f)]

    def coproduct_map(self, fs: Sequence[Morphism]) -> Morphism:
        """``f_1 ∨ ... ∨ f_k``."""
        targets = [f.target for f in fs]
        return self.copair([self.compose(self.summand_inclusion(targets, i + 1), f) for i, f in enumerate(fs)])

    def codiagonal(self, rank: int, copies: int) -> Morphism:
        """Fold map ``X ∨ ... ∨ X -> X`` for ``X`` of the given rank."""
        return self.copair([self.identity(rank)] * copies, target=rank)

    def fold(self, n: int = 2) -> Morphism:
        """``∇ : E^{∨n} -> E``."""
        return self.codiagonal(1, n)

    def switch(self, r1: int = 1, r2: int | None = None) -> Morphism:
        """Coproduct symmetry ``X ∨ Y -> Y ∨ X``."""
        r2 = r1 if r2 is None else r2
        return self.copair([self.summand_inclusion((r2, r1), 2), self.summand_inclusion((r2, r1), 1)])

    def block_sum(self, rank: int, pattern: Sequence[int]) -> Morphism:
        """Copair of identities and zeros ``X^{∨k} -> X`` following a 0/1 pattern."""
        return self.copair([self.identity(rank) if p else self.zero(rank, rank) for p in pattern], target=rank)

    def compose_all(self, *fs: Morphism) -> Morphism:
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def morphism_from_json(self, obj: Any) -> Morphism:
        source, target, data = obj
        return self.morphism(int(source), int(target), data)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {json.dumps(self.descriptor(), sort_keys=True)}>"


# ---------------------------------------------------------------------------


class GammaTheory(Theory):
    """Finite pointed sets ``{0, 1, ..., n}`` with base point ``0``."""

    kind = "gamma"

    def morphism(self, source: int, target: int, data: Any) -> Morphism:
        data = tuple(int(x) for x in data)
        if len(data) != source or any(not 0 <= x <= target for x in data):
            raise ValueError(f"invalid pointed map {data} : {source} -> {target}")
        return Morphism(source, target, data)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise ValueError("morphisms are not composable")
        gd = g.data
        return Morphism(f.source, g.target, tuple(gd[x - 1] if x else 0 for x in f.data))

    def identity(self, n: int) -> Morphism:
        return Morphism(n, n, tuple(range(1, n + 1)))

    def zero(self, n: int, m: int) -> Morphism:
        return Morphism(n, m, (0,) * n)

    def copair(self, parts: Sequence[Morphism], target: int | None = None) -> Morphism:
        target = parts[0].target if parts else (target or 0)
        if any(p.target != target for p in parts):
            raise ValueError("copair parts must share a target")
        data = tuple(x for p in parts for x in p.data)
        return Morphism(len(data), target, data)

    def components(self, f: Morphism, ranks: Sequence[int]) -> list[Morphism]:
        out, off = [], 0
        for r in ranks:
            out.append(Morphism(r, f.target, f.data[off : off + r]))
            off += r
        return out

    def summand_inclusion(self, ranks: Sequence[int], k: int) -> Morphism:
        off, total = sum(ranks[: k - 1]), sum(ranks)
        return Morphism(ranks[k - 1], total, tuple(off + i for i in range(1, ranks[k - 1] + 1)))

    def summand_retraction(self, ranks: Sequence[int], k: int) -> Morphism:
        off, total, r = sum(ranks[: k - 1]), sum(ranks), ranks[k - 1]
        return Morphism(total, r, tuple(j - off if off < j <= off + r else 0 for j in range(1, total + 1)))

    def homs(self, n: int, m: int) -> Iterator[Morphism]:
        for data in itertools.product(range(m + 1), repeat=n):
            yield Morphism(n, m, data)

    def descriptor(self) -> dict:
        return {"kind": "gamma"}


class FreeModTheory(Theory):
    """Free ``Z/k``-modules; ``data`` holds the image columns of the basis."""

    kind = "freemod"

    def __init__(self, modulus: int) -> None:
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.modulus = modulus

    def morphism(self, source: int, target: int, data: Any) -> Morphism:
        cols = tuple(tuple(int(x) % self.modulus for x in c) for c in data)
        if len(cols) != source or any(len(c) != target for c in cols):
            raise ValueError(f"invalid matrix columns {data} : {source} -> {target}")
        return Morphism(source, target, cols)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise ValueError("morphisms are not composable")
        k, m = self.modulus, g.target
        gcols = g.data
        out = []
        for col in f.data:
            acc = [0] * m
            for i, c in enumerate(col):
                if c:
                    for r, x in enumerate(gcols[i]):
                        if x:
                            acc[r] += c * x
            out.append(tuple(x % k for x in acc))
        return Morphism(f.source, m, tuple(out))

    def identity(self, n: int) -> Morphism:
        return Morphism(n, n, tuple(tuple(int(i == j) for i in range(n)) for j in range(n)))

    def zero(self, n: int, m: int) -> Morphism:
        return Morphism(n, m, ((0,) * m,) * n)

    def copair(self, parts: Sequence[Morphism], target: int | None = None) -> Morphism:
        target = parts[0].target if parts else (target or 0)
        if any(p.target != target for p in parts):
            raise ValueError("copair parts must share a target")
        data = tuple(c for p in parts for c in p.data)
        return Morphism(len(data), target, data)

    def components(self, f: Morphism, ranks: Sequence[int]) -> list[Morphism]:
        out, off = [], 0
        for r in ranks:
            out.append(Morphism(r, f.target, f.data[off : off + r]))
            off += r
        return out

    def summand_inclusion(self, ranks: Sequence[int], k: int) -> Morphism:
        off, total = sum(ranks[: k - 1]), sum(ranks)
        cols = tuple(tuple(int(r == off + i) for r in range(total)) for i in range(ranks[k - 1]))
        return Morphism(ranks[k - 1], total, cols)

    def summand_retraction(self, ranks: Sequence[int], k: int) -> Morphism:
        off, total, n = sum(ranks[: k - 1]), sum(ranks), ranks[k - 1]
        cols = tuple(tuple(int(i == j - off) for i in range(n)) if off <= j < off + n else (0,) * n for j in range(total))
        return Morphism(total, n, cols)

    def homs(self, n: int, m: int) -> Iterator[Morphism]:
        columns = list(itertools.product(range(self.modulus), repeat=m))
        for data in itertools.product(columns, repeat=n):
            yield Morphism(n, m, data)

    def descriptor(self) -> dict:
        return {"kind": "freemod", "modulus": self.modulus}


def reduce_word(word: Sequence[int]) -> tuple[int, ...]:
    """Free reduction of a word of signed 1-based letters."""
    out: list[int] = []
    for x in word:
        if not x:
            raise ValueError("letters are non-zero integers")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(word))


class FreeGroupTheory(Theory):
    """Free groups of finite rank; hom-sets are infinite and never enumerated."""

    kind = "freegroup"
    enumerable = False

    def morphism(self, source: int, target: int, data: Any) -> Morphism:
        words = tuple(reduce_word(w) for w in data)
        if len(words) != source or any(abs(x) > target for w in words for x in w):
            raise ValueError(f"invalid word tuple {data} : {source} -> {target}")
        return Morphism(source, target, words)

    def substitute(self, g: Morphism, word: Sequence[int]) -> tuple[int, ...]:
        out: list[int] = []
        for x in word:
            out.extend(g.data[x - 1] if x > 0 else invert_word(g.data[-x - 1]))
        return reduce_word(out)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise ValueError("morphisms are not composable")
        return Morphism(f.source, g.target, tuple(self.substitute(g, w) for w in f.data))

    def identity(self, n: int) -> Morphism:
        return Morphism(n, n, tuple((i,) for i in range(1, n + 1)))

    def zero(self, n: int, m: int) -> Morphism:
        return Morphism(n, m, ((),) * n)

    def copair(self, parts: Sequence[Morphism], target: int | None = None) -> Morphism:
        target = parts[0].target if parts else (target or 0)
        if any(p.target != target for p in parts):
            raise ValueError("copair parts must share a target")
        data = tuple(w for p in parts for w in p.data)
        return Morphism(len(data), target, data)

    def components(self, f: Morphism, ranks: Sequence[int]) -> list[Morphism]:
        out, off = [], 0
        for r in ranks:
            out.append(Morphism(r, f.target, f.data[off : off + r]))
            off += r
        return out

    def summand_inclusion(self, ranks: Sequence[int], k: int) -> Morphism:
        off, total = sum(ranks[: k - 1]), sum(ranks)
        return Morphism(ranks[k - 1], total, tuple((off + i,) for i in range(1, ranks[k - 1] + 1)))

    def summand_retraction(self, ranks: Sequence[int], k: int) -> Morphism:
        off, total, r = sum(ranks[: k - 1]), sum(ranks), ranks[k - 1]
        return Morphism(total, r, tuple((j - off,) if off < j <= off + r else () for j in range(1, total + 1)))

    def descriptor(self) -> dict:
        return {"kind": "freegroup"}

    # -- cogroup structure on E ---------------------------------------------

    def comultiplication(self) -> Morphism:
        """``μ : E -> E ∨ E`` sending the generator to ``x1 x2``."""
        return Morphism(1, 2, ((1, 2),))

    def coinversion(self) -> Morphism:
        """``E -> E`` sending the generator to its inverse (distinct from :meth:`switch`)."""
        return Morphism(1, 1, ((-1,),))

    def cogroup_ops(self) -> CogroupStructure:
        return CogroupStructure(self.comultiplication(), self.coinversion())

    def bullet(self, f: Morphism, g: Morphism) -> Morphism:
        """Pointwise product ``f • g`` in the group ``C(X, Y)``."""
        if (f.source, f.target) != (g.source, g.target):
            raise ValueError("bullet needs parallel morphisms")
        return Morphism(f.source, f.target, tuple(reduce_word(a + b) for a, b in zip(f.data, g.data)))

    def bullet_inverse(self, f: Morphism) -> Morphism:
        return Morphism(f.source, f.target, tuple(invert_word(w) for w in f.data))

    def power(self, n: int) -> Morphism:
        """The endomorphism ``[n]`` of ``E``, ``x -> x^n``."""
        letter = 1 if n >= 0 else -1
        return Morphism(1, 1, ((letter,) * abs(n),))


@dataclass(frozen=True)
class CogroupStructure:
    comultiplication: Morphism
    coinversion: Morphism


def enumerate_homs(theory: Theory, n: int, m: int) -> list[Morphism]:
    """All morphisms ``E^{∨n} -> E^{∨m}`` in lexicographic payload order."""
    if not theory.enumerable:
        raise NotImplementedError(f"hom-sets of the {theory.kind} theory are infinite")
    return list(theory.homs(n, m))


def cogroup_ops(theory: Theory) -> CogroupStructure:
    if not isinstance(theory, FreeGroupTheory):
        raise TypeError(f"the {theory.kind} theory has no built-in cogroup structure")
    return theory.cogroup_ops()


@lru_cache(maxsize=None)
def gamma() -> GammaTheory:
    return GammaTheory()


@lru_cache(maxsize=None)
def freemod(modulus: int) -> FreeModTheory:
    return FreeModTheory(modulus)


@lru_cache(maxsize=None)
def freegroup() -> FreeGroupTheory:
    return FreeGroupTheory()


THEORY_SCHEMA: dict = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["gamma", "freemod", "freegroup"]},
        "modulus": {"type": "integer", "minimum": 2},
    },
    "if": {"properties": {"kind": {"const": "freemod"}}},
    "then": {"required": ["kind", "modulus"]},
}


def theory_from_descriptor(desc: dict) -> Theory:
    """Build a theory from ``{"kind": "gamma" | "freemod" | "freegroup", "modulus": k}``."""
    kind = desc.get("kind")
    if kind == "gamma":
        return gamma()
    if kind == "freemod":
        if "modulus" not in desc:
            raise ValueError("freemod theory needs a modulus")
        return freemod(int(desc["modulus"]))
    if kind == "freegroup":
        return freegroup()
    raise ValueError(f"unknown theory kind {kind!r}")


def endomorphisms(theory: Theory) -> list[Morphism]:
    """Nonzero endomorphisms of ``E`` (the basis of ``Λ``)."""
    return theory.nonzero_homs(1, 1)


def coproduct_maps(theory: Theory) -> list[Morphism]:
    """Nonzero maps ``E -> E ∨ E``."""
    return theory.nonzero_homs(1, 2)
