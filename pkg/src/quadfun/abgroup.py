"""Finitely presented abelian groups and their homomorphisms.

A group is given by ``n`` generators and a set of integer relation vectors.
Relations are kept as a fully reduced Hermite basis of the relation lattice,
which yields a unique canonical representative for every element.  Smith
normal form is only applied to the small block of non-unit pivots, giving
invariant factors and a simplified presentation on demand.

Vectors are sparse ``dict`` objects mapping generator index to coefficient.

>>> g = FpAbGroup(2, [{0: 2, 1: 4}, {0: 6, 1: 8}])
>>> g.invariants
(2, 4)
>>> a, b = cyclic(2), cyclic(3)
>>> tensor(a, b)[0].is_trivial()
True
>>> z = cyclic(0)
>>> p, _, _ = pushout(AbHom.scalar(z, z, 2), AbHom.scalar(z, z, 3))
>>> p.invariants
(0,)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

Vector = dict[int, int]


# ---------------------------------------------------------------------------
# sparse vector helpers


def clean(v: Mapping[int, int]) -> Vector:
    """Drop zero coefficients."""
    return {i: c for i, c in v.items() if c}


def vadd(x: Mapping[int, int], y: Mapping[int, int], k: int = 1) -> Vector:
    """Return ``x + k*y``."""
    out = dict(x)
    if k:
        for i, c in y.items():
            s = out.get(i, 0) + k * c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
    return out


def vscale(x: Mapping[int, int], k: int) -> Vector:
    if not k:
        return {}
    return {i: k * c for i, c in x.items() if c}


def vsum(terms: Iterable[tuple[int, Mapping[int, int]]]) -> Vector:
    """Linear combination ``sum(k * v)`` over ``(k, v)`` pairs."""
    out: Vector = {}
    for k, v in terms:
        if not k:
            continue
        for i, c in v.items():
            s = out.get(i, 0) + k * c
            if s:
                out[i] = s
            else:
                del out[i]
    return out


def vshift(x: Mapping[int, int], offset: int) -> Vector:
    return {i + offset: c for i, c in x.items() if c}


def unit(i: int, k: int = 1) -> Vector:
    return {i: k} if k else {}


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# ---------------------------------------------------------------------------
# dense integer matrices


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored as a tuple of row tuples."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("IntMatrix data does not match its shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for an empty row list")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, int]], rows: int) -> IntMatrix:
        data = tuple(tuple(c.get(i, 0) for c in columns) for i in range(rows))
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int, cols: int) -> IntMatrix:
        data = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            data[i][i] = d
        return cls.from_rows(data, cols)

    @property
    def entries(self) -> tuple[int, ...]:
        """Entries in row-major order."""
        return tuple(x for r in self.data for x in r)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return {i: self.data[i][j] for i in range(self.rows) if self.data[i][j]}

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        ot = other.transpose().data
        data = tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ot) for r in self.data)
        return IntMatrix(self.rows, other.cols, data)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return IntMatrix(self.rows, self.cols, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.data))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def is_diagonal(self) -> bool:
        return all(self.data[i][j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal_entries(self) -> tuple[int, ...]:
        return tuple(self.data[i][i] for i in range(min(self.rows, self.cols)))

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.determinant()) == 1


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, L, R)`` with ``L @ m @ R == D`` in Smith normal form.

    ``L`` and ``R`` are unimodular, the diagonal of ``D`` is non-negative and
    forms a divisibility chain with zeros last.  Pivots are chosen as the
    entry of least absolute value, first in row-major order, so the output
    is a deterministic function of the input.

    >>> d, l, r = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> d.diagonal_entries()
    (2, 4)
    """
    d, left, right, _ = _snf(m)
    return d, left, right


def _snf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.data]
    left = [[int(i == j) for j in range(rows)] for i in range(rows)]
    linv = [[int(i == j) for j in range(rows)] for i in range(rows)]
    right = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_add(dst: int, src: int, k: int) -> None:
        # row_dst += k * row_src
        if not k:
            return
        ra, rs = a[dst], a[src]
        for j in range(cols):
            if rs[j]:
                ra[j] += k * rs[j]
        la, ls = left[dst], left[src]
        for j in range(rows):
            if ls[j]:
                la[j] += k * ls[j]
        for r in linv:
            if r[dst]:
                r[src] -= k * r[dst]

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for r in linv:
            r[i], r[j] = r[j], r[i]

    def row_neg(i: int) -> None:
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]
        for r in linv:
            r[i] = -r[i]

    def col_add(dst: int, src: int, k: int) -> None:
        if not k:
            return
        for r in a:
            if r[src]:
                r[dst] += k * r[src]
        for r in right:
            if r[src]:
                r[dst] += k * r[src]

    def col_swap(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_add(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_add(j, t, -q)
                    if a[t][j]:
                        done = False
            if done:
                bad = None
                p = a[t][t]
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
                continue
            best = None
            for i in range(t, rows):
                if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                    best = (abs(a[i][t]), i, t)
            for j in range(t, cols):
                if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                    best = (abs(a[t][j]), t, j)
            _, pi, pj = best
            row_swap(t, pi)
            col_swap(t, pj)
        if a[t][t] < 0:
            row_neg(t)
        t += 1
    return (
        IntMatrix.from_rows(a, cols),
        IntMatrix.from_rows(left, rows),
        IntMatrix.from_rows(right, cols),
        IntMatrix.from_rows(linv, rows),
    )


# ---------------------------------------------------------------------------
# lattices in Z^n


class Lattice:
    """Incremental echelon basis of a sublattice of ``Z^n``.

    With ``track=True`` every basis vector carries a tag recording it as an
    integer combination of the inserted vectors; inserted vectors that reduce
    to zero leave their tag in :attr:`kernel`, which then spans the lattice of
    integer relations among the inputs.
    """

    def __init__(self, track: bool = False) -> None:
        self.track = track
        self.pivots: dict[int, Vector] = {}
        self.tags: dict[int, Vector] = {}
        self.kernel: list[Vector] = []
        self._count = 0
        self._reduced = True

    def insert(self, v: Mapping[int, int], tag: Mapping[int, int] | None = None) -> None:
        v = clean(v)
        if self.track:
            tag = unit(self._count) if tag is None else dict(tag)
            self._count += 1
        while v:
            i = min(v)
            p = self.pivots.get(i)
            if p is None:
                if v[i] < 0:
                    v = vscale(v, -1)
                    if self.track:
                        tag = vscale(tag, -1)
                self.pivots[i] = v
                if self.track:
                    self.tags[i] = tag
                self._reduced = False
                return
            a, b = p[i], v[i]
            if b % a == 0:
                q = b // a
                v = vadd(v, p, -q)
                if self.track:
                    tag = vadd(tag, self.tags[i], -q)
            else:
                g, s, t = _xgcd(a, b)
                newp = vadd(vscale(p, s), v, t)
                v = vadd(vscale(p, b // g), v, -(a // g))
                self.pivots[i] = newp
                if self.track:
                    ptag = self.tags[i]
                    self.tags[i], tag = vadd(vscale(ptag, s), tag, t), vadd(vscale(ptag, b // g), tag, -(a // g))
                self._reduced = False
        if self.track and tag:
            self.kernel.append(tag)

    def hermite(self) -> None:
        """Reduce every basis vector modulo the later pivots (Hermite form)."""
        if self._reduced:
            return
        leads = sorted(self.pivots)
        for idx, i in enumerate(leads):
            p = self.pivots[i]
            pi = p[i]
            for j in leads[:idx]:
                q = self.pivots[j]
                c = q.get(i, 0)
                if c and not 0 <= c < pi:
                    k = c // pi
                    self.pivots[j] = vadd(q, p, -k)
                    if self.track:
                        self.tags[j] = vadd(self.tags[j], self.tags[i], -k)
        self._reduced = True

    def basis(self) -> list[Vector]:
        self.hermite()
        return [self.pivots[i] for i in sorted(self.pivots)]

    def reduce(self, x: Mapping[int, int]) -> tuple[Vector, Vector]:
        """Return ``(remainder, coefficients)`` with ``x = remainder + sum(c_i * pivot_i)``."""
        self.hermite()
        x = clean(x)
        coeffs: Vector = {}
        for i in sorted(self.pivots):
            c = x.get(i, 0)
            if not c:
                continue
            p = self.pivots[i]
            q = c // p[i]
            if q:
                x = vadd(x, p, -q)
                coeffs[i] = q
        return x, coeffs

    def contains(self, x: Mapping[int, int]) -> bool:
        return not self.reduce(x)[0]

    def solve(self, x: Mapping[int, int]) -> Vector | None:
        """Tag combination producing ``x``, or ``None`` if ``x`` is not in the lattice."""
        if not self.track:
            raise ValueError("solve requires a tracked lattice")
        rem, coeffs = self.reduce(x)
        if rem:
            return None
        return vsum((q, self.tags[i]) for i, q in coeffs.items())


def integer_kernel(columns: Sequence[Mapping[int, int]]) -> list[Vector]:
    """Basis of ``{y : sum(y_j * columns[j]) = 0}`` as sparse vectors."""
    lat = Lattice(track=True)
    for c in columns:
        lat.insert(c)
    sub = Lattice()
    for k in lat.kernel:
        sub.insert(k)
    return sub.basis()


# ---------------------------------------------------------------------------
# groups


class FpAbGroup:
    """Abelian group with ``num_gens`` generators and integer relations."""

    def __init__(self, num_gens: int, relations: Iterable[Mapping[int, int]] | IntMatrix = (), name: str = "") -> None:
        if num_gens < 0:
            raise ValueError("negative generator count")
        self.num_gens = num_gens
        self.name = name
        lat = Lattice()
        rels = relations.columns() if isinstance(relations, IntMatrix) else relations
        # relation families are often highly redundant: insert each vector once, short ones first
        distinct: set[tuple[tuple[int, int], ...]] = set()
        for r in rels:
            key = tuple(sorted((i, c) for i, c in r.items() if c))
            if not key:
                continue
            if key[0][0] < 0 or key[-1][0] >= num_gens:
                raise ValueError("relation refers to a missing generator")
            if key[0][1] < 0:
                key = tuple((i, -c) for i, c in key)
            distinct.add(key)
        for key in sorted(distinct, key=lambda k: (len(k), k)):
            lat.insert(dict(key))
        lat.hermite()
        self._lat = lat

    # -- presentation --------------------------------------------------------

    @cached_property
    def relation_basis(self) -> tuple[Vector, ...]:
        return tuple(self._lat.basis())

    @property
    def relations(self) -> IntMatrix:
        return IntMatrix.from_columns(self.relation_basis, self.num_gens)

    def __repr__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"<FpAbGroup {label}gens={self.num_gens} invariants={self.invariants}>"

    # -- canonical forms -----------------------------------------------------

    @cached_property
    def _structure(self) -> tuple[dict[int, Vector], list[int], list[int]]:
        piv = self._lat.pivots
        unit_rows = {i: {j: -c for j, c in p.items() if j != i} for i, p in piv.items() if p[i] == 1}
        nonunit = sorted(i for i, p in piv.items() if p[i] != 1)
        survivors = [i for i in range(self.num_gens) if i not in unit_rows]
        return unit_rows, nonunit, survivors

    def _eliminate(self, x: Mapping[int, int]) -> Vector:
        unit_rows = self._structure[0]
        out: Vector = {}
        for i, c in x.items():
            if not c:
                continue
            row = unit_rows.get(i)
            if row is None:
                s = out.get(i, 0) + c
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
            else:
                for j, d in row.items():
                    s = out.get(j, 0) + c * d
                    if s:
                        out[j] = s
                    else:
                        out.pop(j, None)
        return out

    def reduce(self, x: Mapping[int, int]) -> Vector:
        """Canonical representative of ``x`` modulo the relations."""
        y = self._eliminate(x)
        piv = self._lat.pivots
        for i in self._structure[1]:
            c = y.get(i, 0)
            if c:
                p = piv[i]
                q = c // p[i]
                if q:
                    y = vadd(y, p, -q)
        return y

    def is_zero(self, x: Mapping[int, int]) -> bool:
        return not self.reduce(x)

    def equal(self, x: Mapping[int, int], y: Mapping[int, int]) -> bool:
        return self.is_zero(vadd(x, y, -1))

    def key(self, x: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
        """Hashable canonical form."""
        return tuple(sorted(self.reduce(x).items()))

    def element(self, coords: Mapping[int, int] | Sequence[int]) -> GroupElement:
        if not isinstance(coords, Mapping):
            coords = {i: c for i, c in enumerate(coords) if c}
        return GroupElement(self, clean(coords))

    def gen(self, i: int) -> GroupElement:
        return GroupElement(self, {i: 1})

    def zero(self) -> GroupElement:
        return GroupElement(self, {})

    # -- invariants and simplification --------------------------------------

    @cached_property
    def _snf(self) -> tuple[list[int], list[int], IntMatrix, IntMatrix]:
        _, nonunit, survivors = self._structure
        pos = {s: k for k, s in enumerate(survivors)}
        piv = self._lat.pivots
        cols = [{pos[j]: c for j, c in piv[i].items()} for i in nonunit]
        m = IntMatrix.from_columns(cols, len(survivors))
        d, left, _, linv = _snf(m)
        diag = list(d.diagonal_entries()) + [0] * (len(survivors) - len(nonunit))
        keep = [k for k, x in enumerate(diag) if x != 1]
        return diag, keep, left, linv

    @property
    def invariants(self) -> tuple[int, ...]:
        """Invariant factors ``d1 | d2 | ...`` with ``0`` marking free summands."""
        diag, keep, _, _ = self._snf
        return tuple(diag[k] for k in keep)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d)

    @property
    def rank(self) -> int:
        """Free rank."""
        return sum(1 for d in self.invariants if d == 0)

    def order(self) -> int | None:
        """Group order, or ``None`` when infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.invariants

    def isomorphic(self, other: FpAbGroup) -> bool:
        return sorted(self.invariants) == sorted(other.invariants)

    def to_canonical(self, x: Mapping[int, int]) -> Vector:
        """Coordinates of ``x`` in the simplified presentation."""
        diag, keep, left, _ = self._snf
        survivors = self._structure[2]
        y = self._eliminate(x)
        out: Vector = {}
        for t, k in enumerate(keep):
            row = left.data[k]
            c = sum(row[s] * y.get(g, 0) for s, g in enumerate(survivors))
            if diag[k]:
                c %= diag[k]
            if c:
                out[t] = c
        return out

    def from_canonical(self, z: Mapping[int, int]) -> Vector:
        """Inverse of :meth:`to_canonical` on generators of the simplified group."""
        _, keep, _, linv = self._snf
        survivors = self._structure[2]
        out: Vector = {}
        for t, c in z.items():
            k = keep[t]
            for s, g in enumerate(survivors):
                v = linv.data[s][k]
                if v:
                    out[g] = out.get(g, 0) + c * v
        return clean(out)

    @cached_property
    def canonical_group(self) -> FpAbGroup:
        inv = self.invariants
        return FpAbGroup(len(inv), [{t: d} for t, d in enumerate(inv) if d], name="canonical")

    def simplify(self) -> tuple[FpAbGroup, AbHom, AbHom]:
        """Return ``(G', iso, inverse)`` with ``G'`` presented by its invariant factors."""
        c = self.canonical_group
        iso = AbHom(self, c, [self.to_canonical({j: 1}) for j in range(self.num_gens)], check=False)
        inv = AbHom(c, self, [self.from_canonical({t: 1}) for t in range(c.num_gens)], check=False)
        return c, iso, inv

    def elements(self) -> list[Vector]:
        """All elements of a finite group as canonical vectors (small groups only)."""
        if self.rank:
            raise ValueError("cannot list the elements of an infinite group")
        out = [{}]
        for t, d in enumerate(self.invariants):
            gen = self.from_canonical({t: 1})
            out = [vadd(x, gen, k) for x in out for k in range(d)]
        return [self.reduce(x) for x in out]


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element of an :class:`FpAbGroup`; equality is modulo the relations."""

    group: FpAbGroup
    coords: Vector

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.group.is_zero(self.coords)
        if not isinstance(other, GroupElement) or other.group is not self.group:
            return NotImplemented
        return self.group.equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash((id(self.group), self.group.key(self.coords)))

    def __add__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.group, vadd(self.coords, other.coords))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.group, vadd(self.coords, other.coords, -1))

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, vscale(self.coords, -1))

    def __mul__(self, k: int) -> GroupElement:
        return GroupElement(self.group, vscale(self.coords, k))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.group.is_zero(self.coords)

    def canonical(self) -> Vector:
        return self.group.reduce(self.coords)


def cyclic(n: int) -> FpAbGroup:
    """``Z/n`` (``n = 0`` gives ``Z``)."""
    return FpAbGroup(1, [{0: n}] if n else [])


def free(n: int) -> FpAbGroup:
    return FpAbGroup(n)


def from_invariants(factors: Sequence[int]) -> FpAbGroup:
    """Direct sum of cyclic groups ``Z/d`` (``0`` meaning ``Z``)."""
    return FpAbGroup(len(factors), [{i: d} for i, d in enumerate(factors) if d])


TRIVIAL = FpAbGroup(0)


# ---------------------------------------------------------------------------
# homomorphisms


class HomError(ValueError):
    """Raised when generator images do not define a homomorphism."""

    def __init__(self, message: str, witness: Vector | None = None) -> None:
        super().__init__(message)
        self.witness = witness


class AbHom:
    """Homomorphism given by the images of the domain generators."""

    def __init__(
        self,
        domain: FpAbGroup,
        codomain: FpAbGroup,
        images: Sequence[Mapping[int, int]] | IntMatrix,
        check: bool = True,
    ) -> None:
        if isinstance(images, IntMatrix):
            if images.rows != codomain.num_gens or images.cols != domain.num_gens:
                raise ValueError("matrix shape does not match the groups")
            images = images.columns()
        if len(images) != domain.num_gens:
            raise ValueError("one image per domain generator is required")
        self.domain = domain
        self.codomain = codomain
        self.images: tuple[Vector, ...] = tuple(clean(v) for v in images)
        for v in self.images:
            if any(not 0 <= i < codomain.num_gens for i in v):
                raise ValueError("image refers to a missing codomain generator")
        if check:
            bad = self.first_violation()
            if bad is not None:
                raise HomError("generator images do not respect the domain relations", bad)

    def first_violation(self) -> Vector | None:
        for r in self.domain.relation_basis:
            if not self.codomain.is_zero(self(r)):
                return r
        return None

    @staticmethod
    def is_well_defined(domain: FpAbGroup, codomain: FpAbGroup, images: Sequence[Mapping[int, int]]) -> bool:
        return AbHom(domain, codomain, images, check=False).first_violation() is None

    # -- constructors --------------------------------------------------------

    @classmethod
    def identity(cls, g: FpAbGroup) -> AbHom:
        return cls(g, g, [{i: 1} for i in range(g.num_gens)], check=False)

    @classmethod
    def zero(cls, a: FpAbGroup, b: FpAbGroup) -> AbHom:
        return cls(a, b, [{} for _ in range(a.num_gens)], check=False)

    @classmethod
    def scalar(cls, a: FpAbGroup, b: FpAbGroup, k: int) -> AbHom:
        """Multiplication by ``k`` between groups sharing a generator count."""
        if a.num_gens != b.num_gens:
            raise ValueError("scalar map needs equal generator counts")
        return cls(a, b, [{i: k} for i in range(a.num_gens)])

    @classmethod
    def from_function(cls, a: FpAbGroup, b: FpAbGroup, fn: Callable[[int], Mapping[int, int]], check: bool = True) -> AbHom:
        return cls(a, b, [fn(j) for j in range(a.num_gens)], check=check)

    # -- evaluation and algebra ---------------------------------------------

    @property
    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.images, self.codomain.num_gens)

    def __call__(self, x: Mapping[int, int]) -> Vector:
        out: Vector = {}
        images = self.images
        for j, c in x.items():
            if not c:
                continue
            for i, d in images[j].items():
                s = out.get(i, 0) + c * d
                if s:
                    out[i] = s
                else:
                    del out[i]
        return out

    def apply(self, x: GroupElement) -> GroupElement:
        if x.group is not self.domain:
            raise ValueError("element does not belong to the domain")
        return GroupElement(self.codomain, self(x.coords))

    def compose(self, other: AbHom) -> AbHom:
        """``self ∘ other``."""
        if other.codomain is not self.domain and other.codomain.num_gens != self.domain.num_gens:
            raise ValueError("maps are not composable")
        return AbHom(other.domain, self.codomain, [self(v) for v in other.images], check=False)

    __matmul__ = compose

    def _same_shape(self, other: AbHom) -> None:
        if self.domain.num_gens != other.domain.num_gens or self.codomain.num_gens != other.codomain.num_gens:
            raise ValueError("maps have different shapes")

    def __add__(self, other: AbHom) -> AbHom:
        self._same_shape(other)
        return AbHom(self.domain, self.codomain, [vadd(a, b) for a, b in zip(self.images, other.images)], check=False)

    def __sub__(self, other: AbHom) -> AbHom:
        self._same_shape(other)
        return AbHom(self.domain, self.codomain, [vadd(a, b, -1) for a, b in zip(self.images, other.images)], check=False)

    def __neg__(self) -> AbHom:
        return AbHom(self.domain, self.codomain, [vscale(a, -1) for a in self.images], check=False)

    def __mul__(self, k: int) -> AbHom:
        return AbHom(self.domain, self.codomain, [vscale(a, k) for a in self.images], check=False)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(self.codomain.is_zero(v) for v in self.images)

    def equals(self, other: AbHom) -> bool:
        self._same_shape(other)
        return all(a == b or self.codomain.equal(a, b) for a, b in zip(self.images, other.images))

    def first_difference(self, other: AbHom) -> int | None:
        """Index of a generator on which the maps differ, if any."""
        self._same_shape(other)
        for j, (a, b) in enumerate(zip(self.images, other.images)):
            if a != b and not self.codomain.equal(a, b):
                return j
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbHom):
            return NotImplemented
        return self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<AbHom {self.domain.num_gens} -> {self.codomain.num_gens}>"

    # -- structure through simplified coordinates ---------------------------

    @cached_property
    def _hat(self) -> list[Vector]:
        dom, cod = self.domain, self.codomain
        return [cod.to_canonical(self(dom.from_canonical({t: 1}))) for t in range(dom.canonical_group.num_gens)]

    @cached_property
    def _solver(self) -> Lattice:
        cod = self.codomain.canonical_group
        lat = Lattice(track=True)
        for v in self._hat:
            lat.insert(v)
        for t, d in enumerate(cod.invariants):
            if d:
                lat.insert({t: d})
            else:
                lat.insert({})
        return lat

    def lift(self, y: Mapping[int, int]) -> Vector | None:
        """Some ``x`` with ``self(x) == y``, or ``None`` when ``y`` is not in the image."""
        sol = self._solver.solve(self.codomain.to_canonical(y))
        if sol is None:
            return None
        a = len(self._hat)
        xhat = {t: c for t, c in sol.items() if t < a}
        return self.domain.reduce(self.domain.from_canonical(xhat))

    def kernel(self) -> tuple[FpAbGroup, AbHom]:
        return kernel(self)

    def cokernel(self) -> tuple[FpAbGroup, AbHom]:
        return cokernel(self)

    def image(self) -> FpAbGroup:
        return image(self)

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return all(self.lift({i: 1}) is not None for i in range(self.codomain.num_gens))

    def is_iso(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def inverse(self) -> AbHom:
        if not self.is_injective():
            raise ValueError("map is not injective")
        images = []
        for i in range(self.codomain.num_gens):
            x = self.lift({i: 1})
            if x is None:
                raise ValueError("map is not surjective")
            images.append(x)
        return AbHom(self.codomain, self.domain, images, check=False)

    def restrict(self, incl: AbHom) -> AbHom:
        return self.compose(incl)


# ---------------------------------------------------------------------------
# constructions


def quotient(g: FpAbGroup, vectors: Iterable[Mapping[int, int]], name: str = "") -> tuple[FpAbGroup, AbHom]:
    """``g`` modulo the span of ``vectors``, on the same generators."""
    q = FpAbGroup(g.num_gens, list(g.relation_basis) + [clean(v) for v in vectors], name=name)
    return q, AbHom(g, q, [{i: 1} for i in range(g.num_gens)], check=False)


def kernel(h: AbHom) -> tuple[FpAbGroup, AbHom]:
    """Kernel of ``h`` with its inclusion.

    Computed in simplified coordinates: the preimage of the codomain
    relation lattice is found as an integer kernel, then presented modulo
    the domain relations.
    """
    dom = h.domain
    cdom = dom.canonical_group
    ccod = h.codomain.canonical_group
    a = cdom.num_gens
    columns = list(h._hat) + [{t: d} if d else {} for t, d in enumerate(ccod.invariants)]
    lat = Lattice(track=True)
    for c in columns:
        lat.insert(c)
    pre = Lattice(track=True)
    for k in lat.kernel:
        v = {t: c for t, c in k.items() if t < a}
        if v:
            pre.insert(v)
    for t, d in enumerate(cdom.invariants):
        if d:
            pre.insert({t: d})
    basis = pre.basis()
    # relations: domain relations written in the basis of the preimage lattice
    span = Lattice(track=True)
    for b in basis:
        span.insert(b)
    rels = []
    for t, d in enumerate(cdom.invariants):
        if d:
            coeffs = span.solve({t: d})
            assert coeffs is not None
            rels.append(coeffs)
    k = FpAbGroup(len(basis), rels, name="kernel")
    incl = AbHom(k, dom, [dom.reduce(dom.from_canonical(b)) for b in basis], check=False)
    return k, incl


def cokernel(h: AbHom) -> tuple[FpAbGroup, AbHom]:
    return quotient(h.codomain, h.images, name="cokernel")


def image(h: AbHom) -> FpAbGroup:
    """Image of ``h`` presented as a quotient of the domain."""
    _, incl = kernel(h)
    return quotient(h.domain, incl.images, name="image")[0]


def direct_sum(gs: Sequence[FpAbGroup]) -> tuple[FpAbGroup, list[AbHom], list[AbHom]]:
    offsets = []
    n = 0
    for g in gs:
        offsets.append(n)
        n += g.num_gens
    rels = [vshift(r, off) for g, off in zip(gs, offsets) for r in g.relation_basis]
    s = FpAbGroup(n, rels, name="sum")
    inj = [AbHom(g, s, [{off + i: 1} for i in range(g.num_gens)], check=False) for g, off in zip(gs, offsets)]
    proj = [
        AbHom(s, g, [{j - off: 1} if off <= j < off + g.num_gens else {} for j in range(n)], check=False)
        for g, off in zip(gs, offsets)
    ]
    return s, inj, proj


def tensor(a: FpAbGroup, b: FpAbGroup) -> tuple[FpAbGroup, Callable[[Mapping[int, int], Mapping[int, int]], Vector]]:
    """``a ⊗ b`` on generator pairs ``(i, j) -> i * b.num_gens + j``."""
    nb = b.num_gens
    rels: list[Vector] = []
    for r in a.relation_basis:
        for j in range(nb):
            rels.append({i * nb + j: c for i, c in r.items()})
    for s in b.relation_basis:
        for i in range(a.num_gens):
            rels.append({i * nb + j: c for j, c in s.items()})
    t = FpAbGroup(a.num_gens * nb, rels, name="tensor")

    def bilinear(x: Mapping[int, int], y: Mapping[int, int]) -> Vector:
        return clean({i * nb + j: c * d for i, c in x.items() for j, d in y.items()})

    return t, bilinear


def tensor_hom(f: AbHom, g: AbHom, source: FpAbGroup | None = None, target: FpAbGroup | None = None) -> AbHom:
    """``f ⊗ g`` between tensor products (built with :func:`tensor` when not supplied)."""
    src = source or tensor(f.domain, g.domain)[0]
    tgt = target or tensor(f.codomain, g.codomain)[0]
    nb, mb = g.domain.num_gens, g.codomain.num_gens
    images = []
    for i in range(f.domain.num_gens):
        for j in range(nb):
            images.append(clean({p * mb + q: c * d for p, c in f.images[i].items() for q, d in g.images[j].items()}))
    return AbHom(src, tgt, images, check=False)


def pushout(f: AbHom, g: AbHom) -> tuple[FpAbGroup, AbHom, AbHom]:
    """Pushout of ``B <-f- A -g-> C`` as ``(B ⊕ C) / <(f a, -g a)>``."""
    if f.domain.num_gens != g.domain.num_gens:
        raise ValueError("pushout legs must share a domain")
    b, c = f.codomain, g.codomain
    nb = b.num_gens
    glue = [vadd(f.images[j], vshift(g.images[j], nb), -1) for j in range(f.domain.num_gens)]
    rels = list(b.relation_basis) + [vshift(r, nb) for r in c.relation_basis] + glue
    p = FpAbGroup(nb + c.num_gens, rels, name="pushout")
    in_b = AbHom(b, p, [{i: 1} for i in range(nb)], check=False)
    in_c = AbHom(c, p, [{nb + i: 1} for i in range(c.num_gens)], check=False)
    return p, in_b, in_c


def coinvariants(a: FpAbGroup, t: AbHom) -> tuple[FpAbGroup, AbHom]:
    """``a / (1 - t)a`` for an involution ``t``."""
    if t.domain.num_gens != a.num_gens or t.codomain.num_gens != a.num_gens:
        raise ValueError("involution must be an endomorphism of the group")
    if not t.compose(t).equals(AbHom.identity(a)):
        raise ValueError("t is not an involution")
    return quotient(a, [vadd({i: 1}, t.images[i], -1) for i in range(a.num_gens)], name="coinvariants")
