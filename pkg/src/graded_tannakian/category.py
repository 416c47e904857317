"""Finite presentations of rigid symmetric monoidal additive categories.

A presentation has finitely many *base objects* (string labels).  Objects of
the working category are tuples of base labels (formal direct sums, kept in
the order they were produced so that tensor products stay strictly
associative).  A morphism ``S -> T`` between tuples is a block matrix whose
``[j][i]`` entry is a coordinate vector in the base hom space
``hom(S[i], T[j])``.

Two kinds of presentation share the :class:`Category` interface: explicit
structure-constant tables (:class:`TableCategory`) and concrete equivariant
models (``models.ModelCategory``) whose constants are derived on demand.
The tensor product of base objects may be undefined for some pairs; asking
for it raises :class:`TensorUndefined`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .graded import (GradedMap, GradedSpace, direct_sum, direct_sum_map, koszul_symmetry,
                     tensor_graded, tensor_index, tensor_maps, unit_space, Z)
from .linalg import QMatrix, ZERO, ONE, q

Obj = Tuple[str, ...]
Vec = Tuple[Fraction, ...]


class PresentationError(ValueError):
    """Malformed or inconsistent input data."""


class TensorUndefined(PresentationError):
    pass


def as_obj(x) -> Obj:
    if isinstance(x, str):
        return (x,)
    return tuple(x)


class Category:
    """Interface shared by table- and model-backed presentations."""

    unit: str
    objects: List[str]
    name: str = ""

    # subclasses implement the base-level primitives below
    def hom_labels(self, x: str, y: str) -> List[str]:
        raise NotImplementedError

    def hom_dim(self, x: str, y: str) -> int:
        return len(self.hom_labels(x, y))

    def identity_vec(self, x: str) -> Vec:
        raise NotImplementedError

    def compose_vec(self, x, y, z, g: Vec, f: Vec) -> Vec:
        """Coordinates of ``g∘f`` for ``f ∈ hom(x,y)``, ``g ∈ hom(y,z)``."""
        raise NotImplementedError

    def tensor_base(self, x: str, y: str) -> Obj:
        raise NotImplementedError

    def tensor_vec(self, x, x2, y, y2, f: Vec, g: Vec):
        """Blocks of ``f⊗g`` for ``f ∈ hom(x,x2)``, ``g ∈ hom(y,y2)``."""
        raise NotImplementedError

    def symmetry_base(self, x: str, y: str):
        raise NotImplementedError

    def dual_base(self, x: str) -> str:
        raise NotImplementedError

    def ev_base(self, x: str):
        raise NotImplementedError

    def coev_base(self, x: str):
        raise NotImplementedError

    def transpose_vec(self, x: str, y: str, f: Vec) -> Vec:
        """Coordinates of the dual morphism ``y^∨ -> x^∨``."""
        raise NotImplementedError

    def has_dual(self, x: str) -> bool:
        try:
            self.dual_base(x)
            return True
        except PresentationError:
            return False

    # ------------------------------------------------------------------
    # additive closure

    def check_object(self, x: str):
        if x not in self._object_set():
            raise PresentationError(f"unknown object label {x!r}")

    def _object_set(self):
        s = getattr(self, "_objset", None)
        if s is None:
            s = self._objset = frozenset(self.objects)
        return s

    def tensor_obj(self, X: Obj, Y: Obj) -> Obj:
        out = []
        for x in X:
            for y in Y:
                out.extend(self.tensor_base(x, y))
        return tuple(out)

    def tensor_defined(self, X: Obj, Y: Obj) -> bool:
        try:
            self.tensor_obj(X, Y)
            return True
        except TensorUndefined:
            return False

    def dual_obj(self, X: Obj) -> Obj:
        return tuple(self.dual_base(x) for x in X)

    def unit_obj(self) -> Obj:
        return (self.unit,)


class TableCategory(Category):
    """Presentation given directly by structure constants.

    ``hom[(x, y)]`` lists basis labels; ``compose[(x, y, z)][b][a]`` is the
    coordinate vector of ``g_b ∘ f_a``; ``tensor_objects[(x, y)]`` is a tuple
    of labels; ``tensor_morphisms[(x, x2, y, y2)][a][b]`` holds the blocks of
    ``f_a ⊗ g_b``; ``symmetry[(x, y)]`` holds blocks of ``σ_{x,y}``;
    ``duals[x] = (xd, ev_blocks, coev_blocks)``; ``transpose[(x, y)][a]`` the
    coordinates of the dual of ``f_a``.
    """

    def __init__(self, objects, unit, hom, identity, compose, tensor_objects,
                 tensor_morphisms, symmetry, duals=None, transpose=None, name=""):
        self.objects = list(objects)
        self.unit = unit
        self.name = name
        self.hom = {k: list(v) for k, v in hom.items()}
        self.identity = {k: _vec(v) for k, v in identity.items()}
        self.compose = compose
        self.tensor_objects = {k: as_obj(v) for k, v in tensor_objects.items()}
        self.tensor_morphisms = tensor_morphisms
        self.symmetry = symmetry
        self.duals = duals or {}
        self.transpose = transpose or {}
        self._check_shapes()

    def _check_shapes(self):
        objs = set(self.objects)
        if self.unit not in objs:
            raise PresentationError("unit is not a base object")
        for (x, y), labels in self.hom.items():
            if x not in objs or y not in objs:
                raise PresentationError(f"hom entry for unknown objects {(x, y)}")
        for x in self.objects:
            if len(self.identity.get(x, ())) != self.hom_dim(x, x):
                raise PresentationError(f"identity of {x} has wrong length")
        for (x, y, z), tab in self.compose.items():
            if len(tab) != self.hom_dim(y, z) or any(len(r) != self.hom_dim(x, y) for r in tab):
                raise PresentationError(f"composition table {(x, y, z)} has wrong shape")
            for r in tab:
                for v in r:
                    if len(v) != self.hom_dim(x, z):
                        raise PresentationError(f"composition vector {(x, y, z)} has wrong length")

    def hom_labels(self, x, y):
        self.check_object(x)
        self.check_object(y)
        return self.hom.get((x, y), [])

    def identity_vec(self, x):
        return self.identity[x]

    def compose_vec(self, x, y, z, g, f):
        n = self.hom_dim(x, z)
        out = [ZERO] * n
        if not n:
            return tuple(out)
        tab = self.compose.get((x, y, z))
        if tab is None:
            if any(g) and any(f):
                raise PresentationError(f"missing composition table {(x, y, z)}")
            return tuple(out)
        for b, gb in enumerate(g):
            if not gb:
                continue
            row = tab[b]
            for a, fa in enumerate(f):
                if fa:
                    c = gb * fa
                    for k, v in enumerate(row[a]):
                        if v:
                            out[k] += c * q(v)
        return tuple(out)

    def tensor_base(self, x, y):
        self.check_object(x)
        self.check_object(y)
        try:
            return self.tensor_objects[(x, y)]
        except KeyError:
            raise TensorUndefined(f"tensor product {x}⊗{y} not in the presentation") from None

    def tensor_vec(self, x, x2, y, y2, f, g):
        S, T = self.tensor_base(x, y), self.tensor_base(x2, y2)
        acc = zero_blocks(self, S, T)
        tab = self.tensor_morphisms.get((x, x2, y, y2))
        for a, fa in enumerate(f):
            if not fa:
                continue
            for b, gb in enumerate(g):
                if not gb:
                    continue
                if tab is None:
                    raise PresentationError(f"missing tensor table {(x, x2, y, y2)}")
                add_blocks(acc, tab[a][b], fa * gb)
        return freeze_blocks(acc)

    def symmetry_base(self, x, y):
        try:
            return self.symmetry[(x, y)]
        except KeyError:
            raise PresentationError(f"missing symmetry for {(x, y)}") from None

    def dual_base(self, x):
        try:
            return self.duals[x][0]
        except KeyError:
            raise PresentationError(f"no duality datum for {x}") from None

    def ev_base(self, x):
        self.dual_base(x)
        return self.duals[x][1]

    def coev_base(self, x):
        self.dual_base(x)
        return self.duals[x][2]

    def transpose_vec(self, x, y, f):
        tab = self.transpose.get((x, y))
        n = self.hom_dim(self.dual_base(y), self.dual_base(x))
        out = [ZERO] * n
        for a, fa in enumerate(f):
            if fa:
                if tab is None:
                    raise PresentationError(f"missing transpose table {(x, y)}")
                for k, v in enumerate(tab[a]):
                    out[k] += fa * q(v)
        return tuple(out)


def _vec(v) -> Vec:
    return tuple(q(x) for x in v)


def zero_blocks(cat: Category, S: Obj, T: Obj):
    return [[[ZERO] * cat.hom_dim(s, t) for s in S] for t in T]


def add_blocks(acc, blocks, c=ONE):
    for j, row in enumerate(blocks):
        for i, v in enumerate(row):
            tgt = acc[j][i]
            for k, x in enumerate(v):
                if x:
                    tgt[k] += c * q(x)


def freeze_blocks(acc):
    return tuple(tuple(tuple(v) for v in row) for row in acc)


# ---------------------------------------------------------------------------
# morphisms of the additive closure

class Mor:
    """Block morphism ``src -> tgt`` of the additive closure."""

    __slots__ = ("cat", "src", "tgt", "blocks", "_hash")

    def __init__(self, cat: Category, src, tgt, blocks=None):
        self.cat = cat
        self.src = as_obj(src)
        self.tgt = as_obj(tgt)
        if blocks is None:
            blocks = zero_blocks(cat, self.src, self.tgt)
        if len(blocks) != len(self.tgt) or any(len(r) != len(self.src) for r in blocks):
            raise PresentationError("block shape does not match source/target")
        out = []
        for j, t in enumerate(self.tgt):
            row = []
            for i, s in enumerate(self.src):
                v = tuple(q(x) for x in blocks[j][i])
                if len(v) != cat.hom_dim(s, t):
                    raise PresentationError(f"block ({j},{i}) has wrong length for hom({s},{t})")
                row.append(v)
            out.append(tuple(row))
        self.blocks = tuple(out)
        self._hash = None

    @classmethod
    def _raw(cls, cat, src, tgt, blocks):
        m = object.__new__(cls)
        m.cat, m.src, m.tgt, m.blocks, m._hash = cat, src, tgt, blocks, None
        return m

    @classmethod
    def zero(cls, cat, src, tgt):
        src, tgt = as_obj(src), as_obj(tgt)
        return cls._raw(cat, src, tgt, freeze_blocks(zero_blocks(cat, src, tgt)))

    @classmethod
    def identity(cls, cat, X):
        X = as_obj(X)
        acc = zero_blocks(cat, X, X)
        for i, x in enumerate(X):
            acc[i][i] = list(cat.identity_vec(x))
        return cls._raw(cat, X, X, freeze_blocks(acc))

    @classmethod
    def basis_element(cls, cat, x: str, y: str, a: int):
        v = [ZERO] * cat.hom_dim(x, y)
        v[a] = ONE
        return cls._raw(cat, (x,), (y,), ((tuple(v),),))

    @classmethod
    def from_flat(cls, cat, src, tgt, flat):
        src, tgt = as_obj(src), as_obj(tgt)
        flat = list(flat)
        pos = 0
        rows = []
        for t in tgt:
            row = []
            for s in src:
                n = cat.hom_dim(s, t)
                row.append(tuple(q(x) for x in flat[pos:pos + n]))
                pos += n
            rows.append(tuple(row))
        if pos != len(flat):
            raise PresentationError("flat vector has wrong length")
        return cls._raw(cat, src, tgt, tuple(rows))

    def flat(self) -> Vec:
        out = []
        for row in self.blocks:
            for v in row:
                out.extend(v)
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Mor):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.blocks == other.blocks

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.src, self.tgt, self.blocks))
        return self._hash

    def __repr__(self):
        return f"Mor({'+'.join(self.src) or '0'} -> {'+'.join(self.tgt) or '0'})"

    def is_zero(self) -> bool:
        return not any(x for row in self.blocks for v in row for x in v)

    def __matmul__(self, f: "Mor") -> "Mor":
        """Composition ``self ∘ f``."""
        g = self
        if f.tgt != g.src:
            raise PresentationError(f"cannot compose {g} after {f}")
        cat = self.cat
        rows = []
        for k, z in enumerate(g.tgt):
            row = []
            for i, x in enumerate(f.src):
                acc = [ZERO] * cat.hom_dim(x, z)
                if acc:
                    for j, y in enumerate(f.tgt):
                        gv, fv = g.blocks[k][j], f.blocks[j][i]
                        if any(gv) and any(fv):
                            for t, c in enumerate(cat.compose_vec(x, y, z, gv, fv)):
                                if c:
                                    acc[t] += c
                row.append(tuple(acc))
            rows.append(tuple(row))
        return Mor._raw(cat, f.src, g.tgt, tuple(rows))

    def _lin(self, other, op):
        if self.src != other.src or self.tgt != other.tgt:
            raise PresentationError("adding morphisms with different source/target")
        blocks = tuple(tuple(tuple(op(a, b) for a, b in zip(u, v)) for u, v in zip(r1, r2))
                       for r1, r2 in zip(self.blocks, other.blocks))
        return Mor._raw(self.cat, self.src, self.tgt, blocks)

    def __add__(self, other):
        return self._lin(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._lin(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Mor":
        c = q(c)
        blocks = tuple(tuple(tuple(c * x for x in v) for v in row) for row in self.blocks)
        return Mor._raw(self.cat, self.src, self.tgt, blocks)

    def tensor(self, g: "Mor") -> "Mor":
        """``self ⊗ g``; components ordered lexicographically by factor index."""
        cat = self.cat
        f = self
        S = cat.tensor_obj(f.src, g.src)
        T = cat.tensor_obj(f.tgt, g.tgt)
        acc = zero_blocks(cat, S, T)
        tpos, spos = _pair_offsets(cat, f.tgt, g.tgt), _pair_offsets(cat, f.src, g.src)
        for j1, x2 in enumerate(f.tgt):
            for i1, x in enumerate(f.src):
                fv = f.blocks[j1][i1]
                if not any(fv):
                    continue
                for j2, y2 in enumerate(g.tgt):
                    for i2, y in enumerate(g.src):
                        gv = g.blocks[j2][i2]
                        if not any(gv):
                            continue
                        bl = cat.tensor_vec(x, x2, y, y2, fv, gv)
                        r0, c0 = tpos[(j1, j2)], spos[(i1, i2)]
                        for jj, row in enumerate(bl):
                            for ii, v in enumerate(row):
                                tgt = acc[r0 + jj][c0 + ii]
                                for k, val in enumerate(v):
                                    if val:
                                        tgt[k] += val
        return Mor._raw(cat, S, T, freeze_blocks(acc))

    def dual(self) -> "Mor":
        """Transpose ``tgt^∨ -> src^∨``."""
        cat = self.cat
        S, T = cat.dual_obj(self.tgt), cat.dual_obj(self.src)
        rows = []
        for i, x in enumerate(self.src):
            row = []
            for j, y in enumerate(self.tgt):
                row.append(cat.transpose_vec(x, y, self.blocks[j][i]))
            rows.append(tuple(row))
        return Mor._raw(cat, S, T, tuple(rows))

    def component(self, j: int, i: int) -> "Mor":
        return Mor._raw(self.cat, (self.src[i],), (self.tgt[j],), ((self.blocks[j][i],),))


def _pair_offsets(cat, X: Obj, Y: Obj):
    offs = {}
    o = 0
    for i, x in enumerate(X):
        for j, y in enumerate(Y):
            offs[(i, j)] = o
            o += len(cat.tensor_base(x, y))
    return offs


def hstack_mor(cat, parts: Sequence[Mor], tgt=None) -> Mor:
    """``(f_1, ..., f_k): ⊕ src_i -> tgt``."""
    if not parts:
        return Mor.zero(cat, (), tgt)
    tgt = parts[0].tgt
    src = tuple(x for p in parts for x in p.src)
    rows = []
    for j in range(len(tgt)):
        rows.append(tuple(v for p in parts for v in p.blocks[j]))
    return Mor._raw(cat, src, tgt, tuple(rows))


def vstack_mor(cat, parts: Sequence[Mor], src=None) -> Mor:
    """``(f_1; ...; f_k): src -> ⊕ tgt_i``."""
    if not parts:
        return Mor.zero(cat, src, ())
    src = parts[0].src
    tgt = tuple(x for p in parts for x in p.tgt)
    rows = tuple(r for p in parts for r in p.blocks)
    return Mor._raw(cat, src, tgt, rows)


def block_mor(cat, grid: Sequence[Sequence[Mor]]) -> Mor:
    return vstack_mor(cat, [hstack_mor(cat, row) for row in grid])


def diag_mor(cat, parts: Sequence[Mor]) -> Mor:
    src = tuple(x for p in parts for x in p.src)
    tgt = tuple(x for p in parts for x in p.tgt)
    acc = zero_blocks(cat, src, tgt)
    r0 = c0 = 0
    for p in parts:
        for j, row in enumerate(p.blocks):
            for i, v in enumerate(row):
                acc[r0 + j][c0 + i] = list(v)
        r0 += len(p.tgt)
        c0 += len(p.src)
    return Mor._raw(cat, src, tgt, freeze_blocks(acc))


def inclusion(cat, parts: Sequence[Obj], k: int) -> Mor:
    parts = [as_obj(p) for p in parts]
    return vstack_mor(cat, [Mor.identity(cat, p) if i == k else Mor.zero(cat, parts[k], p)
                            for i, p in enumerate(parts)], parts[k])


def projection(cat, parts: Sequence[Obj], k: int) -> Mor:
    parts = [as_obj(p) for p in parts]
    return hstack_mor(cat, [Mor.identity(cat, p) if i == k else Mor.zero(cat, p, parts[k])
                            for i, p in enumerate(parts)], parts[k])


def symmetry(cat, X: Obj, Y: Obj) -> Mor:
    """``σ_{X,Y}: X⊗Y -> Y⊗X`` on formal sums."""
    X, Y = as_obj(X), as_obj(Y)
    S, T = cat.tensor_obj(X, Y), cat.tensor_obj(Y, X)
    acc = zero_blocks(cat, S, T)
    spos, tpos = _pair_offsets(cat, X, Y), _pair_offsets(cat, Y, X)
    for i, x in enumerate(X):
        for j, y in enumerate(Y):
            bl = cat.symmetry_base(x, y)
            r0, c0 = tpos[(j, i)], spos[(i, j)]
            for jj, row in enumerate(bl):
                for ii, v in enumerate(row):
                    acc[r0 + jj][c0 + ii] = [q(t) for t in v]
    return Mor._raw(cat, S, T, freeze_blocks(acc))


def evaluation(cat, X: Obj) -> Mor:
    X = as_obj(X)
    Xd = cat.dual_obj(X)
    S = cat.tensor_obj(Xd, X)
    one = cat.unit_obj()
    acc = zero_blocks(cat, S, one)
    offs = _pair_offsets(cat, Xd, X)
    for i, x in enumerate(X):
        bl = cat.ev_base(x)
        c0 = offs[(i, i)]
        for ii, v in enumerate(bl[0]):
            acc[0][c0 + ii] = [q(t) for t in v]
    return Mor._raw(cat, S, one, freeze_blocks(acc))


def coevaluation(cat, X: Obj) -> Mor:
    X = as_obj(X)
    Xd = cat.dual_obj(X)
    T = cat.tensor_obj(X, Xd)
    one = cat.unit_obj()
    acc = zero_blocks(cat, one, T)
    offs = _pair_offsets(cat, X, Xd)
    for i, x in enumerate(X):
        bl = cat.coev_base(x)
        r0 = offs[(i, i)]
        for jj, row in enumerate(bl):
            acc[r0 + jj][0] = [q(t) for t in row[0]]
    return Mor._raw(cat, one, T, freeze_blocks(acc))


def hom_basis(cat, X, Y) -> List[Mor]:
    """Canonical basis of ``hom(X, Y)`` for formal sums (block-unit vectors)."""
    X, Y = as_obj(X), as_obj(Y)
    n = sum(cat.hom_dim(x, y) for y in Y for x in X)
    out = []
    for k in range(n):
        v = [ZERO] * n
        v[k] = ONE
        out.append(Mor.from_flat(cat, X, Y, v))
    return out


def hom_space(cat, X, Y):
    """Block-structured basis description and dimension of ``hom(X, Y)``."""
    X, Y = as_obj(X), as_obj(Y)
    for z in X + Y:
        cat.check_object(z)
    layout = []
    for j, y in enumerate(Y):
        for i, x in enumerate(X):
            for lab in cat.hom_labels(x, y):
                layout.append((j, i, lab))
    return layout, len(layout)


# ---------------------------------------------------------------------------
# functors to graded vector spaces

class Functor:
    """A symmetric strong monoidal functor to graded vector spaces."""

    cat: Category
    name: str = ""

    def space_base(self, x: str) -> GradedSpace:
        raise NotImplementedError

    def map_basis(self, x: str, y: str, a: int) -> GradedMap:
        raise NotImplementedError

    def mu_base(self, x: str, y: str) -> GradedMap:
        """``F(x)⊗F(y) -> F(x⊗y)`` (target is the direct sum over the tuple)."""
        raise NotImplementedError

    def unit_iso(self) -> GradedMap:
        raise NotImplementedError

    def probes(self) -> List[Dict[str, GradedMap]]:
        """Tensor automorphisms of the functor, one dict per probe."""
        return []

    @property
    def convention(self):
        return Z

    # derived -----------------------------------------------------------
    def space(self, X) -> GradedSpace:
        X = as_obj(X)
        return direct_sum([self.space_base(x) for x in X], self.convention)

    def map_vec(self, x: str, y: str, v: Vec) -> GradedMap:
        cache = self.__dict__.setdefault("_mcache", {})
        key = (x, y, v)
        hit = cache.get(key)
        if hit is not None:
            return hit
        S, T = self.space_base(x), self.space_base(y)
        acc = GradedMap.zero(S, T)
        for a, c in enumerate(v):
            if c:
                acc = acc + self.map_basis(x, y, a).scale(c)
        if len(cache) < 200000:
            cache[key] = acc
        return acc

    def apply(self, f: Mor) -> GradedMap:
        grid = [[self.map_vec(x, y, f.blocks[j][i]) for i, x in enumerate(f.src)]
                for j, y in enumerate(f.tgt)]
        return direct_sum_map(grid, [self.space_base(x) for x in f.src],
                              [self.space_base(y) for y in f.tgt]) if (f.src or f.tgt) else \
            GradedMap.zero(GradedSpace.zero(self.convention), GradedSpace.zero(self.convention))

    def mu(self, X, Y) -> GradedMap:
        """``F(X)⊗F(Y) -> F(X⊗Y)`` for formal sums."""
        X, Y = as_obj(X), as_obj(Y)
        As = [self.space_base(x) for x in X]
        Bs = [self.space_base(y) for y in Y]
        dist = distribute(As, Bs)
        parts = [self.mu_base(x, y) for x in X for y in Y]
        srcs = [p.source for p in parts]
        tgts = [p.target for p in parts]
        grid = [[parts[i] if i == j else GradedMap.zero(srcs[i], tgts[j])
                 for i in range(len(parts))] for j in range(len(parts))]
        blk = direct_sum_map(grid, srcs, tgts)
        T = self.space(self.cat.tensor_obj(X, Y))
        return GradedMap(dist.source, T, (blk @ dist).blocks) if parts else \
            GradedMap.zero(dist.source, T)

    def probe_on(self, k: int, X) -> GradedMap:
        X = as_obj(X)
        probe = self.probes()[k]
        maps = [probe[x] for x in X]
        grid = [[maps[i] if i == j else GradedMap.zero(maps[i].source, maps[j].target)
                 for i in range(len(X))] for j in range(len(X))]
        sp = [self.space_base(x) for x in X]
        return direct_sum_map(grid, sp, sp) if X else GradedMap.identity(self.space(X))


def distribute(As: Sequence[GradedSpace], Bs: Sequence[GradedSpace]) -> GradedMap:
    """``(⊕A_i)⊗(⊕B_j) -> ⊕_{(i,j)} A_i⊗B_j`` in lexicographic component order."""
    conv = (As or Bs)[0].convention if (As or Bs) else Z
    SA, SB = direct_sum(As, conv), direct_sum(Bs, conv)
    src = tensor_graded(SA, SB)
    comps = [tensor_graded(a, b) for a in As for b in Bs]
    tgt = direct_sum(comps, conv)

    def locate(spaces, d, idx):
        for k, s in enumerate(spaces):
            n = s.dim(d)
            if idx < n:
                return k, idx
            idx -= n
        raise AssertionError

    comp_idx = [tensor_index(a, b) for a in As for b in Bs]
    lookup = []
    for ci in comp_idx:
        lookup.append({d: {lab: p for p, lab in enumerate(labs)} for d, labs in ci.items()})
    blocks = {}
    for d, labs in tensor_index(SA, SB).items():
        rows = [[ZERO] * len(labs) for _ in range(tgt.dim(d))]
        for col, (a, i, b, j) in enumerate(labs):
            ka, li = locate(As, a, i)
            kb, lj = locate(Bs, b, j)
            c = ka * len(Bs) + kb
            off = sum(comps[t].dim(d) for t in range(c))
            rows[off + lookup[c][d][(a, li, b, lj)]][col] = ONE
        blocks[d] = QMatrix(rows, len(labs))
    return GradedMap(src, tgt, blocks)


class TableFunctor(Functor):
    """Functor given by explicit graded spaces, basis images and μ data."""

    def __init__(self, cat, spaces, maps, mu, unit_iso=None, probes=None, name=""):
        self.cat = cat
        self.name = name
        self.spaces = {x: s for x, s in spaces.items()}
        self.maps = maps            # (x, y) -> list of GradedMap
        self._mu = mu               # (x, y) -> GradedMap
        self._unit = unit_iso
        self._probes = probes or []

    def space_base(self, x):
        try:
            return self.spaces[x]
        except KeyError:
            raise PresentationError(f"functor has no value on object {x}") from None

    def map_basis(self, x, y, a):
        try:
            return self.maps[(x, y)][a]
        except (KeyError, IndexError):
            raise PresentationError(f"functor has no value on basis morphism {a} of hom({x},{y})") from None

    def mu_base(self, x, y):
        try:
            return self._mu[(x, y)]
        except KeyError:
            raise PresentationError(f"missing monoidal structure map for ({x},{y})") from None

    def unit_iso(self):
        if self._unit is None:
            return GradedMap.identity(unit_space(self.convention))
        return self._unit

    def probes(self):
        return self._probes


# ---------------------------------------------------------------------------
# validation

class Report:
    """Outcome of a validation: a list of (axiom, detail) violations."""

    def __init__(self, subject=""):
        self.subject = subject
        self.failures: List[Tuple[str, str]] = []
        self.checked = 0

    def fail(self, axiom, detail):
        self.failures.append((axiom, str(detail)))

    def check(self, ok, axiom, detail):
        self.checked += 1
        if not ok:
            self.fail(axiom, detail)
        return ok

    @property
    def ok(self) -> bool:
        return not self.failures

    def axioms_failed(self):
        return sorted({a for a, _ in self.failures})

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"Report({self.subject!r}, ok={self.ok}, checked={self.checked}, failures={self.failures[:3]})"


def _nonzero_pairs(cat):
    return [(x, y) for x in cat.objects for y in cat.objects if cat.hom_dim(x, y)]


class _Exhausted(Exception):
    pass


def validate_presentation(cat: Category, objects=None, max_failures=50, deep_limit="auto",
                          budget="auto") -> Report:
    """Check category, monoidal, symmetry and duality axioms on basis elements.

    Axioms quantified over several morphisms (associativity, functoriality of
    the tensor, naturality of the symmetry) run over objects whose endomorphism
    space has dimension at most ``deep_limit``; ``None`` means all objects.
    The default is unlimited for table presentations and 4 for models, whose
    axioms hold by construction inside graded vector spaces.  ``budget``
    caps the number of checks of each such axiom (unlimited for tables).
    """
    rep = Report("presentation")
    objs = list(objects or cat.objects)
    if deep_limit == "auto":
        deep_limit = getattr(cat, "validation_limit", None)
    if budget == "auto":
        budget = getattr(cat, "validation_budget", None)
    spent = {}

    def take(axiom):
        n = spent.get(axiom, 0)
        if budget is not None and n >= budget:
            raise _Exhausted
        spent[axiom] = n + 1
    deep = [x for x in objs if deep_limit is None or cat.hom_dim(x, x) <= deep_limit]
    deepset = set(deep)
    nz = {(x, y) for x in objs for y in objs if cat.hom_dim(x, y)}
    out_of = {x: [y for y in objs if (x, y) in nz and (x in deepset and y in deepset)] for x in objs}

    def basis(x, y):
        return [Mor.basis_element(cat, x, y, a) for a in range(cat.hom_dim(x, y))]

    # unitality and associativity
    for (x, y) in sorted(nz):
        for f in basis(x, y):
            ok = (Mor.identity(cat, y) @ f == f) and (f @ Mor.identity(cat, x) == f)
            if not rep.check(ok, "unitality", f"hom({x},{y})"):
                if len(rep.failures) >= max_failures:
                    return rep
    try:
        for x in objs:
            for y in out_of[x]:
                for z in out_of[y]:
                    for w in out_of[z]:
                        for f in basis(x, y):
                            for g in basis(y, z):
                                gf = g @ f
                                for h in basis(z, w):
                                    take("associativity")
                                    if not rep.check(h @ gf == (h @ g) @ f, "associativity",
                                                     f"({x},{y},{z},{w})"):
                                        if len(rep.failures) >= max_failures:
                                            return rep
    except _Exhausted:
        pass

    # tensor: strict unit and associativity on objects
    pairs = []
    for x in objs:
        for y in objs:
            if cat.tensor_defined((x,), (y,)):
                pairs.append((x, y))
    u = cat.unit
    for x in objs:
        for a, b in (((u,), (x,)), ((x,), (u,))):
            if cat.tensor_defined(a, b):
                rep.check(cat.tensor_obj(a, b) == (x,), "unit strictness", x)
    for (x, y) in pairs:
        xy = cat.tensor_obj((x,), (y,))
        for z in objs:
            try:
                lhs = cat.tensor_obj(xy, (z,))
                rhs = cat.tensor_obj((x,), cat.tensor_obj((y,), (z,)))
            except TensorUndefined:
                continue
            rep.check(lhs == rhs, "tensor associativity", (x, y, z))

    # functoriality of tensor: (g⊗g')(f⊗f') = (gf)⊗(g'f') and identities
    pairset = set(pairs)
    for (x, y) in pairs:
        ixy = Mor.identity(cat, cat.tensor_obj((x,), (y,)))
        if not rep.check(Mor.identity(cat, x).tensor(Mor.identity(cat, y)) == ixy,
                         "tensor identity", (x, y)):
            continue
    try:
        for (x, y) in pairs:
            for x2 in out_of[x]:
                for y2 in out_of[y]:
                    if (x2, y2) not in pairset:
                        continue
                    for x3 in out_of[x2]:
                        for y3 in out_of[y2]:
                            if (x3, y3) not in pairset:
                                continue
                            for f in basis(x, x2):
                                for g in basis(x2, x3):
                                    for f2 in basis(y, y2):
                                        for g2 in basis(y2, y3):
                                            take("tensor functoriality")
                                            lhs = g.tensor(g2) @ f.tensor(f2)
                                            rhs = (g @ f).tensor(g2 @ f2)
                                            if not rep.check(lhs == rhs, "tensor functoriality",
                                                             (x, x2, x3, y, y2, y3)):
                                                if len(rep.failures) >= max_failures:
                                                    return rep
    except _Exhausted:
        pass

    # symmetry: naturality, involution, hexagon
    for (x, y) in pairs:
        if (y, x) not in pairset:
            continue
        s = symmetry(cat, (x,), (y,))
        s2 = symmetry(cat, (y,), (x,))
        rep.check((s2 @ s) == Mor.identity(cat, s.src), "symmetry involution", (x, y))
        for x2 in out_of[x]:
            for y2 in out_of[y]:
                if (x2, y2) not in pairset or (y2, x2) not in pairset:
                    continue
                t = symmetry(cat, (x2,), (y2,))
                for f in basis(x, x2):
                    for g in basis(y, y2):
                        if budget is not None and spent.get("symmetry naturality", 0) >= budget:
                            break
                        spent["symmetry naturality"] = spent.get("symmetry naturality", 0) + 1
                        rep.check(t @ f.tensor(g) == g.tensor(f) @ s, "symmetry naturality",
                                  (x, y, x2, y2))
    for (x, y) in pairs:
        for z in objs:
            X, Y, Zz = (x,), (y,), (z,)
            try:
                YZ = cat.tensor_obj(Y, Zz)
                lhs = symmetry(cat, X, YZ)
                rhs = (Mor.identity(cat, Y).tensor(symmetry(cat, X, Zz))
                       @ symmetry(cat, X, Y).tensor(Mor.identity(cat, Zz)))
            except TensorUndefined:
                continue
            except PresentationError as e:
                rep.fail("hexagon", f"{(x, y, z)}: {e}")
                continue
            rep.check(lhs == rhs, "hexagon", (x, y, z))

    # duality: zig-zag identities where the needed tensors exist
    for x in objs:
        if not cat.has_dual(x):
            continue
        X = (x,)
        Xd = cat.dual_obj(X)
        try:
            ev, coev = evaluation(cat, X), coevaluation(cat, X)
            z1 = (Mor.identity(cat, X).tensor(ev) @ coev.tensor(Mor.identity(cat, X)))
            z2 = (ev.tensor(Mor.identity(cat, Xd)) @ Mor.identity(cat, Xd).tensor(coev))
        except TensorUndefined:
            continue
        rep.check(z1 == Mor.identity(cat, X), "zig-zag", f"{x}: (id⊗ev)(coev⊗id)")
        rep.check(z2 == Mor.identity(cat, Xd), "zig-zag", f"{x}: (ev⊗id)(id⊗coev)")
    return rep


def validate_functor(cat: Category, fun: Functor, objects=None, check_probes=True,
                     deep_limit="auto") -> Report:
    """Check functoriality, naturality of μ, symmetry and unit compatibility.

    ``deep_limit`` restricts the two-morphism checks as in
    :func:`validate_presentation`; single-morphism checks run everywhere."""
    rep = Report("functor")
    objs = list(objects or cat.objects)
    if deep_limit == "auto":
        deep_limit = getattr(cat, "validation_limit", None)
    deepset = {x for x in objs if deep_limit is None or cat.hom_dim(x, x) <= deep_limit}
    for x in objs:
        try:
            fun.space_base(x)
        except PresentationError as e:
            rep.fail("missing data", e)
    if not rep.ok:
        return rep
    nz = [(x, y) for x in objs for y in objs if cat.hom_dim(x, y)]
    for x in objs:
        rep.check(fun.apply(Mor.identity(cat, x)).is_identity(), "identity", x)
    out_of = {x: [y for (a, y) in nz if a == x] for x in objs}
    deep_out = {x: [y for y in out_of[x] if x in deepset and y in deepset] for x in objs}
    for x in objs:
        for y in deep_out[x]:
            for z in deep_out[y]:
                for a in range(cat.hom_dim(x, y)):
                    f = Mor.basis_element(cat, x, y, a)
                    Hf = fun.apply(f)
                    for b in range(cat.hom_dim(y, z)):
                        g = Mor.basis_element(cat, y, z, b)
                        rep.check(fun.apply(g @ f) == fun.apply(g) @ Hf, "functoriality",
                                  (x, y, z, a, b))
    pairs = [(x, y) for x in objs for y in objs if cat.tensor_defined((x,), (y,))]
    pairset = set(pairs)
    for (x, y) in pairs:
        try:
            m = fun.mu((x,), (y,))
        except PresentationError as e:
            rep.fail("missing data", e)
            continue
        rep.check(m.is_iso(), "mu invertible", (x, y))
        if (y, x) in pairset:
            lhs = fun.apply(symmetry(cat, (x,), (y,))) @ m
            rhs = fun.mu((y,), (x,)) @ koszul_symmetry(fun.space_base(x), fun.space_base(y))
            rep.check(lhs == rhs, "symmetry compatibility", (x, y))
        for x2 in deep_out[x]:
            for y2 in deep_out[y]:
                if (x2, y2) not in pairset:
                    continue
                m2 = fun.mu((x2,), (y2,))
                for a in range(cat.hom_dim(x, x2)):
                    f = Mor.basis_element(cat, x, x2, a)
                    for b in range(cat.hom_dim(y, y2)):
                        g = Mor.basis_element(cat, y, y2, b)
                        lhs = fun.apply(f.tensor(g)) @ m
                        rhs = m2 @ tensor_maps(fun.apply(f), fun.apply(g))
                        rep.check(lhs == rhs, "mu naturality", (x, y, x2, y2, a, b))
    # unit coherence: μ_{1,x} ∘ (u ⊗ id) is the canonical identification
    u = fun.unit_iso()
    rep.check(u.is_iso(), "unit iso invertible", cat.unit)
    for x in objs:
        for left in (True, False):
            pair = (cat.unit, x) if left else (x, cat.unit)
            if pair not in pairset:
                continue
            idx = GradedMap.identity(fun.space_base(x))
            m = fun.mu((pair[0],), (pair[1],))
            t = tensor_maps(u, idx) if left else tensor_maps(idx, u)
            comp = m @ t
            rep.check(comp.to_matrix().is_identity(), "unit coherence", (x, "left" if left else "right"))
    # associativity coherence of μ with strict associativity
    for (x, y) in pairs:
        xy = cat.tensor_obj((x,), (y,))
        for z in objs:
            try:
                yz = cat.tensor_obj((y,), (z,))
                cat.tensor_obj(xy, (z,))
                cat.tensor_obj((x,), yz)
            except TensorUndefined:
                continue
            from .graded import associator
            Hx, Hy, Hz = (fun.space_base(t) for t in (x, y, z))
            lhs = fun.mu(xy, (z,)) @ tensor_maps(fun.mu((x,), (y,)), GradedMap.identity(Hz))
            rhs = (fun.mu((x,), yz) @ tensor_maps(GradedMap.identity(Hx), fun.mu((y,), (z,)))
                   @ associator(Hx, Hy, Hz))
            rep.check(lhs.to_matrix() == rhs.to_matrix(), "mu associativity", (x, y, z))
    if check_probes:
        for k, probe in enumerate(fun.probes()):
            for x in objs:
                g = probe.get(x)
                if g is None or not g.is_iso():
                    rep.fail("probe", f"probe {k} not an automorphism at {x}")
            for (x, y) in nz:
                for a in range(cat.hom_dim(x, y)):
                    Hf = fun.map_basis(x, y, a)
                    rep.check(probe[y] @ Hf == Hf @ probe[x], "probe naturality", (k, x, y, a))
            for (x, y) in pairs:
                lhs = fun.probe_on(k, cat.tensor_obj((x,), (y,))) @ fun.mu((x,), (y,))
                rhs = fun.mu((x,), (y,)) @ tensor_maps(probe[x], probe[y])
                rep.check(lhs == rhs, "probe monoidality", (k, x, y))
    return rep
