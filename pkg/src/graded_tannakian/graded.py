"""Graded rational vector spaces with the Koszul symmetric monoidal structure.

Degrees are tuples of ints: ``(k,)`` for the integer grading and ``(n, k)``
for the bigrading (chain degree, internal degree) produced by homology.
Plain ints are accepted wherever a degree is expected and promoted to
``(k,)``.

Within one degree the basis of ``V ⊗ W`` is ordered lexicographically by
``(a, i, j)``: the V-degree ``a``, then the V-index, then the W-index.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .linalg import QMatrix, ZERO, ONE, is_invertible, rank, hstack, vstack

Degree = Tuple[int, ...]


class GradingError(ValueError):
    pass


def deg(d) -> Degree:
    if type(d) is tuple:
        return d
    if isinstance(d, int):
        return (d,)
    return tuple(int(x) for x in d)


def add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def neg(a: Degree) -> Degree:
    return tuple(-x for x in a)


@dataclass(frozen=True)
class GradingConvention:
    """Grading group Z^rank with a sign character given on generators."""

    rank: int = 1
    generator_signs: Tuple[int, ...] = (-1,)

    def __post_init__(self):
        if len(self.generator_signs) != self.rank:
            raise GradingError("one sign per generator required")
        if any(s not in (1, -1) for s in self.generator_signs):
            raise GradingError("signs must be +1 or -1")

    def epsilon(self, d) -> int:
        d = deg(d)
        if len(d) != self.rank:
            raise GradingError(f"degree {d} does not belong to Z^{self.rank}")
        s = 1
        for x, g in zip(d, self.generator_signs):
            if g == -1 and x % 2:
                s = -s
        return s

    def koszul_sign(self, a, b) -> int:
        return -1 if self.epsilon(a) == -1 and self.epsilon(b) == -1 else 1


Z = GradingConvention(1, (-1,))
ZZ = GradingConvention(2, (-1, -1))


def convention_for(rank: int) -> GradingConvention:
    return Z if rank == 1 else ZZ if rank == 2 else GradingConvention(rank, (-1,) * rank)


class GradedSpace:
    """Finitely supported graded vector space, stored as degree -> dimension."""

    __slots__ = ("dims", "convention", "_degrees", "_offsets")

    def __init__(self, dims: Mapping, convention: GradingConvention = None):
        clean = {}
        for d, n in dims.items():
            d = deg(d)
            if n < 0:
                raise GradingError("negative dimension")
            if n:
                clean[d] = int(n)
        if convention is None:
            ranks = {len(d) for d in clean}
            convention = convention_for(ranks.pop() if ranks else 1)
        for d in clean:
            if len(d) != convention.rank:
                raise GradingError(f"degree {d} incompatible with convention")
        self.dims = dict(sorted(clean.items()))
        self.convention = convention
        self._degrees = tuple(self.dims)
        offs = {}
        o = 0
        for d in self._degrees:
            offs[d] = o
            o += self.dims[d]
        self._offsets = offs

    @classmethod
    def zero(cls, convention=Z):
        return cls({}, convention)

    def dim(self, d) -> int:
        return self.dims.get(deg(d), 0)

    @property
    def degrees(self):
        return self._degrees

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def offset(self, d) -> int:
        return self._offsets[deg(d)]

    def basis(self):
        """List of (degree, index) in the canonical total order."""
        return [(d, i) for d in self._degrees for i in range(self.dims[d])]

    def __eq__(self, other):
        return (isinstance(other, GradedSpace) and self.dims == other.dims
                and self.convention == other.convention)

    def __hash__(self):
        return hash((tuple(self.dims.items()), self.convention))

    def __repr__(self):
        inner = ", ".join(f"{d if len(d) > 1 else d[0]}:{n}" for d, n in self.dims.items())
        return f"GradedSpace({{{inner}}})"

    def shift(self, by) -> "GradedSpace":
        by = deg(by)
        return GradedSpace({add(d, by): n for d, n in self.dims.items()}, self.convention)


def _check_conv(*spaces):
    c = spaces[0].convention
    for s in spaces[1:]:
        if s.convention != c:
            raise GradingError("grading convention mismatch")
    return c


class GradedMap:
    """Degree-preserving linear map; ``blocks[d]`` is ``target.dim(d) x source.dim(d)``."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: GradedSpace, target: GradedSpace, blocks: Mapping = None):
        _check_conv(source, target)
        self.source = source
        self.target = target
        bl = {}
        for d, m in (blocks or {}).items():
            d = deg(d)
            if not isinstance(m, QMatrix):
                m = QMatrix(m, source.dim(d))
            if m.shape != (target.dim(d), source.dim(d)):
                raise GradingError(f"block at {d} has shape {m.shape}, expected "
                                   f"{(target.dim(d), source.dim(d))}")
            if source.dim(d) and target.dim(d) and not m.is_zero():
                bl[d] = m
        self.blocks = bl

    def block(self, d) -> QMatrix:
        d = deg(d)
        m = self.blocks.get(d)
        if m is None:
            return QMatrix.zeros(self.target.dim(d), self.source.dim(d))
        return m

    @classmethod
    def identity(cls, V: GradedSpace) -> "GradedMap":
        return cls(V, V, {d: QMatrix.identity(n) for d, n in V.dims.items()})

    @classmethod
    def zero(cls, V: GradedSpace, W: GradedSpace) -> "GradedMap":
        return cls(V, W, {})

    @classmethod
    def from_matrix(cls, V: GradedSpace, W: GradedSpace, m: QMatrix) -> "GradedMap":
        """Split a total matrix into degree blocks; off-degree entries must vanish."""
        if m.shape != (W.total_dim, V.total_dim):
            raise GradingError("total matrix shape mismatch")
        blocks = {}
        wb, vb = W.basis(), V.basis()
        for r, (dr, _) in enumerate(wb):
            for c, (dc, _) in enumerate(vb):
                if dr != dc and m[r, c]:
                    raise GradingError("matrix does not preserve degrees")
        for d in set(V.degrees) & set(W.degrees):
            ro, co = W.offset(d), V.offset(d)
            blocks[d] = m.submatrix(range(ro, ro + W.dim(d)), range(co, co + V.dim(d)))
        return cls(V, W, blocks)

    def to_matrix(self) -> QMatrix:
        rows = [[ZERO] * self.source.total_dim for _ in range(self.target.total_dim)]
        for d, m in self.blocks.items():
            ro, co = self.target.offset(d), self.source.offset(d)
            for i, r in enumerate(m.rows):
                for j, x in enumerate(r):
                    rows[ro + i][co + j] = x
        return QMatrix(rows, self.source.total_dim)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.blocks == other.blocks)

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.blocks.items()))))

    def __repr__(self):
        return f"GradedMap({self.source} -> {self.target}, {self.blocks})"

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise GradingError("composition of non-composable graded maps")
        blocks = {}
        for d in set(self.blocks) & set(other.blocks):
            blocks[d] = self.blocks[d] @ other.blocks[d]
        return GradedMap(other.source, self.target, blocks)

    def _combine(self, other, op):
        if self.source != other.source or self.target != other.target:
            raise GradingError("graded maps with different source/target")
        blocks = {}
        for d in set(self.blocks) | set(other.blocks):
            blocks[d] = op(self.block(d), other.block(d))
        return GradedMap(self.source, self.target, blocks)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target, {d: m.scale(c) for d, m in self.blocks.items()})

    def is_zero(self) -> bool:
        return not self.blocks

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            self.block(d).is_identity() for d in self.source.degrees)

    def rank(self, d=None) -> int:
        if d is not None:
            return rank(self.block(d))
        return sum(rank(m) for m in self.blocks.values())

    def is_injective(self) -> bool:
        return all(self.rank(d) == self.source.dim(d) for d in self.source.degrees)

    def is_surjective(self) -> bool:
        return all(self.rank(d) == self.target.dim(d) for d in self.target.degrees)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and all(
            is_invertible(self.block(d)) for d in self.source.degrees)

    def inverse(self) -> "GradedMap":
        if not self.is_iso():
            raise GradingError("graded map is not invertible")
        return GradedMap(self.target, self.source,
                         {d: self.block(d).inverse() for d in self.source.degrees})

    def transpose(self) -> "GradedMap":
        """Dual map ``W^∨ -> V^∨`` (plain transpose, blocks at negated degrees)."""
        return GradedMap(dual_graded(self.target), dual_graded(self.source),
                         {neg(d): m.T for d, m in self.blocks.items()})

    def restrict_degree(self, d) -> QMatrix:
        return self.block(d)


# ---------------------------------------------------------------------------
# monoidal structure

@lru_cache(maxsize=4096)
def tensor_index(V: GradedSpace, W: GradedSpace) -> Dict[Degree, list]:
    """For each degree of V⊗W, the ordered list of (a, i, b, j) basis labels.

    The result is cached and must not be mutated."""
    out: Dict[Degree, list] = {}
    for a in V.degrees:
        for b in W.degrees:
            d = add(a, b)
            out.setdefault(d, [])
    for d in out:
        lab = []
        for a in V.degrees:
            b = tuple(x - y for x, y in zip(d, a))
            nb = W.dim(b)
            if not nb:
                continue
            for i in range(V.dims[a]):
                for j in range(nb):
                    lab.append((a, i, b, j))
        out[d] = lab
    return dict(sorted(out.items()))


@lru_cache(maxsize=4096)
def tensor_graded(V: GradedSpace, W: GradedSpace) -> GradedSpace:
    c = _check_conv(V, W)
    dims: Dict[Degree, int] = {}
    for a, n in V.dims.items():
        for b, m in W.dims.items():
            d = add(a, b)
            dims[d] = dims.get(d, 0) + n * m
    return GradedSpace(dims, c)


def tensor_maps(f: GradedMap, g: GradedMap) -> GradedMap:
    """``f ⊗ g : V⊗W -> V'⊗W'`` (no signs: both maps have degree zero)."""
    S = tensor_graded(f.source, g.source)
    T = tensor_graded(f.target, g.target)
    sidx = tensor_index(f.source, g.source)
    tidx = tensor_index(f.target, g.target)
    blocks = {}
    for d, slab in sidx.items():
        tlab = tidx.get(d)
        if not tlab:
            continue
        # positions by (a, b) pair
        spos = {}
        for k, (a, i, b, j) in enumerate(slab):
            spos.setdefault(a, []).append(k)
        rows = [[ZERO] * len(slab) for _ in tlab]
        for r, (a, i, b, j) in enumerate(tlab):
            fa, gb = f.blocks.get(a), g.blocks.get(b)
            if fa is None or gb is None:
                continue
            base = spos.get(a)
            if base is None:
                continue
            na_src = f.source.dim(a)
            nb_src = g.source.dim(b)
            start = base[0]
            frow, grow = fa.rows[i], gb.rows[j]
            for ii in range(na_src):
                x = frow[ii]
                if not x:
                    continue
                for jj in range(nb_src):
                    y = grow[jj]
                    if y:
                        rows[r][start + ii * nb_src + jj] = x * y
        blocks[d] = QMatrix(rows, len(slab))
    return GradedMap(S, T, blocks)


def koszul_symmetry(V: GradedSpace, W: GradedSpace) -> GradedMap:
    """``v⊗w ↦ s(a,b) w⊗v`` with ``s = -1`` iff ``ε(a) = ε(b) = -1``."""
    c = _check_conv(V, W)
    S, T = tensor_graded(V, W), tensor_graded(W, V)
    sidx, tidx = tensor_index(V, W), tensor_index(W, V)
    blocks = {}
    for d, slab in sidx.items():
        tpos = {lab: k for k, lab in enumerate(tidx[d])}
        rows = [[ZERO] * len(slab) for _ in slab]
        for k, (a, i, b, j) in enumerate(slab):
            rows[tpos[(b, j, a, i)]][k] = Fraction(c.koszul_sign(a, b))
        blocks[d] = QMatrix(rows, len(slab))
    return GradedMap(S, T, blocks)


def plain_swap(V: GradedSpace, W: GradedSpace) -> GradedMap:
    """Sign-free swap ``v⊗w ↦ w⊗v``."""
    S, T = tensor_graded(V, W), tensor_graded(W, V)
    sidx, tidx = tensor_index(V, W), tensor_index(W, V)
    blocks = {}
    for d, slab in sidx.items():
        tpos = {lab: k for k, lab in enumerate(tidx[d])}
        rows = [[ZERO] * len(slab) for _ in slab]
        for k, (a, i, b, j) in enumerate(slab):
            rows[tpos[(b, j, a, i)]][k] = ONE
        blocks[d] = QMatrix(rows, len(slab))
    return GradedMap(S, T, blocks)


def associator(U: GradedSpace, V: GradedSpace, W: GradedSpace) -> GradedMap:
    """Basis reordering ``(U⊗V)⊗W -> U⊗(V⊗W)``."""
    UV, VW = tensor_graded(U, V), tensor_graded(V, W)
    S, T = tensor_graded(UV, W), tensor_graded(U, VW)
    uv_idx, vw_idx = tensor_index(U, V), tensor_index(V, W)
    sidx, tidx = tensor_index(UV, W), tensor_index(U, VW)
    blocks = {}
    for d, slab in sidx.items():
        tpos = {}
        for k, (a, i, bc, jk) in enumerate(tidx[d]):
            _, j, c, l = vw_idx[bc][jk]
            tpos[(a, i, _, j, c, l)] = k
        rows = [[ZERO] * len(slab) for _ in slab]
        for k, (ab, ij, c, l) in enumerate(slab):
            a, i, b, j = uv_idx[ab][ij]
            rows[tpos[(a, i, b, j, c, l)]][k] = ONE
        blocks[d] = QMatrix(rows, len(slab))
    return GradedMap(S, T, blocks)


def unit_space(convention=Z) -> GradedSpace:
    return GradedSpace({(0,) * convention.rank: 1}, convention)


def dual_graded(V: GradedSpace) -> GradedSpace:
    return GradedSpace({neg(d): n for d, n in V.dims.items()}, V.convention)


def evaluation(V: GradedSpace) -> GradedMap:
    """``V^∨ ⊗ V -> Q``, pairing dual basis vectors."""
    Vd = dual_graded(V)
    S = tensor_graded(Vd, V)
    one = unit_space(V.convention)
    z = (0,) * V.convention.rank
    lab = tensor_index(Vd, V).get(z, [])
    row = [ONE if (neg(a) == b and i == j) else ZERO for (a, i, b, j) in lab]
    return GradedMap(S, one, {z: QMatrix([row], len(lab))} if lab else {})


def coevaluation(V: GradedSpace) -> GradedMap:
    """``Q -> V ⊗ V^∨``, ``1 ↦ Σ e_i ⊗ e_i^*``."""
    Vd = dual_graded(V)
    T = tensor_graded(V, Vd)
    one = unit_space(V.convention)
    z = (0,) * V.convention.rank
    lab = tensor_index(V, Vd).get(z, [])
    col = [[ONE] if (neg(a) == b and i == j) else [ZERO] for (a, i, b, j) in lab]
    return GradedMap(one, T, {z: QMatrix(col, 1)} if lab else {})


def direct_sum(spaces: Iterable[GradedSpace], convention=None) -> GradedSpace:
    spaces = list(spaces)
    if convention is None:
        convention = spaces[0].convention if spaces else Z
    dims: Dict[Degree, int] = {}
    for s in spaces:
        for d, n in s.dims.items():
            dims[d] = dims.get(d, 0) + n
    return GradedSpace(dims, convention)


def direct_sum_map(grid, sources, targets) -> GradedMap:
    """Block map ``⊕ sources -> ⊕ targets``; ``grid[j][i]`` maps source i to target j."""
    conv = (sources or targets)[0].convention if (sources or targets) else Z
    S, T = direct_sum(sources, conv), direct_sum(targets, conv)
    blocks = {}
    for d in set(S.degrees) & set(T.degrees):
        rows = []
        for j, t in enumerate(targets):
            if not t.dim(d):
                continue
            parts = [grid[j][i].block(d) for i, s in enumerate(sources) if s.dim(d)]
            rows.append(hstack(parts) if parts else QMatrix.zeros(t.dim(d), 0))
        blocks[d] = vstack(rows)
    return GradedMap(S, T, blocks)


def degree_projector(V: GradedSpace, keep) -> GradedMap:
    """Identity on the degrees selected by ``keep(d)``, zero elsewhere."""
    return GradedMap(V, V, {d: QMatrix.identity(n) for d, n in V.dims.items() if keep(d)})


def convolve(a: Mapping, b: Mapping) -> Dict[Degree, int]:
    """Dimension convolution (the Kunneth rule)."""
    out: Dict[Degree, int] = {}
    for x, n in a.items():
        for y, m in b.items():
            d = add(deg(x), deg(y))
            out[d] = out.get(d, 0) + n * m
    return {d: n for d, n in sorted(out.items()) if n}
