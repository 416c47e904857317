"""Concrete presentations: graded representations of a finitely generated group.

A *letter* is a graded space with an action of each group generator.  Base
objects are words in letters (``"C.Lm"``; the unit is ``"1"``); the model of
a word is the left-nested tensor product of its letters with the diagonal
action.  Hom spaces are the degree-preserving equivariant maps, with the
canonical kernel basis, so coordinates of an equivariant map are read off
at the free positions of that basis.

The identity functor on models is faithful and symmetric strong monoidal;
it is provided by :class:`ModelFunctor`.  The generator actions are tensor
automorphisms of it and are exposed as probes.
"""
from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .category import Category, Functor, PresentationError, TensorUndefined
from .graded import (GradedMap, GradedSpace, koszul_symmetry, neg, tensor_graded,
                     tensor_index, tensor_maps, unit_space)
from .linalg import QMatrix, ZERO, ONE, kernel_basis

UNIT = "1"


def parse_word(label: str) -> Tuple[str, ...]:
    if label == UNIT or label == "":
        return ()
    return tuple(label.split("."))


def word_label(word: Sequence[str]) -> str:
    return ".".join(word) if word else UNIT


def _total_matrix(space: GradedSpace, act) -> QMatrix:
    """Accept a GradedMap, a dict of degree blocks or a total matrix."""
    if isinstance(act, QMatrix):
        return act
    if isinstance(act, GradedMap):
        return act.to_matrix()
    if isinstance(act, dict):
        return GradedMap(space, space, act).to_matrix()
    return QMatrix(act, space.total_dim)


class Letter:
    """Graded space with generator actions; ``weights`` is an optional
    per-degree list assigning an integer weight to each basis vector.

    Actions are matrices on the total space (basis in degree order).  They
    may mix degrees of equal sign, which keeps the Koszul swap equivariant.
    """

    def __init__(self, name, dims, actions, dual=None, weights=None):
        self.name = name
        self.space = dims if isinstance(dims, GradedSpace) else GradedSpace(dims)
        n = self.space.total_dim
        basis = self.space.basis()
        eps = [self.space.convention.epsilon(d) for d, _ in basis]
        self.total: List[QMatrix] = []
        for act in actions:
            m = _total_matrix(self.space, act)
            if m.nrows != n or m.ncols != n:
                raise PresentationError(f"action on letter {name} has the wrong size")
            for r in range(n):
                for c in range(n):
                    if m[r, c] and eps[r] != eps[c]:
                        raise PresentationError(
                            f"action on letter {name} mixes degrees of opposite sign")
            if m.rank() != n:
                raise PresentationError(f"generator action on letter {name} is not invertible")
            self.total.append(m)
        self.graded = all(_is_block_diagonal(self.space, m) for m in self.total)
        self.dual = dual
        self.weights = None
        if weights is not None:
            self.weights = {}
            for d, ws in weights.items():
                d = (d,) if isinstance(d, int) else tuple(d)
                if len(ws) != self.space.dim(d):
                    raise PresentationError(f"weights of letter {name} in degree {d} have wrong length")
                self.weights[d] = tuple(int(w) for w in ws)

    @property
    def actions(self) -> List[GradedMap]:
        """Degree-preserving actions as graded maps (only for graded letters)."""
        if not self.graded:
            raise PresentationError(f"letter {self.name} has a degree-mixing action")
        return [GradedMap.from_matrix(self.space, self.space, m) for m in self.total]


def _is_block_diagonal(space: GradedSpace, m: QMatrix) -> bool:
    basis = space.basis()
    for r, (dr, _) in enumerate(basis):
        row = m.rows[r]
        for c, (dc, _) in enumerate(basis):
            if row[c] and dr != dc:
                return False
    return True


def _dual_perm(space: GradedSpace, dspace: GradedSpace):
    """Total index in ``dspace`` of the dual of each basis vector of ``space``."""
    return [dspace.offset(neg(d)) + i for d, i in space.basis()]


def contragredient(letter: Letter, name: str) -> Letter:
    sp = GradedSpace({neg(d): n for d, n in letter.space.dims.items()}, letter.space.convention)
    perm = _dual_perm(letter.space, sp)
    n = sp.total_dim
    acts = []
    for a in letter.total:
        it = a.inverse().T
        rows = [[ZERO] * n for _ in range(n)]
        for r in range(n):
            for c in range(n):
                rows[perm[r]][perm[c]] = it[r, c]
        acts.append(QMatrix(rows, n))
    w = None
    if letter.weights is not None:
        w = {neg(d): tuple(-x for x in ws) for d, ws in letter.weights.items()}
    return Letter(name, sp, acts, dual=letter.name, weights=w)


class ModelCategory(Category):
    validation_limit = 4
    validation_budget = 4000

    def __init__(self, letters: Dict[str, Letter], words: Sequence[str], ngens: int, name=""):
        self.name = name
        self.letters = dict(letters)
        self.ngens = ngens
        for lt in self.letters.values():
            if len(lt.total) != ngens:
                raise PresentationError(f"letter {lt.name} needs {ngens} generator actions")
        self.unit = UNIT
        objs = [UNIT] + [w for w in words if w != UNIT]
        seen = set()
        self.objects = []
        for w in objs:
            for c in parse_word(w):
                if c not in self.letters:
                    raise PresentationError(f"word {w!r} uses unknown letter {c!r}")
            if w not in seen:
                seen.add(w)
                self.objects.append(w)
        self._model, self._index, self._actions = {}, {}, {}
        self._hom = {}
        self._comp = {}
        self._tens = {}
        self._mu = {}
        self._tbase = {}

    # models ------------------------------------------------------------
    def model(self, x: str) -> GradedSpace:
        sp = self._model.get(x)
        if sp is None:
            w = parse_word(x)
            sp = unit_space()
            for c in w:
                sp = tensor_graded(sp, self.letters[c].space)
            self._model[x] = sp
        return sp

    def word_index(self, x: str):
        """degree -> list of letter-basis tuples ``((deg, idx), ...)`` in model order."""
        idx = self._index.get(x)
        if idx is None:
            w = parse_word(x)
            idx = {(0,): [()]}
            sp = unit_space()
            for c in w:
                lsp = self.letters[c].space
                new = {}
                for d, labs in tensor_index(sp, lsp).items():
                    new[d] = [idx[a][i] + ((b, j),) for (a, i, b, j) in labs]
                idx = new
                sp = tensor_graded(sp, lsp)
            self._index[x] = idx
        return idx

    def total_action(self, x: str, k: int) -> QMatrix:
        """Action of generator ``k`` on the model of ``x`` (total basis order)."""
        key = (x, k)
        a = self._actions.get(key)
        if a is None:
            sp = unit_space()
            a = QMatrix.identity(1)
            for c in parse_word(x):
                lt = self.letters[c]
                lsp = lt.space
                kr = a.kron(lt.total[k])
                new = tensor_graded(sp, lsp)
                nl = lsp.total_dim
                perm = []
                for d, labs in tensor_index(sp, lsp).items():
                    for (da, i, db, j) in labs:
                        perm.append((sp.offset(da) + i) * nl + lsp.offset(db) + j)
                a = kr.submatrix(perm, perm)
                sp = new
            self._actions[key] = a
        return a

    def is_graded(self) -> bool:
        return all(lt.graded for lt in self.letters.values())

    def action(self, x: str, k: int) -> GradedMap:
        """Degree-preserving generator action as a graded map."""
        m = self.total_action(x, k)
        sp = self.model(x)
        if not _is_block_diagonal(sp, m):
            raise PresentationError(f"action on {x} is not degree-preserving")
        return GradedMap.from_matrix(sp, sp, m)

    def weight_vector(self, x: str, d):
        out = []
        for tup in self.word_index(x)[d]:
            s = 0
            for c, (dd, i) in zip(parse_word(x), tup):
                lw = self.letters[c].weights
                if lw is None:
                    raise PresentationError(f"letter {c} has no weights")
                s += lw[dd][i]
            out.append(s)
        return out

    # hom spaces ---------------------------------------------------------
    def _hom_data(self, x, y):
        """(basis GradedMaps, free variable positions, variable layout).

        Unknowns are the entries of the degree blocks, concatenated in degree
        order (row-major within a block); the basis is the canonical kernel
        basis of the equivariance equations."""
        key = (x, y)
        hd = self._hom.get(key)
        if hd is not None:
            return hd
        self.check_object(x)
        self.check_object(y)
        X, Y = self.model(x), self.model(y)
        blocks, nvar = [], 0
        for d in X.degrees:
            nx, ny = X.dim(d), Y.dim(d)
            if ny:
                blocks.append((d, nvar, nx, ny))
                nvar += nx * ny
        vecs = []
        if self.is_graded():
            # block-diagonal system: solve degree by degree
            for d, off, nx, ny in blocks:
                rows = []
                for k in range(self.ngens):
                    ax = self.total_action(x, k)
                    ay = self.total_action(y, k)
                    ox, oy = X.offset(d), Y.offset(d)
                    for r in range(ny):
                        for c in range(nx):
                            row = [ZERO] * (nx * ny)
                            for t in range(ny):
                                v = ay[oy + r, oy + t]
                                if v:
                                    row[t * nx + c] += v
                            for t in range(nx):
                                v = ax[ox + t, ox + c]
                                if v:
                                    row[r * nx + t] -= v
                            if any(row):
                                rows.append(row)
                K = kernel_basis(QMatrix(rows, nx * ny)) if rows else QMatrix.identity(nx * ny)
                for col in K.columns():
                    vec = [ZERO] * nvar
                    vec[off:off + nx * ny] = col
                    vecs.append(tuple(vec))
        else:
            # variable index of T[(row in Y total), (col in X total)]
            var = {}
            for d, off, nx, ny in blocks:
                ox, oy = X.offset(d), Y.offset(d)
                for r in range(ny):
                    for c in range(nx):
                        var[(oy + r, ox + c)] = off + r * nx + c
            nX, nY = X.total_dim, Y.total_dim
            rows = []
            for k in range(self.ngens):
                ax, ay = self.total_action(x, k), self.total_action(y, k)
                for R in range(nY):
                    for C in range(nX):
                        row = [ZERO] * nvar
                        for t in range(nY):
                            v = ay[R, t]
                            if v and (t, C) in var:
                                row[var[(t, C)]] += v
                        for t in range(nX):
                            v = ax[t, C]
                            if v and (R, t) in var:
                                row[var[(R, t)]] -= v
                        if any(row):
                            rows.append(row)
            K = kernel_basis(QMatrix(rows, nvar)) if rows else QMatrix.identity(nvar)
            vecs = K.columns()
        free = _free_positions(vecs)
        basis = [self._vec_to_map(X, Y, blocks, v) for v in vecs]
        hd = (basis, free, blocks)
        self._hom[key] = hd
        return hd

    @staticmethod
    def _vec_to_map(X, Y, blocks, vec) -> GradedMap:
        out = {}
        for d, off, nx, ny in blocks:
            seg = vec[off:off + nx * ny]
            if any(seg):
                out[d] = QMatrix([seg[r * nx:(r + 1) * nx] for r in range(ny)], nx)
        return GradedMap(X, Y, out)

    def hom_labels(self, x, y):
        basis, free, blocks = self._hom_data(x, y)
        labels = []
        for p in free:
            d = next(b[0] for b in reversed(blocks) if b[1] <= p)
            labels.append(f"{x}->{y}@{d[0] if len(d) == 1 else d}#{p}")
        return labels

    def hom_dim(self, x, y):
        return len(self._hom_data(x, y)[0])

    def hom_basis_maps(self, x, y) -> List[GradedMap]:
        return self._hom_data(x, y)[0]

    def to_map(self, x, y, v) -> GradedMap:
        basis = self._hom_data(x, y)[0]
        X, Y = self.model(x), self.model(y)
        blocks = {}
        for b, c in zip(basis, v):
            if c:
                for d, m in b.blocks.items():
                    blocks[d] = blocks[d] + m.scale(c) if d in blocks else m.scale(c)
        return GradedMap(X, Y, blocks)

    def _free_entries(self, x, y):
        """(degree, row, col) of each free variable."""
        key = ("free", x, y)
        ent = self._hom.get(key)
        if ent is None:
            _, free, blocks = self._hom_data(x, y)
            ent = []
            for p in free:
                for d, off, nx, ny in blocks:
                    if off <= p < off + nx * ny:
                        ent.append((d, (p - off) // nx, (p - off) % nx))
                        break
            self._hom[key] = ent
        return ent

    def coords(self, x, y, gmap: GradedMap, check=True) -> tuple:
        """Coordinates of an equivariant graded map in the canonical basis."""
        bl = gmap.blocks
        out = []
        for d, r, c in self._free_entries(x, y):
            m = bl.get(d)
            out.append(m.rows[r][c] if m is not None else ZERO)
        if check:
            back = self.to_map(x, y, out)
            if back != GradedMap(gmap.source, gmap.target, gmap.blocks) or \
                    gmap.source != self.model(x) or gmap.target != self.model(y):
                raise PresentationError(f"map is not an equivariant morphism {x}->{y}")
        return tuple(out)

    def is_morphism(self, x, y, gmap: GradedMap) -> bool:
        try:
            self.coords(x, y, gmap)
            return True
        except PresentationError:
            return False

    # category interface -------------------------------------------------
    def identity_vec(self, x):
        return self.coords(x, x, GradedMap.identity(self.model(x)), check=False)

    def compose_vec(self, x, y, z, g, f):
        n = self.hom_dim(x, z)
        if not n or not any(g) or not any(f):
            return (ZERO,) * n
        key = (x, y, z)
        tab = self._comp.get(key)
        if tab is None:
            tab = self._comp[key] = {}
        gb = fb = None
        out = [ZERO] * n
        for b, gv in enumerate(g):
            if not gv:
                continue
            for a, fv in enumerate(f):
                if not fv:
                    continue
                ent = tab.get((b, a))
                if ent is None:
                    if gb is None:
                        gb, fb = self.hom_basis_maps(y, z), self.hom_basis_maps(x, y)
                    ent = tab[(b, a)] = self.coords(x, z, gb[b] @ fb[a], check=False)
                c = gv * fv
                for k, t in enumerate(ent):
                    if t:
                        out[k] += c * t
        return tuple(out)

    def tensor_base(self, x, y):
        hit = self._tbase.get((x, y))
        if hit is not None:
            return hit
        self.check_object(x)
        self.check_object(y)
        w = word_label(parse_word(x) + parse_word(y))
        if w not in self._object_set():
            raise TensorUndefined(f"tensor product {x}⊗{y} = {w} is not a listed object")
        self._tbase[(x, y)] = (w,)
        return (w,)

    def mu_map(self, x, y) -> GradedMap:
        """Canonical identification ``model(x)⊗model(y) -> model(xy)``."""
        key = (x, y)
        m = self._mu.get(key)
        if m is not None:
            return m
        (w,) = self.tensor_base(x, y)
        X, Y, W = self.model(x), self.model(y), self.model(w)
        S = tensor_graded(X, Y)
        if S != W:
            raise PresentationError("model of a concatenated word does not match")
        ix, iy, iw = self.word_index(x), self.word_index(y), self.word_index(w)
        blocks = {}
        for d, labs in tensor_index(X, Y).items():
            pos = {t: k for k, t in enumerate(iw[d])}
            rows = [[ZERO] * len(labs) for _ in labs]
            for col, (a, i, b, j) in enumerate(labs):
                rows[pos[ix[a][i] + iy[b][j]]][col] = ONE
            blocks[d] = QMatrix(rows, len(labs))
        m = GradedMap(S, W, blocks)
        self._mu[key] = m
        return m

    def _mu_inv(self, x, y):
        key = ("inv", x, y)
        m = self._mu.get(key)
        if m is None:
            m = self._mu[key] = self.mu_map(x, y).inverse()
        return m

    def tensor_vec(self, x, x2, y, y2, f, g):
        (w,), (w2,) = self.tensor_base(x, y), self.tensor_base(x2, y2)
        key = (x, x2, y, y2)
        tab = self._tens.get(key)
        if tab is None:
            tab = self._tens[key] = {}
        out = [ZERO] * self.hom_dim(w, w2)
        for a, fa in enumerate(f):
            if not fa:
                continue
            for b, gb in enumerate(g):
                if not gb:
                    continue
                ent = tab.get((a, b))
                if ent is None:
                    m = (self.mu_map(x2, y2)
                         @ tensor_maps(self.hom_basis_maps(x, x2)[a], self.hom_basis_maps(y, y2)[b])
                         @ self._mu_inv(x, y))
                    ent = tab[(a, b)] = self.coords(w, w2, m, check=False)
                c = fa * gb
                for k, t in enumerate(ent):
                    if t:
                        out[k] += c * t
        return ((tuple(out),),)

    def symmetry_base(self, x, y):
        (w,), (w2,) = self.tensor_base(x, y), self.tensor_base(y, x)
        s = self.mu_map(y, x) @ koszul_symmetry(self.model(x), self.model(y)) @ self._mu_inv(x, y)
        return ((self.coords(w, w2, s, check=False),),)

    def dual_base(self, x):
        self.check_object(x)
        w = []
        for c in reversed(parse_word(x)):
            dc = self.letters[c].dual
            if dc is None:
                raise PresentationError(f"letter {c} has no dual")
            w.append(dc)
        lab = word_label(w)
        if lab not in self._object_set():
            raise PresentationError(f"dual word {lab} of {x} is not a listed object")
        return lab

    def _dual_tuple(self, tup):
        return tuple((neg(d), i) for (d, i) in reversed(tup))

    def ev_map(self, x) -> GradedMap:
        xd = self.dual_base(x)
        (w,) = self.tensor_base(xd, x)
        W = self.model(w)
        one = self.model(UNIT)
        z = (0,)
        n = len(parse_word(x))
        labs = self.word_index(w).get(z, [])
        row = []
        for t in labs:
            row.append(ONE if self._dual_tuple(t[n:]) == t[:n] else ZERO)
        return GradedMap(W, one, {z: QMatrix([row], len(labs))} if labs else {})

    def coev_map(self, x) -> GradedMap:
        xd = self.dual_base(x)
        (w,) = self.tensor_base(x, xd)
        W = self.model(w)
        one = self.model(UNIT)
        z = (0,)
        n = len(parse_word(x))
        labs = self.word_index(w).get(z, [])
        col = [[ONE] if self._dual_tuple(t[:n]) == t[n:] else [ZERO] for t in labs]
        return GradedMap(one, W, {z: QMatrix(col, 1)} if labs else {})

    def ev_base(self, x):
        xd = self.dual_base(x)
        (w,) = self.tensor_base(xd, x)
        return ((self.coords(w, UNIT, self.ev_map(x), check=False),),)

    def coev_base(self, x):
        xd = self.dual_base(x)
        (w,) = self.tensor_base(x, xd)
        return ((self.coords(UNIT, w, self.coev_map(x), check=False),),)

    def transpose_map(self, x, y, f: GradedMap) -> GradedMap:
        xd, yd = self.dual_base(x), self.dual_base(y)
        Xd, Yd = self.model(xd), self.model(yd)
        ix, iy = self.word_index(x), self.word_index(y)
        ixd, iyd = self.word_index(xd), self.word_index(yd)
        blocks = {}
        for d, mf in f.blocks.items():
            nd = neg(d)
            px = {self._dual_tuple(t): k for k, t in enumerate(ix[d])}
            py = {self._dual_tuple(t): k for k, t in enumerate(iy[d])}
            rows = []
            for u in ixd[nd]:
                rows.append([mf[py[v], px[u]] for v in iyd[nd]])
            blocks[nd] = QMatrix(rows, len(iyd[nd]))
        return GradedMap(Yd, Xd, blocks)

    def transpose_vec(self, x, y, f):
        xd, yd = self.dual_base(x), self.dual_base(y)
        return self.coords(yd, xd, self.transpose_map(x, y, self.to_map(x, y, f)), check=False)


def _free_positions(cols):
    """Free variable of each canonical kernel vector: its last nonzero entry."""
    free = []
    for col in cols:
        p = max(i for i, v in enumerate(col) if v)
        if col[p] != 1:
            raise AssertionError("kernel basis is not in canonical form")
        free.append(p)
    return free


class ModelFunctor(Functor):
    """Underlying graded space of a model: faithful by construction."""

    def __init__(self, cat: ModelCategory, name="forget"):
        self.cat = cat
        self.name = name

    def space_base(self, x):
        return self.cat.model(x)

    def map_basis(self, x, y, a):
        return self.cat.hom_basis_maps(x, y)[a]

    def mu_base(self, x, y):
        return self.cat.mu_map(x, y)

    def unit_iso(self):
        return GradedMap.identity(unit_space())

    def probes(self):
        cache = self.__dict__.get("_probe_cache")
        if cache is None:
            # only degree-preserving actions act on fibers
            cache = ([_LazyProbe(self.cat, k) for k in range(self.cat.ngens)]
                     if self.cat.is_graded() else [])
            self._probe_cache = cache
        return cache


class _LazyProbe(dict):
    def __init__(self, cat, k):
        super().__init__()
        self.cat, self.k = cat, k

    def __missing__(self, x):
        if x not in self.cat._object_set():
            raise KeyError(x)
        v = self.cat.action(x, self.k)
        self[x] = v
        return v

    def get(self, x, default=None):
        try:
            return self[x]
        except KeyError:
            return default


class WeightGradedFunctor(Functor):
    """Associated graded for weights carried by the letters: keeps only the
    weight-preserving part of each map.  Requires morphisms to be filtered
    (never raise weight), which holds for monodromy weight filtrations."""

    def __init__(self, cat: ModelCategory, name="weight-graded"):
        self.cat = cat
        self.name = name

    def space_base(self, x):
        return self.cat.model(x)

    def _truncate(self, x, y, m: GradedMap):
        blocks = {}
        for d, b in m.blocks.items():
            wx, wy = self.cat.weight_vector(x, d), self.cat.weight_vector(y, d)
            rows = [[b[r, c] if wy[r] == wx[c] else ZERO for c in range(b.ncols)]
                    for r in range(b.nrows)]
            blocks[d] = QMatrix(rows, b.ncols)
        return GradedMap(m.source, m.target, blocks)

    def map_basis(self, x, y, a):
        return self._truncate(x, y, self.cat.hom_basis_maps(x, y)[a])

    def mu_base(self, x, y):
        return self.cat.mu_map(x, y)

    def unit_iso(self):
        return GradedMap.identity(unit_space())


class ConjugatedFunctor(Functor):
    """``x ↦ base(x)`` with maps conjugated by per-object graded automorphisms.

    Naturally isomorphic to ``base``; the matrices differ."""

    def __init__(self, base: Functor, twists: Dict[str, GradedMap], name="conjugated"):
        self.base = base
        self.cat = base.cat
        self.twists = twists
        self.name = name

    def _t(self, x):
        t = self.twists.get(x)
        return t if t is not None else GradedMap.identity(self.base.space_base(x))

    def _t_inv(self, x):
        cache = self.__dict__.setdefault("_inv", {})
        if x not in cache:
            cache[x] = self._t(x).inverse()
        return cache[x]

    def space_base(self, x):
        return self.base.space_base(x)

    def map_basis(self, x, y, a):
        cache = self.__dict__.setdefault("_maps", {})
        key = (x, y, a)
        if key not in cache:
            cache[key] = self._t(y) @ self.base.map_basis(x, y, a) @ self._t_inv(x)
        return cache[key]

    def mu_base(self, x, y):
        cache = self.__dict__.setdefault("_mu", {})
        if (x, y) not in cache:
            (w,) = self.cat.tensor_base(x, y) if len(self.cat.tensor_base(x, y)) == 1 else (None,)
            m = self.base.mu_base(x, y)
            tw = self._t(w) if w is not None else GradedMap.identity(m.target)
            cache[(x, y)] = tw @ m @ tensor_maps(self._t(x), self._t(y)).inverse()
        return cache[(x, y)]

    def unit_iso(self):
        return self._t(self.cat.unit) @ self.base.unit_iso()

    def probes(self):
        out = []
        for p in self.base.probes():
            out.append(_ConjProbe(p, self))
        return out


class _ConjProbe(dict):
    def __init__(self, p, fun):
        super().__init__()
        self.p, self.fun = p, fun

    def __missing__(self, x):
        t = self.fun._t(x)
        v = t @ self.p[x] @ t.inverse()
        self[x] = v
        return v

    def get(self, x, default=None):
        try:
            return self[x]
        except KeyError:
            return default
