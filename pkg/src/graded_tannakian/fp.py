"""Finitely presented presheaves on the homotopy category and their fibers.

An object is a chain map ``d: X1 -> X0`` standing for ``coker(y X1 -> y X0)``.
Its fiber under a Künneth functor is ``coker(H(d))`` with the canonical
quotient basis.  Kernels use weak kernels (shifted cones), so every
construction here is exact at presheaf level and the fiber dimensions can be
compared with plain linear algebra.
"""
from __future__ import annotations

from typing import Dict, Optional

from .category import Mor

from .complexes import (BoundedComplex, ChainMap, apply_kunneth, direct_sum,
                        dual_chain_map, dual_complex, ev_complex, homology_map, hstack_maps,
                        kb_hom, kunneth_map, same_strength, sum_inclusion, sum_projection, tensor_chain_maps,
                        tensor_complex, unit_complex, weak_kernel, zero_complex)
from .graded import GradedMap, GradedSpace, ZZ, tensor_graded, tensor_index
from .linalg import QMatrix, Quotient, ZERO, ONE, solve, kernel_basis, row_space


class FpError(ValueError):
    pass


class FpPresheaf:
    """``coker(y d)`` for a chain map ``d: X1 -> X0``."""

    def __init__(self, d: ChainMap, name: str = ""):
        self.d = d
        self.name = name
        self._cache = {}

    @property
    def X1(self) -> BoundedComplex:
        return self.d.src

    @property
    def X0(self) -> BoundedComplex:
        return self.d.tgt

    @property
    def cat(self):
        return self.d.cat

    def key(self):
        return (self.X1.key(), self.X0.key(),
                tuple((n, m.blocks) for n, m in sorted(self.d.comps.items())))

    def __eq__(self, other):
        return isinstance(other, FpPresheaf) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_representable(self) -> bool:
        return self.X1.is_zero()

    def __repr__(self):
        return f"Fp({self.name or '?'})"


def bracket(X: BoundedComplex, name: str = "") -> FpPresheaf:
    """The representable presheaf ``[X]`` (presentation ``0 -> X``)."""
    z = zero_complex(X.cat)
    return FpPresheaf(ChainMap(z, X, {}, check=False), name=name or f"[{X.name}]")


def unit_fp(cat) -> FpPresheaf:
    return bracket(unit_complex(cat), name="[𝟙]")


# fibers ------------------------------------------------------------------------

class Fiber:
    """``coker H(d)`` in every bidegree, with maps to and from ``H(X0)``."""

    def __init__(self, F: FpPresheaf, fun):
        self.F, self.fun = F, fun
        self.top = apply_kunneth(F.X0, fun)
        Hd = homology_map(F.d, fun) if not F.X1.is_zero() else None
        self.quots: Dict[tuple, Quotient] = {}
        dims = {}
        for bd in self.top.space.degrees:
            N = self.top.space.dim(bd)
            sub = Hd.block(bd).columns() if Hd is not None else []
            unit = [tuple(ONE if i == j else ZERO for i in range(N)) for j in range(N)]
            qt = Quotient(unit, sub, N)
            self.quots[bd] = qt
            if qt.dim:
                dims[bd] = qt.dim
        self.space = GradedSpace(dims, ZZ)

    def project(self, bd, vec) -> tuple:
        """Fiber coordinates of a vector of ``H(X0)`` in bidegree ``bd``."""
        qt = self.quots.get(bd)
        if qt is None or not qt.dim:
            return ()
        return qt.coords_from_ambient(vec)

    def rep(self, bd, i) -> tuple:
        return self.quots[bd].representative(i)

    def projection(self) -> GradedMap:
        blocks = {}
        for bd in self.space.degrees:
            N = self.top.space.dim(bd)
            cols = [self.project(bd, tuple(ONE if i == j else ZERO for i in range(N)))
                    for j in range(N)]
            blocks[bd] = QMatrix.from_columns(cols, self.space.dim(bd))
        return GradedMap(self.top.space, self.space, blocks)


def fiber_data(F: FpPresheaf, fun) -> Fiber:
    key = ("fiber", id(fun))
    hit = F._cache.get(key)
    if hit is None or hit.fun is not fun:
        hit = Fiber(F, fun)
        F._cache[key] = hit
    return hit


def fiber(F: FpPresheaf, fun) -> GradedSpace:
    return fiber_data(F, fun).space


def induced_on_fibers(g0: ChainMap, F: FpPresheaf, G: FpPresheaf, fun) -> GradedMap:
    fF, fG = fiber_data(F, fun), fiber_data(G, fun)
    Hg = homology_map(g0, fun)
    blocks = {}
    for bd in fF.space.degrees:
        if not fG.space.dim(bd):
            continue
        m = Hg.block(bd)
        cols = [fG.project(bd, m.apply(fF.rep(bd, i))) for i in range(fF.space.dim(bd))]
        blocks[bd] = QMatrix.from_columns(cols, fG.space.dim(bd))
    return GradedMap(fF.space, fG.space, blocks)


def is_serre_null(F: FpPresheaf, fun) -> bool:
    return fiber(F, fun).total_dim == 0


# morphisms ---------------------------------------------------------------------

def _factor_through(target: ChainMap, via: ChainMap, src: BoundedComplex):
    """Find ``h: src -> via.src`` with ``via ∘ h ≃ target`` (or None)."""
    if target.src != src:
        raise FpError("factorization source mismatch")
    if src.is_zero():
        return ChainMap(src, via.src, {}, check=False)
    H_t = kb_hom(src, target.tgt)
    if not H_t.dim:
        return ChainMap(src, via.src, {}, check=False)
    basis = kb_hom(src, via.src).basis()
    rhs = H_t.coords(target)
    if not basis:
        return ChainMap(src, via.src, {}, check=False) if not any(rhs) else None
    M = QMatrix.from_columns([H_t.coords(via @ b) for b in basis], H_t.dim)
    sol = solve(M, rhs)
    if sol is None:
        return None
    acc = ChainMap.zero(src, via.src)
    for c, b in zip(sol, basis):
        if c:
            acc = acc + b.scale(c)
    return acc


class FpMorphism:
    """Morphism of presentations given by ``g0: X0 -> Y0``; the witness
    ``h: X1 -> Y1`` with ``g0 ∘ d_F ≃ d_G ∘ h`` is found by linear algebra."""

    def __init__(self, src: FpPresheaf, tgt: FpPresheaf, g0: ChainMap, check=True, witness=None):
        if g0.src != src.X0 or g0.tgt != tgt.X0:
            raise FpError("g0 must map the top terms of the presentations")
        self.src, self.tgt, self.g0 = src, tgt, g0
        self.witness = witness
        if check and witness is None:
            self.witness = _factor_through(g0 @ src.d, tgt.d, src.X1)
            if self.witness is None:
                raise FpError("g0 ∘ d does not factor through the target presentation")

    def fiber_map(self, fun) -> GradedMap:
        key = ("fmap", id(fun), id(self.src), id(self.tgt))
        cache = self.__dict__.setdefault("_fm", {})
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = induced_on_fibers(self.g0, self.src, self.tgt, fun)
        return hit

    def __matmul__(self, other: "FpMorphism") -> "FpMorphism":
        if other.tgt != self.src:
            raise FpError("composition of fp morphisms with mismatched objects")
        w = None
        if self.witness is not None and other.witness is not None:
            w = self.witness @ other.witness
        return FpMorphism(other.src, self.tgt, self.g0 @ other.g0, check=w is None, witness=w)

    def __add__(self, other):
        w = None
        if self.witness is not None and other.witness is not None:
            w = self.witness + other.witness
        return FpMorphism(self.src, self.tgt, self.g0 + other.g0, check=w is None, witness=w)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        w = self.witness.scale(c) if self.witness is not None else None
        return FpMorphism(self.src, self.tgt, self.g0.scale(c), check=w is None, witness=w)

    @classmethod
    def identity(cls, F: FpPresheaf):
        return cls(F, F, ChainMap.identity(F.X0), check=False, witness=ChainMap.identity(F.X1))

    @classmethod
    def zero(cls, F: FpPresheaf, G: FpPresheaf):
        return cls(F, G, ChainMap.zero(F.X0, G.X0), check=False,
                   witness=ChainMap.zero(F.X1, G.X1))

    def equals_fp(self, other: "FpMorphism") -> bool:
        """Equality in the presheaf category: ``g0 - g0'`` factors through ``d_G``."""
        diff = self.g0 - other.g0
        return _factor_through(diff, self.tgt.d, self.src.X0) is not None


def fp_from_chain_map(f: ChainMap) -> FpMorphism:
    """``[f]: [X] -> [Y]``."""
    return FpMorphism(bracket(f.src), bracket(f.tgt), f, check=False,
                      witness=ChainMap(zero_complex(f.cat), zero_complex(f.cat), {}, check=False))


class FpHom:
    """Basis of presheaf morphisms ``F -> G``."""

    def __init__(self, F: FpPresheaf, G: FpPresheaf):
        self.F, self.G = F, G
        A = kb_hom(F.X0, G.X0)
        gb = A.basis()
        if not gb:
            self.basis, self.dim = [], 0
            return
        if F.X1.is_zero():
            allowed = [tuple(ONE if i == j else ZERO for i in range(A.dim)) for j in range(A.dim)]
        else:
            T = kb_hom(F.X1, G.X0)
            P = [T.coords(g @ F.d) for g in gb]
            Qc = [T.coords(G.d @ h) for h in kb_hom(F.X1, G.X1).basis()]
            if T.dim:
                M = QMatrix.from_columns(P + [tuple(-x for x in v) for v in Qc], T.dim)
                K = kernel_basis(M)
                raw = [col[:len(gb)] for col in K.columns()]
                allowed = _independent(raw, len(gb))
            else:
                allowed = [tuple(ONE if i == j else ZERO for i in range(A.dim)) for j in range(A.dim)]
        sub = [A.coords(G.d @ h) for h in kb_hom(F.X0, G.X1).basis()] if not G.X1.is_zero() else []
        sub = [v for v in sub if any(v)]
        amb_span = allowed + sub
        amb = _independent(amb_span, A.dim)
        qt = Quotient(amb, sub, A.dim)
        self.quot = qt
        self.dim = qt.dim
        self.basis = [FpMorphism(F, G, A.from_coords(r)) for r in qt.representatives()]


def _independent(vecs, n):
    """Canonical basis of the span of ``vecs`` (rows of the rref)."""
    vecs = [tuple(v) for v in vecs if any(v)]
    if not vecs:
        return []
    red, piv = row_space(vecs, n)
    return [tuple(r) for r in red]


def fp_hom(F: FpPresheaf, G: FpPresheaf) -> FpHom:
    cache = F._cache.setdefault("fphom", {})
    hit = cache.get(G.key())
    if hit is None:
        hit = cache[G.key()] = FpHom(F, G)
    return hit


def fp_solve(F: FpPresheaf, G: FpPresheaf, target: GradedMap, fun) -> Optional[FpMorphism]:
    """A presheaf morphism with the given fiber matrix, if one exists."""
    hom = fp_hom(F, G)
    tgt = _flatten(target)
    if not hom.basis:
        return FpMorphism.zero(F, G) if not any(tgt) else None
    cols = [_flatten(b.fiber_map(fun), target) for b in hom.basis]
    n = len(tgt)
    if n == 0:
        return FpMorphism.zero(F, G)
    sol = solve(QMatrix.from_columns(cols, n), tgt)
    if sol is None:
        return None
    acc = FpMorphism.zero(F, G)
    for c, b in zip(sol, hom.basis):
        if c:
            acc = acc + b.scale(c)
    return acc


def _flatten(m: GradedMap, like: GradedMap = None) -> tuple:
    like = like or m
    out = []
    for bd in like.source.degrees:
        if not like.target.dim(bd):
            continue
        blk = m.block(bd)
        for r in blk.rows:
            out.extend(r)
    return tuple(out)


# kernels and cokernels ------------------------------------------------------------

def fp_cokernel(phi: FpMorphism):
    """``(coker, projection G -> coker)``; presentation ``X0 ⊕ Y1 -> Y0``."""
    F, G = phi.src, phi.tgt
    cat = F.cat
    d = hstack_maps(cat, [phi.g0, G.d])
    C = FpPresheaf(d, name=f"coker({phi_name(phi)})")
    incl = sum_inclusion(cat, [F.X0, G.X1], 1)
    proj = FpMorphism(G, C, ChainMap.identity(G.X0), check=False, witness=incl)
    return C, proj


def phi_name(phi):
    return getattr(phi, "name", "") or "φ"




def fp_kernel(phi: FpMorphism):
    """``(ker, inclusion ker -> F)`` built from two weak kernels."""
    F, G = phi.src, phi.tgt
    cat = F.cat
    u = hstack_maps(cat, [phi.g0, G.d])
    K, kk = weak_kernel(u)
    k0 = sum_projection(cat, [F.X0, G.X1], 0) @ kk
    u2 = hstack_maps(cat, [k0, F.d.scale(-1)])
    K2, kk2 = weak_kernel(u2)
    kprime = sum_projection(cat, [K, F.X1], 0) @ kk2
    ker = FpPresheaf(kprime, name=f"ker({phi_name(phi)})")
    wit = sum_projection(cat, [K, F.X1], 1) @ kk2
    incl = FpMorphism(ker, F, k0, check=False, witness=wit)
    return ker, incl


def fp_image(phi: FpMorphism):
    """Coimage ``coker(ker φ -> F)`` with the epi from ``F`` and the mono into ``G``."""
    ker, incl = fp_kernel(phi)
    im, proj = fp_cokernel(incl)
    mono = FpMorphism(im, phi.tgt, phi.g0)
    return im, proj, mono


# tensor and duals ------------------------------------------------------------------

def tensor_fp(F: FpPresheaf, G: FpPresheaf) -> FpPresheaf:
    cat = F.cat
    idX0, idY0 = ChainMap.identity(F.X0), ChainMap.identity(G.X0)
    a = tensor_chain_maps(F.d, idY0)
    b = tensor_chain_maps(idX0, G.d)
    T1 = direct_sum(cat, [a.src, b.src])
    if T1.is_zero():
        d = ChainMap(T1, tensor_complex(F.X0, G.X0), {}, check=False)
    else:
        d = hstack_maps(cat, [a, b])
    return FpPresheaf(d, name=f"{F.name}⊗{G.name}")


def tensor_fp_maps(phi: FpMorphism, psi: FpMorphism) -> FpMorphism:
    S, T = tensor_fp(phi.src, psi.src), tensor_fp(phi.tgt, psi.tgt)
    return FpMorphism(S, T, tensor_chain_maps(phi.g0, psi.g0))


def fiber_kunneth(F: FpPresheaf, G: FpPresheaf, fun) -> GradedMap:
    """``fiber(F)⊗fiber(G) -> fiber(F⊗G)`` induced by the Künneth map of the tops."""
    T = tensor_fp(F, G)
    fF, fG, fT = fiber_data(F, fun), fiber_data(G, fun), fiber_data(T, fun)
    kap = kunneth_map(F.X0, G.X0, fun)
    top_idx = tensor_index(fF.top.space, fG.top.space)
    S = tensor_graded(fF.space, fG.space)
    blocks = {}
    for bd, labs in tensor_index(fF.space, fG.space).items():
        if not fT.space.dim(bd):
            continue
        local = top_idx.get(bd, [])
        where = {}
        for t, (a, i, b, j) in enumerate(local):
            where[(a, i, b, j)] = t
        cols = []
        for (a, i, b, j) in labs:
            va, vb = fF.rep(a, i), fG.rep(b, j)
            vec = [ZERO] * len(local)
            for ii, x in enumerate(va):
                if not x:
                    continue
                for jj, y in enumerate(vb):
                    if y:
                        vec[where[(a, ii, b, jj)]] += x * y
            img = kap.block(bd).apply(vec)
            cols.append(fT.project(bd, img))
        blocks[bd] = QMatrix.from_columns(cols, fT.space.dim(bd))
    return GradedMap(S, fT.space, blocks)


class DualData:
    """``F^∨ = ker([X0^∨] -> [X1^∨])`` with evaluation and coevaluation."""

    def __init__(self, F: FpPresheaf, fun):
        self.F, self.fun = F, fun
        cat = F.cat
        self.top = bracket(dual_complex(F.X0))
        phi = FpMorphism(self.top, bracket(dual_complex(F.X1)), dual_chain_map(F.d), check=False,
                         witness=ChainMap(zero_complex(cat), zero_complex(cat), {}, check=False))
        self.dual, self.incl = fp_kernel(phi)
        self.dual.name = f"{F.name}^∨"
        # ev: F^∨ ⊗ F -> 𝟙
        one = unit_fp(cat)
        T = tensor_fp(self.dual, F)
        g0 = ev_complex(F.X0) @ tensor_chain_maps(self.incl.g0, ChainMap.identity(F.X0))
        self.ev = FpMorphism(T, one, g0)
        E = self.ev.fiber_map(fun) @ fiber_kunneth(self.dual, F, fun)
        fd, ff = fiber(self.dual, fun), fiber(F, fun)
        row = E.block((0, 0)).rows[0] if E.block((0, 0)).nrows else ()
        gram = {}
        for t, (a, i, b, j) in enumerate(tensor_index(fd, ff).get((0, 0), [])):
            if row[t]:
                gram.setdefault(b, {})[(i, j)] = row[t]
        self.gram = {}
        for bd in ff.degrees:
            n = ff.dim(bd)
            if fd.dim((-bd[0], -bd[1])) != n:
                raise FpError(f"dual fiber dimension mismatch at {bd}")
            g = gram.get(bd, {})
            M = QMatrix([[g.get((i, j), ZERO) for j in range(n)] for i in range(n)], n)
            if M.rank() != n:
                raise FpError(f"evaluation pairing degenerate at {bd}")
            self.gram[bd] = M
        # coev = Σ e_k ⊗ f^k where f^k = Σ_i M^{-1}[k, i] d_i is the dual basis
        T2 = tensor_fp(F, self.dual)
        S = tensor_graded(ff, fd)
        pos = {lab: t for t, lab in enumerate(tensor_index(ff, fd).get((0, 0), []))}
        vec = [ZERO] * S.dim((0, 0))
        for bd, M in self.gram.items():
            nd = (-bd[0], -bd[1])
            Minv = M.inverse()
            for k in range(M.nrows):
                for i in range(M.nrows):
                    if Minv[k, i]:
                        vec[pos[(bd, k, nd, i)]] += Minv[k, i]
        unit_sp = GradedSpace({(0, 0): 1}, ZZ)
        C_tensor = GradedMap(unit_sp, S, {(0, 0): QMatrix.from_columns([tuple(vec)], len(vec))}
                             if vec else {})
        target = fiber_kunneth(F, self.dual, fun) @ C_tensor
        self.coev = fp_solve(one, T2, target, fun)
        self.coev_fiber = target
        self.ev_fiber = E


def dual_data(F: FpPresheaf, fun) -> DualData:
    key = ("dual", id(fun))
    hit = F._cache.get(key)
    if hit is None:
        hit = F._cache[key] = DualData(F, fun)
    return hit


def dual_fp(F: FpPresheaf, fun) -> FpPresheaf:
    return dual_data(F, fun).dual


# second fiber functor and pushforward --------------------------------------------------

class StrengthError(ValueError):
    def __init__(self, witness):
        super().__init__("functors do not have the same strength on the window")
        self.witness = witness


def second_fiber(F: FpPresheaf, fun, fun2, window) -> GradedSpace:
    ok, witness = same_strength(fun, fun2, window)
    if not ok:
        raise StrengthError(witness)
    return fiber(F, fun2)


def m_iso_test(phi: FpMorphism, fun) -> bool:
    return phi.fiber_map(fun).is_iso()


# idempotents ------------------------------------------------------------------------

def split_idempotent(F: FpPresheaf, e: FpMorphism, fun):
    """``(image, section, retraction)`` with ``r∘s = id`` and ``s∘r = e``."""
    if e.src != F or e.tgt != F:
        raise FpError("idempotent must be an endomorphism of F")
    m = e.fiber_map(fun)
    if m @ m != m:
        raise FpError("not idempotent on the fiber")
    if not (e @ e).equals_fp(e):
        # accept equality up to a Serre-null error: e∘e − e must vanish after the fiber
        if not ((e @ e) - e).fiber_map(fun).is_zero():
            raise FpError("not idempotent")
    one_minus = FpMorphism.identity(F) - e
    image, r = fp_cokernel(one_minus)
    s = FpMorphism(image, F, e.g0)
    return image, s, r


# pushforward along a strict monoidal functor of presentations ---------------------

class PushforwardError(ValueError):
    pass


class Pushforward:
    """A functor of presentations given on objects and hom bases, together with
    per-object isomorphisms ``H(x) -> H'(F x)``."""

    def __init__(self, source, spec: dict, name: str = ""):
        from .documents import load, graded_blocks
        self.name = name
        self.source = source
        tgt = spec["target"]
        self.target = load(tgt) if isinstance(tgt, (str, dict)) else tgt
        self.fun = source.functor()
        self.fun2 = self.target.functor(spec.get("target_functor"))
        cat = source.cat
        self.objects = {x: tuple(v) if isinstance(v, (list, tuple)) else (v,)
                        for x, v in spec["objects"].items()}
        for x in cat.objects:
            if x not in self.objects:
                raise PushforwardError(f"object {x} has no image")
        self.basis = {}
        for x in cat.objects:
            for y in cat.objects:
                n = cat.hom_dim(x, y)
                specs = spec.get("morphisms", {}).get(f"{x}|{y}", [])
                if len(specs) != n:
                    raise PushforwardError(f"hom({x},{y}) needs {n} images, got {len(specs)}")
                imgs = [self.target.morphism(s) for s in specs]
                for g in imgs:
                    if g.src != self.objects[x] or g.tgt != self.objects[y]:
                        raise PushforwardError(f"image of a basis map {x}->{y} has wrong ends")
                self.basis[(x, y)] = imgs
        self.iso = {}
        for x in cat.objects:
            S, T = self.fun.space_base(x), self.fun2.space(self.objects[x])
            self.iso[x] = graded_blocks(spec["iso"][x], S, T)

    # objects and morphisms
    def obj(self, X) -> tuple:
        return tuple(z for x in X for z in self.objects[x])

    def mor(self, f: Mor) -> Mor:
        from .category import block_mor
        cat2 = self.target.cat
        grid = []
        for j, y in enumerate(f.tgt):
            row = []
            for i, x in enumerate(f.src):
                acc = Mor.zero(cat2, self.objects[x], self.objects[y])
                for a, c in enumerate(f.blocks[j][i]):
                    if c:
                        acc = acc + self.basis[(x, y)][a].scale(c)
                row.append(acc)
            grid.append(row)
        if not grid or not grid[0]:
            return Mor.zero(cat2, self.obj(f.src), self.obj(f.tgt))
        return block_mor(cat2, grid)

    def iso_on(self, X) -> GradedMap:
        from .graded import direct_sum_map
        maps = [self.iso[x] for x in X]
        grid = [[maps[i] if i == j else GradedMap.zero(maps[i].source, maps[j].target)
                 for i in range(len(X))] for j in range(len(X))]
        S = self.fun.space(X)
        T = self.fun2.space(self.obj(X))
        if not X:
            return GradedMap.zero(S, T)
        m = direct_sum_map(grid, [mm.source for mm in maps], [mm.target for mm in maps])
        return GradedMap(S, T, m.blocks)

    def complex(self, X: BoundedComplex) -> BoundedComplex:
        cat2 = self.target.cat
        return BoundedComplex(cat2, {n: self.obj(t) for n, t in X.terms.items()},
                              {n: self.mor(d) for n, d in X.diffs.items()},
                              name=f"{self.name}({X.name})" if X.name else "")

    def chain_map(self, f: ChainMap) -> ChainMap:
        return ChainMap(self.complex(f.src), self.complex(f.tgt),
                        {n: self.mor(m) for n, m in f.comps.items()})

    def presheaf(self, F: FpPresheaf) -> FpPresheaf:
        return FpPresheaf(self.chain_map(F.d), name=f"{self.name}{F.name}")

    def morphism(self, phi: FpMorphism) -> FpMorphism:
        return FpMorphism(self.presheaf(phi.src), self.presheaf(phi.tgt), self.chain_map(phi.g0))

    # checks
    def validate(self):
        """List of failures (empty when the data define a symmetric strict
        monoidal functor and the supplied isomorphisms are monoidal and natural)."""
        from .category import symmetry
        from .graded import tensor_maps
        cat, cat2 = self.source.cat, self.target.cat
        bad = []
        for x, m in self.iso.items():
            if not m.is_iso():
                bad.append(("iso", x))
        for x in cat.objects:
            if self.mor(Mor.identity(cat, (x,))) != Mor.identity(cat2, self.objects[x]):
                bad.append(("identity", x))
        objs = list(cat.objects)
        for x in objs:
            for y in objs:
                bx = [Mor.basis_element(cat, x, y, a) for a in range(cat.hom_dim(x, y))]
                for f in bx:
                    lhs = self.fun2.apply(self.mor(f)) @ self.iso[x]
                    rhs = self.iso_on((y,)) @ self.fun.apply(f)
                    if lhs != GradedMap(rhs.source, lhs.target, rhs.blocks):
                        bad.append(("naturality", x, y))
                for z in objs:
                    for g in [Mor.basis_element(cat, y, z, b) for b in range(cat.hom_dim(y, z))]:
                        for f in bx:
                            if self.mor(g @ f) != self.mor(g) @ self.mor(f):
                                bad.append(("functoriality", x, y, z))
                if not cat.tensor_defined((x,), (y,)):
                    continue
                xy = cat.tensor_obj((x,), (y,))
                if self.obj(xy) != cat2.tensor_obj(self.objects[x], self.objects[y]):
                    bad.append(("tensor objects", x, y))
                    continue
                if self.mor(symmetry(cat, (x,), (y,))) != symmetry(cat2, self.objects[x], self.objects[y]):
                    bad.append(("symmetry", x, y))
                lhs = self.iso_on(xy) @ self.fun.mu((x,), (y,))
                rhs = self.fun2.mu(self.objects[x], self.objects[y]) @ tensor_maps(self.iso[x], self.iso[y])
                if lhs.blocks != GradedMap(lhs.source, lhs.target, rhs.blocks).blocks:
                    bad.append(("monoidal iso", x, y))
        return bad

    def fiber_iso(self, F: FpPresheaf) -> GradedMap:
        """``fiber_H(F) -> fiber_H'(push F)`` induced by the supplied isomorphisms."""
        G = self.presheaf(F)
        fF, fG = fiber_data(F, self.fun), fiber_data(G, self.fun2)
        hF, hG = fF.top, fG.top
        blocks = {}
        for bd in fF.space.degrees:
            n, k = bd
            iso = self.iso_on(F.X0.term(n)).block((k,))
            cols = []
            for i in range(fF.space.dim(bd)):
                top = fF.rep(bd, i)
                vec = [ZERO] * hF.term_spaces[n].dim((k,))
                for c, j in zip(top, range(len(top))):
                    if c:
                        r = hF.rep(bd, j)
                        vec = [a + c * b for a, b in zip(vec, r)]
                img = iso.apply(vec)
                cols.append(fG.project(bd, hG.coords(bd, img)) if hG.space.dim(bd) else ())
            if fG.space.dim(bd):
                blocks[bd] = QMatrix.from_columns(cols, fG.space.dim(bd))
        return GradedMap(fF.space, fG.space, blocks)
