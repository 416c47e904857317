"""Morphisms of the universal category as fiber matrices with certificates.

A certificate is a small expression tree whose leaves are presheaf morphisms,
roofs ``A -> C <- B`` with an H-isomorphism on the right, or descents along
H-epimorphisms.  ``replay`` recomputes the matrix from the leaves alone, so any
stored result can be re-checked independently.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

from .complexes import (BoundedComplex, ChainMap, cone, homology_map, is_h_epi,
                        is_h_iso, kb_hom, sum_inclusion, vstack_maps)
from .fp import (FpMorphism, FpPresheaf, bracket, fiber, fiber_data, fiber_kunneth, fp_hom,
                 induced_on_fibers, tensor_fp)
from .graded import GradedMap, GradedSpace, tensor_maps
from .linalg import QMatrix, ZERO, ONE, kernel_basis, row_space, solve


class CertificateError(ValueError):
    pass


# certificates ------------------------------------------------------------------

class Certificate:
    kind = ""

    def matrix(self, fun) -> GradedMap:
        raise NotImplementedError

    @property
    def src(self) -> FpPresheaf:
        raise NotImplementedError

    @property
    def tgt(self) -> FpPresheaf:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def size(self) -> int:
        return 1


class FpLeaf(Certificate):
    kind = "fp"

    def __init__(self, phi: FpMorphism):
        self.phi = phi

    @property
    def src(self):
        return self.phi.src

    @property
    def tgt(self):
        return self.phi.tgt

    def matrix(self, fun):
        return induced_on_fibers(self.phi.g0, self.phi.src, self.phi.tgt, fun)

    def to_json(self):
        from .documents import chain_map_json
        return {"kind": "fp", "src": chain_map_json(self.phi.src.d),
                "tgt": chain_map_json(self.phi.tgt.d), "g0": chain_map_json(self.phi.g0)}


@dataclass
class RoofMorphism:
    """``A --f--> C <--w-- B`` with ``H(w)`` invertible."""
    f: ChainMap
    w: ChainMap
    fun: object = None

    def __post_init__(self):
        if self.f.tgt != self.w.tgt:
            raise CertificateError("roof legs must share the apex")
        if self.fun is not None and not is_h_iso(self.w, self.fun):
            raise CertificateError("right leg of a roof must be an H-isomorphism")

    @property
    def A(self):
        return self.f.src

    @property
    def B(self):
        return self.w.src

    @property
    def C(self):
        return self.f.tgt


class RoofLeaf(Certificate):
    kind = "roof"

    def __init__(self, roof: RoofMorphism):
        self.roof = roof
        self._src, self._tgt = bracket(roof.A), bracket(roof.B)

    @property
    def src(self):
        return self._src

    @property
    def tgt(self):
        return self._tgt

    def matrix(self, fun):
        Hw = homology_map(self.roof.w, fun)
        if not Hw.is_iso():
            raise CertificateError("roof right leg is not an H-isomorphism")
        return _retag(Hw.inverse() @ homology_map(self.roof.f, fun), fiber(self.src, fun),
                      fiber(self.tgt, fun))

    def to_json(self):
        from .documents import chain_map_json
        return {"kind": "roof", "f": chain_map_json(self.roof.f), "w": chain_map_json(self.roof.w)}


class DescentLeaf(Certificate):
    """The map ``[p.tgt] -> [f.tgt]`` with ``[f] = (this) ∘ [p]`` for an H-epi ``p``."""
    kind = "descent"

    def __init__(self, p: ChainMap, f: ChainMap):
        if p.src != f.src:
            raise CertificateError("descent data must share a source")
        self.p, self.f = p, f
        self._src, self._tgt = bracket(p.tgt), bracket(f.tgt)

    @property
    def src(self):
        return self._src

    @property
    def tgt(self):
        return self._tgt

    def matrix(self, fun):
        Hp, Hf = homology_map(self.p, fun), homology_map(self.f, fun)
        if not Hp.is_surjective():
            raise CertificateError("descent along a map that is not an H-epimorphism")
        S, T = fiber(self.src, fun), fiber(self.tgt, fun)
        blocks = {}
        for bd in S.degrees:
            P = Hp.block(bd)
            Fm = Hf.block(bd)
            if P.ncols and not (Fm @ kernel_basis(P)).is_zero():
                raise CertificateError("f does not kill the kernel of H(p)")
            if not T.dim(bd):
                continue
            cols = []
            for i in range(S.dim(bd)):
                e = tuple(ONE if j == i else ZERO for j in range(S.dim(bd)))
                x = solve(P, e)
                cols.append(Fm.apply(x))
            blocks[bd] = QMatrix.from_columns(cols, T.dim(bd))
        return GradedMap(S, T, blocks)

    def to_json(self):
        from .documents import chain_map_json
        return {"kind": "descent", "p": chain_map_json(self.p), "f": chain_map_json(self.f)}


class Node(Certificate):
    def __init__(self, kind: str, children: Sequence[Certificate], c=None):
        self.kind = kind
        self.children = list(children)
        self.c = c
        if kind == "compose":
            for g, f in zip(self.children, self.children[1:]):
                if f.tgt != g.src:
                    raise CertificateError("certificate composition mismatch")
        elif kind in ("sum",):
            a = self.children[0]
            if any(b.src != a.src or b.tgt != a.tgt for b in self.children):
                raise CertificateError("summands must share source and target")

    @property
    def src(self):
        if self.kind == "compose":
            return self.children[-1].src
        if self.kind == "inverse":
            return self.children[0].tgt
        if self.kind == "tensor":
            return tensor_fp(self.children[0].src, self.children[1].src)
        return self.children[0].src

    @property
    def tgt(self):
        if self.kind == "compose":
            return self.children[0].tgt
        if self.kind == "inverse":
            return self.children[0].src
        if self.kind == "tensor":
            return tensor_fp(self.children[0].tgt, self.children[1].tgt)
        return self.children[0].tgt

    def matrix(self, fun):
        ms = [c.matrix(fun) for c in self.children]
        if self.kind == "compose":
            out = ms[-1]
            for g in reversed(ms[:-1]):
                out = _retag(g, out.target, g.target) @ out
            return out
        if self.kind == "sum":
            out = ms[0]
            for m in ms[1:]:
                out = out + m
            return out
        if self.kind == "scale":
            return ms[0].scale(self.c)
        if self.kind == "inverse":
            if not ms[0].is_iso():
                raise CertificateError("inverse of a non-invertible fiber matrix")
            return ms[0].inverse()
        if self.kind == "tensor":
            a, b = self.children
            ks = fiber_kunneth(a.src, b.src, fun)
            kt = fiber_kunneth(a.tgt, b.tgt, fun)
            return kt @ tensor_maps(ms[0], ms[1]) @ ks.inverse()
        raise CertificateError(f"unknown certificate node {self.kind}")

    def size(self):
        return 1 + sum(c.size() for c in self.children)

    def to_json(self):
        from .documents import fmt
        out = {"kind": self.kind, "children": [c.to_json() for c in self.children]}
        if self.c is not None:
            out["c"] = fmt(self.c)
        return out


def compose_cert(*parts: Certificate) -> Certificate:
    return Node("compose", parts)


def certificate_from_json(ws, j: dict) -> Certificate:
    kind = j.get("kind")
    if kind == "fp":
        F, G = FpPresheaf(ws.chain_map(j["src"])), FpPresheaf(ws.chain_map(j["tgt"]))
        return FpLeaf(FpMorphism(F, G, ws.chain_map(j["g0"])))
    if kind == "roof":
        return RoofLeaf(RoofMorphism(ws.chain_map(j["f"]), ws.chain_map(j["w"])))
    if kind == "descent":
        return DescentLeaf(ws.chain_map(j["p"]), ws.chain_map(j["f"]))
    from .documents import scalar
    kids = [certificate_from_json(ws, c) for c in j.get("children", [])]
    if not kids:
        raise CertificateError(f"bad certificate {kind!r}")
    return Node(kind, kids, scalar(j["c"]) if "c" in j else None)


# morphisms ---------------------------------------------------------------------

@dataclass
class MMorphism:
    src: FpPresheaf
    tgt: FpPresheaf
    matrix: GradedMap
    cert: Certificate

    def __matmul__(self, other: "MMorphism") -> "MMorphism":
        return MMorphism(other.src, self.tgt, self.matrix @ _retag(other.matrix, other.matrix.source,
                                                                    self.matrix.source),
                         compose_cert(self.cert, other.cert))


def from_fp(phi: FpMorphism, fun) -> MMorphism:
    return MMorphism(phi.src, phi.tgt, phi.fiber_map(fun), FpLeaf(phi))


def replay(m, fun) -> bool:
    cert = m.cert if isinstance(m, MMorphism) else m
    got = cert.matrix(fun)
    if isinstance(m, MMorphism):
        return got.blocks == _retag(m.matrix, got.source, got.target).blocks
    return True


def m_iso_test(m, fun) -> bool:
    if isinstance(m, FpMorphism):
        return m.fiber_map(fun).is_iso()
    return m.matrix.is_iso()


def roof_to_morphism(r: RoofMorphism, fun) -> MMorphism:
    leaf = RoofLeaf(RoofMorphism(r.f, r.w, fun))
    return MMorphism(leaf.src, leaf.tgt, leaf.matrix(fun), leaf)


def compose_roofs(r2: RoofMorphism, r1: RoofMorphism, fun) -> RoofMorphism:
    """``(f2, w2) ∘ (f1, w1)`` through the homotopy pushout of ``C1 <- B -> C2``."""
    if r1.B != r2.A:
        raise CertificateError("roofs do not compose")
    cat = r1.f.cat
    u = vstack_maps(cat, [r1.w, r2.f.scale(-1)])
    P, tri = cone(u)
    i1 = tri.incl @ sum_inclusion(cat, [r1.C, r2.C], 0)
    i2 = tri.incl @ sum_inclusion(cat, [r1.C, r2.C], 1)
    return RoofMorphism(i1 @ r1.f, i2 @ r2.w, fun)


def _retag(m: GradedMap, S: GradedSpace, T: GradedSpace) -> GradedMap:
    if m.source == S and m.target == T:
        return m
    return GradedMap(S, T, {d: b for d, b in m.blocks.items() if S.dim(d) and T.dim(d)})


# covers and hom bounds -------------------------------------------------------------

@dataclass
class CoverSet:
    epis: List[ChainMap] = field(default_factory=list)
    isos: List[ChainMap] = field(default_factory=list)

    def check(self, fun):
        for p in self.epis:
            if not is_h_epi(p, fun):
                raise CertificateError(f"cover {p.name or '?'} is not an H-epimorphism")
        for w in self.isos:
            if not is_h_iso(w, fun):
                raise CertificateError(f"cover {w.name or '?'} is not an H-isomorphism")
        return self

    @classmethod
    def from_workspace(cls, ws, fun=None):
        cv = ws.covers or {}
        out = cls([ws.chain_map(n) for n in cv.get("epis", [])],
                  [ws.chain_map(n) for n in cv.get("isos", [])])
        return out.check(fun or ws.functor())


def _flat(m: GradedMap, S: GradedSpace, T: GradedSpace) -> tuple:
    out = []
    for d in S.degrees:
        nT = T.dim(d)
        if not nT:
            continue
        b = m.blocks.get(d)
        if b is None:
            out.extend([ZERO] * (nT * S.dim(d)))
        else:
            for r in b.rows:
                out.extend(r)
    return tuple(out)


class _Span:
    """Greedy independent subset of certified morphisms between two objects."""

    def __init__(self, S, T):
        self.S, self.T = S, T
        self.items: List[MMorphism] = []
        self._vecs = []
        self.n = sum(S.dim(d) * T.dim(d) for d in S.degrees)

    def add(self, m: MMorphism) -> bool:
        v = _flat(m.matrix, self.S, self.T)
        if not any(v):
            return False
        trial = self._vecs + [v]
        red, piv = row_space(trial, self.n)
        if len(piv) == len(trial):
            self._vecs.append(v)
            self.items.append(m)
            return True
        return False

    @property
    def dim(self):
        return len(self.items)


def probe_on_fiber(F: FpPresheaf, fun, k: int) -> GradedMap:
    """Action of the k-th probe automorphism of the functor on ``fiber(F)``."""
    fd = fiber_data(F, fun)
    top = fd.top
    blocks = {}
    for bd in fd.space.degrees:
        n, kk = bd
        P = fun.probe_on(k, F.X0.term(n)).block((kk,))
        cols = []
        for i in range(fd.space.dim(bd)):
            c = fd.rep(bd, i)
            vec = [ZERO] * top.term_spaces[n].dim((kk,))
            for j, x in enumerate(c):
                if x:
                    vec = [a + x * b for a, b in zip(vec, top.rep(bd, j))]
            cols.append(fd.project(bd, top.coords(bd, P.apply(vec))))
        blocks[bd] = QMatrix.from_columns(cols, fd.space.dim(bd))
    return GradedMap(fd.space, fd.space, blocks)


def probe_commutant_dim(F: FpPresheaf, G: FpPresheaf, fun) -> int:
    S, T = fiber(F, fun), fiber(G, fun)
    nprobes = len(fun.probes())
    total = 0
    pf = [probe_on_fiber(F, fun, k) for k in range(nprobes)]
    pg = [probe_on_fiber(G, fun, k) for k in range(nprobes)]
    for d in S.degrees:
        a, b = S.dim(d), T.dim(d)
        if not b:
            continue
        rows = []
        for k in range(nprobes):
            A, B = pf[k].block(d), pg[k].block(d)
            # row-major vec: vec(M A) = (I ⊗ A^T) vec M, vec(B M) = (B ⊗ I) vec M
            lhs = QMatrix.identity(b).kron(A.T) - B.kron(QMatrix.identity(a))
            rows.extend(lhs.rows)
        if rows:
            total += a * b - QMatrix(rows, a * b).rank()
        else:
            total += a * b
    return total


@dataclass
class HomBounds:
    certified: List[MMorphism]
    ambient_dim: int
    probe_dim: int

    @property
    def certified_dim(self):
        return len(self.certified)

    @property
    def meets(self) -> bool:
        return self.certified_dim == self.probe_dim

    @property
    def meets_ambient(self) -> bool:
        return self.certified_dim == self.ambient_dim


def _generators(P: FpPresheaf, Q: FpPresheaf, covers: CoverSet, fun) -> List[MMorphism]:
    out = [from_fp(phi, fun) for phi in fp_hom(P, Q).basis]
    if not (P.is_representable() and Q.is_representable()):
        return out
    A, B = P.X0, Q.X0
    for w in covers.isos:
        if w.src != B:
            continue
        for f in kb_hom(A, w.tgt).basis():
            out.append(roof_to_morphism(RoofMorphism(f, w, fun), fun))
    for p in covers.epis:
        if p.tgt != A:
            continue
        Hp = homology_map(p, fun)
        basis = kb_hom(p.src, B).basis()
        if not basis:
            continue
        # the subspace of f whose H(f) kills ker H(p)
        cols = []
        for f in basis:
            Hf = homology_map(f, fun)
            v = []
            for d in Hp.source.degrees:
                K = kernel_basis(Hp.block(d))
                if K.ncols:
                    for r in (Hf.block(d) @ K).rows:
                        v.extend(r)
            cols.append(tuple(v))
        n = len(cols[0])
        good = kernel_basis(QMatrix.from_columns(cols, n)).columns() if n else \
            [tuple(ONE if i == j else ZERO for i in range(len(basis))) for j in range(len(basis))]
        for c in good:
            f = ChainMap.zero(p.src, B)
            for x, b in zip(c, basis):
                if x:
                    f = f + b.scale(x)
            leaf = DescentLeaf(p, f)
            out.append(MMorphism(leaf.src, leaf.tgt, leaf.matrix(fun), leaf))
    return out


def m_hom_bounds(F: FpPresheaf, G: FpPresheaf, fun, covers: CoverSet = None, depth: int = 2,
                 window: Sequence[BoundedComplex] = ()) -> HomBounds:
    covers = covers or CoverSet()
    nodes: List[FpPresheaf] = [F, G]
    for X in window:
        B = bracket(X)
        if B not in nodes:
            nodes.append(B)
    gens = {}

    def gen(i, j):
        if (i, j) not in gens:
            gens[(i, j)] = _generators(nodes[i], nodes[j], covers, fun)
        return gens[(i, j)]

    S, T = fiber(F, fun), fiber(G, fun)
    span = _Span(S, T)
    for m in gen(0, 1):
        span.add(m)
    # level[i] spans morphisms F -> nodes[i] built from at most `level` generators
    level = {}
    for i in range(len(nodes)):
        sp = _Span(S, fiber(nodes[i], fun))
        for m in gen(0, i):
            sp.add(m)
        level[i] = sp
    for _ in range(max(depth - 1, 0)):
        nxt = {}
        for j in range(len(nodes)):
            sp = _Span(S, fiber(nodes[j], fun))
            for m in level[j].items:
                sp.add(m)
            for i in range(len(nodes)):
                for f in level[i].items:
                    for g in gen(i, j):
                        sp.add(g @ f)
            nxt[j] = sp
        level = nxt
        for m in level[1].items:
            span.add(m)
    ambient = sum(S.dim(d) * T.dim(d) for d in S.degrees)
    probe = probe_commutant_dim(F, G, fun) if fun.probes() else ambient
    return HomBounds(span.items, ambient, probe)

