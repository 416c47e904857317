"""Bounded chain complexes over a presentation and their homotopy category.

Conventions (homological): ``d_n: X_n -> X_{n-1}``.

* ``cone(f)_n = X_{n-1} ⊕ Y_n`` with differential ``[[-d, 0], [-f, d]]``;
* ``X[k]_n = X_{n-k}`` with differential multiplied by ``(-1)^k``;
* on ``X⊗Y`` the differential is ``d⊗1 + (-1)^p 1⊗d`` on ``X_p⊗Y_q``;
  components of each term are ordered by increasing ``p``;
* ``(X^∨)_n = (X_{-n})^∨`` with differential ``(-1)^{n+1} d^∨`` out of degree
  ``n``.  With this sign the evaluation and coevaluation chain maps are
  sign-free componentwise copies of those of the presentation.

Homology under a functor is bigraded by (chain degree, internal degree)
with canonical quotient bases.
"""
from __future__ import annotations

from typing import Dict, List, Sequence

from .category import (Category, Functor, Mor, as_obj, block_mor, diag_mor,
                       evaluation, coevaluation, hstack_mor, inclusion, projection,
                       symmetry, vstack_mor, zero_blocks)
from .graded import GradedMap, GradedSpace, ZZ, tensor_graded, tensor_index
from .linalg import QMatrix, Quotient, ZERO, ONE, kernel_basis, rank, solve


class ComplexError(ValueError):
    pass


def _sign(n):
    return -1 if n % 2 else 1


class BoundedComplex:
    """Terms ``terms[n]`` (formal sums) and differentials ``diffs[n]: X_n -> X_{n-1}``."""

    def __init__(self, cat: Category, terms: Dict[int, tuple], diffs: Dict[int, Mor] = None,
                 name: str = "", check=True):
        self.cat = cat
        self.name = name
        self.terms = {int(n): as_obj(t) for n, t in sorted(terms.items()) if as_obj(t)}
        d = {}
        for n, m in (diffs or {}).items():
            n = int(n)
            if m.src != self.term(n) or m.tgt != self.term(n - 1):
                raise ComplexError(f"differential d_{n} has wrong source/target")
            if not m.is_zero():
                d[n] = m
        self.diffs = d
        self._hash = None
        self._cache = {}
        if check:
            bad = self.d2_failures()
            if bad:
                raise ComplexError(f"d∘d ≠ 0 in complex {name or '?'} at degree {bad[0]}")

    def term(self, n) -> tuple:
        return self.terms.get(n, ())

    def diff(self, n) -> Mor:
        m = self.diffs.get(n)
        if m is None:
            return Mor.zero(self.cat, self.term(n), self.term(n - 1))
        return m

    @property
    def degrees(self):
        return list(self.terms)

    @property
    def lo(self):
        return min(self.terms) if self.terms else 0

    @property
    def hi(self):
        return max(self.terms) if self.terms else -1

    def d2_failures(self):
        bad = []
        for n in self.terms:
            if n in self.diffs and (n - 1) in self.diffs:
                if not (self.diffs[n - 1] @ self.diffs[n]).is_zero():
                    bad.append(n)
        return bad

    def is_zero(self):
        return not self.terms

    def key(self):
        return (tuple(self.terms.items()), tuple((n, m.blocks) for n, m in sorted(self.diffs.items())))

    def __eq__(self, other):
        return isinstance(other, BoundedComplex) and self.cat is other.cat and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{n}:{'+'.join(t)}" for n, t in self.terms.items())
        return f"Complex({self.name or body})"


def single(cat, obj, n: int = 0, name="") -> BoundedComplex:
    obj = as_obj(obj)
    return BoundedComplex(cat, {n: obj} if obj else {}, {}, name=name or f"[{'+'.join(obj)}]")


def zero_complex(cat) -> BoundedComplex:
    return BoundedComplex(cat, {}, {}, name="0")


class ChainMap:
    def __init__(self, src: BoundedComplex, tgt: BoundedComplex, comps: Dict[int, Mor] = None,
                 check=True, name=""):
        self.src, self.tgt = src, tgt
        self.cat = src.cat
        self.name = name
        c = {}
        for n, m in (comps or {}).items():
            if m.src != src.term(n) or m.tgt != tgt.term(n):
                raise ComplexError(f"component {n} has wrong source/target")
            if not m.is_zero():
                c[n] = m
        self.comps = c
        if check:
            bad = self.failures()
            if bad:
                raise ComplexError(f"not a chain map at degree {bad[0]}")

    def comp(self, n) -> Mor:
        m = self.comps.get(n)
        if m is None:
            return Mor.zero(self.cat, self.src.term(n), self.tgt.term(n))
        return m

    def failures(self):
        bad = []
        for n in sorted(set(self.src.terms) | set(self.tgt.terms) | {k + 1 for k in self.src.terms}):
            lhs = self.tgt.diff(n) @ self.comp(n)
            rhs = self.comp(n - 1) @ self.src.diff(n)
            if lhs != rhs:
                bad.append(n)
        return bad

    @classmethod
    def identity(cls, X):
        return cls(X, X, {n: Mor.identity(X.cat, t) for n, t in X.terms.items()}, check=False)

    @classmethod
    def zero(cls, X, Y):
        return cls(X, Y, {}, check=False)

    def __matmul__(self, f: "ChainMap") -> "ChainMap":
        if f.tgt != self.src:
            raise ComplexError("composing non-composable chain maps")
        comps = {n: self.comp(n) @ f.comp(n) for n in set(f.comps) & set(self.comps)}
        return ChainMap(f.src, self.tgt, comps, check=False)

    def _lin(self, other, op):
        if self.src != other.src or self.tgt != other.tgt:
            raise ComplexError("chain maps with different source/target")
        comps = {n: op(self.comp(n), other.comp(n)) for n in set(self.comps) | set(other.comps)}
        return ChainMap(self.src, self.tgt, comps, check=False)

    def __add__(self, other):
        return self._lin(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._lin(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return ChainMap(self.src, self.tgt, {n: m.scale(c) for n, m in self.comps.items()}, check=False)

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        return (isinstance(other, ChainMap) and self.src == other.src and self.tgt == other.tgt
                and {n: m.blocks for n, m in self.comps.items()} == {n: m.blocks for n, m in other.comps.items()})

    def __hash__(self):
        return hash((self.src, self.tgt, tuple(sorted((n, m.blocks) for n, m in self.comps.items()))))

    def __repr__(self):
        return f"ChainMap({self.src!r} -> {self.tgt!r})"


def chain_map_from_mor(f: Mor, n: int = 0) -> ChainMap:
    """A morphism of the presentation as a map of single-term complexes."""
    X, Y = single(f.cat, f.src, n), single(f.cat, f.tgt, n)
    return ChainMap(X, Y, {n: f} if f.src and f.tgt else {}, check=False)


# ---------------------------------------------------------------------------
# constructors

class Triangle:
    """``X -f-> Y -i-> cone(f) -p-> X[1]``."""

    def __init__(self, f, incl, proj):
        self.f, self.incl, self.proj = f, incl, proj


def cone(f: ChainMap):
    X, Y = f.src, f.tgt
    cat = X.cat
    degs = sorted({n + 1 for n in X.terms} | set(Y.terms))
    terms = {n: X.term(n - 1) + Y.term(n) for n in degs}
    diffs = {}
    for n in degs:
        if n - 1 not in terms:
            continue
        diffs[n] = block_mor(cat, [[-X.diff(n - 1), Mor.zero(cat, Y.term(n), X.term(n - 2))],
                                   [-f.comp(n - 1), Y.diff(n)]])
    C = BoundedComplex(cat, terms, diffs, name=f"cone({f.name})" if f.name else "")
    incl = ChainMap(Y, C, {n: vstack_mor(cat, [Mor.zero(cat, Y.term(n), X.term(n - 1)),
                                               Mor.identity(cat, Y.term(n))])
                           for n in Y.terms}, check=False)
    X1 = shift(X, 1)
    proj = ChainMap(C, X1, {n: hstack_mor(cat, [Mor.identity(cat, X.term(n - 1)),
                                                Mor.zero(cat, Y.term(n), X.term(n - 1))])
                            for n in degs if X.term(n - 1)}, check=False)
    return C, Triangle(f, incl, proj)


def shift(X: BoundedComplex, k: int) -> BoundedComplex:
    if k == 0:
        return X
    s = _sign(k)
    terms = {n + k: t for n, t in X.terms.items()}
    diffs = {n + k: m.scale(s) for n, m in X.diffs.items()}
    nm = f"{X.name}[{k}]" if X.name else ""
    return BoundedComplex(X.cat, terms, diffs, name=nm, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.src, k), shift(f.tgt, k), {n + k: m for n, m in f.comps.items()}, check=False)


def direct_sum(cat, complexes: Sequence[BoundedComplex]) -> BoundedComplex:
    degs = sorted({n for X in complexes for n in X.terms})
    terms = {n: tuple(x for X in complexes for x in X.term(n)) for n in degs}
    diffs = {n: diag_mor(cat, [X.diff(n) for X in complexes]) for n in degs if n - 1 in terms}
    return BoundedComplex(cat, terms, diffs, check=False,
                          name="⊕".join(X.name for X in complexes) if all(X.name for X in complexes) else "")


def sum_inclusion(cat, complexes, k) -> ChainMap:
    S = direct_sum(cat, complexes)
    return ChainMap(complexes[k], S, {n: inclusion(cat, [X.term(n) for X in complexes], k)
                                      for n in complexes[k].terms}, check=False)


def sum_projection(cat, complexes, k) -> ChainMap:
    S = direct_sum(cat, complexes)
    return ChainMap(S, complexes[k], {n: projection(cat, [X.term(n) for X in complexes], k)
                                      for n in complexes[k].terms}, check=False)


def hstack_maps(cat, maps: Sequence[ChainMap]) -> ChainMap:
    """``(f_1, ..., f_k): ⊕ X_i -> Y``."""
    S = direct_sum(cat, [f.src for f in maps])
    Y = maps[0].tgt
    comps = {n: hstack_mor(cat, [f.comp(n) for f in maps]) for n in S.terms if Y.term(n)}
    return ChainMap(S, Y, comps, check=False)


def vstack_maps(cat, maps: Sequence[ChainMap]) -> ChainMap:
    T = direct_sum(cat, [f.tgt for f in maps])
    X = maps[0].src
    comps = {n: vstack_mor(cat, [f.comp(n) for f in maps]) for n in X.terms if T.term(n)}
    return ChainMap(X, T, comps, check=False)


def _tensor_layout(X, Y, n):
    """List of (p, q) components of ``(X⊗Y)_n`` in order."""
    return [(p, n - p) for p in sorted(X.terms) if (n - p) in Y.terms]


def tensor_complex(X: BoundedComplex, Y: BoundedComplex) -> BoundedComplex:
    cat = X.cat
    degs = sorted({p + r for p in X.terms for r in Y.terms})
    terms, offs = {}, {}
    for n in degs:
        comps, o, t = _tensor_layout(X, Y, n), 0, []
        offs[n] = {}
        for (p, r) in comps:
            obj = cat.tensor_obj(X.term(p), Y.term(r))
            offs[n][(p, r)] = (o, len(obj))
            o += len(obj)
            t.extend(obj)
        terms[n] = tuple(t)
    diffs = {}
    for n in degs:
        if n - 1 not in terms:
            continue
        acc = zero_blocks(cat, terms[n], terms[n - 1])
        for (p, r), (c0, w) in offs[n].items():
            parts = []
            if (p - 1, r) in offs[n - 1]:
                parts.append(((p - 1, r), X.diff(p).tensor(Mor.identity(cat, Y.term(r)))))
            if (p, r - 1) in offs[n - 1]:
                parts.append(((p, r - 1), Mor.identity(cat, X.term(p)).tensor(Y.diff(r)).scale(_sign(p))))
            for key, m in parts:
                r0, _ = offs[n - 1][key]
                for jj, row in enumerate(m.blocks):
                    for ii, v in enumerate(row):
                        acc[r0 + jj][c0 + ii] = list(v)
        diffs[n] = Mor.from_flat(cat, terms[n], terms[n - 1],
                                 [x for row in acc for v in row for x in v])
    nm = f"{X.name}⊗{Y.name}" if X.name and Y.name else ""
    return BoundedComplex(cat, terms, diffs, name=nm, check=False)


def tensor_chain_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    cat = f.cat
    S, T = tensor_complex(f.src, g.src), tensor_complex(f.tgt, g.tgt)
    comps = {}
    for n in S.terms:
        if not T.term(n):
            continue
        acc = zero_blocks(cat, S.term(n), T.term(n))
        srcl, tgtl = _offsets(cat, f.src, g.src, n), _offsets(cat, f.tgt, g.tgt, n)
        for (p, r), (c0, _) in srcl.items():
            if (p, r) not in tgtl:
                continue
            r0, _ = tgtl[(p, r)]
            m = f.comp(p).tensor(g.comp(r))
            for jj, row in enumerate(m.blocks):
                for ii, v in enumerate(row):
                    acc[r0 + jj][c0 + ii] = list(v)
        comps[n] = Mor.from_flat(cat, S.term(n), T.term(n), [x for row in acc for v in row for x in v])
    return ChainMap(S, T, comps, check=False)


def _offsets(cat, X, Y, n):
    out, o = {}, 0
    for (p, r) in _tensor_layout(X, Y, n):
        w = len(cat.tensor_obj(X.term(p), Y.term(r)))
        out[(p, r)] = (o, w)
        o += w
    return out


def symmetry_complex(X: BoundedComplex, Y: BoundedComplex) -> ChainMap:
    """``X⊗Y -> Y⊗X`` with the sign ``(-1)^{pq}`` on ``X_p⊗Y_q``."""
    cat = X.cat
    S, T = tensor_complex(X, Y), tensor_complex(Y, X)
    comps = {}
    for n in S.terms:
        acc = zero_blocks(cat, S.term(n), T.term(n))
        so, to = _offsets(cat, X, Y, n), _offsets(cat, Y, X, n)
        for (p, r), (c0, _) in so.items():
            r0, _ = to[(r, p)]
            m = symmetry(cat, X.term(p), Y.term(r)).scale(_sign(p * r))
            for jj, row in enumerate(m.blocks):
                for ii, v in enumerate(row):
                    acc[r0 + jj][c0 + ii] = list(v)
        comps[n] = Mor.from_flat(cat, S.term(n), T.term(n), [x for row in acc for v in row for x in v])
    return ChainMap(S, T, comps, check=False)


def dual_complex(X: BoundedComplex) -> BoundedComplex:
    cat = X.cat
    terms = {-n: cat.dual_obj(t) for n, t in X.terms.items()}
    diffs = {}
    for n in terms:
        if n - 1 in terms:
            # (X^∨)_n = (X_{-n})^∨ -> (X_{-n+1})^∨ is the transpose of d_{-n+1}
            diffs[n] = X.diff(-n + 1).dual().scale(_sign(n + 1))
    nm = f"{X.name}^∨" if X.name else ""
    return BoundedComplex(cat, terms, diffs, name=nm, check=False)


def dual_chain_map(f: ChainMap) -> ChainMap:
    return ChainMap(dual_complex(f.tgt), dual_complex(f.src),
                    {-n: m.dual() for n, m in f.comps.items()}, check=False)


def unit_complex(cat) -> BoundedComplex:
    return single(cat, cat.unit_obj(), 0, name="𝟙")


def ev_complex(X: BoundedComplex) -> ChainMap:
    """``X^∨⊗X -> 𝟙``."""
    cat = X.cat
    Xd = dual_complex(X)
    S = tensor_complex(Xd, X)
    one = unit_complex(cat)
    if not S.term(0):
        return ChainMap(S, one, {}, check=False)
    offs = _offsets(cat, Xd, X, 0)
    parts = []
    for (p, r), (c0, w) in offs.items():
        if p == -r:
            parts.append(evaluation(cat, X.term(r)))
        else:
            parts.append(Mor.zero(cat, cat.tensor_obj(Xd.term(p), X.term(r)), one.term(0)))
    return ChainMap(S, one, {0: hstack_mor(cat, parts)}, check=False)


def coev_complex(X: BoundedComplex) -> ChainMap:
    """``𝟙 -> X⊗X^∨``."""
    cat = X.cat
    Xd = dual_complex(X)
    T = tensor_complex(X, Xd)
    one = unit_complex(cat)
    if not T.term(0):
        return ChainMap(one, T, {}, check=False)
    offs = _offsets(cat, X, Xd, 0)
    parts = []
    for (p, r), (r0, w) in offs.items():
        if p == -r:
            parts.append(coevaluation(cat, X.term(p)))
        else:
            parts.append(Mor.zero(cat, one.term(0), cat.tensor_obj(X.term(p), Xd.term(r))))
    return ChainMap(one, T, {0: vstack_mor(cat, parts)}, check=False)


def weak_kernel(u: ChainMap):
    """``cone(u)[-1] -> src(u)`` (projection onto the source component)."""
    C, _ = cone(u)
    K = shift(C, -1)
    P = u.src
    comps = {}
    for n in K.terms:
        if P.term(n):
            comps[n] = hstack_mor(K.cat, [Mor.identity(K.cat, P.term(n)),
                                          Mor.zero(K.cat, u.tgt.term(n + 1), P.term(n))])
    return K, ChainMap(K, P, comps, check=False)


def homotopy_pullback(p: ChainMap, g: ChainMap):
    """Homotopy pullback of ``p: B -> C`` along ``g: D -> C``.

    Returns ``(P, to_B, to_D)`` with ``P = cone((p, -g))[-1]``."""
    cat = p.cat
    B, D = p.src, g.src
    u = hstack_maps(cat, [p, g.scale(-1)])
    P, k = weak_kernel(u)
    to_B = sum_projection(cat, [B, D], 0) @ k
    to_D = sum_projection(cat, [B, D], 1) @ k
    return P, ChainMap(P, B, to_B.comps, check=False), ChainMap(P, D, to_D.comps, check=False)


# ---------------------------------------------------------------------------
# hom spaces in the homotopy category

def _linear_matrix(inputs, fn, out_len) -> QMatrix:
    cols = [fn(v) for v in inputs]
    return QMatrix.from_columns(cols, out_len) if cols else QMatrix.zeros(out_len, 0)


class _Layout:
    """Flat coordinates for families of morphisms ``A_n -> B_{n+shift}``."""

    def __init__(self, cat, X, Y, shift=0):
        self.cat, self.X, self.Y, self.shift = cat, X, Y, shift
        self.slots = []
        o = 0
        for n in sorted(X.terms):
            t = Y.term(n + shift)
            if not t:
                continue
            w = sum(cat.hom_dim(a, b) for b in t for a in X.term(n))
            if w:
                self.slots.append((n, o, w))
                o += w
        self.size = o

    def unpack(self, vec) -> Dict[int, Mor]:
        return {n: Mor.from_flat(self.cat, self.X.term(n), self.Y.term(n + self.shift), vec[o:o + w])
                for n, o, w in self.slots}

    def pack(self, fam: Dict[int, Mor]):
        out = [ZERO] * self.size
        for n, o, w in self.slots:
            m = fam.get(n)
            if m is not None:
                out[o:o + w] = m.flat()
        return out

    def units(self):
        for k in range(self.size):
            v = [ZERO] * self.size
            v[k] = ONE
            yield v


class KbHom:
    """``Hom_{K^b}(X, Y)`` as chain maps modulo null-homotopic maps."""

    def __init__(self, X, Y):
        cat = X.cat
        self.X, self.Y = X, Y
        self.maps = _Layout(cat, X, Y, 0)
        self.htpy = _Layout(cat, X, Y, 1)
        self.eqs = _Layout(cat, X, Y, -1)
        E = _linear_matrix(list(self.maps.units()), self._defect, self.eqs.size)
        self.cycles = kernel_basis(E) if self.maps.size else QMatrix.zeros(0, 0)
        Hm = _linear_matrix(list(self.htpy.units()), self._boundary, self.maps.size)
        self.boundaries = Hm
        self.quot = Quotient(self.cycles.columns(), Hm.columns(), self.maps.size)
        self.dim = self.quot.dim

    def _defect(self, v):
        f = self.maps.unpack(v)
        out = {}
        for n in set(self.X.terms) | {m + 1 for m in self.X.terms}:
            if not self.Y.term(n - 1) or not self.X.term(n):
                continue
            fn = f.get(n, Mor.zero(self.X.cat, self.X.term(n), self.Y.term(n)))
            fm = f.get(n - 1, Mor.zero(self.X.cat, self.X.term(n - 1), self.Y.term(n - 1)))
            out[n] = self.Y.diff(n) @ fn - fm @ self.X.diff(n)
        return self.eqs.pack(out)

    def _boundary(self, v):
        h = self.htpy.unpack(v)
        cat = self.X.cat
        out = {}
        for n in self.X.terms:
            if not self.Y.term(n):
                continue
            acc = Mor.zero(cat, self.X.term(n), self.Y.term(n))
            if n in h:
                acc = acc + self.Y.diff(n + 1) @ h[n]
            if n - 1 in h:
                acc = acc + h[n - 1] @ self.X.diff(n)
            out[n] = acc
        return self.maps.pack(out)

    def basis(self) -> List[ChainMap]:
        return [ChainMap(self.X, self.Y, self.maps.unpack(rep), check=False)
                for rep in self.quot.representatives()]

    def coords(self, f: ChainMap) -> tuple:
        return self.quot.coords(self.maps.pack(f.comps))

    def from_coords(self, c) -> ChainMap:
        vec = [ZERO] * self.maps.size
        for x, rep in zip(c, self.quot.representatives()):
            if x:
                vec = [a + x * b for a, b in zip(vec, rep)]
        return ChainMap(self.X, self.Y, self.maps.unpack(vec), check=False)

    def null_homotopy(self, f: ChainMap):
        """A homotopy ``h`` with ``f = dh + hd``, or None."""
        if not self.htpy.size:
            return {} if f.is_zero() else None
        sol = solve(self.boundaries, self.maps.pack(f.comps))
        return None if sol is None else self.htpy.unpack(sol)


def kb_hom(X, Y) -> KbHom:
    cache = X._cache.setdefault("kbhom", {})
    key = Y.key()
    hit = cache.get(key)
    if hit is None or hit.Y is not Y and hit.Y != Y:
        hit = KbHom(X, Y)
        cache[key] = hit
    return hit


def is_nullhomotopic(f: ChainMap) -> bool:
    if f.is_zero():
        return True
    return kb_hom(f.src, f.tgt).null_homotopy(f) is not None


def homotopic(f: ChainMap, g: ChainMap) -> bool:
    return is_nullhomotopic(f - g)


# ---------------------------------------------------------------------------
# homology under a functor

class Homology:
    """Bigraded homology of ``functor(X)`` with canonical bases."""

    def __init__(self, X: BoundedComplex, fun: Functor):
        self.X, self.fun = X, fun
        self.term_spaces = {n: fun.space(t) for n, t in X.terms.items()}
        self.diff_maps = {n: fun.apply(X.diff(n)) for n in X.terms if (n - 1) in X.terms}
        self.quots: Dict[tuple, Quotient] = {}
        dims = {}
        for n, sp in self.term_spaces.items():
            for k in sp.degrees:
                dk = (k[0],)
                N = sp.dim(dk)
                dn = self.diff_maps.get(n)
                Zb = kernel_basis(dn.block(dk)) if dn is not None else QMatrix.identity(N)
                up = self.diff_maps.get(n + 1)
                B = up.block(dk).columns() if up is not None else []
                qt = Quotient(Zb.columns(), B, N)
                if qt.dim:
                    self.quots[(n, dk[0])] = qt
                    dims[(n, dk[0])] = qt.dim
        self.space = GradedSpace(dims, ZZ)

    def rep(self, bideg, i) -> tuple:
        return self.quots[bideg].representative(i)

    def coords(self, bideg, vec) -> tuple:
        qt = self.quots.get(bideg)
        if qt is None:
            return ()
        return qt.coords(vec)

    def induced(self, f: ChainMap, target: "Homology") -> GradedMap:
        blocks = {}
        for bd in self.space.degrees:
            n, k = bd
            if not target.space.dim(bd):
                continue
            Hf = self.fun.apply(f.comp(n)).block((k,))
            cols = [target.coords(bd, Hf.apply(self.rep(bd, i))) for i in range(self.space.dim(bd))]
            blocks[bd] = QMatrix.from_columns(cols, target.space.dim(bd))
        return GradedMap(self.space, target.space, blocks)


def apply_kunneth(X: BoundedComplex, fun: Functor) -> Homology:
    key = ("homology", id(fun))
    hit = X._cache.get(key)
    if hit is None or hit.fun is not fun:
        hit = Homology(X, fun)
        X._cache[key] = hit
    return hit


def homology_map(f: ChainMap, fun: Functor) -> GradedMap:
    return apply_kunneth(f.src, fun).induced(f, apply_kunneth(f.tgt, fun))


def is_h_epi(f: ChainMap, fun: Functor) -> bool:
    Hf = homology_map(f, fun)
    return Hf.is_surjective()


def is_h_iso(f: ChainMap, fun: Functor) -> bool:
    return homology_map(f, fun).is_iso()


def kunneth_map(X: BoundedComplex, Y: BoundedComplex, fun: Functor) -> GradedMap:
    """``H(X)⊗H(Y) -> H(X⊗Y)``: ``[a]⊗[b] ↦ (-1)^{k q} [μ(a⊗b)]`` for ``a`` of internal
    degree ``k`` and ``b`` of chain degree ``q``."""
    cat = X.cat
    HX, HY = apply_kunneth(X, fun), apply_kunneth(Y, fun)
    T = tensor_complex(X, Y)
    HT = apply_kunneth(T, fun)
    S = tensor_graded(HX.space, HY.space)
    blocks = {}
    idx = tensor_index(HX.space, HY.space)
    for bd, labs in idx.items():
        if not HT.space.dim(bd):
            continue
        n = bd[0]
        offs = _offsets(cat, X, Y, n)
        cols = []
        mus = {}
        for (a, i, b, j) in labs:
            (p, k), (r, l) = a, b
            key = (p, r)
            if key not in mus:
                mus[key] = fun.mu(X.term(p), Y.term(r))
            va, vb = HX.rep(a, i), HY.rep(b, j)
            # tensor of representatives, in H(X_p)⊗H(Y_r) at internal degree k+l
            HXp, HYr = HX.term_spaces[p], HY.term_spaces[r]
            local = tensor_index(HXp, HYr)[(k + l,)]
            vec = [ZERO] * len(local)
            for t, (aa, ii, bb, jj) in enumerate(local):
                if aa == (k,) and bb == (l,):
                    vec[t] = va[ii] * vb[jj]
            img = mus[key].block((k + l,)).apply(vec)
            # place into the term H(T_n) at internal degree k+l
            Tn_space = HT.term_spaces[n]
            full = [ZERO] * Tn_space.dim((k + l,))
            c0 = offs[key][0]
            pre = sum(fun.space_base(z).dim((k + l,)) for z in T.term(n)[:c0])
            for t, v in enumerate(img):
                full[pre + t] = v
            sgn = _sign(k * r)
            cols.append(tuple(sgn * x for x in HT.coords(bd, full)))
        blocks[bd] = QMatrix.from_columns(cols, HT.space.dim(bd))
    return GradedMap(S, HT.space, blocks)


# ---------------------------------------------------------------------------
# exactness and strength

class SigmaReport:
    def __init__(self):
        self.rows = []      # (bidegree, dim A, rank Hf, dim B, rank Hp, dim C)
        self.failures = []

    @property
    def ok(self):
        return not self.failures


def fiber_triangle(p: ChainMap):
    """``cone(p)[-1] -f-> B -p-> C``."""
    K, f = weak_kernel(p)
    return f, p


def verify_sigma_exact(f: ChainMap, p: ChainMap, fun: Functor) -> SigmaReport:
    """Check ``0 -> HA -> HB -> HC -> 0`` exactness per bidegree."""
    if not is_h_epi(p, fun):
        raise ComplexError("precondition: p is not an H-epimorphism")
    rep = SigmaReport()
    HA, HB, HC = (apply_kunneth(Z, fun).space for Z in (f.src, f.tgt, p.tgt))
    Hf, Hp = homology_map(f, fun), homology_map(p, fun)
    comp = Hp @ Hf
    for bd in sorted(set(HA.degrees) | set(HB.degrees) | set(HC.degrees)):
        a, b, c = HA.dim(bd), HB.dim(bd), HC.dim(bd)
        rf, rp = Hf.rank(bd), Hp.rank(bd)
        rep.rows.append((bd, a, rf, b, rp, c))
        if rf != a:
            rep.failures.append((bd, "Hf not injective"))
        if rp != c:
            rep.failures.append((bd, "Hp not surjective"))
        if a + c != b:
            rep.failures.append((bd, "rank HA + rank HC ≠ rank HB"))
        if not comp.block(bd).is_zero():
            rep.failures.append((bd, "Hp∘Hf ≠ 0"))
    return rep


def same_strength(fun1: Functor, fun2: Functor, window: Sequence[BoundedComplex]):
    """Compare kernels of both functors on every window hom space.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is a chain
    map killed by exactly one of the functors."""
    for X in window:
        for Y in window:
            hom = kb_hom(X, Y)
            if not hom.dim:
                continue
            basis = hom.basis()
            kers = []
            for fun in (fun1, fun2):
                cols = [homology_map(f, fun).to_matrix() for f in basis]
                flat = [tuple(x for r in m.rows for x in r) for m in cols]
                n = len(flat[0]) if flat else 0
                M = QMatrix.from_columns(flat, n) if n else QMatrix.zeros(0, len(basis))
                kers.append(kernel_basis(M) if n else QMatrix.identity(len(basis)))
            K1, K2 = kers
            for A, B in ((K1, K2), (K2, K1)):
                for col in A.columns():
                    if rank(_hcat(B, col)) > B.ncols:
                        return False, hom.from_coords(col)
    return True, None


def _hcat(B: QMatrix, col):
    cols = B.columns() + [tuple(col)]
    return QMatrix.from_columns(cols, len(col))
