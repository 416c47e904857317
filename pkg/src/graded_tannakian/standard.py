"""Lefschetz-type algorithms on motive presentations.

A motive presentation names an object ``X`` of dimension ``d``, a Lefschetz
line ``L``, the morphism ``ell: X -> X⊗L^{-1}``, a duality isomorphism and,
optionally, a hyperplane section with homological cycles ``nu_i``.  Projectors
are produced as morphisms of the presentation whenever the fiber matrix is
realizable there; every intermediate inverse is kept in a replayable
certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .category import Mor, TensorUndefined, PresentationError, as_obj, symmetry
from .complexes import chain_map_from_mor
from .fp import (FpMorphism, FpPresheaf, bracket, fiber, fiber_kunneth, fp_from_chain_map,
                 fp_hom, fp_image, fp_kernel, fp_solve, split_idempotent, tensor_fp)
from .graded import GradedMap, plain_swap, associator, tensor_maps, tensor_index
from .linalg import QMatrix, ZERO, ONE, row_space, solve, kernel_basis
from .mcat import FpLeaf, MMorphism, Node, from_fp, replay


class MotiveError(ValueError):
    """Precondition failure, with the level (dimension) and degree when known."""

    def __init__(self, msg, level=None, degree=None):
        super().__init__(msg)
        self.level, self.degree = level, degree


class SplitFailure(MotiveError):
    """A splitting stage had no solution (no semisimplicity witness)."""

    def __init__(self, msg, stage, degree=None):
        super().__init__(msg, degree=degree)
        self.stage = stage


def _fp(m: Mor) -> FpMorphism:
    return fp_from_chain_map(chain_map_from_mor(m))


def _as_mor(phi: FpMorphism) -> Mor:
    """The degree-0 component of a morphism between brackets of single objects."""
    return phi.g0.comp(0)


class Motive:
    def __init__(self, ws, name: str, fun=None):
        spec = ws.motives.get(name)
        if spec is None:
            raise MotiveError(f"no motive presentation named {name!r}")
        self.ws, self.name, self.spec = ws, name, spec
        self.cat = ws.cat
        self.fun = fun or ws.functor()
        self.X = as_obj(spec["object"])
        self.d = int(spec["dim"])
        self.L = as_obj(spec.get("lefschetz", "L")) if self.d or "lefschetz" in spec else None
        self.Lm = self.cat.dual_obj(self.L) if self.L else None
        self.ell = ws.morphism(spec["ell"]) if "ell" in spec else None
        self.duality = ws.morphism(spec["duality"]) if "duality" in spec else None
        self.untwists = {k: ws.morphism(v) for k, v in spec.get("untwist", {}).items()}
        self.nu = [ws.morphism(n) for n in spec.get("nu", [])]
        self.splitting = [ws.morphism(n) for n in spec.get("splitting", [])]
        hp = spec.get("hyperplane")
        self.hyperplane = (hp["motive"], ws.morphism(hp["restriction"])) if hp else None
        self.V = self.fun.space(self.X)

    # objects
    def twist(self, k: int, base=None) -> tuple:
        """``X⊗L^{-k}`` (``k ≥ 0``) or ``X⊗L^{|k|}`` for negative ``k``."""
        out = base if base is not None else self.X
        piece = self.Lm if k >= 0 else self.L
        for _ in range(abs(k)):
            out = self.cat.tensor_obj(out, piece)
        return out

    def power(self, k: int) -> tuple:
        out = self.cat.unit_obj()
        for _ in range(abs(k)):
            out = self.cat.tensor_obj(out, self.L if k > 0 else self.Lm)
        return out

    def h(self, i) -> int:
        return self.V.dim((i,))

    # the untwisting identification H(X)_{m+2k} = H(X⊗L^{-k})_m
    def untwist_block(self, k: int, m: int, base=None) -> QMatrix:
        base = base if base is not None else self.X
        if k == 0:
            return QMatrix.identity(self.fun.space(base).dim((m,)))
        A, B = self.fun.space(base), self.fun.space(self.power(-k))
        mu = self.fun.mu(base, self.power(-k))
        idx = tensor_index(A, B)[(m,)]
        cols = []
        for i in range(A.dim((m + 2 * k,))):
            v = [ZERO] * len(idx)
            v[idx.index(((m + 2 * k,), i, (-2 * k,), 0))] = ONE
            cols.append(mu.block((m,)).apply(v))
        return QMatrix.from_columns(cols, mu.target.dim((m,)))

    def xi(self, i: int) -> QMatrix:
        """Cup with the hyperplane class, ``H^i -> H^{i+2}``."""
        if not self.h(i) or not self.h(i + 2):
            return QMatrix.zeros(self.h(i + 2), self.h(i))
        if self.ell is None:
            raise MotiveError("motive has no ell morphism", level=self.d)
        He = self.fun.apply(self.ell).block((i,))
        U = self.untwist_block(1, i)
        if not U.ncols:
            return QMatrix.zeros(self.h(i + 2), self.h(i))
        return solve_left(U, He)

    def xi_power(self, i: int, k: int) -> QMatrix:
        out = QMatrix.identity(self.h(i))
        for j in range(k):
            out = self.xi(i + 2 * j) @ out
        return out

    def invariants(self) -> List[str]:
        bad = []
        if self.L is not None:
            sl = self.fun.space(self.L)
            if sl.dims != {(2,): 1}:
                bad.append("fiber(L) is not one-dimensional in degree 2")
        for (k,) in self.V.degrees:
            if not 0 <= k <= 2 * self.d:
                bad.append(f"fiber(X) has degree {k} outside [0, {2 * self.d}]")
        if self.ell is not None and self.ell.tgt != self.twist(1):
            bad.append("ell must map X to X⊗L^{-1}")
        return bad


def solve_left(U: QMatrix, M: QMatrix) -> QMatrix:
    """``Y`` with ``U @ Y = M`` (``U`` injective)."""
    cols = []
    for c in M.columns():
        x = solve(U, c)
        if x is None:
            raise MotiveError("untwisting identification is not invertible")
        cols.append(x)
    return QMatrix.from_columns(cols, U.ncols)


# checks -----------------------------------------------------------------------------

def check_hard_lefschetz(M: Motive) -> Dict[int, bool]:
    out = {}
    for i in range(M.d):
        a, b = M.h(i), M.h(2 * M.d - i)
        if a != b:
            out[i] = False
            continue
        out[i] = a == 0 or M.xi_power(i, M.d - i).rank() == a
    return out


def check_weak_lefschetz(M: Motive) -> Dict[int, bool]:
    if M.hyperplane is None:
        raise MotiveError("missing hyperplane datum", level=M.d)
    _, q = M.hyperplane
    Hq = M.fun.apply(q)
    out = {}
    for i in range(M.d):
        blk = Hq.block((i,))
        src, tgt = blk.ncols, blk.nrows
        if i <= M.d - 2:
            out[i] = src == tgt and blk.rank() == src
        else:
            out[i] = blk.rank() == src
    return out


# splittings -------------------------------------------------------------------------

@dataclass
class KunnethSplitting:
    motive: Motive
    pis: List[Mor]
    derivations: Dict[int, MMorphism] = field(default_factory=dict)
    notes: Dict[int, str] = field(default_factory=dict)

    def fp(self, i) -> FpMorphism:
        return _fp(self.pis[i])

    def certified(self, i) -> MMorphism:
        return from_fp(self.fp(i), self.motive.fun)

    def projectors(self) -> List[GradedMap]:
        return [self.motive.fun.apply(p) for p in self.pis]

    def failures(self) -> List[str]:
        M = self.motive
        cat = M.cat
        bad = []
        ident = Mor.identity(cat, M.X)
        total = Mor.zero(cat, M.X, M.X)
        for i, p in enumerate(self.pis):
            total = total + p
            if p @ p != p:
                bad.append(f"π_{i} not idempotent")
            for j, r in enumerate(self.pis):
                if i != j and not (p @ r).is_zero():
                    bad.append(f"π_{i}π_{j} ≠ 0")
            Hp = M.fun.apply(p)
            for (k,) in M.V.degrees:
                want = QMatrix.identity(M.h(k)) if k == i else QMatrix.zeros(M.h(k), M.h(k))
                if Hp.block((k,)) != want:
                    bad.append(f"fiber of π_{i} is not the degree-{i} projector at degree {k}")
        if total != ident:
            bad.append("Σπ_i ≠ id")
        for i, m in self.derivations.items():
            if not replay(m, M.fun):
                bad.append(f"certificate for π_{i} does not replay")
            if m.matrix.blocks != _retag(self.certified(i).matrix, m.matrix).blocks:
                bad.append(f"derivation of π_{i} disagrees with its realization")
        return bad


def _retag(a: GradedMap, like: GradedMap) -> GradedMap:
    return GradedMap(like.source, like.target,
                     {d: b for d, b in a.blocks.items() if like.source.dim(d) and like.target.dim(d)})


def _degree_projector(M: Motive, i: int) -> GradedMap:
    sp = fiber(bracket_of(M.X, M), M.fun)
    blocks = {(0, i): QMatrix.identity(sp.dim((0, i)))} if sp.dim((0, i)) else {}
    return GradedMap(sp, sp, blocks)


def bracket_of(obj, M: Motive) -> FpPresheaf:
    from .complexes import single
    return bracket(single(M.cat, obj))


def _realize(M: Motive, src: tuple, tgt: tuple, target: GradedMap, what: str) -> Mor:
    S, T = bracket_of(src, M), bracket_of(tgt, M)
    phi = fp_solve(S, T, _retag(target, GradedMap.zero(fiber(S, M.fun), fiber(T, M.fun))), M.fun)
    if phi is None:
        raise MotiveError(f"{what} is not realized by a morphism of the presentation", level=M.d)
    return _as_mor(phi)


def _dual_conjugate(M: Motive, f: Mor, i: int) -> Tuple[Mor, MMorphism]:
    """``Θ (f^∨ ⊗ id_{L^d}) Θ^{-1}`` with ``Θ = untwist_d ∘ (D ⊗ id_{L^d})``."""
    cat, d = M.cat, M.d
    if M.duality is None or str(d) not in M.untwists:
        raise MotiveError("duality data missing", level=d)
    Ld = M.power(d)
    theta = M.untwists[str(d)] @ M.duality.tensor(Mor.identity(cat, Ld))
    mid = f.dual().tensor(Mor.identity(cat, Ld))
    t = from_fp(_fp(theta), M.fun)
    if not t.matrix.is_iso():
        raise MotiveError("duality identification is not invertible", level=d)
    cert = Node("compose", [t.cert, FpLeaf(_fp(mid)), Node("inverse", [t.cert])])
    mat = cert.matrix(M.fun)
    pi = _realize(M, M.X, M.X, mat, f"dual projector π_{2 * d - i}")
    return pi, MMorphism(t.tgt, t.tgt, mat, cert)


def lefschetz_split(M: Motive, _level_name=None) -> KunnethSplitting:
    cat, d = M.cat, M.d
    bad = M.invariants()
    if bad:
        raise MotiveError(bad[0], level=d)
    if d == 0:
        return KunnethSplitting(M, [Mor.identity(cat, M.X)])
    if d == 1:
        if len(M.splitting) != 3:
            raise MotiveError("curve splitting missing", level=1)
        s = KunnethSplitting(M, list(M.splitting), notes={0: "supplied", 1: "supplied", 2: "supplied"})
        f = s.failures()
        if f:
            raise MotiveError(f"supplied curve splitting invalid: {f[0]}", level=1)
        return s
    if M.hyperplane is None:
        raise MotiveError("missing hyperplane datum", level=d)
    weak = check_weak_lefschetz(M)
    for i, ok in sorted(weak.items()):
        if not ok:
            raise MotiveError(f"weak Lefschetz fails at degree {i}", level=d, degree=i)
    if len(M.nu) < d:
        raise MotiveError(f"missing ν_{len(M.nu)}", level=d, degree=len(M.nu))
    yname, q = M.hyperplane
    Y = Motive(M.ws, yname, M.fun)
    if Y.d != d - 1:
        raise MotiveError("hyperplane section has the wrong dimension", level=d)
    sY = lefschetz_split(Y)
    pis: Dict[int, Mor] = {}
    derivs: Dict[int, MMorphism] = {}
    notes = {}
    for i in range(d):
        p = sY.pis[i] @ q                                   # X -> Y, lands in Y_i
        # image factorization [X] -> Im -> [Y]
        im, e, mono = fp_image(_fp(p))
        emat = e.fiber_map(M.fun)
        if emat.rank() != M.h(i):
            raise MotiveError(f"restriction not injective at degree {i}", level=d, degree=i)
        nu = M.nu[i]
        Dp = M.duality @ p.dual()                           # Y^∨ -> X⊗L^{-d}
        if i == 0:
            W = nu @ Dp
        else:
            key = f"{d},{i}"
            if key not in M.untwists:
                raise MotiveError(f"missing untwisting isomorphism {key}", level=d, degree=i)
            W = nu @ M.untwists[key] @ Dp.tensor(Mor.identity(cat, M.power(i)))
        Wfp = _fp(W)
        c = e @ FpMorphism(Wfp.src, bracket_of(M.X, M), Wfp.g0, check=False, witness=Wfp.witness)
        cmat = c.fiber_map(M.fun)
        sigma = _section(cmat, (0, i))
        if sigma is None:
            raise MotiveError(f"ν-composite not invertible at degree {i}", level=d, degree=i)
        Wm = Wfp.fiber_map(M.fun)
        fmat = Wm @ sigma @ emat
        pis[i] = _realize(M, M.X, M.X, fmat, f"π_{i}")
        leafW, leafE = FpLeaf(Wfp), FpLeaf(e)
        if cmat.is_iso():
            cert = Node("compose", [leafW, Node("inverse", [FpLeaf(c)]), leafE])
            derivs[i] = MMorphism(e.src, e.src, cert.matrix(M.fun), cert)
            notes[i] = "ν-composite inverted"
        else:
            notes[i] = "section of ν-composite by linear solve"
    for i in range(d):
        pis[2 * d - i], derivs[2 * d - i] = _dual_conjugate(M, pis[i], i)
        notes[2 * d - i] = "dual of π_%d" % i
    rest = Mor.identity(cat, M.X)
    for k, pi in pis.items():
        rest = rest - pi
    pis[d] = rest
    notes[d] = "complement"
    s = KunnethSplitting(M, [pis[i] for i in range(2 * d + 1)], derivs, notes)
    bad = s.failures()
    if bad:
        raise MotiveError(f"assembled splitting invalid: {bad[0]}", level=d)
    return s


def _section(m: GradedMap, bd) -> Optional[GradedMap]:
    """A right inverse of ``m`` in bidegree ``bd`` (zero elsewhere), by linear solving."""
    blk = m.block(bd)
    n = m.target.dim(bd)
    cols = []
    for j in range(n):
        e = tuple(ONE if t == j else ZERO for t in range(n))
        x = solve(blk, e)
        if x is None:
            return None
        cols.append(x)
    return GradedMap(m.target, m.source, {bd: QMatrix.from_columns(cols, m.source.dim(bd))} if n else {})


def semisimple_split(M: Motive) -> KunnethSplitting:
    cat, d = M.cat, M.d
    if d == 0:
        return KunnethSplitting(M, [Mor.identity(cat, M.X)])
    if d > 1:
        raise MotiveError("semisimple splitting is implemented for d ≤ 1", level=d)
    hl = check_hard_lefschetz(M)
    if not all(hl.values()):
        raise SplitFailure("hard Lefschetz fails", stage="hard Lefschetz", degree=0)
    X = bracket_of(M.X, M)
    im, e, mono = fp_image(_fp(M.ell))
    # a section of [X] -> image, solved over the presheaf homs
    basis = fp_hom(im, X).basis
    target = GradedMap.identity(fiber(im, M.fun))
    sigma = None
    if basis:
        cols = [_flat_map((e @ b).fiber_map(M.fun), target) for b in basis]
        n = len(cols[0])
        sol = solve(QMatrix.from_columns(cols, n), _flat_map(target, target)) if n else ()
        if sol is not None:
            sigma = FpMorphism.zero(im, X)
            for c, b in zip(sol, basis):
                if c:
                    sigma = sigma + b.scale(c)
    if sigma is None:
        raise SplitFailure("the epimorphism onto the image of ℓ has no section",
                           stage="X_0 section", degree=0)
    pi0 = _as_mor(sigma @ e)
    pi2, der = _dual_conjugate(M, pi0, 0)
    pi1 = Mor.identity(cat, M.X) - pi0 - pi2
    s = KunnethSplitting(M, [pi0, pi1, pi2], {2: der},
                         {0: "section of the image of ℓ", 1: "complement", 2: "dual of π_0"})
    bad = s.failures()
    if bad:
        raise SplitFailure(f"assembled splitting invalid: {bad[0]}", stage="assembly")
    return s


def _flat_map(m: GradedMap, like: GradedMap) -> tuple:
    out = []
    for bd in like.source.degrees:
        if like.target.dim(bd):
            for r in m.block(bd).rows:
                out.extend(r)
    return tuple(out)


# primitive decomposition and the operators ---------------------------------------------

@dataclass
class PrimitiveData:
    motive: Motive
    kernels: Dict[int, FpPresheaf]
    dims: Dict[int, int]
    pieces: Dict[int, List[Tuple[int, int, int]]]        # i -> [(j, k, dim L^j P^k)]
    bases: Dict[int, List[tuple]]                         # k -> basis of P^k inside H^k
    checks: Dict[int, bool]


def _ell_power(M: Motive, k: int, base_twist: int = 0) -> Mor:
    """``ℓ^k: X⊗L^{-b} -> X⊗L^{-(b+k)}``."""
    cat = M.cat
    out = Mor.identity(cat, M.twist(base_twist))
    for j in range(base_twist, base_twist + k):
        step = M.ell.tensor(Mor.identity(cat, M.power(-j))) if j else M.ell
        out = step @ out
    return out


def primitive_decompose(M: Motive, s: KunnethSplitting) -> PrimitiveData:
    d = M.d
    hl = check_hard_lefschetz(M)
    for i, ok in hl.items():
        if not ok:
            raise MotiveError(f"hard Lefschetz fails at degree {i}", level=d, degree=i)
    X = bracket_of(M.X, M)
    kernels, dims, bases = {}, {}, {}
    for k in range(d + 1):
        image, sec, ret = split_idempotent(X, s.fp(k), M.fun)
        if k < 2:
            # the power of ℓ lands above degree 2d, so the whole summand is primitive
            P = image
        else:
            try:
                lk = _ell_power(M, d - k + 1)
            except (TensorUndefined, PresentationError):
                raise MotiveError(f"presentation lacks X⊗L^-{d - k + 1}", level=d, degree=k) from None
            P, incl = fp_kernel(_fp(lk) @ sec)
        kernels[k] = P
        dims[k] = fiber(P, M.fun).total_dim
        # fiber-level oracle: ker of ξ^{d-k+1} on H^k
        xp = M.xi_power(k, d - k + 1) if M.h(k) else QMatrix.zeros(0, 0)
        K = kernel_basis(xp) if M.h(k) else QMatrix.zeros(0, 0)
        bases[k] = K.columns()
        if len(bases[k]) != dims[k]:
            raise MotiveError(f"primitive part at degree {k}: fiber {dims[k]} vs kernel {len(bases[k])}",
                              level=d, degree=k)
    pieces, checks = {}, {}
    for i in range(2 * d + 1):
        lst, vecs = [], []
        for j in range(max(i - d, 0), i // 2 + 1):
            k = i - 2 * j
            if k > d or k < 0:
                continue
            imgs = [M.xi_power(k, j).apply(v) for v in bases[k]]
            r = len(row_space(imgs, M.h(i))[1]) if imgs and M.h(i) else 0
            lst.append((j, k, r))
            vecs.extend(imgs)
        pieces[i] = lst
        total = sum(r for _, _, r in lst)
        span = len(row_space(vecs, M.h(i))[1]) if vecs and M.h(i) else 0
        checks[i] = total == M.h(i) == span
    return PrimitiveData(M, kernels, dims, pieces, bases, checks)


@dataclass
class BData:
    motive: Motive
    adapted: Dict[int, List[Tuple[int, int, int]]]       # basis labels (j, k, index) per degree
    operators: Dict[str, Dict[int, QMatrix]]             # name -> source degree -> block
    certificates: Dict[Tuple[str, int], MMorphism]
    relations: Dict[str, bool]


def derive_b_operators(M: Motive, s: KunnethSplitting, prim: PrimitiveData) -> BData:
    d = M.d
    if not all(prim.checks.values()):
        raise MotiveError("primitive decomposition incomplete", level=d)
    # adapted bases of each H^i: ξ^j p for p in the basis of P^k
    B, labels = {}, {}
    for i in range(2 * d + 1):
        cols, labs = [], []
        for j, k, _ in prim.pieces[i]:
            for a, v in enumerate(prim.bases[k]):
                cols.append(M.xi_power(k, j).apply(v))
                labs.append((j, k, a))
        B[i] = QMatrix.from_columns(cols, M.h(i)) if cols else QMatrix.zeros(M.h(i), 0)
        labels[i] = labs

    def op(fn):
        """Block matrices of an operator given on adapted basis labels."""
        blocks = {}
        for i in range(2 * d + 1):
            if not labels[i]:
                continue
            outs = {}
            for col, lab in enumerate(labels[i]):
                for (t, lab2, c) in fn(lab):
                    outs.setdefault(t, {})[(lab2, col)] = c
            for t, entries in outs.items():
                if t < 0 or t > 2 * d or not labels[t]:
                    continue
                pos = {lab: r for r, lab in enumerate(labels[t])}
                A = [[ZERO] * len(labels[i]) for _ in labels[t]]
                for (lab2, col), c in entries.items():
                    A[pos[lab2]][col] += c
                blk = B[t] @ QMatrix(A, len(labels[i])) @ B[i].inverse()
                blocks[(i, t)] = blk
        return blocks

    from fractions import Fraction
    sgn = lambda k: -1 if (k * (k + 1) // 2) % 2 else 1
    ops = {
        "Lambda": op(lambda l: [(l[1] + 2 * l[0] - 2, (l[0] - 1, l[1], l[2]), ONE)] if l[0] >= 1 else []),
        "cLambda": op(lambda l: [(l[1] + 2 * l[0] - 2, (l[0] - 1, l[1], l[2]),
                                  Fraction(l[0] * (d - l[1] - l[0] + 1)))] if l[0] >= 1 else []),
        "star": op(lambda l: [(2 * d - l[1] - 2 * l[0], (d - l[1] - l[0], l[1], l[2]), Fraction(sgn(l[1])))]),
    }
    for j in range(d + 1):
        ops[f"p{j}"] = op(lambda l, j=j: [(l[1] + 2 * l[0], l, ONE)] if l[0] == j else [])
    # realize each homogeneous component as a morphism of the presentation
    certs = {}
    for name, blocks in ops.items():
        for (i, t), blk in blocks.items():
            certs[(name, i)] = _realize_component(M, i, t, blk, f"{name} on H^{i}")
    rel = _b_relations(M, ops, B, labels)
    for key, m in certs.items():
        rel[f"replay {key[0]}@{key[1]}"] = replay(m, M.fun)
    flat = {name: {i: blk for (i, t), blk in blocks.items()} for name, blocks in ops.items()}
    return BData(M, labels, flat, certs, rel)


def _realize_component(M: Motive, i: int, t: int, blk: QMatrix, what: str) -> MMorphism:
    """A morphism between twists of X whose fiber is ``blk: H^i -> H^t``."""
    shift = (t - i) // 2
    if (t - i) % 2:
        raise MotiveError(f"{what}: odd degree shift", level=M.d)
    if shift <= 0:
        src, tgt, ds, dt = M.twist(-shift), M.X, -shift, 0
    else:
        src, tgt, ds, dt = M.X, M.twist(shift), 0, shift
    try:
        S, T = bracket_of(src, M), bracket_of(tgt, M)
    except (TensorUndefined, PresentationError):
        raise MotiveError(f"{what}: presentation lacks the twisted object", level=M.d) from None
    fS, fT = fiber(S, M.fun), fiber(T, M.fun)
    m = i - 2 * ds                                        # common fiber degree
    Us = M.untwist_block(ds, m)
    Ut = M.untwist_block(dt, m)
    mat = Ut @ blk @ Us.inverse()
    target = GradedMap(fS, fT, {(0, m): mat} if fS.dim((0, m)) and fT.dim((0, m)) else {})
    phi = fp_solve(S, T, target, M.fun)
    if phi is None:
        raise MotiveError(f"{what} is not realized by a morphism of the presentation", level=M.d)
    return from_fp(phi, M.fun)


def _compose_ops(a: Dict, b: Dict) -> Dict:
    out = {}
    for (i, t), y in b.items():
        for (t2, u), x in a.items():
            if t2 == t:
                out[(i, u)] = out[(i, u)] + x @ y if (i, u) in out else x @ y
    return out


def _b_relations(M: Motive, ops, B, labels) -> Dict[str, bool]:
    d = M.d
    xi = {(i, i + 2): M.xi(i) for i in range(2 * d - 1) if M.h(i) and M.h(i + 2)}
    ident = {(i, i): QMatrix.identity(M.h(i)) for i in range(2 * d + 1) if M.h(i)}

    def eq(a, b):
        keys = set(a) | set(b)
        for k in keys:
            x, y = a.get(k), b.get(k)
            if x is None and y is None:
                continue
            if x is None:
                x = QMatrix.zeros(y.nrows, y.ncols)
            if y is None:
                y = QMatrix.zeros(x.nrows, x.ncols)
            if x != y:
                return False
        return True

    def add(a, b):
        out = dict(a)
        for k, v in b.items():
            out[k] = out[k] + v if k in out else v
        return out

    rel = {}
    total = {}
    for j in range(d + 1):
        p = ops[f"p{j}"]
        rel[f"p{j} idempotent"] = eq(_compose_ops(p, p), p)
        for j2 in range(d + 1):
            if j2 != j:
                rel[f"p{j}p{j2} = 0"] = eq(_compose_ops(p, ops[f"p{j2}"]), {})
        total = add(total, p)
    rel["Σ p_j = id"] = eq(total, ident)
    rel["Λ lowers degree by 2"] = all(t == i - 2 for (i, t) in ops["Lambda"])
    # Λ ξ = id on adapted vectors ξ^j p with ξ^{j+1} p still nonzero
    ok = True
    for i in range(2 * d - 1):
        if (i, i + 2) not in xi:
            continue
        comp = _compose_ops(ops["Lambda"], {(i, i + 2): xi[(i, i + 2)]})
        blk = comp.get((i, i), QMatrix.zeros(M.h(i), M.h(i)))
        for col, (j, k, _) in enumerate(labels[i]):
            if j < d - k:
                v = B[i].column(col)
                ok = ok and blk.apply(v) == tuple(v)
    rel["Λξ = id below the top"] = ok
    star = ops["star"]
    inv_star = {(t, i): m.inverse() for (i, t), m in star.items()}
    rel["Λ = ∗⁻¹ξ∗"] = eq(_compose_ops(inv_star, _compose_ops(xi, star)), ops["Lambda"])
    comm = add(_compose_ops(ops["cLambda"], xi),
               {k: v.scale(-1) for k, v in _compose_ops(xi, ops["cLambda"]).items()})
    h = {(i, i): QMatrix.identity(M.h(i)).scale(d - i) for i in range(2 * d + 1) if M.h(i)}
    rel["[ᶜΛ, ξ] = d - i"] = eq(comm, h)
    return rel


# purity and the sign twist -------------------------------------------------------------

@dataclass
class PureSummand:
    source: str
    weight: int
    obj: FpPresheaf
    section: FpMorphism
    retraction: FpMorphism
    base: tuple = ()
    proj: Optional[Mor] = None


def pure_summands(s: KunnethSplitting, label: str = "") -> List[PureSummand]:
    M = s.motive
    X = bracket_of(M.X, M)
    out = []
    for i in range(len(s.pis)):
        im, sec, ret = split_idempotent(X, s.fp(i), M.fun)
        if fiber(im, M.fun).total_dim:
            im.name = f"{label or M.name}_{i}"
            out.append(PureSummand(label or M.name, i, im, sec, ret, M.X, s.pis[i]))
    return out


def purity_decompose(splittings: List[KunnethSplitting], depth: int = 1):
    """Pure summands grouped by weight; certified homs across weights must vanish."""
    from .mcat import m_hom_bounds
    fun = splittings[0].motive.fun
    pieces = []
    for s in splittings:
        pieces.extend(pure_summands(s))
    classes: Dict[int, List[PureSummand]] = {}
    for p in pieces:
        classes.setdefault(p.weight, []).append(p)
    cross = {}
    for a in pieces:
        for b in pieces:
            hb = m_hom_bounds(a.obj, b.obj, fun, None, depth)
            cross[(a.obj.name, b.obj.name)] = hb.certified_dim
            if a.weight != b.weight and hb.certified_dim:
                raise MotiveError(f"nonzero certified hom between weights {a.weight} and {b.weight}")
    return dict(sorted(classes.items())), cross


def sym_fp(A: FpPresheaf, B: FpPresheaf) -> FpMorphism:
    """Symmetry of presentations; the witness swaps the two relation summands."""
    from .complexes import sum_inclusion, sum_projection, symmetry_complex
    S, T = tensor_fp(A, B), tensor_fp(B, A)
    top = symmetry_complex(A.X0, B.X0)
    cat = A.cat
    a1, b1 = symmetry_complex(A.X1, B.X0), symmetry_complex(A.X0, B.X1)
    try:
        s_parts = [a1.src, b1.src]
        t_parts = [b1.tgt, a1.tgt]
        w = sum_inclusion(cat, t_parts, 1) @ a1 @ sum_projection(cat, s_parts, 0) + \
            sum_inclusion(cat, t_parts, 0) @ b1 @ sum_projection(cat, s_parts, 1)
        if w.src == S.X1 and w.tgt == T.X1 and T.d @ w == top @ S.d:
            return FpMorphism(S, T, top, check=False, witness=w)
    except (ValueError, TensorUndefined):
        pass
    return FpMorphism(S, T, top)


@dataclass
class TwistReport:
    pairs: Dict[Tuple[str, str], Dict[str, bool]]
    triples: Dict[Tuple[str, str, str], Optional[bool]]
    skipped: List[tuple] = field(default_factory=list)

    @property
    def ok(self):
        return all(all(v.values()) for v in self.pairs.values()) and \
            all(v is not False for v in self.triples.values())


def twisted_symmetry(a: PureSummand, b: PureSummand, fun) -> GradedMap:
    """Fiber-level twisted symmetry ``fib(a)⊗fib(b) -> fib(b)⊗fib(a)``."""
    s = sym_fp(a.obj, b.obj).fiber_map(fun)
    k1 = fiber_kunneth(a.obj, b.obj, fun)
    k2 = fiber_kunneth(b.obj, a.obj, fun)
    m = k2.inverse() @ s @ k1
    return m.scale(-1 if (a.weight * b.weight) % 2 else 1)


def sign_twist(pieces: List[PureSummand], fun, triples: bool = True) -> TwistReport:
    for p in pieces:
        if p.weight is None:
            raise MotiveError(f"purity data missing for {p.obj.name}")
    pairs, skipped = {}, []
    memo: Dict[tuple, GradedMap] = {}
    full: Dict[tuple, GradedMap] = {}

    def tw(x, y):
        key = (x.obj.name, y.obj.name)
        if key not in memo:
            memo[key] = twisted_symmetry(x, y, fun)
        return memo[key]

    for a in pieces:
        for b in pieces:
            try:
                t = tw(a, b)
                back = tw(b, a)
            except TensorUndefined as e:
                skipped.append(((a.obj.name, b.obj.name), str(e)))
                continue
            Fa, Fb = fiber(a.obj, fun), fiber(b.obj, fun)
            swap = plain_swap(Fa, Fb)
            pairs[(a.obj.name, b.obj.name)] = {
                "plain swap": t.blocks == _retag(swap, t).blocks,
                "involution": (back @ t).is_identity(),
                "entries in {0,±1}": all(x in (0, 1, -1) for blk in t.blocks.values()
                                         for r in blk.rows for x in r),
                "natural": _natural(a, b, fun, t, full),
            }
    return TwistReport(pairs, _hexagons(pieces, fun) if triples else {}, skipped)


def _natural(a: PureSummand, b: PureSummand, fun, t: GradedMap, cache=None) -> bool:
    """Compatibility with the idempotents cutting out ``a`` and ``b``."""
    ea = (a.section @ a.retraction).fiber_map(fun)
    eb = (b.section @ b.retraction).fiber_map(fun)
    Xa, Xb = a.section.tgt, b.section.tgt
    cache = {} if cache is None else cache
    key = (id(Xa), id(Xb))
    if key not in cache:
        full = sym_fp(Xa, Xb).fiber_map(fun)
        k1, k2 = fiber_kunneth(Xa, Xb, fun), fiber_kunneth(Xb, Xa, fun)
        cache[key] = (k2.inverse() @ full @ k1, Xa, Xb)
    s = cache[key][0]
    return (s @ tensor_maps(ea, eb)).blocks == (tensor_maps(eb, ea) @ s).blocks


def _twisted_full(fun, A, B, wa, wb) -> GradedMap:
    """Twisted symmetry ``H(A)⊗H(B) -> H(B)⊗H(A)`` from weighted idempotents."""
    base = fun.mu(B, A).inverse() @ fun.apply(symmetry(fun.cat, A, B)) @ fun.mu(A, B)
    out = GradedMap.zero(base.source, base.target)
    for i, p in wa:
        for j, q in wb:
            out = out + (tensor_maps(q, p) @ base @ tensor_maps(p, q)).scale(-1 if (i * j) % 2 else 1)
    return out


def _hexagons(pieces: List[PureSummand], fun) -> Dict[Tuple[str, str, str], bool]:
    """``t_{a,b⊗c} = (id_b ⊗ t_{a,c}) α (t_{a,b} ⊗ id_c) α^{-1}`` on each triple of summands.

    Computed once on ``H(X)^{⊗3}`` for the common underlying object and then
    restricted to the summand idempotents.
    """
    out = {}
    groups: Dict[tuple, List[PureSummand]] = {}
    for p in pieces:
        groups.setdefault(p.base, []).append(p)
    for X, grp in groups.items():
        try:
            fun.cat.tensor_obj(X, fun.cat.tensor_obj(X, X))
        except TensorUndefined:
            for a in grp:
                for b in grp:
                    for c in grp:
                        out[(a.obj.name, b.obj.name, c.obj.name)] = None
            continue
        V = fun.space(X)
        idem = {p.obj.name: fun.apply(p.proj) for p in grp}
        w = [(p.weight, idem[p.obj.name]) for p in grp]
        XX = fun.cat.tensor_obj(X, X)
        m = fun.mu(X, X)
        w2 = [(i + j, m @ tensor_maps(p, q) @ m.inverse()) for i, p in w for j, q in w]
        I = GradedMap.identity(V)
        t = _twisted_full(fun, X, X, w, w)
        big = _twisted_full(fun, X, XX, w, w2)
        lhs = tensor_maps(m.inverse(), I) @ big @ tensor_maps(I, m)
        rhs = associator(V, V, V).inverse() @ tensor_maps(I, t) @ associator(V, V, V) @ \
            tensor_maps(t, I) @ associator(V, V, V).inverse()
        for a in grp:
            for b in grp:
                for c in grp:
                    ea, eb, ec = idem[a.obj.name], idem[b.obj.name], idem[c.obj.name]
                    src = tensor_maps(ea, tensor_maps(eb, ec))
                    out[(a.obj.name, b.obj.name, c.obj.name)] = (lhs @ src) == (rhs @ src)
    return out
