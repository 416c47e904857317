"""Invariant suites run over a workspace window.

Each suite returns a :class:`SuiteResult` whose rows are plain data, so the
same result renders as a table or as canonical JSON.  Rows have ``ok`` set to
``True``/``False`` for checked invariants and ``None`` for informational or
not-applicable entries.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from .category import PresentationError, TensorUndefined, validate_functor, validate_presentation
from .complexes import (ChainMap, apply_kunneth, cone, fiber_triangle, is_h_epi, kb_hom,
                        tensor_complex, verify_sigma_exact)
from .documents import InputError, Workspace, degree_key
from .fp import (FpMorphism, FpPresheaf, bracket, dual_data, fiber, fiber_kunneth, fp_cokernel,
                 fp_hom, fp_kernel, is_serre_null)
from .graded import GradedMap, GradedSpace, ZZ, associator, convolve, tensor_maps
from .mcat import CertificateError, CoverSet, m_hom_bounds, replay


@dataclass
class Row:
    invariant: str
    subject: str
    ok: Optional[bool]
    detail: Any = None

    def to_json(self):
        return {"invariant": self.invariant, "subject": self.subject, "ok": self.ok,
                "detail": self.detail}


@dataclass
class SuiteResult:
    name: str
    rows: List[Row] = field(default_factory=list)

    def add(self, invariant, subject, ok, detail=None):
        self.rows.append(Row(invariant, subject, None if ok is None else bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(r.ok is not False for r in self.rows)

    @property
    def counts(self):
        return {"pass": sum(r.ok is True for r in self.rows),
                "fail": sum(r.ok is False for r in self.rows),
                "info": sum(r.ok is None for r in self.rows)}

    def failures(self):
        return [r for r in self.rows if r.ok is False]

    def to_json(self):
        return {"suite": self.name, "ok": self.ok, "counts": self.counts,
                "rows": [r.to_json() for r in self.rows]}


class Context:
    """What a suite sees: workspace, functor, selected window and search depth."""

    def __init__(self, ws: Workspace, window: Optional[List[str]] = None, depth: int = 2,
                 functor: Optional[str] = None):
        self.ws = ws
        self.fun = ws.functor(functor)
        self.names = list(window if window is not None else ws.window)
        for n in self.names:
            ws.complex(n)
        self.depth = depth

    def complexes(self):
        return [(n, self.ws.complex(n)) for n in self.names]

    def brackets(self):
        return [(n, bracket(X, n)) for n, X in self.complexes()]

    def covers(self):
        return CoverSet.from_workspace(self.ws, self.fun)


def dims_json(sp: GradedSpace) -> Dict[str, int]:
    return {degree_key(d): sp.dim(d) for d in sp.degrees if sp.dim(d)}


# suites ---------------------------------------------------------------------------

def kunneth_suite(cx: Context) -> SuiteResult:
    res = SuiteResult("kunneth")
    for (a, X), (b, Y) in itertools.product(cx.complexes(), repeat=2):
        try:
            XY = tensor_complex(X, Y)
        except TensorUndefined as e:
            res.add("tensor defined", f"{a}⊗{b}", None, str(e))
            continue
        got = apply_kunneth(XY, cx.fun).space
        want = convolve(apply_kunneth(X, cx.fun).space.dims, apply_kunneth(Y, cx.fun).space.dims)
        gd = {d: n for d, n in got.dims.items() if n}
        wd = {d: n for d, n in want.items() if n}
        res.add("dims of H(X⊗Y) = dims H(X) * dims H(Y)", f"{a}⊗{b}", gd == wd,
                {"got": dims_json(got)})
    return res


def _sweep(basis: List[ChainMap], cap: int = 4) -> List[ChainMap]:
    """Basis elements plus all {-1,0,1} combinations of the first ``cap`` of them."""
    out = list(basis)
    head = basis[:cap]
    for coeffs in itertools.product((-1, 0, 1), repeat=len(head)):
        if sum(c != 0 for c in coeffs) < 2:
            continue
        acc = None
        for c, f in zip(coeffs, head):
            if c:
                term = f.scale(c)
                acc = term if acc is None else acc + term
        out.append(acc)
    return out


def sigma_suite(cx: Context) -> SuiteResult:
    res = SuiteResult("sigma-exactness")
    for (a, X), (b, Y) in itertools.product(cx.complexes(), repeat=2):
        hom = kb_hom(X, Y)
        if not hom.dim:
            continue
        for k, p in enumerate(_sweep(hom.basis())):
            if not is_h_epi(p, cx.fun):
                continue
            f, _ = fiber_triangle(p)
            rep = verify_sigma_exact(f, p, cx.fun)
            res.add("0 -> HA -> HB -> HC -> 0 exact", f"{a}->{b}#{k}", rep.ok,
                    {"ranks": [[degree_key(r[0])] + list(r[1:]) for r in rep.rows],
                     "failures": [[degree_key(bd), why] for bd, why in rep.failures]})
    if not res.rows:
        res.add("H-epimorphisms found", "window", None, "none in the swept hom spaces")
    return res


def _fp_candidates(cx: Context, limit: int = 3):
    for (a, F), (b, G) in itertools.product(cx.brackets(), repeat=2):
        basis = fp_hom(F, G).basis[:limit]
        cands = list(basis)
        if len(basis) > 1:
            acc = basis[0]
            for m in basis[1:]:
                acc = acc + m
            cands.append(acc)
        for k, phi in enumerate(cands):
            yield f"{a}->{b}#{k}", phi


def faithful_exact_suite(cx: Context) -> SuiteResult:
    """Fibers of fp kernels/cokernels against linear-algebra kernels/cokernels."""
    res = SuiteResult("faithful-exact")
    fun = cx.fun
    for subject, phi in _fp_candidates(cx):
        m = phi.fiber_map(fun)
        K, incl = fp_kernel(phi)
        C, proj = fp_cokernel(phi)
        mi, mp = incl.fiber_map(fun), proj.fiber_map(fun)
        ok_k = ok_c = True
        for bd in sorted(set(m.source.degrees) | set(m.target.degrees)):
            blk = m.block(bd)
            kdim = m.source.dim(bd) - blk.rank()
            cdim = m.target.dim(bd) - blk.rank()
            ib = mi.block(bd)
            ok_k &= fiber(K, fun).dim(bd) == kdim and ib.rank() == kdim and (blk @ ib).is_zero()
            pb = mp.block(bd)
            ok_c &= fiber(C, fun).dim(bd) == cdim and pb.rank() == cdim and (pb @ blk).is_zero()
        res.add("fiber(ker φ) = ker fiber(φ)", subject, ok_k, {"dims": dims_json(fiber(K, fun))})
        res.add("fiber(coker φ) = coker fiber(φ)", subject, ok_c, {"dims": dims_json(fiber(C, fun))})
    return res


def direct_hom_dim(X, Y) -> int:
    """Homotopy-category hom dimension, computed without the presheaf layer."""
    return kb_hom(X, Y).dim


def semisimple_suite(cx: Context) -> SuiteResult:
    res = SuiteResult("semisimple-equivalence")
    covers = cx.covers()
    window = [X for _, X in cx.complexes()]
    for (a, X), (b, Y) in itertools.product(cx.complexes(), repeat=2):
        hb = m_hom_bounds(bracket(X, a), bracket(Y, b), cx.fun, covers, cx.depth, window)
        oracle = direct_hom_dim(X, Y)
        detail = {"certified": hb.certified_dim, "upper": hb.probe_dim,
                  "ambient": hb.ambient_dim, "direct": oracle}
        res.add("bounds meet", f"{a}->{b}", hb.meets, detail)
        res.add("certified = direct hom", f"{a}->{b}", hb.certified_dim == oracle, detail)
    return res


def serre_kill_suite(cx: Context) -> SuiteResult:
    res = SuiteResult("serre-kill")
    for a, X in cx.complexes():
        nulls = [(f"cone(id_{a})", bracket(cone(ChainMap.identity(X))[0])),
                 (f"id-presentation({a})", FpPresheaf(ChainMap.identity(X), f"id_{a}"))]
        for name, F in nulls:
            ident = FpMorphism.identity(F)
            hb = m_hom_bounds(F, F, cx.fun, None, 1)
            res.add("fiber is zero", name, is_serre_null(F, cx.fun))
            res.add("id = 0 in the quotient", name,
                    ident.fiber_map(cx.fun).is_zero() and hb.probe_dim == 0,
                    {"upper": hb.probe_dim})
    return res


def duality_zigzags(F: FpPresheaf, fun):
    """Both triangle composites on fibers, ``V -> V`` and ``V^∨ -> V^∨``."""
    dd = dual_data(F, fun)
    V, D = fiber(F, fun), fiber(dd.dual, fun)
    one = GradedSpace({(0, 0): 1}, ZZ)
    E = dd.ev.fiber_map(fun) @ fiber_kunneth(dd.dual, F, fun)
    C = fiber_kunneth(F, dd.dual, fun).inverse() @ dd.coev.fiber_map(fun)
    E = GradedMap(E.source, one, E.blocks)
    C = GradedMap(one, C.target, C.blocks)
    idV, idD = GradedMap.identity(V), GradedMap.identity(D)
    left = tensor_maps(idV, E) @ associator(V, D, V) @ tensor_maps(C, idV)
    right = tensor_maps(E, idD) @ associator(D, V, D).inverse() @ tensor_maps(idD, C)
    return GradedMap(V, V, left.blocks), GradedMap(D, D, right.blocks)


def duality_suite(cx: Context) -> SuiteResult:
    res = SuiteResult("duality")
    for a, F in cx.brackets():
        try:
            z1, z2 = duality_zigzags(F, cx.fun)
        except (TensorUndefined, PresentationError) as e:
            if isinstance(e, PresentationError) and "not a listed object" not in str(e):
                raise
            res.add("dual defined in the presentation", a, None, str(e))
            continue
        res.add("(id⊗ev)(coev⊗id) = id", a, z1.is_identity())
        res.add("(ev⊗id)(id⊗coev) = id", a, z2.is_identity())
    return res


def hom_bounds_suite(cx: Context) -> SuiteResult:
    """Bounds at the chosen depth; whatever they report, certificates must replay."""
    res = SuiteResult("hom-bounds")
    covers = cx.covers()
    window = [X for _, X in cx.complexes()]
    for (a, F), (b, G) in itertools.product(cx.brackets(), repeat=2):
        hb = m_hom_bounds(F, G, cx.fun, covers, cx.depth, window)
        detail = {"certified": hb.certified_dim, "upper": hb.probe_dim, "ambient": hb.ambient_dim}
        res.add("bounds meet", f"{a}->{b}", None, dict(detail, meets=hb.meets))
        res.add("certified morphisms replay", f"{a}->{b}", all(replay(m, cx.fun) for m in hb.certified),
                detail)
    return res


def splitting_suite(cx: Context) -> SuiteResult:
    from .standard import (Motive, MotiveError, SplitFailure, derive_b_operators, lefschetz_split,
                           primitive_decompose, semisimple_split)
    from .graded import degree_projector
    res = SuiteResult("splitting")
    for name in sorted(cx.ws.motives):
        M = Motive(cx.ws, name, cx.fun)
        try:
            s = lefschetz_split(M)
        except MotiveError as e:
            res.add("lefschetz_split preconditions", name, None, _err(e))
            s = None
        if s is not None:
            bad = s.failures()
            res.add("projectors idempotent, orthogonal, sum to id", name, not bad, bad[:3])
            V = M.fun.space(M.X)
            agree = all(p == degree_projector(V, lambda d, i=i: d == (i,))
                        for i, p in enumerate(s.projectors()))
            res.add("fiber projectors are the degree projectors", name, agree)
            if M.ell is None:
                res.add("primitive decomposition", name, None, "no ell morphism supplied")
                continue
            try:
                prim = primitive_decompose(M, s)
                res.add("Σ_j dim L^j P^(i-2j) = dim H^i", name, all(prim.checks.values()),
                        {str(i): [list(p) for p in prim.pieces[i]] for i in sorted(prim.pieces)})
                b = derive_b_operators(M, s, prim)
                res.add("operator relations and replays", name, all(b.relations.values()),
                        sorted(k for k, v in b.relations.items() if not v))
            except MotiveError as e:
                res.add("primitive decomposition", name, False, _err(e))
        try:
            s2 = semisimple_split(M)
            same = s is None or s2.projectors() == s.projectors()
            res.add("semisimple_split agrees on fibers", name, same)
        except SplitFailure as e:
            res.add("semisimple_split reports its failure stage", name, bool(e.stage), _err(e))
        except MotiveError as e:
            res.add("semisimple_split preconditions", name, None, _err(e))
    return res


def _err(e) -> dict:
    out = {"message": str(e)}
    for k in ("level", "degree", "stage"):
        v = getattr(e, k, None)
        if v is not None:
            out[k] = v
    return out


def sign_twist_suite(cx: Context) -> SuiteResult:
    from .standard import Motive, MotiveError, lefschetz_split, pure_summands, sign_twist
    res = SuiteResult("sign-twist")
    pieces = []
    for name in sorted(cx.ws.motives):
        try:
            s = lefschetz_split(Motive(cx.ws, name, cx.fun))
        except MotiveError as e:
            res.add("purity data", name, None, _err(e))
            continue
        pieces.extend(pure_summands(s))
    # only motives whose object is itself a window entry take part
    objs = {X.term(0) for _, X in cx.complexes() if list(X.terms) == [0]}
    chosen = [p for p in pieces if p.base in objs]
    if not chosen:
        return res
    rep = sign_twist(chosen, cx.fun)
    for (a, b), checks in sorted(rep.pairs.items()):
        for k, v in checks.items():
            res.add(k, f"{a}⊗{b}", v)
    for (a, b), why in rep.skipped:
        res.add("tensor defined", f"{a}⊗{b}", None, why)
    for key, v in sorted(rep.triples.items()):
        res.add("hexagon", "⊗".join(key), v, None if v is not None else "triple tensor not listed")
    return res


def presentation_suite(cx: Context) -> SuiteResult:
    res = SuiteResult("presentation")
    r = validate_presentation(cx.ws.cat)
    res.add("category axioms", cx.ws.name, r.ok, {"checked": r.checked, "failures": r.failures[:5]})
    for fname in sorted(cx.ws.functors):
        f = cx.ws.functors[fname]
        r = validate_functor(cx.ws.cat, f)
        res.add("functor axioms", fname, r.ok, {"checked": r.checked, "failures": r.failures[:5]})
    try:
        cx.covers()
        res.add("cover set", cx.ws.name, True)
    except CertificateError as e:
        res.add("cover set", cx.ws.name, False, str(e))
    return res


SUITES: Dict[str, Callable[[Context], SuiteResult]] = {
    "kunneth": kunneth_suite,
    "sigma-exactness": sigma_suite,
    "faithful-exact": faithful_exact_suite,
    "semisimple-equivalence": semisimple_suite,
    "serre-kill": serre_kill_suite,
    "duality": duality_suite,
    "hom-bounds": hom_bounds_suite,
    "splitting": splitting_suite,
    "sign-twist": sign_twist_suite,
}
# the "all" selection skips the semisimple comparison, which only makes sense
# for datasets whose base category is semisimple
DEFAULT = ["kunneth", "sigma-exactness", "faithful-exact", "serre-kill", "duality", "hom-bounds",
           "splitting", "sign-twist"]


def run_suite(name: str, cx: Context) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise InputError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}") from None
    return fn(cx)
