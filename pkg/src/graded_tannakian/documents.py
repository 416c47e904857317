"""JSON documents describing a presentation, its functors and named data.

Scalars are written as strings (``"3/2"``) or integers; degree keys are
``"2"`` for Z and ``"0,2"`` for Z×Z.  Pair keys use ``"x|y"``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict

from .category import (Mor, PresentationError, TableCategory, TableFunctor, as_obj,
                       coevaluation, evaluation, hom_basis, symmetry)
from .complexes import (BoundedComplex, ChainMap, ComplexError, chain_map_from_mor, cone,
                        direct_sum, dual_chain_map, dual_complex, shift, shift_map, single,
                        tensor_chain_maps, tensor_complex, unit_complex)
from .graded import GradedMap, GradedSpace, Z, ZZ, tensor_graded, unit_space
from .linalg import QMatrix
from .models import (ConjugatedFunctor, Letter, ModelCategory, ModelFunctor,
                     WeightGradedFunctor, contragredient)

FORMAT = 1


class InputError(ValueError):
    """Malformed or inconsistent document."""


# scalars, degrees, matrices ----------------------------------------------------

def fmt(x) -> Any:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def scalar(s) -> Fraction:
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {s!r}") from None


def degree_key(d) -> str:
    return ",".join(str(v) for v in d)


def parse_degree(key, rank=1) -> tuple:
    if isinstance(key, int):
        d = (key,)
    else:
        try:
            d = tuple(int(v) for v in str(key).split(","))
        except ValueError:
            raise InputError(f"bad degree {key!r}") from None
    if len(d) != rank:
        raise InputError(f"degree {key!r} should have {rank} component(s)")
    return d


def matrix(rows, ncols=None) -> QMatrix:
    try:
        rows = [[scalar(v) for v in r] for r in rows]
        return QMatrix(rows, ncols if ncols is not None else (len(rows[0]) if rows else 0))
    except (TypeError, ValueError) as e:
        raise InputError(f"bad matrix: {e}") from None


def matrix_json(m: QMatrix):
    return [[fmt(v) for v in r] for r in m.rows]


def vector(v):
    return tuple(scalar(x) for x in v)


def space(dims: Dict, rank=1) -> GradedSpace:
    conv = Z if rank == 1 else ZZ
    return GradedSpace({parse_degree(k, rank): int(n) for k, n in dims.items()}, conv)


def space_json(sp: GradedSpace):
    return {degree_key(d): n for d, n in sp.dims.items()}


def graded_blocks(spec: Dict, source: GradedSpace, target: GradedSpace) -> GradedMap:
    rank = source.convention.rank
    blocks = {}
    for k, rows in spec.items():
        d = parse_degree(k, rank)
        blocks[d] = matrix(rows, source.dim(d))
    try:
        return GradedMap(source, target, blocks)
    except ValueError as e:
        raise InputError(str(e)) from None


def graded_map_json(m: GradedMap):
    return {degree_key(d): matrix_json(b) for d, b in m.blocks.items()}


def blocks_json(blocks):
    return [[[fmt(v) for v in vec] for vec in row] for row in blocks]


def mor_json(m: Mor):
    return {"src": list(m.src), "tgt": list(m.tgt), "blocks": blocks_json(m.blocks)}


def complex_json(X: BoundedComplex):
    return {"terms": {str(n): list(t) for n, t in X.terms.items()},
            "differentials": {str(n): mor_json(d) for n, d in X.diffs.items()}}


def chain_map_json(f: ChainMap):
    return {"src": complex_json(f.src), "tgt": complex_json(f.tgt),
            "components": {str(n): mor_json(m) for n, m in f.comps.items()}}


def parse_blocks(rows):
    return tuple(tuple(vector(v) for v in row) for row in rows)


def _pair(key: str, n=2):
    parts = key.split("|")
    if len(parts) != n:
        raise InputError(f"key {key!r} should have {n} parts")
    return tuple(parts)


# categories --------------------------------------------------------------------

def build_category(spec: Dict, name=""):
    kind = spec.get("kind")
    if kind == "tables":
        return _table_category(spec, name)
    if kind == "model":
        return _model_category(spec, name)
    raise InputError(f"unknown category kind {kind!r}")


def _table_category(spec, name):
    try:
        hom = {_pair(k): v for k, v in spec["hom"].items()}
        compose = {_pair(k, 3): [[vector(v) for v in row] for row in tab]
                   for k, tab in spec.get("compose", {}).items()}
        tobj = {_pair(k): v for k, v in spec["tensor_objects"].items()}
        tmor = {_pair(k, 4): [[parse_blocks(b) for b in row] for row in tab]
                for k, tab in spec.get("tensor_morphisms", {}).items()}
        sym = {_pair(k): parse_blocks(v) for k, v in spec.get("symmetry", {}).items()}
        duals = {x: (d["dual"], parse_blocks(d["ev"]), parse_blocks(d["coev"]))
                 for x, d in spec.get("duals", {}).items()}
        transpose = {_pair(k): [vector(v) for v in vs] for k, vs in spec.get("transpose", {}).items()}
        return TableCategory(spec["objects"], spec["unit"], hom, spec["identity"], compose, tobj,
                             tmor, sym, duals, transpose, name=name)
    except KeyError as e:
        raise InputError(f"table presentation is missing {e}") from None


def _model_category(spec, name):
    ngens = int(spec.get("generators", 0))
    raw = spec["letters"]
    letters = {}
    pending = dict(raw)
    while pending:
        progress = False
        for lname, ls in list(pending.items()):
            if "contragredient_of" in ls:
                base = ls["contragredient_of"]
                if base not in letters:
                    if base not in raw:
                        raise InputError(f"letter {lname} dualizes unknown letter {base}")
                    continue
                letters[lname] = contragredient(letters[base], lname)
            else:
                sp = space(ls["dims"])
                acts = []
                for a in ls.get("actions", []):
                    if "total" in a:
                        acts.append(matrix(a["total"], sp.total_dim))
                    else:
                        blocks = {d: QMatrix.identity(n) for d, n in sp.dims.items()}
                        blocks.update(graded_blocks(a, sp, sp).blocks)
                        acts.append(GradedMap(sp, sp, blocks))
                w = ls.get("weights")
                if w is not None:
                    w = {parse_degree(k): v for k, v in w.items()}
                letters[lname] = Letter(lname, sp, acts, dual=ls.get("dual"), weights=w)
            del pending[lname]
            progress = True
        if not progress:
            raise InputError("cyclic contragredient letters")
    return ModelCategory(letters, spec["objects"], ngens, name=name)


def build_functor(cat, spec: Dict, functors: Dict, name=""):
    kind = spec.get("kind")
    if kind == "model":
        return ModelFunctor(cat, name=name)
    if kind == "weight-graded":
        return WeightGradedFunctor(cat, name=name)
    if kind == "conjugated":
        base = functors.get(spec["base"])
        if base is None:
            raise InputError(f"conjugated functor {name} has unknown base {spec['base']}")
        twists = {}
        for x, blocks in spec.get("twists", {}).items():
            sp = base.space_base(x)
            full = {d: QMatrix.identity(n) for d, n in sp.dims.items()}
            full.update(graded_blocks(blocks, sp, sp).blocks)
            t = GradedMap(sp, sp, full)
            if not t.is_iso():
                raise InputError(f"twist on {x} is not invertible")
            twists[x] = t
        return ConjugatedFunctor(base, twists, name=name)
    if kind == "tables":
        rank = int(spec.get("rank", 1))
        spaces = {x: space(d, rank) for x, d in spec["spaces"].items()}
        maps = {}
        for k, lst in spec.get("maps", {}).items():
            x, y = _pair(k)
            maps[(x, y)] = [graded_blocks(b, spaces[x], spaces[y]) for b in lst]
        mu = {}
        for k, b in spec.get("mu", {}).items():
            x, y = _pair(k)
            t = cat.tensor_base(x, y)
            if len(t) != 1:
                raise InputError(f"mu for {k} needs a single tensor object")
            mu[(x, y)] = graded_blocks(b, tensor_graded(spaces[x], spaces[y]), spaces[t[0]])
        unit = None
        if "unit_iso" in spec:
            u = spaces[cat.unit]
            unit = graded_blocks(spec["unit_iso"], unit_space(u.convention), u)
        probes = []
        for p in spec.get("probes", []):
            probes.append({x: graded_blocks(b, spaces[x], spaces[x]) for x, b in p.items()})
        return TableFunctor(cat, spaces, maps, mu, unit, probes, name=name)
    raise InputError(f"unknown functor kind {kind!r}")


# workspace ----------------------------------------------------------------------

class Workspace:
    """A loaded document with its named data resolved lazily."""

    def __init__(self, doc: Dict, name=""):
        if doc.get("format") != FORMAT:
            raise InputError(f"unsupported document format {doc.get('format')!r}")
        self.doc = doc
        self.name = doc.get("name", name)
        try:
            self.cat = build_category(doc["category"], self.name)
        except PresentationError as e:
            raise InputError(str(e)) from None
        self.functors = {}
        for fname, fs in doc.get("functors", {"H": {"kind": "model"}}).items():
            self.functors[fname] = build_functor(self.cat, fs, self.functors, fname)
        self.default_functor = doc.get("default_functor", next(iter(self.functors)))
        self._mor, self._cx, self._cm = {}, {}, {}
        self.window = list(doc.get("window", []))
        self.motives = doc.get("motives", {})
        self.covers = doc.get("covers", {})
        self.pushforwards = doc.get("pushforwards", {})

    def functor(self, name=None):
        name = name or self.default_functor
        try:
            return self.functors[name]
        except KeyError:
            raise InputError(f"unknown functor {name!r}") from None

    # morphisms in the additive closure
    def morphism(self, spec) -> Mor:
        cat = self.cat
        if isinstance(spec, str):
            if spec not in self._mor:
                raw = self.doc.get("morphisms", {}).get(spec)
                if raw is None:
                    raise InputError(f"unknown morphism {spec!r}")
                self._mor[spec] = self.morphism(raw)
            return self._mor[spec]
        if not isinstance(spec, dict) or len(spec) == 0:
            raise InputError(f"bad morphism spec {spec!r}")
        try:
            if "identity" in spec:
                return Mor.identity(cat, as_obj(spec["identity"]))
            if "zero" in spec:
                s, t = spec["zero"]
                return Mor.zero(cat, as_obj(s), as_obj(t))
            if "compose" in spec:
                parts = [self.morphism(p) for p in spec["compose"]]
                out = parts[-1]
                for g in reversed(parts[:-1]):
                    out = g @ out
                return out
            if "sum" in spec:
                parts = [self.morphism(p) for p in spec["sum"]]
                out = parts[0]
                for p in parts[1:]:
                    out = out + p
                return out
            if "scale" in spec:
                c, f = spec["scale"]
                return self.morphism(f).scale(scalar(c))
            if "tensor" in spec:
                f, g = spec["tensor"]
                return self.morphism(f).tensor(self.morphism(g))
            if "dual" in spec:
                return self.morphism(spec["dual"]).dual()
            if "ev" in spec:
                return evaluation(cat, as_obj(spec["ev"]))
            if "coev" in spec:
                return coevaluation(cat, as_obj(spec["coev"]))
            if "symmetry" in spec:
                X, Y = spec["symmetry"]
                return symmetry(cat, as_obj(X), as_obj(Y))
            if "basis" in spec:
                x, y, a = spec["basis"]
                return hom_basis(cat, as_obj(x), as_obj(y))[int(a)]
            src, tgt = as_obj(spec["src"]), as_obj(spec["tgt"])
            if "blocks" in spec:
                return Mor(cat, src, tgt, parse_blocks(spec["blocks"]))
            if "map" in spec:
                if not isinstance(cat, ModelCategory) or len(src) != 1 or len(tgt) != 1:
                    raise InputError("graded 'map' morphisms need a model presentation")
                g = graded_blocks(spec["map"], cat.model(src[0]), cat.model(tgt[0]))
                return Mor(cat, src, tgt, ((cat.coords(src[0], tgt[0], g),),))
        except (PresentationError, ValueError, KeyError, TypeError) as e:
            if isinstance(e, InputError):
                raise
            raise InputError(f"bad morphism spec {spec!r}: {e}") from None
        raise InputError(f"bad morphism spec {spec!r}")

    # complexes
    def complex(self, spec, name: str = "") -> BoundedComplex:
        if isinstance(spec, str):
            if spec not in self._cx:
                raw = self.doc.get("complexes", {}).get(spec)
                if raw is None:
                    if spec in self.cat._object_set():
                        raw = {"object": spec}
                    else:
                        raise InputError(f"unknown complex {spec!r}")
                self._cx[spec] = self.complex(raw, spec)
            return self._cx[spec]
        try:
            if "object" in spec:
                return single(self.cat, as_obj(spec["object"]), int(spec.get("degree", 0)))
            if "unit" in spec:
                return unit_complex(self.cat)
            if "terms" in spec:
                terms = {int(n): as_obj(o) for n, o in spec["terms"].items()}
                diffs = {int(n): self.morphism(m) for n, m in spec.get("differentials", {}).items()}
                return BoundedComplex(self.cat, terms, diffs, name=name)
            if "cone" in spec:
                return cone(self.chain_map(spec["cone"]))[0]
            if "shift" in spec:
                x, k = spec["shift"]
                return shift(self.complex(x), int(k))
            if "tensor" in spec:
                a, b = spec["tensor"]
                return tensor_complex(self.complex(a), self.complex(b))
            if "dual" in spec:
                return dual_complex(self.complex(spec["dual"]))
            if "sum" in spec:
                return direct_sum(self.cat, [self.complex(c) for c in spec["sum"]])
        except (PresentationError, ComplexError) as e:
            raise InputError(f"bad complex {name or spec!r}: {e}") from None
        raise InputError(f"bad complex spec {spec!r}")

    def chain_map(self, spec) -> ChainMap:
        if isinstance(spec, str):
            if spec not in self._cm:
                raw = self.doc.get("chain_maps", {}).get(spec)
                if raw is None:
                    if spec in self.doc.get("morphisms", {}):
                        raw = {"mor": spec}
                    else:
                        raise InputError(f"unknown chain map {spec!r}")
                self._cm[spec] = self.chain_map(raw)
            return self._cm[spec]
        try:
            if "mor" in spec:
                return chain_map_from_mor(self.morphism(spec["mor"]), int(spec.get("degree", 0)))
            if "identity" in spec:
                return ChainMap.identity(self.complex(spec["identity"]))
            if "compose" in spec:
                parts = [self.chain_map(p) for p in spec["compose"]]
                out = parts[-1]
                for g in reversed(parts[:-1]):
                    out = g @ out
                return out
            if "sum" in spec:
                parts = [self.chain_map(p) for p in spec["sum"]]
                out = parts[0]
                for p in parts[1:]:
                    out = out + p
                return out
            if "tensor" in spec:
                f, g = spec["tensor"]
                return tensor_chain_maps(self.chain_map(f), self.chain_map(g))
            if "shift" in spec:
                f, k = spec["shift"]
                return shift_map(self.chain_map(f), int(k))
            if "dual" in spec:
                return dual_chain_map(self.chain_map(spec["dual"]))
            if "cone_inclusion" in spec:
                return cone(self.chain_map(spec["cone_inclusion"]))[1].incl
            if "cone_projection" in spec:
                return cone(self.chain_map(spec["cone_projection"]))[1].proj
            if "components" in spec:
                src, tgt = self.complex(spec["src"]), self.complex(spec["tgt"])
                comps = {int(n): self.morphism(m) for n, m in spec["components"].items()}
                return ChainMap(src, tgt, comps)
        except (PresentationError, ComplexError) as e:
            raise InputError(f"bad chain map {spec!r}: {e}") from None
        raise InputError(f"bad chain map spec {spec!r}")


def dataset_names():
    root = resources.files(__package__) / "datasets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_document(source) -> Dict:
    """Load a document from a path or a bundled dataset name."""
    if isinstance(source, dict):
        return source
    p = Path(source)
    try:
        if p.suffix == ".json" or p.exists():
            text = p.read_text()
        else:
            res = resources.files(__package__) / "datasets" / f"{source}.json"
            if not res.is_file():
                raise InputError(f"no such document or dataset: {source}")
            text = res.read_text()
    except OSError as e:
        raise InputError(str(e)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON in {source}: {e}") from None


def load(source) -> Workspace:
    doc = read_document(source)
    return Workspace(doc, name=str(source) if not isinstance(source, dict) else "")
