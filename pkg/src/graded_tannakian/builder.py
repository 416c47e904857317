"""Generate the bundled JSON datasets.

Run ``python3 -m graded_tannakian.builder`` to rewrite ``datasets/``.  The
output is deterministic, and the test suite checks the bundled files match.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

from .documents import FORMAT

DATASET_DIR = Path(__file__).parent / "datasets"

J1 = [[1, 1], [0, 1]]
J2 = [[1, 0], [1, 1]]
OMEGA = [[0, 1], [-1, 0]]
I2 = [[1, 0], [0, 1]]


# invertible-object presentations ------------------------------------------------

def line_tables(elements, unit, mult, sign, degree, character=None):
    """Tables and functor for a presentation whose base objects are invertible
    with one-dimensional endomorphisms (a pointed category).

    ``mult(g, h)`` returns the label of g⊗h or None when it is not listed;
    ``sign(g, h)`` is the scalar of the symmetry; ``degree(g)`` the fiber
    degree; ``character(g)`` an optional probe eigenvalue."""
    one = [[[1]]]
    hom, ident, compose, tobj, tmor, sym, duals, transpose = {}, {}, {}, {}, {}, {}, {}, {}
    inverse = {}
    for g in elements:
        hom[f"{g}|{g}"] = ["id"]
        ident[g] = [1]
        compose[f"{g}|{g}|{g}"] = [[[1]]]
        transpose[f"{g}|{g}"] = [[1]]
        for h in elements:
            if mult(g, h) == unit:
                inverse[g] = h
    for g in elements:
        for h in elements:
            gh = mult(g, h)
            if gh is None:
                continue
            tobj[f"{g}|{h}"] = [gh]
            tmor[f"{g}|{g}|{h}|{h}"] = [[one]]
            if mult(h, g) is not None:
                sym[f"{g}|{h}"] = [[[sign(g, h)]]]
    for g in elements:
        h = inverse.get(g)
        if h is not None and f"{h}|{g}" in tobj and f"{g}|{h}" in tobj:
            duals[g] = {"dual": h, "ev": one, "coev": one}
    cat = {"kind": "tables", "objects": list(elements), "unit": unit, "hom": hom,
           "identity": ident, "compose": compose, "tensor_objects": tobj,
           "tensor_morphisms": tmor, "symmetry": sym, "duals": duals, "transpose": transpose}
    fun = {"kind": "tables",
           "spaces": {g: {str(degree(g)): 1} for g in elements},
           "maps": {f"{g}|{g}": [{str(degree(g)): [[1]]}] for g in elements},
           "mu": {k: {str(degree(v[0])): [[1]]} for k, v in tobj.items()}}
    if character is not None:
        fun["probes"] = [{g: {str(degree(g)): [[character(g)]]} for g in elements}]
    return cat, fun


def point():
    cat, fun = line_tables(["1"], "1", lambda g, h: "1", lambda g, h: 1, lambda g: 0)
    return {"format": FORMAT, "name": "point", "category": cat, "functors": {"H": fun},
            "complexes": {"unit": {"object": "1"}},
            "window": ["unit"],
            "motives": {"point": {"object": "1", "dim": 0}},
            "pushforwards": {
                "identity": {"target": "point", "target_functor": "H",
                             "objects": {"1": ["1"]},
                             "morphisms": {"1|1": [{"identity": "1"}]},
                             "iso": {"1": {"0": [[1]]}}},
                "into-rep-z2": {"target": "rep-z2", "target_functor": "H",
                                "objects": {"1": ["1"]},
                                "morphisms": {"1|1": [{"identity": "1"}]},
                                "iso": {"1": {"0": [[1]]}}}}}


def graded_line(bound=2):
    labels = {a: ("1" if a == 0 else f"L{a}") for a in range(-bound, bound + 1)}
    back = {v: k for k, v in labels.items()}
    els = [labels[a] for a in range(-bound, bound + 1)]

    def mult(g, h):
        s = back[g] + back[h]
        return labels.get(s)

    cat, fun = line_tables(els, "1", mult, lambda g, h: 1, lambda g: 2 * back[g])
    rescaled = {"kind": "conjugated", "base": "H", "twists": {"L1": {"2": [[2]]}, "L-1": {"-2": [["1/2"]]},
                                                               "L2": {"4": [[4]]}, "L-2": {"-4": [["1/4"]]}}}
    return {"format": FORMAT, "name": "graded-line", "category": cat,
            "functors": {"H": fun, "H_rescaled": rescaled},
            "complexes": {"L": {"object": "L1"}, "Lm": {"object": "L-1"},
                          "LL": {"tensor": ["L", "L"]}},
            "window": ["L", "Lm", "LL"]}


def rep_z2():
    els = ["1", "s"]

    def mult(g, h):
        return "1" if g == h else "s"

    cat, fun = line_tables(els, "1", mult, lambda g, h: 1, lambda g: 0,
                           character=lambda g: -1 if g == "s" else 1)
    return {"format": FORMAT, "name": "rep-z2", "category": cat, "functors": {"H": fun},
            "complexes": {"s": {"object": "s"}, "ss": {"tensor": ["s", "s"]},
                          "sum": {"object": ["1", "s"]}},
            "window": ["s", "ss", "sum"],
            "pushforwards": {
                "identity": {"target": "rep-z2", "target_functor": "H",
                             "objects": {"1": ["1"], "s": ["s"]},
                             "morphisms": {"1|1": [{"identity": "1"}], "s|s": [{"identity": "s"}]},
                             "iso": {"1": {"0": [[1]]}, "s": {"0": [[1]]}}},
                "to-z2-graded": {"target": z2_graded(), "target_functor": "H",
                                 "objects": {"1": ["even"], "s": ["odd"]},
                                 "morphisms": {"1|1": [{"identity": "even"}],
                                               "s|s": [{"identity": "odd"}]},
                                 "iso": {"1": {"0": [[1]]}, "s": {"0": [[1]]}}}}}


def z2_graded():
    els = ["even", "odd"]

    def mult(g, h):
        return "even" if g == h else "odd"

    cat, fun = line_tables(els, "even", mult, lambda g, h: 1, lambda g: 0)
    return {"format": FORMAT, "name": "z2-graded", "category": cat, "functors": {"H": fun}}


# models ------------------------------------------------------------------------

def _curve_letters(name, dual):
    return {name: {"dims": {"0": 1, "1": 2, "2": 1}, "actions": [{"1": J1}, {"1": J2}], "dual": dual},
            dual: {"contragredient_of": name}}


def _tate_letters():
    return {"L": {"dims": {"2": 1}, "actions": [{}, {}], "dual": "Lm"},
            "Lm": {"contragredient_of": "L"}}


def curve():
    letters = {**_curve_letters("C", "Cd"), **_curve_letters("E", "Ed"), **_tate_letters()}
    objects = ["C", "Cd", "E", "Ed", "L", "Lm", "C.C", "C.Cd", "Cd.C", "C.Lm", "C.Lm.L", "C.L",
               "L.C", "L.L", "L.Lm", "Lm.L", "Lm.Lm", "Cd.L", "Cd.E", "E.Cd", "C.E", "E.C",
               "C.Cd.C", "Cd.C.Cd", "C.C.C"]
    mors = {
        "pi0": {"src": "C", "tgt": "C", "map": {"0": [[1]]}},
        "pi1": {"src": "C", "tgt": "C", "map": {"1": I2}},
        "pi2": {"src": "C", "tgt": "C", "map": {"2": [[1]]}},
        "e_pi0": {"src": "E", "tgt": "E", "map": {"0": [[1]]}},
        "e_pi1": {"src": "E", "tgt": "E", "map": {"1": I2}},
        "e_pi2": {"src": "E", "tgt": "E", "map": {"2": [[1]]}},
        "ell": {"src": "C", "tgt": "C.Lm", "map": {"0": [[1]]}},
        "D": {"src": "Cd", "tgt": "C.Lm", "map": {"0": [[1]], "-1": OMEGA, "-2": [[1]]}},
        "untwist": {"src": "C.Lm.L", "tgt": "C", "map": {"0": [[1]], "1": I2, "2": [[1]]}},
        "iso_CE": {"src": "C", "tgt": "E", "map": {"0": [[1]], "1": I2, "2": [[1]]}},
        "point": {"src": "1", "tgt": "C", "map": {"0": [[1]]}},
        "fundamental": {"src": "C", "tgt": "1", "map": {"0": [[1]]}},
        "trace": {"src": "C.Lm", "tgt": "1", "map": {"0": [[1]]}},
    }
    functors = {
        "H": {"kind": "model"},
        "H_twisted": {"kind": "conjugated", "base": "H",
                      "twists": {"C": {"1": [[1, 1], [0, 1]]}}},
    }
    complexes = {
        "X": {"object": "C"},
        "XX": {"tensor": ["X", "X"]},
        "Xd": {"dual": "X"},
        "cone_point": {"cone": {"mor": "point"}},
        "cone_ell": {"cone": {"mor": "ell"}},
        "shifted": {"shift": ["X", 1]},
        "two_term": {"terms": {"0": "1", "1": "C"}, "differentials": {"1": "fundamental"}},
    }
    motive = {"object": "C", "dim": 1, "lefschetz": "L", "ell": "ell", "duality": "D",
              "untwist": {"1": "untwist"}, "splitting": ["pi0", "pi1", "pi2"]}
    return {"format": FORMAT, "name": "curve",
            "category": {"kind": "model", "generators": 2, "letters": letters, "objects": objects},
            "functors": functors, "default_functor": "H", "morphisms": mors,
            "complexes": complexes,
            "chain_maps": {"p_fund": {"mor": "fundamental"}},
            "covers": {"epis": ["p_fund"]},
            "window": ["X", "XX", "cone_point", "shifted", "two_term"],
            "motives": {"curve": motive,
                        "curve_E": {"object": "E", "dim": 1, "lefschetz": "L",
                                    "splitting": ["e_pi0", "e_pi1", "e_pi2"]}}}


def surface():
    letters = {
        "S": {"dims": {"0": 1, "1": 2, "2": 2, "3": 2, "4": 1},
              "actions": [{"1": J1, "3": J1}, {"1": J2, "3": J2}], "dual": "Sd"},
        "Sd": {"contragredient_of": "S"},
        **_curve_letters("C", "Cd"), **_tate_letters()}
    objects = ["S", "Sd", "C", "Cd", "L", "Lm", "L.L", "L.Lm", "Lm.L", "Lm.Lm",
               "S.Lm", "S.Lm.Lm", "S.Lm.Lm.Lm", "S.Lm.L", "S.Lm.Lm.L", "S.Lm.Lm.L.L",
               "Sd.L", "Sd.L.L", "Sd.S", "S.Sd",
               "C.Lm", "C.Lm.L", "Cd.L", "C.C", "Cd.C", "C.Cd", "S.S"]
    mors = {
        "ell": {"src": "S", "tgt": "S.Lm", "map": {"0": [[1], [0]], "1": I2, "2": [[1, 0]]}},
        "D": {"src": "Sd", "tgt": "S.Lm.Lm",
              "map": {"0": [[1]], "-1": OMEGA, "-2": I2, "-3": OMEGA, "-4": [[1]]}},
        "untwist1": {"src": "S.Lm.L", "tgt": "S",
                     "map": {"0": [[1]], "1": I2, "2": I2, "3": I2, "4": [[1]]}},
        "untwist2": {"src": "S.Lm.Lm.L.L", "tgt": "S",
                     "map": {"0": [[1]], "1": I2, "2": I2, "3": I2, "4": [[1]]}},
        "untwist21": {"src": "S.Lm.Lm.L", "tgt": "S.Lm",
                      "map": {"-2": [[1]], "-1": I2, "0": I2, "1": I2, "2": [[1]]}},
        "restrict": {"src": "S", "tgt": "C", "map": {"0": [[1]], "1": I2, "2": [[1, 0]]}},
        "nu0": {"src": "S.Lm.Lm", "tgt": "S", "map": {"0": [[1]]}},
        "nu1": {"src": "S.Lm", "tgt": "S", "map": {"1": I2}},
        "c_ell": {"src": "C", "tgt": "C.Lm", "map": {"0": [[1]]}},
        "c_D": {"src": "Cd", "tgt": "C.Lm", "map": {"0": [[1]], "-1": OMEGA, "-2": [[1]]}},
        "c_untwist": {"src": "C.Lm.L", "tgt": "C", "map": {"0": [[1]], "1": I2, "2": [[1]]}},
        "c_pi0": {"src": "C", "tgt": "C", "map": {"0": [[1]]}},
        "c_pi1": {"src": "C", "tgt": "C", "map": {"1": I2}},
        "c_pi2": {"src": "C", "tgt": "C", "map": {"2": [[1]]}},
    }
    curve_m = {"object": "C", "dim": 1, "lefschetz": "L", "ell": "c_ell", "duality": "c_D",
               "untwist": {"1": "c_untwist"}, "splitting": ["c_pi0", "c_pi1", "c_pi2"]}
    surf = {"object": "S", "dim": 2, "lefschetz": "L", "ell": "ell", "duality": "D",
            "untwist": {"1": "untwist1", "2": "untwist2", "2,1": "untwist21"},
            "hyperplane": {"motive": "curve", "restriction": "restrict"},
            "nu": ["nu0", "nu1"]}
    return {"format": FORMAT, "name": "surface",
            "category": {"kind": "model", "generators": 2, "letters": letters, "objects": objects},
            "functors": {"H": {"kind": "model"}}, "morphisms": mors,
            "complexes": {"X": {"object": "S"}, "Y": {"object": "C"}},
            "window": ["X", "Y"],
            "motives": {"surface": surf, "curve": curve_m}}


def unipotent():
    letters = {
        "V": {"dims": {"0": 2}, "actions": [{"0": J1}], "dual": "Vd", "weights": {"0": [-1, 1]}},
        "Vd": {"contragredient_of": "V"},
    }
    objects = ["V", "Vd", "V.V", "V.Vd", "Vd.V"]
    mors = {
        "i": {"src": "1", "tgt": "V", "map": {"0": [[1], [0]]}},
        "p": {"src": "V", "tgt": "1", "map": {"0": [[0, 1]]}},
        "n": {"src": "V", "tgt": "V", "map": {"0": [[0, 1], [0, 0]]}},
    }
    functors = {"H": {"kind": "model"}, "H_weight": {"kind": "weight-graded"},
                "H_twisted": {"kind": "conjugated", "base": "H", "twists": {"V": {"0": [[1, 1], [0, 1]]}}}}
    return {"format": FORMAT, "name": "unipotent",
            "category": {"kind": "model", "generators": 1, "letters": letters, "objects": objects},
            "functors": functors, "morphisms": mors,
            "complexes": {"V": {"object": "V"}, "unit": {"unit": True},
                          "cone_i": {"cone": {"mor": "i"}}, "cone_p": {"cone": {"mor": "p"}}},
            "chain_maps": {"p_map": {"mor": "p"}, "i_map": {"mor": "i"},
                           "collapse": {"src": "cone_i", "tgt": "unit", "components": {"0": "p"}}},
            "covers": {"epis": ["p_map"], "isos": ["collapse"]},
            "window": ["V", "unit", "cone_i", "cone_p"]}


def unipotent_motive():
    letters = {
        "E": {"dims": {"0": 1, "2": 1}, "actions": [{"total": [[1, 0], [1, 1]]}], "dual": "Ed"},
        "Ed": {"contragredient_of": "E"},
        "L": {"dims": {"2": 1}, "actions": [{}], "dual": "Lm"},
        "Lm": {"contragredient_of": "L"},
    }
    objects = ["E", "Ed", "L", "Lm", "E.Lm", "E.Lm.L", "Ed.E", "E.Ed", "L.Lm", "Lm.L", "Ed.L",
               "E.E", "Lm.Lm", "L.L"]
    mors = {
        "ell": {"src": "E", "tgt": "E.Lm", "map": {"0": [[1]]}},
        "D": {"src": "Ed", "tgt": "E.Lm", "map": {"0": [[1]], "-2": [[-1]]}},
        "untwist": {"src": "E.Lm.L", "tgt": "E", "map": {"0": [[1]], "2": [[1]]}},
        "augment": {"src": "E", "tgt": "1", "map": {"0": [[1]]}},
    }
    motive = {"object": "E", "dim": 1, "lefschetz": "L", "ell": "ell", "duality": "D",
              "untwist": {"1": "untwist"}}
    return {"format": FORMAT, "name": "unipotent-motive",
            "category": {"kind": "model", "generators": 1, "letters": letters, "objects": objects},
            "functors": {"H": {"kind": "model"}}, "morphisms": mors,
            "complexes": {"X": {"object": "E"}},
            "chain_maps": {"aug": {"mor": "augment"}},
            "window": ["X"],
            "motives": {"extension": motive}}


BUILDERS = {
    "point": point,
    "graded-line": graded_line,
    "rep-z2": rep_z2,
    "z2-graded": z2_graded,
    "curve": curve,
    "surface": surface,
    "unipotent": unipotent,
    "unipotent-motive": unipotent_motive,
}


def render(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def main(argv=None):
    out = Path(argv[0]) if argv else DATASET_DIR
    out.mkdir(parents=True, exist_ok=True)
    for name, fn in BUILDERS.items():
        (out / f"{name}.json").write_text(render(fn()))
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main(sys.argv[1:])
