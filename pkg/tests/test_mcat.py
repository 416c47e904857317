import json

import pytest
from hypothesis import given, settings, strategies as st

from graded_tannakian.category import hom_space
from graded_tannakian.complexes import ChainMap, homology_map, kb_hom, unit_complex
from graded_tannakian.documents import load
from graded_tannakian.fp import bracket, fiber, unit_fp
from graded_tannakian.linalg import row_space
from graded_tannakian.mcat import (CertificateError, CoverSet, Node, RoofMorphism,
                                   certificate_from_json, compose_roofs, m_hom_bounds,
                                   m_iso_test, replay, roof_to_morphism)

_WS = {}


def ws(name):
    if name not in _WS:
        _WS[name] = load(name)
    return _WS[name]


def window(w):
    return [w.complex(n) for n in w.window]


# roofs ---------------------------------------------------------------------------

def test_roof_with_identity_leg_is_the_plain_map():
    w = ws("curve")
    H = w.functor()
    f = w.chain_map("p_fund")
    m = roof_to_morphism(RoofMorphism(f, ChainMap.identity(f.tgt)), H)
    assert m.matrix.blocks == homology_map(f, H).blocks
    assert replay(m, H)


def test_roof_with_equal_legs_is_identity():
    u = ws("unipotent")
    H = u.functor()
    wmap = u.chain_map("collapse")
    m = roof_to_morphism(RoofMorphism(wmap, wmap), H)
    assert m.matrix.is_identity()


def test_roof_leg_must_be_h_iso():
    u = ws("unipotent")
    p = u.chain_map("p_map")
    with pytest.raises(CertificateError):
        RoofMorphism(ChainMap.identity(p.tgt), p, u.functor())


def test_unipotent_roof_is_not_induced_from_the_category():
    # oracle: enumerate H(g) for g in the homotopy hom and test membership
    u = ws("unipotent")
    H = u.functor()
    wmap = u.chain_map("collapse")
    one = unit_complex(u.cat)
    m = roof_to_morphism(RoofMorphism(ChainMap.identity(one), wmap), H)
    plain = [homology_map(g, H) for g in kb_hom(one, wmap.src).basis()]
    vecs = [tuple(x for b in p.blocks.values() for r in b.rows for x in r) for p in plain]
    target = tuple(x for b in m.matrix.blocks.values() for r in b.rows for x in r)
    span = len(row_space(vecs, len(target))[1]) if vecs else 0
    with_target = len(row_space(vecs + [target], len(target))[1])
    assert any(target)
    assert with_target == span + 1


def test_roof_composition_recertifies():
    u = ws("unipotent")
    H = u.functor()
    wmap = u.chain_map("collapse")
    one = unit_complex(u.cat)
    r1 = RoofMorphism(ChainMap.identity(one), wmap, H)          # [1] -> [cone_i]
    r2 = RoofMorphism(wmap, ChainMap.identity(one), H)          # [cone_i] -> [1]
    r = compose_roofs(r2, r1, H)
    m = roof_to_morphism(r, H)
    assert m.matrix.is_identity()


# certificates --------------------------------------------------------------------

def test_certificates_round_trip_through_json():
    u = ws("unipotent")
    H = u.functor()
    hb = m_hom_bounds(bracket(u.complex("unit")), bracket(u.complex("cone_i")), H,
                      CoverSet.from_workspace(u), 2, window(u))
    assert hb.certified
    for m in hb.certified:
        j = json.loads(json.dumps(m.cert.to_json()))
        again = certificate_from_json(u, j)
        assert again.matrix(H).blocks == m.matrix.blocks


def test_replay_detects_a_tampered_matrix():
    w = ws("curve")
    H = w.functor()
    X = bracket(w.complex("X"))
    hb = m_hom_bounds(X, X, H, CoverSet.from_workspace(w), 1)
    m = hb.certified[0]
    from dataclasses import replace
    bad = replace(m, matrix=m.matrix.scale(2))
    assert replay(m, H) and not replay(bad, H)


# hom bounds ------------------------------------------------------------------------

def test_rep_z2_bounds_meet_the_direct_hom():
    w = ws("rep-z2")
    H = w.functor()
    cv = CoverSet.from_workspace(w)
    for a in w.window:
        for b in w.window:
            X, Y = w.complex(a), w.complex(b)
            hb = m_hom_bounds(bracket(X), bracket(Y), H, cv, 2, window(w))
            direct = hom_space(w.cat, X.term(0), Y.term(0))[1]
            assert hb.certified_dim == hb.probe_dim == direct, (a, b)
            assert all(replay(m, H) for m in hb.certified)


def test_null_target_has_zero_bounds():
    w = ws("curve")
    H = w.functor()
    from graded_tannakian.complexes import cone
    C, _ = cone(ChainMap.identity(w.complex("X")))
    hb = m_hom_bounds(bracket(w.complex("X")), bracket(C), H, CoverSet.from_workspace(w), 2)
    assert hb.certified_dim == hb.ambient_dim == 0


def test_unit_endomorphisms():
    for name in ("point", "curve", "unipotent"):
        w = ws(name)
        H = w.functor()
        one = unit_fp(w.cat)
        hb = m_hom_bounds(one, one, H, CoverSet.from_workspace(w), 2, window(w))
        assert fiber(one, H).total_dim == 1
        assert hb.certified_dim >= 1
        assert all(m_iso_test(m, H) for m in hb.certified)


def test_unipotent_bounds_meet():
    u = ws("unipotent")
    H = u.functor()
    cv = CoverSet.from_workspace(u)
    for a in u.window:
        for b in u.window:
            hb = m_hom_bounds(bracket(u.complex(a)), bracket(u.complex(b)), H, cv, 2, window(u))
            assert hb.meets, (a, b)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["X", "cone_point", "two_term"]), st.sampled_from(["X", "cone_point", "two_term"]))
def test_certified_inside_probe_bound(a, b):
    w = ws("curve")
    H = w.functor()
    hb = m_hom_bounds(bracket(w.complex(a)), bracket(w.complex(b)), H, CoverSet.from_workspace(w), 1)
    assert hb.certified_dim <= hb.probe_dim <= hb.ambient_dim
    for m in hb.certified:
        assert replay(m, H)


def test_cover_set_checks_its_members():
    u = ws("unipotent")
    with pytest.raises(CertificateError):
        CoverSet([u.chain_map("i_map")], []).check(u.functor())
    with pytest.raises(CertificateError):
        CoverSet([], [u.chain_map("p_map")]).check(u.functor())


def test_tensor_certificate():
    w = ws("curve")
    H = w.functor()
    X = bracket(w.complex("X"))
    hb = m_hom_bounds(X, X, H, CoverSet.from_workspace(w), 1)
    a, b = hb.certified[0], hb.certified[-1]
    node = Node("tensor", [a.cert, b.cert])
    m = node.matrix(H)
    assert m.source == fiber(node.src, H)
    assert m.rank() == a.matrix.rank() * b.matrix.rank()
