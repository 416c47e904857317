"""Command-line front end: ``gtann <verb> DOCUMENT ...``.

Exit status is 0 when every checked statement holds, 1 on a mathematical
failure and 2 on malformed input.  ``--format machine`` prints canonical JSON
with a SHA-256 hash over the rest of the report.
"""
from __future__ import annotations

import hashlib
import json
import sys
import time
from typing import Dict, List, Optional

import click

from . import checks
from .category import PresentationError
from .complexes import ComplexError
from .documents import (FORMAT, InputError, Workspace, degree_key, graded_blocks, graded_map_json,
                        load, mor_json, read_document)
from .fp import FpError, bracket, fiber
from .mcat import CertificateError, CoverSet, certificate_from_json, m_hom_bounds, replay

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
_T0 = [time.perf_counter()]


# reports --------------------------------------------------------------------------

def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def finish(report: Dict) -> Dict:
    body = {k: v for k, v in report.items() if k != "hash"}
    report["hash"] = hashlib.sha256(canonical(body).encode()).hexdigest()
    return report


class Out:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: List[str] = []
        self.start = _T0[0]

    def line(self, s=""):
        self.lines.append(s)

    def table(self, header, rows):
        rows = [[str(c) for c in r] for r in rows]
        widths = [max(len(str(h)), *(len(r[i]) for r in rows)) if rows else len(str(h))
                  for i, h in enumerate(header)]
        self.line("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
        for r in rows:
            self.line("  ".join(c.ljust(w) for c, w in zip(r, widths)))

    def emit(self, report: Dict, ok: bool) -> int:
        report["status"] = "pass" if ok else "fail"
        finish(report)
        if self.fmt == "machine":
            click.echo(json.dumps(report, sort_keys=True, indent=1, ensure_ascii=False))
        else:
            for s in self.lines:
                click.echo(s)
            click.echo(f"status: {report['status']}  ({time.perf_counter() - self.start:.2f}s)")
        return EXIT_OK if ok else EXIT_FAIL


def base_report(ws: Workspace, verb: str, query: Dict) -> Dict:
    return {"format": FORMAT, "document": ws.name, "verb": verb, "query": query}


def cert_entry(m, label: str) -> Dict:
    return {"label": label, "certificate": m.cert.to_json(), "matrix": graded_map_json(m.matrix)}


def open_ws(doc: str) -> Workspace:
    return load(doc)


def need_motive(ws: Workspace, name: str) -> None:
    if name not in ws.motives:
        known = ", ".join(sorted(ws.motives)) or "none"
        raise InputError(f"unknown motive {name!r}; known: {known}")


def window_opt(value: Optional[str]) -> Optional[List[str]]:
    return [v.strip() for v in value.split(",") if v.strip()] if value else None


def guarded(fn):
    """Map input problems to exit status 2 with a one-line message."""
    def run(*a, **k):
        _T0[0] = time.perf_counter()
        try:
            code = fn(*a, **k)
        except (InputError, PresentationError, ComplexError, FpError, CertificateError) as e:
            click.echo(f"input error: {e}", err=True)
            code = EXIT_INPUT
        sys.exit(code)
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


FORMAT_OPT = click.option("--format", "fmt", type=click.Choice(["human", "machine"]),
                          default="human", show_default=True)
WINDOW_OPT = click.option("--window", default=None,
                          help="Comma-separated complex names replacing the document window.")
DEPTH_OPT = click.option("--depth", default=2, show_default=True, type=click.IntRange(0, 4),
                         help="Roof/composition search depth for hom bounds.")
FUNCTOR_OPT = click.option("--functor", default=None, help="Functor name (default from document).")


@click.group()
def main():
    """Exact computations in the universal graded-Tannakian category of a Kunneth functor."""


# verbs ----------------------------------------------------------------------------

@main.command()
@click.argument("document")
@FORMAT_OPT
@guarded
def validate(document, fmt):
    """Check presentation axioms, functor axioms, complexes and covers."""
    doc = read_document(document)
    ws = Workspace(doc, name=str(document))
    out = Out(fmt)
    res = checks.presentation_suite(checks.Context(ws, window=[]))
    for name in sorted(doc.get("morphisms", {})):
        try:
            ws.morphism(name)
            res.add("morphism well formed", name, True)
        except InputError as e:
            res.add("morphism well formed", name, False, str(e))
    for name in sorted(doc.get("complexes", {})):
        try:
            ws.complex(name)
            res.add("complex well formed", name, True)
        except InputError as e:
            res.add("complex well formed", name, False, str(e))
    report = base_report(ws, "validate", {})
    report["results"] = res.to_json()
    out.table(["invariant", "subject", "ok", "detail"],
              [[r.invariant, r.subject, r.ok, _short(r.detail)] for r in res.rows])
    return out.emit(report, res.ok)


def _short(detail, n=70):
    if detail is None:
        return ""
    s = detail if isinstance(detail, str) else canonical(detail)
    return s if len(s) <= n else s[:n - 3] + "..."


@main.command()
@click.argument("document")
@click.argument("source")
@click.argument("target")
@DEPTH_OPT
@WINDOW_OPT
@FUNCTOR_OPT
@FORMAT_OPT
@guarded
def hom(document, source, target, depth, window, functor, fmt):
    """Certified and upper bounds for hom([SOURCE], [TARGET])."""
    ws = open_ws(document)
    cx = checks.Context(ws, window_opt(window), depth, functor)
    F, G = bracket(ws.complex(source), source), bracket(ws.complex(target), target)
    hb = m_hom_bounds(F, G, cx.fun, CoverSet.from_workspace(ws, cx.fun), depth,
                      [X for _, X in cx.complexes()])
    replays = all(replay(m, cx.fun) for m in hb.certified)
    report = base_report(ws, "hom", {"source": source, "target": target, "depth": depth,
                                     "window": cx.names})
    report["results"] = {"certified": hb.certified_dim, "upper": hb.probe_dim,
                         "ambient": hb.ambient_dim, "meets": hb.meets, "replays": replays}
    report["certificates"] = [cert_entry(m, f"{source}->{target}#{k}")
                              for k, m in enumerate(hb.certified)]
    out = Out(fmt)
    out.table(["certified", "upper", "ambient", "meets"],
              [[hb.certified_dim, hb.probe_dim, hb.ambient_dim, hb.meets]])
    for k, m in enumerate(hb.certified):
        out.line(f"  #{k} [{m.cert.kind}] {canonical(graded_map_json(m.matrix))}")
    return out.emit(report, hb.meets and replays)


@main.command(name="fiber")
@click.argument("document")
@click.argument("names", nargs=-1, required=True)
@FUNCTOR_OPT
@FORMAT_OPT
@guarded
def fiber_cmd(document, names, functor, fmt):
    """Bigraded fiber dimensions of [X] for each complex name."""
    ws = open_ws(document)
    fun = ws.functor(functor)
    out = Out(fmt)
    res = {}
    for n in names:
        sp = fiber(bracket(ws.complex(n), n), fun)
        res[n] = {degree_key(d): sp.dim(d) for d in sp.degrees if sp.dim(d)}
    out.table(["complex", "dims (chain,internal)"], [[n, canonical(res[n])] for n in names])
    report = base_report(ws, "fiber", {"names": list(names)})
    report["results"] = res
    return out.emit(report, True)


@main.command()
@click.argument("document")
@click.argument("motive")
@click.option("--method", type=click.Choice(["lefschetz", "semisimple"]), default="lefschetz",
              show_default=True)
@FORMAT_OPT
@guarded
def split(document, motive, method, fmt):
    """Kunneth projectors of a motive presentation."""
    from .standard import Motive, MotiveError, lefschetz_split, semisimple_split
    ws = open_ws(document)
    out = Out(fmt)
    report = base_report(ws, "split", {"motive": motive, "method": method})
    need_motive(ws, motive)
    try:
        M = Motive(ws, motive)
    except KeyError as e:
        raise InputError(f"motive {motive!r} lacks field {e}") from None
    try:
        s = (lefschetz_split if method == "lefschetz" else semisimple_split)(M)
    except MotiveError as e:
        report["results"] = {"error": checks._err(e)}
        out.line(f"split failed: {e}")
        for k in ("level", "degree", "stage"):
            if getattr(e, k, None) is not None:
                out.line(f"  {k}: {getattr(e, k)}")
        return out.emit(report, False)
    bad = s.failures()
    report["results"] = {
        "projectors": [{"index": i, "morphism": mor_json(p),
                        "fiber": graded_map_json(M.fun.apply(p)),
                        "note": s.notes.get(i, "")} for i, p in enumerate(s.pis)],
        "failures": bad}
    report["certificates"] = [cert_entry(m, f"pi{i}") for i, m in sorted(s.derivations.items())]
    out.table(["i", "rank", "note"], [[i, M.fun.apply(p).rank(), s.notes.get(i, "")]
                                      for i, p in enumerate(s.pis)])
    for f in bad:
        out.line(f"  failure: {f}")
    return out.emit(report, not bad)


@main.command()
@click.argument("document")
@click.argument("motives", nargs=-1, required=True)
@FORMAT_OPT
@guarded
def twist(document, motives, fmt):
    """Purity classes and the sign-twisted symmetry on their pure summands."""
    from .standard import Motive, MotiveError, lefschetz_split, purity_decompose, sign_twist
    ws = open_ws(document)
    out = Out(fmt)
    report = base_report(ws, "twist", {"motives": list(motives)})
    for m in motives:
        need_motive(ws, m)
    try:
        splits = [lefschetz_split(Motive(ws, m)) for m in motives]
        classes, cross = purity_decompose(splits)
    except MotiveError as e:
        report["results"] = {"error": checks._err(e)}
        out.line(f"twist failed: {e}")
        return out.emit(report, False)
    pieces = [p for v in classes.values() for p in v]
    rep = sign_twist(pieces, splits[0].motive.fun)
    report["results"] = {
        "classes": {str(k): [p.obj.name for p in v] for k, v in classes.items()},
        "cross_homs": {f"{a}|{b}": n for (a, b), n in sorted(cross.items())},
        "pairs": {f"{a}|{b}": v for (a, b), v in sorted(rep.pairs.items())},
        "triples": {"|".join(k): v for k, v in sorted(rep.triples.items())},
        "skipped": [["|".join(k), why] for k, why in rep.skipped]}
    out.line("classes: " + ", ".join(f"{k}: {' '.join(p.obj.name for p in v)}"
                                     for k, v in classes.items()))
    out.table(["pair", "plain swap", "involution", "natural"],
              [[f"{a}⊗{b}", v["plain swap"], v["involution"], v["natural"]]
               for (a, b), v in sorted(rep.pairs.items())])
    if rep.skipped:
        out.line(f"skipped pairs: {len(rep.skipped)} (tensor product not listed)")
    good = sum(v is True for v in rep.triples.values())
    unknown = sum(v is None for v in rep.triples.values())
    out.line(f"hexagon: {good}/{len(rep.triples) - unknown} triples hold"
             + (f", {unknown} not computable (triple tensor not listed)" if unknown else ""))
    return out.emit(report, rep.ok)


@main.command()
@click.argument("document")
@click.option("--suite", default="all", show_default=True,
              help="Suite name, comma-separated names, or 'all'.")
@DEPTH_OPT
@WINDOW_OPT
@FUNCTOR_OPT
@FORMAT_OPT
@guarded
def check(document, suite, depth, window, functor, fmt):
    """Run invariant suites over the document window."""
    ws = open_ws(document)
    cx = checks.Context(ws, window_opt(window), depth, functor)
    names = checks.DEFAULT if suite == "all" else [s.strip() for s in suite.split(",")]
    for n in names:
        if n not in checks.SUITES:
            raise InputError(f"unknown suite {n!r}; known: {', '.join(sorted(checks.SUITES))}")
    results = [checks.run_suite(n, cx) for n in names]
    report = base_report(ws, "check", {"suites": names, "depth": depth, "window": cx.names})
    report["results"] = [r.to_json() for r in results]
    out = Out(fmt)
    out.table(["suite", "pass", "fail", "info"],
              [[r.name, r.counts["pass"], r.counts["fail"], r.counts["info"]] for r in results])
    for r in results:
        for row in r.failures():
            out.line(f"  FAIL {r.name}: {row.invariant} [{row.subject}] {_short(row.detail)}")
    return out.emit(report, all(r.ok for r in results))


@main.command(name="replay")
@click.argument("document")
@click.argument("report_file", type=click.File("r"))
@FUNCTOR_OPT
@FORMAT_OPT
@guarded
def replay_cmd(document, report_file, functor, fmt):
    """Re-validate every certificate in a machine report against DOCUMENT."""
    ws = open_ws(document)
    fun = ws.functor(functor)
    try:
        prior = json.load(report_file)
    except json.JSONDecodeError as e:
        raise InputError(f"report is not JSON: {e}") from None
    body = {k: v for k, v in prior.items() if k != "hash"}
    hash_ok = hashlib.sha256(canonical(body).encode()).hexdigest() == prior.get("hash")
    rows = []
    for entry in prior.get("certificates", []):
        cert = certificate_from_json(ws, entry["certificate"])
        got = cert.matrix(fun)
        claimed = graded_blocks(entry["matrix"], got.source, got.target)
        rows.append((entry.get("label", ""), got == claimed))
    results = prior.get("results")
    for p in results.get("projectors", []) if isinstance(results, dict) else []:
        m = ws.morphism(p["morphism"])
        got = fun.apply(m)
        rows.append((f"pi{p['index']}", got == graded_blocks(p["fiber"], got.source, got.target)))
    report = base_report(ws, "replay", {"verb": prior.get("verb"), "hash": prior.get("hash")})
    report["results"] = {"hash_ok": hash_ok, "entries": [[lab, ok] for lab, ok in rows]}
    out = Out(fmt)
    out.line(f"report hash {'matches' if hash_ok else 'DOES NOT match'}")
    out.table(["entry", "replays"], rows)
    return out.emit(report, hash_ok and all(ok for _, ok in rows))


if __name__ == "__main__":
    main()
