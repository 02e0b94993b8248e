"""JSON documents for machines, expressions and sequence families."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .core import Alphabet, Dfa, FreeMorphism, ValidationError
from .cfp import Cbs, CfpExpr, Concat, Cond, Pipeline, Reg
from .cfpt import Cfpt
from .hdt0l import Hdt0lSystem
from .monoid import RegAssignment
from .sequences import Cat, Lit, PolySet, PumpingFamily, Pwe, Star
from .sst import SequentialTransducer, Sst

META_KEYS = ("name", "description")


def _w(x) -> list:
    return list(x)


def _need(doc, *keys):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise ValidationError(f"{doc.get('type', 'document')} is missing fields {missing}")


def to_doc(obj, name: str = None, description: str = None) -> dict:
    doc = _to_doc(obj)
    if name is not None:
        doc["name"] = name
    if description is not None:
        doc["description"] = description
    return doc


def _to_doc(obj) -> dict:
    if isinstance(obj, Sst):
        return {
            "type": "sst",
            "input_alphabet": _w(obj.input_alphabet),
            "output_alphabet": _w(obj.output_alphabet),
            "states": _w(obj.states),
            "initial": obj.initial,
            "registers": _w(obj.registers),
            "initial_values": {r: _w(v) for r, v in obj.initial_values.items()},
            "transitions": {
                q: {c: {"next": obj.transitions[q, c][0],
                        "assign": {r: _w(img) for r, img in obj.transitions[q, c][1].as_dict().items()}}
                    for c in obj.input_alphabet}
                for q in obj.states
            },
            "output": {q: _w(obj.output[q]) for q in obj.states},
        }
    if isinstance(obj, SequentialTransducer):
        return {
            "type": "sequential",
            "input_alphabet": _w(obj.input_alphabet),
            "output_alphabet": _w(obj.output_alphabet),
            "states": _w(obj.states),
            "initial": obj.initial,
            "transitions": {
                q: {c: {"next": obj.transitions[q, c][0], "emit": _w(obj.transitions[q, c][1])}
                    for c in obj.input_alphabet}
                for q in obj.states
            },
            "final": {q: _w(obj.final[q]) for q in obj.states},
        }
    if isinstance(obj, Hdt0lSystem):
        doc = {
            "type": "hdt0l",
            "input_alphabet": _w(obj.input_alphabet),
            "output_alphabet": _w(obj.output_alphabet),
            "working_alphabet": _w(obj.working_alphabet),
            "initial_word": _w(obj.initial_word),
            "rules": {c: {x: _w(h.image[x]) for x in obj.working_alphabet}
                      for c, h in obj.rules.items()},
            "final": {x: _w(obj.final.image[x]) for x in obj.working_alphabet},
        }
        if obj.layers is not None:
            doc["layers"] = [_w(b) for b in obj.layers]
        return doc
    if isinstance(obj, Cfpt):
        tables = {}
        for (p, q, letters), (nxt, action, emit) in obj.tables.items():
            tables.setdefault(str(p), {}).setdefault(q, {})[",".join(letters)] = {
                "next": nxt, "action": action, "emit": _w(emit)}
        return {
            "type": "cfpt",
            "input_alphabet": _w(obj.input_alphabet),
            "output_alphabet": _w(obj.output_alphabet),
            "k": obj.k,
            "states": _w(obj.states),
            "initial": obj.initial,
            "tables": tables,
        }
    if isinstance(obj, Dfa):
        return {
            "type": "dfa",
            "alphabet": _w(obj.alphabet),
            "states": _w(obj.states),
            "initial": obj.initial,
            "accepting": [q for q in obj.states if q in obj.accepting],
            "delta": {q: {a: obj.delta[q, a] for a in obj.alphabet} for q in obj.states},
        }
    if isinstance(obj, FreeMorphism):
        return {"type": "morphism", "src": _w(obj.source), "tgt": _w(obj.target),
                "image": {s: _w(obj.image[s]) for s in obj.source}}
    if isinstance(obj, RegAssignment):
        return {"type": "assignment", "registers": _w(obj.registers),
                "output_alphabet": sorted(obj.output_alphabet),
                "image": {r: _w(img) for r, img in obj.as_dict().items()}}
    if isinstance(obj, CfpExpr):
        return _expr_doc(obj)
    if isinstance(obj, Pipeline):
        return {"type": "pipeline", "stages": [_to_doc(s) for s in obj.stages]}
    if isinstance(obj, Pwe):
        return _pwe_doc(obj)
    if isinstance(obj, PumpingFamily):
        return {"type": "family", "period": obj.period,
                "initial": [_w(w) for w in obj.initial],
                "exprs": [_pwe_doc(e) for e in obj.exprs]}
    if isinstance(obj, PolySet):
        return {"type": "polyset", "polys": [[_num(x) for x in p] for p in obj.sorted()]}
    raise TypeError(f"no document encoding for {type(obj).__name__}")


def _num(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _expr_doc(e: CfpExpr) -> dict:
    if isinstance(e, Reg):
        return {"type": "cfp_expr", "node": "reg", "machine": _to_doc(e.machine)}
    if isinstance(e, Cbs):
        return {"type": "cfp_expr", "node": "cbs", "outer": _expr_doc(e.outer),
                "subs": {i: _expr_doc(g) for i, g in e.subs.items()},
                "output_alphabet": _w(e.output_alphabet)}
    if isinstance(e, Cond):
        return {"type": "cfp_expr", "node": "cond", "lang": _to_doc(e.lang),
                "then": _expr_doc(e.then), "else": _expr_doc(e.orelse),
                "output_alphabet": _w(e.output_alphabet)}
    if isinstance(e, Concat):
        return {"type": "cfp_expr", "node": "concat", "left": _expr_doc(e.left),
                "right": _expr_doc(e.right), "output_alphabet": _w(e.output_alphabet)}
    raise TypeError(f"not an expression: {e!r}")


def _pwe_doc(e: Pwe) -> dict:
    if isinstance(e, Lit):
        return {"type": "pwe", "node": "lit", "word": _w(e.word)}
    if isinstance(e, Cat):
        return {"type": "pwe", "node": "cat", "left": _pwe_doc(e.left), "right": _pwe_doc(e.right)}
    return {"type": "pwe", "node": "star", "body": _pwe_doc(e.body)}


def from_doc(doc: dict):
    if not isinstance(doc, dict) or "type" not in doc:
        raise ValidationError("a document must be a JSON object with a 'type' field")
    kind = doc["type"]
    try:
        reader = _READERS[kind]
    except KeyError:
        raise ValidationError(f"unknown document type {kind!r}") from None
    try:
        return reader(doc)
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed {kind} document: {exc!r}") from None


def _read_sst(doc):
    _need(doc, "input_alphabet", "output_alphabet", "states", "initial", "registers",
           "transitions", "output")
    trans = {}
    for q, row in doc["transitions"].items():
        for c, entry in row.items():
            trans[q, c] = (entry["next"], entry["assign"])
    return Sst(doc["input_alphabet"], doc["output_alphabet"], doc["states"], doc["initial"],
               doc["registers"], trans, doc.get("initial_values", {}), doc["output"])


def _read_sequential(doc):
    _need(doc, "input_alphabet", "output_alphabet", "states", "initial", "transitions")
    trans = {}
    for q, row in doc["transitions"].items():
        for c, entry in row.items():
            trans[q, c] = (entry["next"], entry.get("emit", []))
    return SequentialTransducer(doc["input_alphabet"], doc["output_alphabet"], doc["states"],
                                doc["initial"], trans, doc.get("final", {}))


def _read_hdt0l(doc):
    _need(doc, "input_alphabet", "output_alphabet", "working_alphabet", "initial_word",
          "rules", "final")
    return Hdt0lSystem(doc["input_alphabet"], doc["output_alphabet"], doc["working_alphabet"],
                       doc["initial_word"], doc["rules"], doc["final"], doc.get("layers"))


def _read_cfpt(doc):
    _need(doc, "input_alphabet", "output_alphabet", "k", "states", "initial", "tables")
    tables = {}
    for p, rows in doc["tables"].items():
        for q, row in rows.items():
            for letters, entry in row.items():
                key = tuple(letters.split(",")) if letters else ()
                tables[int(p), q, key] = (entry["next"], entry["action"], entry.get("emit", []))
    return Cfpt(doc["input_alphabet"], doc["output_alphabet"], int(doc["k"]), doc["states"],
                doc["initial"], tables)


def _read_dfa(doc):
    _need(doc, "states", "initial", "accepting", "delta")
    alphabet = doc.get("alphabet")
    if alphabet is None:
        alphabet = list(dict.fromkeys(a for row in doc["delta"].values() for a in row))
    return Dfa(alphabet, doc["states"], doc["initial"], doc["accepting"], doc["delta"])


def _read_morphism(doc):
    _need(doc, "src", "tgt", "image")
    return FreeMorphism(doc["src"], doc["tgt"], doc["image"])


def _read_assignment(doc):
    _need(doc, "registers", "image")
    return RegAssignment(doc["registers"], doc["image"], doc.get("output_alphabet", []))


def _read_leaf(doc):
    obj = from_doc(doc)
    if not isinstance(obj, (Sst, SequentialTransducer)):
        raise ValidationError("a regular leaf must embed an sst or sequential document")
    return Reg(obj)


def _read_expr(doc):
    node = doc.get("node")
    if node == "reg":
        return _read_leaf(doc["machine"])
    if node == "cbs":
        subs = {i: _as_expr(d) for i, d in doc["subs"].items()}
        return Cbs(_as_expr(doc["outer"]), subs, doc.get("output_alphabet"))
    if node == "cond":
        return Cond(_read_dfa(doc["lang"]), _as_expr(doc["then"]), _as_expr(doc["else"]),
                    doc.get("output_alphabet"))
    if node == "concat":
        return Concat(_as_expr(doc["left"]), _as_expr(doc["right"]), doc.get("output_alphabet"))
    raise ValidationError(f"unknown expression node {node!r}")


def _as_expr(doc) -> CfpExpr:
    """Expressions may embed plain machine documents as regular leaves."""
    if doc.get("type") in ("sst", "sequential"):
        return _read_leaf(doc)
    obj = from_doc(doc)
    if not isinstance(obj, CfpExpr):
        raise ValidationError(f"expected an expression, got a {doc.get('type')} document")
    return obj


def _read_pipeline(doc):
    _need(doc, "stages")
    return Pipeline([from_doc(d) for d in doc["stages"]])


def _read_pwe(doc):
    node = doc.get("node")
    if node == "lit":
        return Lit(doc["word"])
    if node == "cat":
        return Cat(_read_pwe(doc["left"]), _read_pwe(doc["right"]))
    if node == "star":
        return Star(_read_pwe(doc["body"]))
    raise ValidationError(f"unknown expression node {node!r}")


def _read_family(doc):
    _need(doc, "period", "initial", "exprs")
    return PumpingFamily(int(doc["period"]), tuple(tuple(w) for w in doc["initial"]),
                         tuple(_read_pwe(e) for e in doc["exprs"]))


def _read_polyset(doc):
    polys = []
    for p in doc["polys"]:
        coeffs = [Fraction(x) for x in p]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        polys.append(tuple(coeffs))
    return PolySet(frozenset(polys))


_READERS = {
    "sst": _read_sst,
    "sequential": _read_sequential,
    "hdt0l": _read_hdt0l,
    "cfpt": _read_cfpt,
    "dfa": _read_dfa,
    "morphism": _read_morphism,
    "assignment": _read_assignment,
    "cfp_expr": _read_expr,
    "pipeline": _read_pipeline,
    "pwe": _read_pwe,
    "family": _read_family,
    "polyset": _read_polyset,
}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def corpus_dir() -> Path:
    return Path(str(resources.files("xduce") / "corpus"))


def corpus_names() -> list:
    return sorted(p.stem for p in corpus_dir().glob("*.json"))


def resolve(path_or_name: str) -> Path:
    """A file path, or the name of a bundled corpus document (with or without .json)."""
    p = Path(path_or_name)
    if p.is_file():
        return p
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    candidate = corpus_dir() / f"{stem}.json"
    if candidate.is_file():
        return candidate
    raise FileNotFoundError(f"no such file or corpus document: {path_or_name}")


def read_document(path_or_name: str) -> dict:
    path = resolve(path_or_name)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def load(path_or_name: str):
    return from_doc(read_document(path_or_name))
