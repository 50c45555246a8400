"""JSON documents for graphs, correspondences, morphisms and reports.

Every document is a JSON object with ``kind`` and ``version`` fields.
Complex scalars are ``[re, im]`` pairs and matrices are row-major nested
lists of them. Per-vertex matrices are objects keyed by vertex label.
A file may also hold a JSON array of documents (this is what commands
emitting several documents write).

Example graph document::

    {"kind": "graph", "version": 1,
     "vertices": ["u", "v"],
     "edges": [{"id": "e", "range": "u", "source": "v"}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .correspondence import Correspondence, CorrespondenceMorphism
from .errors import GraphcorrError, SchemaError
from .graph import DirectedGraph, Edge, GraphMorphism

VERSION = 1
KINDS = ("graph", "correspondence", "graph_morphism", "correspondence_morphism", "report")


@dataclass(frozen=True, eq=False)
class Document:
    """A parsed document; ``value`` is typed for every kind except ``report`` (a dict)."""

    kind: str
    value: Any


# -- encoding ---------------------------------------------------------------

def _scalar(z) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def encode_matrix(m) -> list:
    return [[_scalar(z) for z in row] for row in np.asarray(m)]


def encode_vector(v) -> list:
    return [_scalar(z) for z in np.asarray(v)]


def graph_payload(E: DirectedGraph) -> dict:
    return {"vertices": list(E.vertices),
            "edges": [{"id": e.id, "range": e.range, "source": e.source} for e in E.edges]}


def correspondence_payload(X: Correspondence) -> dict:
    out = {
        "vertices": list(X.vertices),
        "dim": X.dim,
        "gram": {v: encode_matrix(X.gram[i]) for i, v in enumerate(X.vertices)},
        "right_action": {v: encode_matrix(X.right_action[i]) for i, v in enumerate(X.vertices)},
        "left_action": {v: encode_matrix(X.left_action[i]) for i, v in enumerate(X.vertices)},
    }
    if X.generators is not None:
        out["generators"] = list(X.generators)
    return out


def to_payload(obj) -> dict:
    """Document dict (with ``kind`` and ``version``) for a typed value or report dict."""
    if isinstance(obj, DirectedGraph):
        kind, body = "graph", graph_payload(obj)
    elif isinstance(obj, Correspondence):
        kind, body = "correspondence", correspondence_payload(obj)
    elif isinstance(obj, GraphMorphism):
        kind, body = "graph_morphism", {"domain": graph_payload(obj.domain),
                                        "codomain": graph_payload(obj.codomain),
                                        "edge_map": dict(obj.edge_map)}
    elif isinstance(obj, CorrespondenceMorphism):
        kind, body = "correspondence_morphism", {"domain": correspondence_payload(obj.domain),
                                                 "codomain": correspondence_payload(obj.codomain),
                                                 "matrix": encode_matrix(obj.matrix)}
    elif isinstance(obj, Document):
        return to_payload(obj.value) if obj.kind != "report" else {"kind": "report", "version": VERSION,
                                                                    **obj.value}
    elif isinstance(obj, dict):
        kind, body = "report", dict(obj)
        body.pop("kind", None)
        body.pop("version", None)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"kind": kind, "version": VERSION, **body}


def dumps(obj) -> str:
    """Serialize one value, or a list of values as a JSON array, deterministically."""
    if isinstance(obj, (list, tuple)):
        data = [to_payload(o) for o in obj]
    else:
        data = to_payload(obj)
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


# -- decoding ---------------------------------------------------------------

def _need(obj, key, path, typ=None):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path or "<root>")
    if key not in obj:
        raise SchemaError("missing field", f"{path}.{key}" if path else key)
    val = obj[key]
    if typ is not None and not isinstance(val, typ):
        name = typ.__name__ if isinstance(typ, type) else "/".join(t.__name__ for t in typ)
        raise SchemaError(f"expected {name}, got {type(val).__name__}", f"{path}.{key}" if path else key)
    return val


def _join(path, key):
    return f"{path}.{key}" if path else str(key)


def decode_scalar(value, path="") -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
        raise SchemaError("complex scalar must be a [re, im] pair of numbers", path)
    return complex(value[0], value[1])


def decode_matrix(value, rows: int, cols: int, path="") -> np.ndarray:
    if not isinstance(value, list) or len(value) != rows:
        raise SchemaError(f"expected {rows} rows", path)
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise SchemaError(f"expected {cols} entries, got {got}", f"{path}[{i}]")
        for j, z in enumerate(row):
            out[i, j] = decode_scalar(z, f"{path}[{i}][{j}]")
    if not np.all(np.isfinite(out)):
        raise SchemaError("non-finite entry", path)
    return out


def _strings(value, path) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise SchemaError("expected a list of strings", path)
    return value


def decode_graph(obj, path="") -> DirectedGraph:
    vertices = _strings(_need(obj, "vertices", path, list), _join(path, "vertices"))
    edges = []
    for i, e in enumerate(_need(obj, "edges", path, list)):
        p = f"{_join(path, 'edges')}[{i}]"
        edges.append(Edge(_need(e, "id", p, str), _need(e, "range", p, str), _need(e, "source", p, str)))
    try:
        return DirectedGraph(tuple(vertices), tuple(edges))
    except GraphcorrError as exc:
        raise SchemaError(str(exc), path or "<root>") from exc


def decode_correspondence(obj, path="") -> Correspondence:
    vertices = _strings(_need(obj, "vertices", path, list), _join(path, "vertices"))
    n = _need(obj, "dim", path, int)
    if isinstance(n, bool) or n < 1:
        raise SchemaError("dim must be a positive integer", _join(path, "dim"))
    mats = {}
    for key in ("gram", "right_action", "left_action"):
        per = _need(obj, key, path, dict)
        p = _join(path, key)
        extra = sorted(set(per) - set(vertices))
        if extra:
            raise SchemaError(f"unknown vertices {extra}", p)
        mats[key] = [decode_matrix(_need(per, v, p), n, n, _join(p, v)) for v in vertices]
    generators = obj.get("generators")
    if generators is not None:
        generators = tuple(_strings(generators, _join(path, "generators")))
    try:
        return Correspondence(tuple(vertices), mats["gram"], mats["right_action"], mats["left_action"], generators)
    except GraphcorrError as exc:
        raise SchemaError(str(exc), path or "<root>") from exc


def decode_graph_morphism(obj, path="") -> GraphMorphism:
    dom = decode_graph(_need(obj, "domain", path, dict), _join(path, "domain"))
    cod = decode_graph(_need(obj, "codomain", path, dict), _join(path, "codomain"))
    edge_map = _need(obj, "edge_map", path, dict)
    for k, v in edge_map.items():
        if not isinstance(v, str):
            raise SchemaError("edge ids must be strings", f"{_join(path, 'edge_map')}.{k}")
    return GraphMorphism(dom, cod, edge_map)


def decode_correspondence_morphism(obj, path="") -> CorrespondenceMorphism:
    dom = decode_correspondence(_need(obj, "domain", path, dict), _join(path, "domain"))
    cod = decode_correspondence(_need(obj, "codomain", path, dict), _join(path, "codomain"))
    m = decode_matrix(_need(obj, "matrix", path), cod.dim, dom.dim, _join(path, "matrix"))
    return CorrespondenceMorphism(dom, cod, m)


_DECODERS = {
    "graph": decode_graph,
    "correspondence": decode_correspondence,
    "graph_morphism": decode_graph_morphism,
    "correspondence_morphism": decode_correspondence_morphism,
}


def from_payload(obj, path="") -> Document:
    kind = _need(obj, "kind", path, str)
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}", _join(path, "kind"))
    version = _need(obj, "version", path, int)
    if version != VERSION:
        raise SchemaError(f"unsupported version {version}", _join(path, "version"))
    if kind == "report":
        return Document(kind, {k: v for k, v in obj.items() if k not in ("kind", "version")})
    return Document(kind, _DECODERS[kind](obj, path))


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, line=exc.lineno) from exc


def parse_document(text: str) -> Document:
    """Parse a single document."""
    data = _load_json(text)
    if isinstance(data, list):
        raise SchemaError("expected a single document, found an array", "<root>")
    return from_payload(data)


def parse_documents(text: str) -> list[Document]:
    """Parse a single document or an array of documents."""
    data = _load_json(text)
    if isinstance(data, list):
        return [from_payload(d, f"[{i}]") for i, d in enumerate(data)]
    return [from_payload(data)]


def parse_sigma(text: str) -> tuple[tuple[str, ...], dict[str, str]]:
    """Parse a self-map file ``{"vertices": [...], "sigma": {v: sigma(v)}}``."""
    data = _load_json(text)
    vertices = _strings(_need(data, "vertices", "", list), "vertices")
    sigma = _need(data, "sigma", "", dict)
    for v in vertices:
        if v not in sigma:
            raise SchemaError("sigma is undefined here", f"sigma.{v}")
        if not isinstance(sigma[v], str) or sigma[v] not in vertices:
            raise SchemaError("image must be a vertex label", f"sigma.{v}")
    return tuple(vertices), {v: sigma[v] for v in vertices}


def dump_sigma(vertices, sigma) -> str:
    return json.dumps({"vertices": list(vertices), "sigma": {v: sigma[v] for v in vertices}},
                      indent=2, sort_keys=True) + "\n"
