"""JSON document format: quivers, QPs and decorated representations.

One self-describing format with top-level ``kind``, format ``version``,
``field`` tag ("Q" or "Fp:<p>") and ``trunc``; rationals travel as canonical
lowest-terms strings, matrices row-major.  parse(emit(x)) == x bit-exactly,
and every parsed object is re-validated.
"""

from __future__ import annotations

import json
from typing import Any

from .cycles import Potential, cyclic_normalize
from .errors import InvariantError, SchemaError
from .fields import Field, field_from_name
from .jets import JetSpace
from .linalg import Mat
from .qp import QP
from .quiver import Arrow, Quiver
from .reps import DecRep, check_module
from .subst import ArrowSubstitution

FORMAT_VERSION = 1
DEFAULT_TRUNC = 12


def _require(cond: bool, msg: str):
    if not cond:
        raise SchemaError(msg)


def _field_tag(field: Field) -> str:
    return field.name


# -- emit ----------------------------------------------------------------

def emit_quiver_payload(q: Quiver) -> dict:
    return {
        "vertices": list(q.vertices),
        "arrows": [{"id": a.id, "tail": a.tail, "head": a.head} for a in q.arrows],
    }


def _emit_potential(pot: Potential) -> list[dict]:
    fld = pot.space.field
    out = []
    for p, c in sorted(pot.terms().items(), key=lambda t: (t[0].length, t[0].arrows)):
        out.append({"cycle": list(p.arrows), "coeff": fld.to_str(c)})
    return out


def emit_quiver(q: Quiver, field: Field, trunc: int) -> dict:
    return {
        "kind": "quiver",
        "version": FORMAT_VERSION,
        "field": _field_tag(field),
        "trunc": trunc,
        "payload": emit_quiver_payload(q),
    }


def emit_qp(qp: QP) -> dict:
    payload = emit_quiver_payload(qp.quiver)
    payload["potential"] = _emit_potential(qp.potential)
    return {
        "kind": "qp",
        "version": FORMAT_VERSION,
        "field": _field_tag(qp.field),
        "trunc": qp.order,
        "payload": payload,
    }


def _emit_matrix(m: Mat, field: Field) -> list[list[str]]:
    return [[field.to_str(x) for x in row] for row in m.data]


def emit_decrep(rep: DecRep) -> dict:
    fld = rep.field
    payload = {
        "qp": emit_qp(rep.qp)["payload"],
        "dims": {str(v): rep.dims[v] for v in rep.qp.quiver.vertices},
        "decDims": {str(v): rep.dec_dims[v] for v in rep.qp.quiver.vertices},
        "matrices": {a.id: _emit_matrix(rep.maps[a.id], fld) for a in rep.qp.quiver.arrows},
    }
    return {
        "kind": "decrep",
        "version": FORMAT_VERSION,
        "field": _field_tag(fld),
        "trunc": rep.qp.order,
        "payload": payload,
    }


def emit_substitution(phi: ArrowSubstitution) -> dict:
    fld = phi.field
    images = {}
    for aid in sorted(phi.images):
        jet = phi.images[aid]
        images[aid] = [
            {"path": list(p.arrows), "coeff": fld.to_str(c)}
            for p, c in jet.sorted_terms()
        ]
    return {"images": images}


def emit(obj) -> dict:
    if isinstance(obj, Quiver):
        raise SchemaError("emit a quiver via emit_quiver(q, field, trunc)")
    if isinstance(obj, QP):
        return emit_qp(obj)
    if isinstance(obj, DecRep):
        return emit_decrep(obj)
    raise SchemaError(f"cannot emit object of type {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


# -- parse ---------------------------------------------------------------

def _parse_header(doc: Any) -> tuple[str, Field, int]:
    _require(isinstance(doc, dict), "document must be an object")
    kind = doc.get("kind")
    _require(kind in ("quiver", "qp", "decrep"), f"unknown kind {kind!r}")
    _require(doc.get("version") == FORMAT_VERSION, "unsupported format version")
    field = field_from_name(doc.get("field", "Q"))
    trunc = doc.get("trunc", DEFAULT_TRUNC)
    _require(isinstance(trunc, int) and trunc >= 1, "trunc must be a positive integer")
    _require("payload" in doc, "missing payload")
    return kind, field, trunc


def _parse_quiver_payload(payload: Any) -> Quiver:
    _require(isinstance(payload, dict), "payload must be an object")
    verts = payload.get("vertices")
    _require(isinstance(verts, list) and all(isinstance(v, int) for v in verts),
             "payload.vertices must be a list of integers")
    arrows_raw = payload.get("arrows")
    _require(isinstance(arrows_raw, list), "payload.arrows must be a list")
    arrows = []
    for i, a in enumerate(arrows_raw):
        _require(isinstance(a, dict), f"payload.arrows[{i}] must be an object")
        _require(
            isinstance(a.get("id"), str)
            and isinstance(a.get("tail"), int)
            and isinstance(a.get("head"), int),
            f"payload.arrows[{i}] needs string id and integer tail/head",
        )
        arrows.append(Arrow(a["id"], a["tail"], a["head"]))
    return Quiver(tuple(verts), tuple(arrows))


def _parse_potential(payload: Any, space: JetSpace) -> Potential:
    terms = payload.get("potential", [])
    _require(isinstance(terms, list), "payload.potential must be a list")
    jet = space.zero()
    for i, t in enumerate(terms):
        _require(isinstance(t, dict) and isinstance(t.get("cycle"), list),
                 f"payload.potential[{i}] malformed")
        _require(len(t["cycle"]) <= space.order,
                 f"payload.potential[{i}] is longer than the truncation order")
        coeff = space.field.parse(str(t.get("coeff", "1")))
        jet = jet + space.path(tuple(t["cycle"])).scale(coeff)
    return cyclic_normalize(jet)


def parse(doc: dict):
    """Parse a document into a Quiver, QP or DecRep, re-validating all
    structural invariants."""
    kind, field, trunc = _parse_header(doc)
    payload = doc["payload"]
    if kind == "quiver":
        return _parse_quiver_payload(payload)
    if kind == "qp":
        q = _parse_quiver_payload(payload)
        space = JetSpace(q, trunc, field)
        return QP(q, _parse_potential(payload, space))
    # decrep
    _require(isinstance(payload, dict) and isinstance(payload.get("qp"), dict),
             "decrep payload needs a qp object")
    q = _parse_quiver_payload(payload["qp"])
    space = JetSpace(q, trunc, field)
    qp = QP(q, _parse_potential(payload["qp"], space))
    dims_raw = payload.get("dims", {})
    dec_raw = payload.get("decDims", {})
    _require(isinstance(dims_raw, dict) and isinstance(dec_raw, dict),
             "dims and decDims must be objects")
    try:
        dims = {int(k): int(v) for k, v in dims_raw.items()}
        dec = {int(k): int(v) for k, v in dec_raw.items()}
    except (TypeError, ValueError) as e:
        raise SchemaError(f"bad dimension table: {e}") from e
    mats_raw = payload.get("matrices", {})
    _require(isinstance(mats_raw, dict), "matrices must be an object")
    maps = {}
    for aid, rows in mats_raw.items():
        _require(q.has_arrow(aid), f"matrix for unknown arrow {aid!r}")
        _require(isinstance(rows, list), f"matrix for {aid!r} must be a list of rows")
        a = q.arrow(aid)
        want_r, want_c = dims.get(a.head, 0), dims.get(a.tail, 0)
        _require(len(rows) == want_r, f"matrix for {aid!r} has wrong row count")
        data = []
        for row in rows:
            _require(isinstance(row, list) and len(row) == want_c,
                     f"matrix for {aid!r} has a wrong-length row")
            data.append([field.parse(str(x)) for x in row])
        maps[aid] = Mat(field, data) if want_r and want_c else Mat.zero(field, want_r, want_c)
    rep = DecRep(qp, dims, maps, dec)
    rpt = check_module(rep)
    if not rpt.ok:
        raise InvariantError(f"parsed representation is not a valid module: {rpt.failures}")
    return rep


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: {e}") from e
    return parse(doc)


def load_path(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
