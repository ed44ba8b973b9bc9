"""JSON wire formats and artifact files.

Every artifact is wrapped in a self-describing envelope with a schema
version; readers refuse unknown versions.  Artifact files are written under
an output directory with content-hash names, so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os

from .characters import FiniteOrderCharacter
from .groupring import GroupRingElement
from .hecke import EdgeForm, EigenData, VertexForm
from .measures import CompatibleSystem
from .padic import PrecisionInt
from .tree import DirectedEdge, Vertex

SCHEMA = "thetaforge/1"


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def envelope(kind: str, payload) -> dict:
    return {"schema": SCHEMA, "kind": kind, "payload": payload}


def open_envelope(obj, kind: str | None = None):
    if obj.get("schema") != SCHEMA:
        raise ValueError(f"unknown schema version {obj.get('schema')!r}")
    if kind is not None and obj.get("kind") != kind:
        raise ValueError(f"expected artifact kind {kind!r}, got {obj.get('kind')!r}")
    return obj["payload"]


def write_artifact(outdir: str, kind: str, payload) -> str:
    os.makedirs(outdir, exist_ok=True)
    text = canonical_dumps(envelope(kind, payload))
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    path = os.path.join(outdir, f"{kind}-{digest}.json")
    with open(path, "w") as fh:
        fh.write(text)
    return path


def read_artifact(path: str, kind: str | None = None):
    with open(path) as fh:
        return open_envelope(json.load(fh), kind)


# ---------------------------------------------------------------------------
# per-type payloads


def eigen_to_json(e: EigenData):
    return {
        "ap": e.ap.to_json() if e.ap is not None else None,
        "alpha": e.alpha.to_json() if e.alpha is not None else None,
    }


def eigen_from_json(obj) -> EigenData:
    ap = PrecisionInt.from_json(obj["ap"]) if obj["ap"] else None
    alpha = PrecisionInt.from_json(obj["alpha"]) if obj["alpha"] else None
    return EigenData(ap=ap, alpha=alpha)


def form_to_json(f):
    """One entry per evaluation point carrying the h-tuple of values."""
    kind = "vertex" if isinstance(f, VertexForm) else "edge"
    if kind == "vertex":
        keys = sorted(f.tables[0], key=lambda v: (v.a, v.b, v.u))
    else:
        keys = sorted(
            f.tables[0],
            key=lambda e: (e.source.a, e.source.b, e.source.u,
                           e.target.a, e.target.b, e.target.u),
        )
    entries = [
        {"w": w.to_json(), "values": [str(t[w].residue) for t in f.tables]}
        for w in keys
    ]
    return {
        "p": f.p, "k": f.k, "h": f.h, "kind": kind,
        "radius": f.domain.radius,
        "center": f.domain.center.to_json(),
        "entries": entries,
    }


def form_from_json(obj):
    from .tree import ball

    p, k, h = int(obj["p"]), int(obj["k"]), int(obj["h"])
    center = Vertex.from_json(p, obj["center"])
    dom = ball(center, int(obj["radius"]))
    tables = [dict() for _ in range(h)]
    for row in obj["entries"]:
        if obj["kind"] == "vertex":
            w = Vertex.from_json(p, row["w"])
        else:
            w = DirectedEdge.from_json(p, row["w"])
        for i, val in enumerate(row["values"]):
            tables[i][w] = PrecisionInt(p, k, int(val))
    cls = VertexForm if obj["kind"] == "vertex" else EdgeForm
    return cls(p, k, h, dom, tuple(tables))


def orbit_table_to_json(tab):
    rows = []
    for lbl, w in tab.rows():
        tau, digit = tab.split_parts[lbl]
        rows.append({"h": [tau, digit], "w": w.to_json()})
    return {
        "p": tab.torus.p, "d": tab.torus.d, "level": tab.level,
        "mode": tab.mode, "free_exponent": tab.free_exponent, "rows": rows,
    }


def system_to_json(s: CompatibleSystem):
    levels = []
    fibers = []
    free = []
    for j in range(s.n_max + 1):
        if s.levels[j] is None:
            levels.append(None)
            fibers.append(None)
            free.append(None)
            continue
        levels.append({lbl: str(c) for lbl, c in sorted(s.levels[j].items())})
        fibers.append(dict(sorted(s.fibers[j].items())) if s.fibers[j] else None)
        free.append({lbl: list(d) for lbl, d in sorted(s.free[j].items())})
    return {
        "p": s.p, "k": s.k, "delta": s.delta, "mode": s.mode,
        "eigen": eigen_to_json(s.eigen), "n_max": s.n_max,
        "torsion": s.torsion, "level_exp": list(s.level_exp),
        "levels": levels, "fibers": fibers, "free": free,
    }


def system_from_json(obj) -> CompatibleSystem:
    n_max = int(obj["n_max"])
    levels = []
    fibers = []
    free = []
    for j in range(n_max + 1):
        lv = obj["levels"][j]
        if lv is None:
            levels.append(None)
            fibers.append(None)
            free.append(None)
            continue
        levels.append({lbl: int(c) for lbl, c in lv.items()})
        fb = obj["fibers"][j]
        fibers.append(dict(fb) if fb else None)
        free.append({lbl: tuple(d) for lbl, d in obj["free"][j].items()})
    return CompatibleSystem(
        int(obj["p"]), int(obj["k"]), int(obj["delta"]), obj["mode"],
        eigen_from_json(obj["eigen"]), n_max, int(obj["torsion"]),
        tuple(int(e) for e in obj["level_exp"]),
        tuple(levels), tuple(fibers), tuple(free),
    )


def groupring_to_json(x: GroupRingElement):
    return x.to_json()


def groupring_from_json(obj) -> GroupRingElement:
    return GroupRingElement.from_json(obj)


def character_from_json(p: int, delta: int, obj) -> FiniteOrderCharacter:
    return FiniteOrderCharacter.from_json(p, delta, obj)
