"""JSON file formats for instances, certificates and number results.

Instance files::

    {"format": "boxramsey/instance", "version": 1, "kind": "colouring" | "array",
     "d": ..., "sides": [...], "colours": r (colourings only),
     "provenance": {"generator": ..., "seed": ...} | null,
     "payload": ...}

A colouring payload is one list per direction, each the row-major
flattening of the (off-coordinates, pair) table: rows run over the other
d-1 coordinates in row-major order, columns over pairs x < y in
lexicographic order.  Colours are 0-based.  An array payload is the
row-major list of ranks 1..#cells (only the order type is kept).

Certificate files carry the sub-box, the kind-specific fields and the digest
of the instance they were found on.  All writes go through a temp file and
an atomic rename.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from math import comb, prod
from pathlib import Path
from typing import Any

import numpy as np

from .consistency import verify_consistency_witness
from .errors import InvalidInput
from .model import (BoxColouring, ConsistencyWitness, DirectionColourCertificate,
                    LexMonotoneCertificate, MonotoneCertificate, NumericArray,
                    check_subbox, verify_lex_monotone, verify_mono_box, verify_monotone)

VERSION = 1
INSTANCE_FORMAT = "boxramsey/instance"
CERTIFICATE_FORMAT = "boxramsey/certificate"


# ------------------------------------------------------------- formatting

def _is_flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v)


def _format(v, level: int = 0) -> str:
    pad = "  " * (level + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_format(x, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(v, list) and not _is_flat(v):
        return "[\n" + ",\n".join(pad + _format(x, level + 1) for x in v) + "\n" + "  " * level + "]"
    return json.dumps(v)


def dumps(obj: dict) -> str:
    """Stable, diff-friendly JSON: nested structure indented, flat lists inline."""
    return _format(obj) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise InvalidInput(f"{path}: {exc.strerror}") from None


# -------------------------------------------------------------- instances

def _content(obj) -> dict:
    if isinstance(obj, BoxColouring):
        return {"kind": "colouring", "d": obj.d, "sides": list(obj.dims), "colours": obj.colours,
                "payload": [p.reshape(-1).tolist() for p in obj.payload]}
    if isinstance(obj, NumericArray):
        return {"kind": "array", "d": obj.d, "sides": list(obj.dims),
                "payload": obj.ranks().reshape(-1).tolist()}
    raise InvalidInput(f"cannot serialise {type(obj).__name__}")


def instance_digest(obj) -> str:
    """sha256 of the instance content (provenance excluded)."""
    blob = json.dumps(_content(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def instance_to_dict(obj, provenance: dict | None = None) -> dict:
    body = _content(obj)
    out = {"format": INSTANCE_FORMAT, "version": VERSION, "kind": body["kind"], "d": body["d"],
           "sides": body["sides"]}
    if "colours" in body:
        out["colours"] = body["colours"]
    out["provenance"] = provenance
    out["payload"] = body["payload"]
    return out


def _need(data: dict, key: str):
    if key not in data:
        raise InvalidInput(f"missing field {key!r}")
    return data[key]


def _positive_int(v, what):
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise InvalidInput(f"{what} must be a positive integer")
    return v


def instance_from_dict(data: dict):
    """Parse and validate an instance; returns ``(object, provenance)``."""
    if not isinstance(data, dict) or data.get("format") != INSTANCE_FORMAT:
        raise InvalidInput("not an instance file")
    if data.get("version") != VERSION:
        raise InvalidInput(f"unsupported instance version {data.get('version')!r}")
    kind = _need(data, "kind")
    d = _positive_int(_need(data, "d"), "d")
    sides = _need(data, "sides")
    if not isinstance(sides, list) or len(sides) != d:
        raise InvalidInput("sides must list one length per axis")
    for s in sides:
        _positive_int(s, "side")
    payload = _need(data, "payload")
    if kind == "colouring":
        r = _positive_int(_need(data, "colours"), "colours")
        if len(set(sides)) != 1:
            raise InvalidInput("colouring sides must be equal")
        side = sides[0]
        per = side ** (d - 1) * comb(side, 2)
        if not isinstance(payload, list) or len(payload) != d:
            raise InvalidInput(f"colouring payload needs {d} direction lists")
        for i, block in enumerate(payload):
            if not isinstance(block, list) or len(block) != per:
                raise InvalidInput(f"direction {i}: expected {per} colours")
            if any(not isinstance(c, int) or isinstance(c, bool) for c in block):
                raise InvalidInput(f"direction {i}: colours must be integers")
        obj = BoxColouring(d, side, r, [np.asarray(b, dtype=np.int64) for b in payload])
    elif kind == "array":
        cells = prod(sides)
        if not isinstance(payload, list) or len(payload) != cells:
            raise InvalidInput(f"array payload needs {cells} ranks")
        if sorted(payload) != list(range(1, cells + 1)) or any(isinstance(x, bool) for x in payload):
            raise InvalidInput("array payload must be a permutation of 1..#cells")
        obj = NumericArray(np.asarray(payload, dtype=np.int64).reshape(sides))
    else:
        raise InvalidInput(f"unknown instance kind {kind!r}")
    return obj, data.get("provenance")


def write_instance(path, obj, provenance: dict | None = None) -> None:
    write_atomic(path, dumps(instance_to_dict(obj, provenance)))


def read_instance(path):
    return instance_from_dict(read_json(path))


# ----------------------------------------------------------- certificates

CERT_KINDS = {DirectionColourCertificate: "mono_box", MonotoneCertificate: "monotone",
              LexMonotoneCertificate: "lex_monotone", ConsistencyWitness: "consistency"}


def certificate_to_dict(cert, digest: str) -> dict:
    kind = CERT_KINDS.get(type(cert))
    if kind is None:
        raise InvalidInput(f"cannot serialise {type(cert).__name__}")
    out = {"format": CERTIFICATE_FORMAT, "version": VERSION, "kind": kind,
           "subbox": [list(c) for c in cert.subbox]}
    if kind == "mono_box":
        out["direction_colours"] = list(cert.direction_colours)
    elif kind == "monotone":
        out["signs"] = list(cert.signs)
    elif kind == "lex_monotone":
        out["perm"] = list(cert.perm)
        out["signs"] = list(cert.signs)
    else:
        out["pattern"] = cert.pattern
        out["pattern_sha256"] = hashlib.sha256(cert.pattern.encode()).hexdigest()
    out["instance_digest"] = digest
    return out


def _int_list(v, what):
    if not isinstance(v, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in v):
        raise InvalidInput(f"{what} must be a list of integers")
    return v


def certificate_from_dict(data: dict):
    """Parse a certificate; returns ``(certificate, instance_digest)``."""
    if not isinstance(data, dict) or data.get("format") != CERTIFICATE_FORMAT:
        raise InvalidInput("not a certificate file")
    if data.get("version") != VERSION:
        raise InvalidInput(f"unsupported certificate version {data.get('version')!r}")
    kind = _need(data, "kind")
    sub = _need(data, "subbox")
    if not isinstance(sub, list):
        raise InvalidInput("subbox must be a list of index lists")
    box = tuple(tuple(_int_list(c, "subbox axis")) for c in sub)
    if kind == "mono_box":
        cert = DirectionColourCertificate(box, _int_list(_need(data, "direction_colours"), "direction_colours"))
    elif kind == "monotone":
        cert = MonotoneCertificate(box, _int_list(_need(data, "signs"), "signs"))
    elif kind == "lex_monotone":
        cert = LexMonotoneCertificate(box, _int_list(_need(data, "perm"), "perm"),
                                      _int_list(_need(data, "signs"), "signs"))
    elif kind == "consistency":
        pattern = _need(data, "pattern")
        if not isinstance(pattern, str):
            raise InvalidInput("pattern must be a string")
        if hashlib.sha256(pattern.encode()).hexdigest() != data.get("pattern_sha256"):
            raise InvalidInput("pattern does not match its sha256")
        cert = ConsistencyWitness(box, pattern)
    else:
        raise InvalidInput(f"unknown certificate kind {kind!r}")
    digest = _need(data, "instance_digest")
    if not isinstance(digest, str):
        raise InvalidInput("instance_digest must be a string")
    return cert, digest


def write_certificate(path, cert, instance) -> None:
    write_atomic(path, dumps(certificate_to_dict(cert, instance_digest(instance))))


def read_certificate(path):
    return certificate_from_dict(read_json(path))


def verify_certificate(instance, cert, digest: str | None = None) -> bool:
    """Digest check (when given) followed by the kind's verifier.

    Raises InvalidInput when the certificate is malformed for this instance
    (wrong kind of instance, wrong arity, out-of-range indices).
    """
    if digest is not None and digest != instance_digest(instance):
        return False
    if isinstance(cert, DirectionColourCertificate):
        if not isinstance(instance, BoxColouring):
            raise InvalidInput("a mono_box certificate needs a colouring")
        return verify_mono_box(instance, cert)
    if isinstance(cert, ConsistencyWitness):
        check_subbox(cert.subbox, instance.dims)
        return verify_consistency_witness(instance, cert)
    if not isinstance(instance, NumericArray):
        raise InvalidInput("this certificate kind needs an array")
    if isinstance(cert, MonotoneCertificate):
        return verify_monotone(instance, cert)
    if isinstance(cert, LexMonotoneCertificate):
        return verify_lex_monotone(instance, cert)
    raise InvalidInput(f"unknown certificate {type(cert).__name__}")


# --------------------------------------------------------- number results

def number_result_to_dict(q, res, witness_path: str | None = None) -> dict:
    return {"format": "boxramsey/number", "version": VERSION,
            "query": {"family": q.family, "d": q.d, "n": q.n, "r": q.r if q.family == "R" else None,
                      "side_cap": q.side_cap, "node_budget": q.node_budget},
            "status": res.status, "value": res.value, "lower_bound": res.lower_bound,
            "witness_side": res.witness_side, "witness_path": witness_path,
            "counts": {str(k): v for k, v in res.counts.items()}, "reason": res.reason}
