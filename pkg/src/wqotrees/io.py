"""File formats, atomic writes and run manifests.

Every object is stored as UTF-8 JSON. ``parse`` reads a file of a declared
kind and reports where it went wrong: the JSON position for syntax errors,
the field path for missing or malformed fields, and the violated law for
values that parse but are not valid objects.
"""
from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .gap import GapError, MarkedNestedTree
from .graph import GraphError, LabelledGraph, LabelOrder
from .interp import InterpretationError, MonoidInterpretation
from .monoid import FiniteMonoid, MonoidError, Morphism
from .sequences import SequenceError, sequence_from_json
from .split import Split, SplitError
from .tree import LabelledTree, TreeError

KINDS = ("monoid", "tree", "split", "graph", "interp", "seq", "marked")


class ParseError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = str(path)
        self.detail = message


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _need(data, key, where):
    if not isinstance(data, dict):
        raise KeyError(f"{where}: expected an object")
    if key not in data:
        raise KeyError(f"{where}: missing field {key!r}")
    return data[key]


def _monoid(data, where="monoid") -> FiniteMonoid:
    size = _need(data, "size", where)
    table = _need(data, "table", where)
    _need(data, "identity", where)
    if not isinstance(size, int) or size < 1:
        raise KeyError(f"{where}.size: expected a positive integer")
    if len(table) != size:
        raise KeyError(f"{where}.table: expected {size} rows, got {len(table)}")
    for r, row in enumerate(table):
        if len(row) != size:
            raise KeyError(f"{where}.table[{r}]: expected {size} entries, got {len(row)}")
        for c, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < size:
                raise KeyError(f"{where}.table[{r}][{c}] = {v!r} is not an element index")
    return FiniteMonoid.from_json(data)


def _tree(data, where="tree") -> LabelledTree:
    m = _monoid(_need(data, "monoid", where), where + ".monoid")
    root = _need(data, "root", where)
    kind = data.get("labels", "element")
    if kind == "symbol":
        mu = Morphism.from_json(_need(data, "morphism", where), m)
        return LabelledTree.from_nested(root, m, mu)
    if kind != "element":
        raise KeyError(f"{where}.labels: expected 'element' or 'symbol', got {kind!r}")
    return LabelledTree.from_nested(root, m)


def _marked(data, where="marked") -> MarkedNestedTree:
    t = _tree(data, where)
    s = Split(int(_need(data, "height", where)), tuple(_need(data, "split", where)))
    order = LabelOrder.from_json(data["order"]) if "order" in data else None
    return MarkedNestedTree(t, s, tuple(_need(data, "marking", where)),
                            data.get("node_label"), order)


def _graph(data, where="graph") -> LabelledGraph:
    _need(data, "n", where)
    return LabelledGraph.from_json(data)


def _interp(data, where="interp") -> MonoidInterpretation:
    _monoid(_need(data, "monoid", where), where + ".monoid")
    _need(data, "morphism", where)
    return MonoidInterpretation.from_json(data)


def _split(data, where="split") -> Split:
    return Split(int(_need(data, "height", where)), tuple(_need(data, "value", where)))


def _seq(data, where="seq"):
    _need(data, "kind", where)
    return sequence_from_json(data)


_READERS = {"monoid": _monoid, "tree": _tree, "split": _split, "graph": _graph,
            "interp": _interp, "seq": _seq, "marked": _marked}

_INVARIANT_ERRORS = (MonoidError, TreeError, SplitError, GraphError, GapError,
                     InterpretationError, SequenceError)


def loads(text: str, kind: str, path="<string>"):
    if kind not in _READERS:
        raise ParseError(path, f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return _READERS[kind](data)
    except KeyError as exc:
        raise ParseError(path, exc.args[0] if exc.args else "missing field") from None
    except _INVARIANT_ERRORS as exc:
        raise ParseError(path, f"invalid {kind}: {exc}") from None
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(path, f"malformed {kind}: {exc}") from None


def parse(path, kind: str, manifest: "RunManifest | None" = None):
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ParseError(path, f"cannot read file ({exc.strerror})") from None
    if manifest is not None:
        manifest.inputs[str(path)] = sha256_bytes(raw)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError(path, "not UTF-8") from None
    return loads(text, kind, path)


def serialize(obj) -> dict:
    return obj.to_json()


def dumps(data) -> str:
    if hasattr(data, "to_json"):
        data = data.to_json()
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def write_atomic(path, text: str) -> str:
    """Write through a temporary file in the same directory; return the digest."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    raw = text.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=p.parent, prefix="." + p.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(raw)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return sha256_bytes(raw)


@dataclass
class RunManifest:
    argv: list
    seed: int = 0
    version: str = __version__
    inputs: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    outcome: str = ""
    exit_code: int = 0
    workers: int = 1
    wall_time: float = 0.0
    _t0: float = field(default_factory=time.monotonic, repr=False)

    def write(self, path, data) -> None:
        self.artifacts[str(path)] = write_atomic(path, dumps(data))

    def finish(self, outcome: str, code: int) -> None:
        self.outcome, self.exit_code = outcome, code
        self.wall_time = round(time.monotonic() - self._t0, 6)

    def to_json(self) -> dict:
        return {"argv": list(self.argv), "seed": self.seed, "version": self.version,
                "python": sys.version.split()[0], "inputs": dict(self.inputs),
                "artifacts": dict(self.artifacts), "outcome": self.outcome,
                "exit_code": self.exit_code, "workers": self.workers,
                "wall_time": self.wall_time}
