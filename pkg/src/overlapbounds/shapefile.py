"""Shape JSON files: ``{"rings": [[[x, y], ...], ...]}``.

Outer rings are counterclockwise, holes clockwise.  Errors carry the file
name, line and column of the offending ring or vertex.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from .geometry import PolygonShape, Ring, ShapeError, validate_rings


class ShapeFileError(ValueError):
    def __init__(self, message: str, source: str = "<string>", line: int = 1, column: int = 1):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.source, self.line, self.column = source, line, column


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def _array_item_offsets(text: str, start: int) -> list[int]:
    """Offsets of the elements of the JSON array whose ``[`` is at ``start``."""
    decoder = json.JSONDecoder()
    pos = _skip_ws(text, start + 1)
    offsets = []
    if text[pos : pos + 1] == "]":
        return offsets
    while True:
        offsets.append(pos)
        _, end = decoder.raw_decode(text, pos)
        pos = _skip_ws(text, end)
        if text[pos : pos + 1] == ",":
            pos = _skip_ws(text, pos + 1)
            continue
        return offsets


def _ring_offsets(text: str) -> tuple[list[int], list[list[int]]]:
    """Offsets of each ring and each vertex inside the top-level ``rings`` array."""
    decoder = json.JSONDecoder()
    pos = _skip_ws(text, 0) + 1
    while True:
        pos = _skip_ws(text, pos)
        key, pos = decoder.raw_decode(text, pos)
        pos = _skip_ws(text, pos) + 1  # the colon
        pos = _skip_ws(text, pos)
        if key == "rings":
            break
        _, pos = decoder.raw_decode(text, pos)
        pos = _skip_ws(text, pos) + 1  # the comma
    rings = _array_item_offsets(text, pos)
    verts = [_array_item_offsets(text, r) if text[r] == "[" else [] for r in rings]
    return rings, verts


def parse_shape(text: str, source: str = "<string>") -> PolygonShape:
    def fail(msg, pos=0):
        line, col = _line_col(text, pos)
        raise ShapeFileError(msg, source, line, col)

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeFileError(exc.msg, source, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "rings" not in doc:
        fail('top level must be an object with a "rings" key')
    ring_pos, vert_pos = _ring_offsets(text)
    rings_doc = doc["rings"]
    if not isinstance(rings_doc, list) or not rings_doc:
        fail('"rings" must be a non-empty array', ring_pos[0] if ring_pos else 0)

    rings = []
    for k, ring in enumerate(rings_doc):
        if not isinstance(ring, list):
            fail(f"ring {k} must be an array of [x, y] pairs", ring_pos[k])
        for i, v in enumerate(ring):
            ok = (
                isinstance(v, list)
                and len(v) == 2
                and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
                and all(math.isfinite(c) for c in v)
            )
            if not ok:
                fail(f"ring {k} vertex {i} must be a pair of finite numbers", vert_pos[k][i])
        rings.append(Ring.from_points(ring) if len(ring) else None)
        if rings[-1] is None:
            fail(f"ring {k} is empty", ring_pos[k])

    try:
        parents = validate_rings(rings)
    except ShapeError as exc:
        pos = 0
        if exc.ring is not None and exc.ring < len(ring_pos):
            pos = ring_pos[exc.ring]
            if exc.vertex is not None and exc.vertex < len(vert_pos[exc.ring]):
                pos = vert_pos[exc.ring][exc.vertex]
        where = f"ring {exc.ring}: " if exc.ring is not None else ""
        fail(where + str(exc), pos)
    return PolygonShape._trusted(tuple(rings), parents)


def load_shape(path) -> PolygonShape:
    path = Path(path)
    return parse_shape(path.read_text(encoding="utf-8"), str(path))


def dump_shape(shape: PolygonShape) -> str:
    """One ring per line so diagnostics on re-read point somewhere useful."""
    body = ",\n    ".join(json.dumps(r.vertices.tolist()) for r in shape.rings)
    return '{\n  "rings": [\n    ' + body + "\n  ]\n}\n"


def save_shape(shape: PolygonShape, path) -> None:
    Path(path).write_text(dump_shape(shape), encoding="utf-8")
