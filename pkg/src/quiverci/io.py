"""Text format (.qv) parsing/serialization and DOT emission.

Format, one declaration per line, '#' starts a comment:

    vertex <name> [dim <k>]        # dim defaults to 1
    arrow [<name>:] <src> -> <dst>

Identifiers are restricted to [A-Za-z0-9_] so counterexample files diff
cleanly. Vertices of dimension zero are rejected at parse time.
"""

from __future__ import annotations

import re

from .core import Arrow, QuiverSetting
from .errors import ParseError

__all__ = ["parse_setting", "parse_file", "serialize_setting", "to_dot"]

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")
_VERTEX = re.compile(r"vertex\s+(\S+)(?:\s+dim\s+(\S+))?\s*\Z")
_ARROW = re.compile(r"arrow\s+(?:(\S+)\s*:\s*)?(\S+)\s*->\s*(\S+)\s*\Z")


def _ident(tok: str, line: int, what: str) -> str:
    if not _IDENT.match(tok):
        raise ParseError(f"invalid {what} {tok!r} (allowed: [A-Za-z0-9_])", line)
    return tok


def parse_setting(text: str) -> QuiverSetting:
    """Parse .qv text into a setting; errors carry the 1-based line number."""
    vertices: dict[str, int] = {}
    arrows: list[Arrow] = []
    arrow_ids: set[str] = set()
    auto = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _VERTEX.match(line)
        if m:
            name = _ident(m.group(1), lineno, "vertex name")
            if name in vertices:
                raise ParseError(f"vertex {name!r} declared twice", lineno)
            dim = 1
            if m.group(2) is not None:
                try:
                    dim = int(m.group(2))
                except ValueError:
                    raise ParseError(f"dimension {m.group(2)!r} is not an integer", lineno) from None
                if dim == 0:
                    raise ParseError(
                        f"vertex {name!r} has dimension 0; delete zero-dimensional vertices", lineno
                    )
                if dim < 0:
                    raise ParseError(f"vertex {name!r} has negative dimension", lineno)
            vertices[name] = dim
            continue
        m = _ARROW.match(line)
        if m:
            aid, src, dst = m.groups()
            src = _ident(src, lineno, "vertex name")
            dst = _ident(dst, lineno, "vertex name")
            for v in (src, dst):
                if v not in vertices:
                    raise ParseError(f"arrow endpoint {v!r} is not a declared vertex", lineno)
            if aid is None:
                while f"a{auto}" in arrow_ids:
                    auto += 1
                aid = f"a{auto}"
            else:
                aid = _ident(aid, lineno, "arrow name")
                if aid in arrow_ids:
                    raise ParseError(f"arrow {aid!r} declared twice", lineno)
            arrow_ids.add(aid)
            arrows.append(Arrow(aid, src, dst))
            continue
        word = line.split()[0]
        raise ParseError(f"expected 'vertex' or 'arrow', got {word!r}", lineno, raw.find(word) + 1)
    return QuiverSetting(vertices, arrows, vertices)


def parse_file(path) -> QuiverSetting:
    with open(path, encoding="utf-8") as fh:
        return parse_setting(fh.read())


def serialize_setting(setting: QuiverSetting) -> str:
    """Canonical .qv text; parse(serialize(s)) == s, ids preserved."""
    lines = []
    for v in setting.vertices:
        if not _IDENT.match(v):
            raise ParseError(f"vertex name {v!r} is not serializable")
        d = setting.dim(v)
        lines.append(f"vertex {v}" if d == 1 else f"vertex {v} dim {d}")
    for a in setting.arrows:
        if not _IDENT.match(a.id):
            raise ParseError(f"arrow id {a.id!r} is not serializable")
        lines.append(f"arrow {a.id}: {a.source} -> {a.target}")
    return "\n".join(lines) + "\n"


def to_dot(setting: QuiverSetting, name: str = "Q") -> str:
    """DOT digraph; vertices labeled name:dim, parallel arrows drawn individually."""
    lines = [f"digraph {name} {{"]
    for v in setting.vertices:
        lines.append(f'  "{v}" [label="{v}:{setting.dim(v)}"];')
    for a in setting.arrows:
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{a.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def setting_to_json(setting: QuiverSetting) -> dict:
    """Stable-ordered plain-dict form for JSON output."""
    return {
        "vertices": [{"name": v, "dim": setting.dim(v)} for v in setting.vertices],
        "arrows": [
            {"id": a.id, "src": a.source, "dst": a.target} for a in setting.arrows
        ],
    }
