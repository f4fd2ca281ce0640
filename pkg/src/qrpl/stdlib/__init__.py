"""Bundled example programs and the oracles they are checked against."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from ..errors import AssetError, ParseError
from ..syntax import nodes as n
from ..syntax.parser import parse


@dataclass(frozen=True)
class StdlibEntry:
    name: str
    source: str
    entry: str
    oracle: dict = field(compare=False)
    anchor: str
    fidelity: str  # "verbatim" or "corrected"
    note: str = ""

    @property
    def text(self) -> str:
        return source_text(self.source)

    def program(self) -> n.Program:
        return parse(self.text)


def _files():
    return resources.files(__name__)


def source_text(filename: str) -> str:
    path = _files() / filename
    if not path.is_file():
        raise AssetError(f"missing stdlib asset {filename}")
    return path.read_text(encoding="utf-8")


def load_stdlib() -> list[StdlibEntry]:
    """Read the manifest and check that every listed program parses."""
    try:
        manifest = json.loads(source_text("manifest.json"))
    except json.JSONDecodeError as exc:
        raise AssetError(f"malformed stdlib manifest: {exc}") from None
    out = []
    for item in manifest.get("entries", []):
        try:
            e = StdlibEntry(**item)
        except TypeError as exc:
            raise AssetError(f"bad manifest entry {item.get('name')}: {exc}") from None
        if e.fidelity not in ("verbatim", "corrected"):
            raise AssetError(f"{e.name}: unknown fidelity {e.fidelity!r}")
        if e.fidelity == "corrected" and not e.note:
            raise AssetError(f"{e.name}: corrected entries need a note")
        try:
            e.program()
        except ParseError as exc:
            raise AssetError(f"{e.name}: {exc}") from None
        out.append(e)
    return out


def get(name: str) -> StdlibEntry:
    for e in load_stdlib():
        if e.name == name:
            return e
    raise KeyError(name)


def load_program(name: str) -> n.Program:
    return get(name).program()
