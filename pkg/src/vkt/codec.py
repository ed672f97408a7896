"""Signed Gauss codes: parsing, canonical emission, and realization as wired diagrams.

A Gauss code lists, per component, the crossing passes met while travelling
along the oriented curve, e.g. ``O1+U2+O3-U1+O2+U3-``.  Components are separated
by ``/``; an empty component is a crossingless loop.  Virtual crossings are
never recorded.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from .diagram import Diagram


class CodecError(ValueError):
    """Base class for Gauss-code input errors."""


class MalformedToken(CodecError):
    pass


class UnbalancedCrossing(CodecError):
    pass


class SignMismatch(CodecError):
    pass


@dataclass(frozen=True)
class Pass:
    label: str
    over: bool
    sign: int

    def token(self) -> str:
        return f"{'O' if self.over else 'U'}{self.label}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class GaussCode:
    components: tuple[tuple[Pass, ...], ...]

    @property
    def labels(self) -> list[str]:
        seen: dict[str, None] = {}
        for comp in self.components:
            for p in comp:
                seen.setdefault(p.label, None)
        return list(seen)

    @property
    def crossing_count(self) -> int:
        return sum(len(c) for c in self.components) // 2

    def __str__(self):
        return emit_gauss(self)


_TOKEN = re.compile(r"([OUou])([0-9]+|[A-Za-z_][A-Za-z0-9_]*?)([+-])")


def _validate(components: Sequence[Sequence[Pass]]) -> None:
    seen: dict[str, list[Pass]] = {}
    for comp in components:
        for p in comp:
            seen.setdefault(p.label, []).append(p)
    for label, passes in seen.items():
        kinds = sorted(p.over for p in passes)
        if kinds != [False, True]:
            raise UnbalancedCrossing(
                f"crossing {label!r} must appear once as O and once as U, got "
                + " ".join(p.token() for p in passes)
            )
        if passes[0].sign != passes[1].sign:
            raise SignMismatch(f"crossing {label!r} has passes with different signs")


def parse_gauss(text: str) -> GaussCode:
    """Parse a token stream like ``"O1+U2+O3-U1+O2+U3-"``.

    Whitespace and commas are ignored; ``/`` separates components.
    """
    if not text.strip():
        return GaussCode(((),))
    components = []
    for chunk_no, chunk in enumerate(text.split("/")):
        body = re.sub(r"[\s,]", "", chunk)
        passes = []
        pos = 0
        while pos < len(body):
            m = _TOKEN.match(body, pos)
            if not m:
                raise MalformedToken(
                    f"bad token in component {chunk_no} at offset {pos}: {body[pos:pos + 8]!r}"
                )
            passes.append(Pass(m.group(2), m.group(1).upper() == "O", 1 if m.group(3) == "+" else -1))
            pos = m.end()
        components.append(tuple(passes))
    _validate(components)
    return canonical(GaussCode(tuple(components)))


def canonical(code: GaussCode) -> GaussCode:
    """Renumber labels 1..n in order of first appearance."""
    mapping = {lab: str(i + 1) for i, lab in enumerate(code.labels)}
    return GaussCode(tuple(
        tuple(Pass(mapping[p.label], p.over, p.sign) for p in comp) for comp in code.components
    ))


def emit_gauss(code: GaussCode) -> str:
    code = canonical(code)
    return "/".join("".join(p.token() for p in comp) for comp in code.components)


def realize(code: GaussCode, name: str | None = None) -> Diagram:
    """Wire a diagram whose crossings, signs, and traversal order match ``code``.

    Crossing ids follow the order of first appearance of the labels.
    """
    ids = {lab: i for i, lab in enumerate(code.labels)}
    comps = [[(ids[p.label], p.over, p.sign) for p in comp] for comp in code.components]
    return Diagram.from_passes(comps, name=name)


def to_gauss(d: Diagram) -> GaussCode:
    comps = d.passes()
    return GaussCode(tuple(
        tuple(Pass(str(x + 1), over, sign) for x, over, sign in comp) for comp in comps
    ))


def code_of(d: Diagram) -> str:
    return emit_gauss(to_gauss(d))


# -- diagram JSON ------------------------------------------------------------------

def diagram_to_json(d: Diagram) -> str:
    code = canonical(to_gauss(d))
    obj: dict = {
        "components": [
            [{"x": p.label, "pass": "O" if p.over else "U", "sign": "+" if p.sign > 0 else "-"} for p in comp]
            for comp in code.components
        ]
    }
    if d.name is not None:
        obj["name"] = d.name
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def diagram_from_json(text: str | dict) -> Diagram:
    obj = json.loads(text) if isinstance(text, str) else text
    comps = []
    for comp in obj["components"]:
        passes = []
        for tok in comp:
            if tok.get("pass") not in ("O", "U") or tok.get("sign") not in ("+", "-"):
                raise MalformedToken(f"bad pass record {tok!r}")
            passes.append(Pass(str(tok["x"]), tok["pass"] == "O", 1 if tok["sign"] == "+" else -1))
        comps.append(tuple(passes))
    _validate(comps)
    return realize(GaussCode(tuple(comps)), name=obj.get("name"))
