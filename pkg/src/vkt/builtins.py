"""Built-in diagrams shipped as versioned, checksummed data files."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

from .codec import parse_gauss, realize
from .diagram import Diagram, InvalidSite, TwistSite, insert_twists

NAMES = ("unknot", "kink", "trefoil", "virtual-trefoil", "kishino", "k_d", "k_m")


class ChecksumError(RuntimeError):
    pass


@dataclass(frozen=True)
class SiteRef:
    """A twist site addressed by Gauss-code position: the edge after pass ``index`` of ``component``."""

    first: tuple[int, int]
    second: tuple[int, int]
    antiparallel: bool
    #: twists inserted here are ``scale * t``
    scale: int = 1
    planar: bool = False

    def resolve(self, d: Diagram) -> TwistSite:
        ports = d.pass_ports()
        try:
            a = d.through(ports[self.first[0]][self.first[1]])
            b = d.through(ports[self.second[0]][self.second[1]])
        except IndexError:
            raise InvalidSite(f"site {self} is outside the diagram") from None
        return TwistSite(a, b, self.antiparallel, self.planar)

    def to_json(self) -> dict:
        return {"first": list(self.first), "second": list(self.second),
                "antiparallel": self.antiparallel, "scale": self.scale, "planar": self.planar}

    @classmethod
    def from_json(cls, obj: dict) -> "SiteRef":
        return cls(tuple(obj["first"]), tuple(obj["second"]), bool(obj["antiparallel"]), int(obj.get("scale", 1)),
                   bool(obj.get("planar", False)))


@dataclass(frozen=True)
class Builtin:
    name: str
    version: int
    code: str
    sha256: str
    provenance: str
    status: str
    family: str | None
    sites: tuple[SiteRef, ...]

    def diagram(self) -> Diagram:
        return realize(parse_gauss(self.code), name=self.name)


def checksum(code: str) -> str:
    return hashlib.sha256(code.encode("utf-8")).hexdigest()


def load(name: str) -> Builtin:
    key = name.strip().lower().replace("_", "-")
    fname = {"k-d": "k_d", "k-m": "k_m"}.get(key, key)
    if fname.replace("-", "_") not in {n.replace("-", "_") for n in NAMES}:
        raise KeyError(f"unknown built-in {name!r}; choose from {', '.join(NAMES)}")
    text = resources.files("vkt").joinpath("data").joinpath(f"{fname}.json").read_text(encoding="utf-8")
    obj = json.loads(text)
    code = obj["code"]
    if checksum(code) != obj["sha256"]:
        raise ChecksumError(f"checksum mismatch for built-in {name!r}")
    return Builtin(obj["name"], int(obj["version"]), code, obj["sha256"], obj["provenance"], obj["status"],
                   obj.get("family"), tuple(SiteRef.from_json(s) for s in obj.get("sites", [])))


def diagram(name: str) -> Diagram:
    return load(name).diagram()


def family_member(base: Diagram, sites: tuple[SiteRef, ...] | list[SiteRef], t: int) -> Diagram:
    """Insert ``scale * t`` twists at every site, each site addressed on ``base``."""
    if not sites:
        raise InvalidSite("the base diagram declares no twist site")
    for ref in sites:
        ref.resolve(base)  # validates the addresses
    d = base
    for ref in sites:
        d = insert_twists(d, _shifted(ref, base, d), ref.scale * t)
    return d.renamed(base.name if t == 0 or base.name is None else f"{base.name}({t})")


def _shifted(ref: SiteRef, base: Diagram, cur: Diagram) -> TwistSite:
    """Resolve a site of ``base`` inside ``cur``, which has extra passes inserted after it."""
    if cur is base:
        return ref.resolve(base)
    # crossing ids of base survive in cur; locate the same pass by (crossing, over) identity
    base_passes = base.passes()
    cur_ports = cur.pass_ports()
    cur_passes = cur.passes()

    def port_for(pos):
        c, j = pos
        key = base_passes[c][j][:2]
        for ci, comp in enumerate(cur_passes):
            for jj, ps in enumerate(comp):
                if ps[:2] == key:
                    return cur.through(cur_ports[ci][jj])
        raise InvalidSite("site vanished after twisting")

    return TwistSite(port_for(ref.first), port_for(ref.second), ref.antiparallel, ref.planar)


__all__ = ["NAMES", "Builtin", "SiteRef", "load", "diagram", "family_member", "checksum", "ChecksumError"]
