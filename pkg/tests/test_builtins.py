import json

import pytest

from vkt import builtins
from vkt.builtins import ChecksumError, SiteRef, checksum, family_member
from vkt.carrier import genus
from vkt.diagram import InvalidSite, components


@pytest.mark.parametrize("name", builtins.NAMES)
def test_load_all(name):
    b = builtins.load(name)
    assert b.sha256 == checksum(b.code)
    assert b.version >= 1 and b.provenance
    d = b.diagram()
    assert components(d)[0] == 1


def test_aliases_and_unknown():
    assert builtins.load("K_D").name == builtins.load("k-d").name == "k_d"
    with pytest.raises(KeyError):
        builtins.load("figure-eight-ish")


def test_tampered_checksum(monkeypatch, tmp_path):
    from importlib import resources
    real = resources.files("vkt").joinpath("data").joinpath("kink.json").read_text(encoding="utf-8")
    obj = json.loads(real)
    obj["code"] = "O1-U1-"

    class Fake:
        def joinpath(self, *_):
            return self

        def read_text(self, encoding=None):
            return json.dumps(obj)

    monkeypatch.setattr(builtins.resources, "files", lambda pkg: Fake())
    with pytest.raises(ChecksumError):
        builtins.load("kink")


def test_family_metadata():
    kd, km = builtins.load("k_d"), builtins.load("k_m")
    assert kd.family == "A" and len(kd.sites) == 2
    assert km.family == "B" and len(km.sites) == 1
    assert "transcribed" in kd.status and "transcribed" in km.status
    assert [s.scale for s in kd.sites] == [1, -1]


def test_site_json_round_trip():
    for s in builtins.load("k_d").sites:
        assert SiteRef.from_json(json.loads(json.dumps(s.to_json()))) == s


def test_family_members():
    b = builtins.load("k_d")
    base = b.diagram()
    assert family_member(base, b.sites, 0).n == base.n
    for t in (1, 2, -1):
        d = family_member(base, b.sites, t)
        assert d.n == base.n + 2 * abs(t)
        assert components(d)[0] == 1 and genus(d) == 2
    with pytest.raises(InvalidSite):
        family_member(base, (), 1)
    with pytest.raises(InvalidSite):
        family_member(base, [SiteRef((0, 0), (0, 99), True)], 1)
