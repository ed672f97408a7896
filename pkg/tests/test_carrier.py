import itertools
import random
import time

import pytest

from vkt.bracket import TooLarge, bracket_state_sum
from vkt.carrier import (carrying_surface, genus, knot_class_mod2, obstruction_test, state_homology,
                         surface_bracket)
from vkt.diagram import Diagram, DomainMismatch, faces, relabel, smooth_count
from vkt.laurent import D

from conftest import CLASSICAL, CLASSICAL_CODES, CORPUS, D_

VT = "O1+O2+U1+U2+"


def test_genus_examples(kishino):
    assert genus(D_("O1+U2+O3+U1+O2+U3+")) == 0
    assert genus(D_(VT)) == 1
    assert genus(kishino) == 2
    assert genus(Diagram.unknot()) == 0


@pytest.mark.parametrize("d", CORPUS)
def test_genus_formula(d):
    s = carrying_surface(d)
    b = len(faces(d)) if d.n else 2
    assert 2 * s.genus == 2 + d.n - b - (d.free_loops and 0)
    assert s.genus >= 0


@pytest.mark.parametrize("d", [x for x in CORPUS if x.n <= 10][:80])
def test_standard_form(d):
    s = carrying_surface(d)
    g = s.genus
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for k in range(g):
        J[2 * k][2 * k + 1], J[2 * k + 1][2 * k] = 1, -1
    assert s.intersection_form == J
    # basis cycles classify to unit vectors
    for i, f in enumerate(s.basis_flows()):
        assert s.classify(f) == tuple(int(j == i) for j in range(2 * g))


@pytest.mark.parametrize("d", [x for x in CORPUS if x.n <= 8][:60])
def test_state_classes(d):
    surf = carrying_surface(d)
    for bits in itertools.islice(itertools.product("ab", repeat=d.n), 32):
        sc = state_homology(d, "".join(bits), surf)
        assert len(sc.classes) + sc.trivial == smooth_count(d, "".join(bits))
        # every edge is covered once, so the curve classes add up to the knot class mod 2
        total = [sum(c[i] for c in sc.classes) % 2 for i in range(2 * surf.genus)]
        assert tuple(total) == knot_class_mod2(d, surf)


def test_genus_zero_states_trivial():
    d = D_("O1+U2+O3-U4-O2+U1+O4-U3-")
    for bits in itertools.product("ab", repeat=d.n):
        assert state_homology(d, "".join(bits)).classes == ()


def test_virtual_trefoil_states():
    sc = state_homology(D_(VT), "aa")
    assert any(any(c) for c in sc.classes)
    with pytest.raises(DomainMismatch):
        state_homology(D_(VT), "aaa")


@pytest.mark.parametrize("d", [D_(VT)] + [x for x in CORPUS if 2 <= x.n <= 6][:20])
def test_class_negation(d):
    """Tracing a state curve backwards negates its class; the orientation-free key is unchanged."""
    from vkt.carrier import walk_flow
    from vkt.diagram import state_loops
    surf = carrying_surface(d)
    for walk in state_loops(d, "ab" * (d.n // 2) + "a" * (d.n % 2)):
        fwd = [(walk[i], walk[i + 1]) for i in range(0, len(walk), 2)]
        back = [(q, p) for p, q in reversed(fwd)]
        c = surf.classify(walk_flow(d.n, fwd))
        assert surf.classify(walk_flow(d.n, back)) == tuple(-v for v in c)


def test_surface_bracket_genus_zero():
    for code in CLASSICAL_CODES:
        d = D_(code)
        sb = surface_bracket(d)
        assert list(sb.groups) == [()]
        assert sb.groups[()] == D * bracket_state_sum(d)


def test_surface_bracket_kishino(kishino):
    sb = surface_bracket(kishino)
    assert sum(1 for k in sb.groups if k) >= 2


def test_surface_bracket_relabel(kishino):
    """Class coordinates depend on the chosen basis; the grouping of states does not."""
    def shape(sb):
        return sorted((len(k), str(v)) for k, v in sb.groups.items())
    perm = [3, 1, 0, 2]
    assert shape(surface_bracket(kishino)) == shape(surface_bracket(relabel(kishino, perm)))


def test_guard():
    from vkt.diagram import random_diagram
    with pytest.raises(TooLarge):
        surface_bracket(random_diagram(26, 1))


def test_virtual_trefoil_certificate():
    r = obstruction_test(D_(VT))
    assert r.genus == 1 and r.certified
    js = r.to_json()
    assert js["result"] == "certificate" and len(js["handles"]) == 1


def test_kishino_certificate(kishino):
    r = obstruction_test(kishino)
    assert r.genus == 2 and r.certified and len(r.witnesses) == 2
    for w in r.witnesses:
        k = w.handle
        assert w.class_i[2 * k] * w.class_j[2 * k + 1] - w.class_i[2 * k + 1] * w.class_j[2 * k] == w.determinant != 0


@pytest.mark.parametrize("i", range(len(CLASSICAL)))
def test_classical_inconclusive(i):
    d = CLASSICAL[i]
    t = time.perf_counter()
    r = obstruction_test(d)
    assert r.genus == 0 and not r.certified
    assert r.to_json()["result"] == "inconclusive"
    assert time.perf_counter() - t < 30


@pytest.mark.parametrize("d", [x for x in CORPUS if x.n <= 10])
def test_never_certify_genus_zero(d):
    r = obstruction_test(d)
    if r.genus == 0:
        assert not r.certified


@pytest.mark.parametrize("name", ["k_d", "k_m"])
def test_transcribed_certificates(name):
    from vkt import builtins
    b = builtins.load(name)
    for t in range(3):
        r = obstruction_test(builtins.family_member(b.diagram(), b.sites, t))
        assert r.genus == 2 and r.certified
