import itertools
import random

import pytest

from vkt.bracket import bracket_state_sum
from vkt.codec import code_of, parse_gauss, realize
from vkt.diagram import (Diagram, InvalidSite, PatternNotFound, StateAssignment, TwistSite, apply_move,
                         cable, components, insert_twists, mirror, random_diagram, relabel, reverse,
                         ri_sites, rii_sites, riii_sites, smooth_count, writhe)
from vkt.laurent import LaurentPoly

from conftest import CORPUS, D_


def test_components_and_writhe():
    assert components(D_("O1+U2+U1+/O2+"))[0] == 2
    assert writhe(D_("O1+U2+O3+U1+O2+U3+")) == 3
    assert writhe(D_("O1-U2-O3-U1-O2-U3-")) == -3
    assert components(Diagram.unknot(3))[0] == 3


def test_smooth_count_kink():
    d = D_("O1+U1+")
    assert sorted(smooth_count(d, StateAssignment(c)) for c in "ab") == [1, 2]


def test_state_assignment_validation():
    with pytest.raises(ValueError):
        StateAssignment("ax")
    assert StateAssignment.from_bits(0b10, 2).choice == "ab"
    assert StateAssignment("aab").c() == 1


@pytest.mark.parametrize("d", CORPUS[:60])
@pytest.mark.parametrize("N", [1, 2, 3])
def test_cable_counts(d, N):
    c = cable(d, N)
    assert c.n == N * N * d.n
    assert components(c)[0] == N * components(d)[0]


def test_cable_examples():
    assert components(cable(Diagram.unknot(), 3))[0] == 3
    k = cable(D_("O1+U1+"), 2)
    assert k.n == 4 and components(k)[0] == 2
    assert cable(D_("O1+O2+U1+U2+"), 3).n == 18
    d = D_("O1+U2+O3+U1+O2+U3+")
    assert code_of(cable(d, 1)) == code_of(d)


def test_insert_twists():
    d = D_("O1+U2+O3+U1+O2+U3+")
    e1, e2 = d.out_ports()[:2]
    assert insert_twists(d, TwistSite(e1, e2), 0) is d
    for t in (-3, -1, 2, 4):
        assert insert_twists(d, TwistSite(e1, e2), t).n == d.n + abs(t)
    with pytest.raises(InvalidSite):
        insert_twists(d, TwistSite(e1, e1), 1)
    with pytest.raises(InvalidSite):
        insert_twists(d, TwistSite(d.nbr[e1], e2), 1)


def test_opposite_twists_cancel():
    """t twists then -t twists on the same pair of edges form RII clasps."""
    for seed in range(10):
        d = random_diagram(4, seed)
        outs = d.out_ports()
        rng = random.Random(seed)
        e1, e2 = rng.sample(outs, 2)
        for anti in (False, True):
            site = TwistSite(e1, e2, anti)
            once = insert_twists(d, site, 1)
            both = insert_twists(once, TwistSite(*_follow(once, d, site), anti), -1)
            assert bracket_state_sum(both) == bracket_state_sum(d)


def _follow(new, old, site):
    """Out-ports in ``new`` of the edges that now follow the inserted crossing at ``site``."""
    n_old = old.n
    x = n_old  # the single new crossing
    outs = [p for p in range(4 * x, 4 * x + 4) if not new.is_in(p)]
    # order: first strand's exit, then second strand's exit
    first_in = new.nbr[site.first]
    a = new.through(first_in) if first_in >> 2 == x else None
    b = [p for p in outs if p != a][0]
    return a, b


def test_ri_add_on_empty():
    d = apply_move(Diagram.unknot(), "RI-add")
    assert code_of(d) in ("O1+U1+", "U1+O1+", "O1-U1-", "U1-O1-")


def test_rii_round_trip():
    d = D_("O1+U2+O3+U1+O2+U3+")
    e1, e2 = d.out_ports()[0], d.out_ports()[3]
    added = apply_move(d, "RII-add", over_edge=e1, under_edge=e2, sign=1)
    assert added.n == d.n + 2
    sites = [s for s in rii_sites(added) if min(s) >= d.n]
    assert sites
    back = apply_move(added, "RII-remove", crossings=sites[0])
    assert code_of(back) == code_of(d)


def test_pattern_not_found():
    d = D_("O1+U2+O3+U1+O2+U3+")
    with pytest.raises(PatternNotFound):
        apply_move(d, "RII-remove", crossings=(0, 1))
    with pytest.raises(PatternNotFound):
        apply_move(d, "RI-remove", crossing=0)


def test_moves_preserve_bracket():
    rng = random.Random(7)
    from vkt.diagram import random_move
    checked = {"RII-add": 0, "RII-remove": 0, "RIII": 0, "RI-add": 0, "RI-remove": 0}
    for seed in range(30):
        d = random_diagram(rng.randint(2, 6), seed)
        ref = bracket_state_sum(d)
        for _ in range(12):
            step = random_move(d, rng, tuple(checked))
            if step is None:
                break
            move, _, nd = step
            if nd.n > 16:
                break
            got = bracket_state_sum(nd)
            if move.startswith("RI-"):
                w = writhe(nd) - writhe(d)
                assert got == LaurentPoly.monomial(3 * w, -1 if w % 2 else 1) * ref
            else:
                assert got == ref
            checked[move] += 1
            d, ref = nd, got
    assert all(v > 0 for v in checked.values()), checked


def test_random_diagram():
    assert random_diagram(0, 5).n == 0
    assert code_of(random_diagram(6, 42)) == code_of(random_diagram(6, 42))
    d = random_diagram(5, 3)
    assert d.n == 5 and components(d)[0] == 1


@pytest.mark.parametrize("d", CORPUS[:40])
def test_smooth_count_independent_of_labels(d):
    rng = random.Random(d.n)
    perm = list(range(d.n))
    rng.shuffle(perm)
    e = relabel(d, perm)
    for bits in range(min(2 ** d.n, 64)):
        s = StateAssignment.from_bits(bits, d.n).choice
        moved = [""] * d.n
        for x in range(d.n):
            moved[perm[x]] = s[x]
        assert smooth_count(d, s) == smooth_count(e, "".join(moved))


@pytest.mark.parametrize("d", CORPUS[:40])
def test_mirror_reverse(d):
    if d.n > 10:
        return
    b = bracket_state_sum(d)
    assert bracket_state_sum(mirror(d)) == b.mirror()
    assert bracket_state_sum(reverse(d)) == b


def test_planar_twists():
    d = D_("O1+U2+O3+U1+O2+U3+")
    ports = d.pass_ports()[0]
    e1, e2 = d.through(ports[0]), d.through(ports[3])
    with pytest.raises(InvalidSite):
        insert_twists(d, TwistSite(e1, e2, antiparallel=False, planar=True), 1)
    link = D_("O1+U2+/U1+O2+")
    a, b = link.through(link.pass_ports()[0][0]), link.through(link.pass_ports()[1][0])
    with pytest.raises(InvalidSite):
        insert_twists(link, TwistSite(a, b, antiparallel=True, planar=True), 1)
    for t in (-3, -1, 1, 2, 3):
        k = insert_twists(d, TwistSite(e1, e2, antiparallel=True, planar=True), t)
        assert k.n == d.n + abs(t) and components(k)[0] == 1
    even_p = insert_twists(d, TwistSite(e1, e2, True, True), 2)
    even = insert_twists(d, TwistSite(e1, e2, True, False), 2)
    assert code_of(even_p) == code_of(even)


def test_planar_twists_keep_planarity():
    """Adding full twists to a planar band never changes the genus; some band stays planar."""
    from vkt.carrier import genus
    d = D_("O1+U2+O3+U1+O2+U3+")
    ports = d.pass_ports()[0]
    planar_found = False
    for i, j in itertools.combinations(range(len(ports)), 2):
        site = TwistSite(d.through(ports[i]), d.through(ports[j]), True, True)
        gs = {genus(insert_twists(d, site, t)) for t in (-1, 1, 3)}
        assert len(gs) == 1
        planar_found = planar_found or gs == {0}
    assert planar_found
