import math
import random

import pytest

from vkt.bracket import TooLarge
from vkt.diagram import Diagram, apply_move, random_diagram, random_move
from vkt.wirtinger import (FiniteGroupSpec, GroupPresentation, abelianization, builtin_group, count_homs,
                           cyclic_group, format_presentation, infinite_cyclic_counts, invariant_factors,
                           is_homomorphism, parse_presentation, presentation, recursion_presentation,
                           reduce_word, relation_matrix, simplify, symmetric_group)

from conftest import CLASSICAL_CODES, CORPUS, D_

S3 = symmetric_group(3)
S4 = symmetric_group(4)
Z = GroupPresentation(("a",))


def test_unknot_and_kink():
    p = presentation(Diagram.unknot())
    assert len(p.generators) == 1 and p.relators == ()
    assert abelianization(p) == [0]
    k = simplify(presentation(D_("O1+U1+")))
    assert len(k.generators) == 1 and k.relators == ()


@pytest.mark.parametrize("d", CORPUS[:40])
def test_counts(d):
    p = presentation(d)
    if d.n:
        assert len(p.generators) == 2 * d.n
        assert len(p.relators) == 2 * d.n


def test_text_round_trip():
    p = presentation(D_("O1+U2+O3+U1+O2+U3+"))
    text = format_presentation(p)
    assert parse_presentation(text) == p
    q = parse_presentation("<a,g | a^-1.g.a.g^-1.a^-1.g>")
    assert q.generators == ("a", "g") and len(q.relators[0]) == 6
    assert str(Z) == "⟨a | ⟩"
    with pytest.raises(ValueError):
        parse_presentation("⟨a | b⟩")


def test_undeclared_generator():
    with pytest.raises(ValueError):
        GroupPresentation(("a",), (((1, 1),),))


def test_abelianization_examples():
    assert abelianization(Z) == [0]
    # a^-1 g a (g^-1 a g)^-1 has a-exponent -1 and g-exponent +1, so the group is Z
    q = parse_presentation("⟨a,g | a^-1.g.a.g^-1.a^-1.g⟩")
    assert relation_matrix(q) == [[-1, 1]]
    assert abelianization(q) == [0]
    assert abelianization(presentation(D_("O1+U2+O3+U1+O2+U3+"))) == [0]
    assert abelianization(parse_presentation("⟨a,b | a.a, b.b.b⟩")) == [6]
    assert abelianization(parse_presentation("⟨a,b | a.a, b.b⟩")) == [2, 2]
    assert abelianization(parse_presentation("⟨a,b | ⟩")) == [0, 0]


@pytest.mark.parametrize("d", CORPUS)
def test_knots_abelianize_to_z(d):
    assert abelianization(presentation(d)) == [0]


def test_snf_against_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form
    rng = random.Random(3)
    for _ in range(60):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        ours = sorted(abs(x) for x in invariant_factors(m, c) if x)
        snf = smith_normal_form(sympy.Matrix(m), domain=sympy.ZZ)
        theirs = sorted(abs(int(snf[i, i])) for i in range(min(r, c)) if snf[i, i] != 0)
        assert ours == theirs


def test_group_tables():
    assert S3.order == 6 and S4.order == 24 and cyclic_group(5).order == 5
    assert builtin_group("S3").order == 6 and builtin_group("Z7").order == 7
    with pytest.raises(ValueError):
        FiniteGroupSpec("bad", ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        builtin_group("A5")


def test_hom_examples():
    assert count_homs(Z, S3).as_tuple() == (6, 0)
    assert infinite_cyclic_counts(S3).as_tuple() == (6, 0)
    tref = presentation(D_("O1+U2+O3+U1+O2+U3+"))
    assert count_homs(tref, S3).as_tuple() == (12, 6)
    assert count_homs(tref, S4).as_tuple() == (96, 72)


def test_trefoil_brute_force():
    """Independent count over the three Wirtinger generators of the standard diagram."""
    p = parse_presentation("⟨x,y,z | x.y.x^-1.z^-1, y.z.y^-1.x^-1, z.x.z^-1.y^-1⟩")
    n = 0
    for a in range(6):
        for b in range(6):
            for c in range(6):
                n += is_homomorphism(p, S3, (a, b, c))
    assert n == count_homs(p, S3, simplify_first=False).total == 12


def test_kd_witness():
    p = recursion_presentation(0)
    a, g = S3.index("(1 2)"), S3.index("(1 3)")
    assert is_homomorphism(p, S3, (a, g))
    assert count_homs(p, S3).nonabelian >= 1


def test_recursion_counts():
    for t in range(4):
        p = recursion_presentation(t)
        assert abelianization(p) == [0]
        assert count_homs(p, S3).as_tuple() == (12, 6)
    with pytest.raises(ValueError):
        recursion_presentation(-1)


def test_too_large():
    p = GroupPresentation(tuple(f"g{i}" for i in range(9)))
    with pytest.raises(TooLarge):
        count_homs(p, S3)
    with pytest.raises(TooLarge):
        count_homs(Z, cyclic_group(25))


def _random_presentation(rng):
    k = rng.randint(1, 4)
    rels = []
    for _ in range(rng.randint(0, 4)):
        w = [(rng.randrange(k), rng.choice((1, -1))) for _ in range(rng.randint(1, 6))]
        rels.append(reduce_word(w))
    return GroupPresentation(tuple(f"g{i}" for i in range(k)), tuple(rels))


@pytest.mark.parametrize("seed", range(50))
def test_tietze_sound(seed):
    rng = random.Random(seed)
    p = _random_presentation(rng)
    for G in (S3, cyclic_group(4)):
        assert count_homs(p, G, simplify_first=False) == count_homs(simplify(p), G, simplify_first=False)
    assert abelianization(p) == abelianization(simplify(p))


@pytest.mark.parametrize("seed", range(12))
def test_move_invariance(seed):
    rng = random.Random(seed)
    d = random_diagram(rng.randint(2, 5), seed)
    ref = count_homs(presentation(d), S3)
    kinds = ("RI-add", "RI-remove", "RII-add", "RII-remove", "RIII")
    for _ in range(6):
        step = random_move(d, rng, kinds)
        if step is None:
            break
        d = step[2]
        assert count_homs(presentation(d), S3) == ref


@pytest.mark.parametrize("d", [x for x in CORPUS if x.n <= 6][:30])
def test_cyclic_counts_match_abelianization(d):
    p = presentation(d)
    ab = abelianization(p)
    for k in (2, 3, 5):
        expect = 1
        for f in ab:
            expect *= k if f == 0 else math.gcd(k, f)
        assert count_homs(p, cyclic_group(k)).total == expect


def test_kishino_group(kishino):
    p = presentation(kishino)
    assert abelianization(p) == [0]
    assert count_homs(p, S3) == infinite_cyclic_counts(S3)
    assert count_homs(p, S4) == infinite_cyclic_counts(S4)


def _member(name, t):
    from vkt import builtins
    b = builtins.load(name)
    return builtins.family_member(b.diagram(), b.sites, t)


def test_kd_group_matches_closed_form():
    for t in range(4):
        p = presentation(_member("k_d", t))
        assert abelianization(p) == [0]
        assert count_homs(p, S3) == count_homs(recursion_presentation(t), S3)
    assert count_homs(presentation(_member("k_d", 0)), S4) == count_homs(recursion_presentation(0), S4)


def test_km_group_is_z():
    for t in range(4):
        p = presentation(_member("k_m", t))
        assert abelianization(p) == [0]
        for G in (S3, S4, cyclic_group(6)):
            assert count_homs(p, G) == infinite_cyclic_counts(G)
