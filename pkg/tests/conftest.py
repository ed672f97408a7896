import random

import pytest

from vkt.codec import parse_gauss, realize
from vkt.diagram import components, random_diagram


def corpus(count=200, max_n=12, seed=1234):
    """Seeded random knot diagrams with 0..max_n crossings."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(0, max_n)
        out.append(random_diagram(n, rng.randrange(10**9)))
    return out


CORPUS = corpus()

CLASSICAL_CODES = [
    "",
    "O1+U1+",
    "O1-U1-",
    "O1+U2+O3+U1+O2+U3+",
    "O1-U2-O3-U1-O2-U3-",
    "O1+U2+O3-U4-O2+U1+O4-U3-",  # figure eight
    "O1+U2+O3+U4+O5+U1+O2+U3+O4+U5+",  # cinquefoil
]


def D_(code):
    return realize(parse_gauss(code))


@pytest.fixture(scope="session")
def kishino():
    from vkt import builtins
    return builtins.diagram("kishino")


def braid_closure(word, strands):
    """Diagram of the closed braid; ``word`` holds ``(i, e)`` for generator sigma_i^e (0-based i)."""
    from vkt.diagram import Diagram
    pos = list(range(strands))
    passes = {j: [] for j in range(strands)}
    for x, (i, e) in enumerate(word):
        a, b = pos[i], pos[i + 1]
        passes[a].append((x, e > 0, e))
        passes[b].append((x, e < 0, e))
        pos[i], pos[i + 1] = b, a
    nxt = {pos[p]: p for p in range(strands)}
    seen, comps = set(), []
    for j in range(strands):
        if j in seen:
            continue
        comp, c = [], j
        while c not in seen:
            seen.add(c)
            comp += passes[c]
            c = nxt[c]
        comps.append(comp)
    return Diagram.from_passes(comps)


def classical_corpus(count=40, max_n=16, seed=99):
    """Closed braids that close to knots: planar diagrams with up to ``max_n`` crossings."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = rng.randint(2, 5)
        word = [(rng.randrange(k - 1), rng.choice((1, -1))) for _ in range(rng.randint(1, max_n))]
        d = braid_closure(word, k)
        if components(d)[0] == 1:
            out.append(d)
    return out


CLASSICAL = classical_corpus()
