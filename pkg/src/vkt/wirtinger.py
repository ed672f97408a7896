"""Fundamental-group presentations of virtual knot diagrams and finite-quotient tests.

Generators are the edges of the diagram (strand pieces between consecutive
classical crossings; virtual crossings do not cut them).  Each crossing
contributes a conjugation relator for the under-strand and a length-two
relator identifying the two edges of the over-strand, so a knot diagram with
``n`` crossings has ``2n`` generators.  Words are tuples of ``(generator,
exponent)`` pairs with exponent ``+1`` or ``-1``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bracket import TooLarge
from .diagram import Diagram, InvalidSite, TwistSite, insert_twists

Word = tuple[tuple[int, int], ...]

MAX_HOM_GENERATORS = 8
MAX_GROUP_ORDER = 24


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        k = len(self.generators)
        for w in self.relators:
            for g, e in w:
                if not 0 <= g < k:
                    raise ValueError(f"relator references undeclared generator {g}")
                if e not in (1, -1):
                    raise ValueError("word exponents must be +1 or -1")

    def __str__(self):
        return format_presentation(self)


# -- words ------------------------------------------------------------------------

def reduce_word(w: Iterable[tuple[int, int]]) -> Word:
    out: list[tuple[int, int]] = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(w: Word) -> Word:
    w = reduce_word(w)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return w


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def format_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    return ".".join(names[g] if e == 1 else f"{names[g]}^-1" for g, e in w)


def format_presentation(p: GroupPresentation) -> str:
    rels = ", ".join(format_word(w, p.generators) for w in p.relators)
    return f"⟨{','.join(p.generators)} | {rels}⟩"


_PRES = re.compile(r"^\s*[⟨<]\s*(.*?)\s*\|\s*(.*?)\s*[⟩>]\s*$", re.S)


def parse_presentation(text: str) -> GroupPresentation:
    """Inverse of :func:`format_presentation`; ``<a,b | a.b.a^-1.b^-1>`` also works."""
    m = _PRES.match(text)
    if not m:
        raise ValueError(f"not a presentation: {text!r}")
    names = [s.strip() for s in m.group(1).split(",") if s.strip()]
    index = {nm: i for i, nm in enumerate(names)}
    relators = []
    for chunk in m.group(2).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        word = []
        if chunk != "1":
            for letter in chunk.split("."):
                letter = letter.strip()
                nm, _, exp = letter.partition("^")
                if nm not in index:
                    raise ValueError(f"undeclared generator {nm!r}")
                e = int(exp) if exp else 1
                word.extend([(index[nm], 1 if e > 0 else -1)] * abs(e))
        relators.append(tuple(word))
    return GroupPresentation(tuple(names), tuple(relators))


# -- presentation from a diagram --------------------------------------------------------

def presentation(d: Diagram) -> GroupPresentation:
    """Edge-generated Wirtinger presentation.

    With ``a``/``c`` the under-strand edges entering/leaving a crossing and
    ``b`` the over-strand edge entering it, a positive crossing gives
    ``c = b^-1 a b`` and a negative one ``c = b a b^-1``.
    """
    gens = [f"a{i + 1}" for i in range(2 * d.n + d.free_loops)]
    if d.n == 0:
        return GroupPresentation(tuple(gens) if gens else ("a1",))
    # edge index by out-port, numbered along each component
    edge_of = {}
    for comp in d.pass_ports():
        for p in comp:
            edge_of[d.through(p)] = len(edge_of)
    in_edge = {}
    for out_p, e in edge_of.items():
        in_edge[d.nbr[out_p]] = e
    relators = []
    for x in range(d.n):
        ports = [4 * x + k for k in range(4)]
        u_in, u_out = in_edge[ports[0]], edge_of[ports[2]]
        o_in_port = next(p for p in (ports[1], ports[3]) if d.is_in(p))
        o_in, o_out = in_edge[o_in_port], edge_of[d.through(o_in_port)]
        b = o_in
        if d.signs[x] > 0:
            rel = ((u_out, -1), (b, -1), (u_in, 1), (b, 1))
        else:
            rel = ((u_out, -1), (b, 1), (u_in, 1), (b, -1))
        relators.append(rel)
    for x in range(d.n):
        ports = [4 * x + k for k in range(4)]
        o_in_port = next(p for p in (ports[1], ports[3]) if d.is_in(p))
        relators.append(((edge_of[d.through(o_in_port)], -1), (in_edge[o_in_port], 1)))
    return GroupPresentation(tuple(gens), tuple(relators))


def family_presentation(base: Diagram, site: TwistSite, t: int) -> GroupPresentation:
    """Presentation of the twisted diagram ``insert_twists(base, site, t)``."""
    if t == 0:
        return presentation(base)
    return presentation(insert_twists(base, site, t))


def recursion_presentation(t: int) -> GroupPresentation:
    """Closed-form two-generator group of the twist family built on ``<a, g>``.

    ``x_0 = g``, ``y_0 = a``; at odd steps ``y_t = y^-1 x y``, at even steps
    ``y_t = y x y^-1`` (with ``x, y`` the previous pair), and ``x_t = y_(t-1)``.
    The single relator is ``a^-1 x_t a = g^-1 y_t g``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    a, g = ((0, 1),), ((1, 1),)
    x, y = g, a
    for k in range(1, t + 1):
        if k % 2:
            x, y = y, reduce_word(inverse(y) + x + y)
        else:
            x, y = y, reduce_word(y + x + inverse(y))
    lhs = inverse(a) + x + a
    rhs = ((1, -1),) + y + g
    return GroupPresentation(("a", "g"), (reduce_word(lhs + inverse(rhs)),))


# -- abelianization ----------------------------------------------------------------------

def relation_matrix(p: GroupPresentation) -> list[list[int]]:
    rows = []
    for w in p.relators:
        row = [0] * len(p.generators)
        for g, e in w:
            row[g] += e
        rows.append(row)
    return rows


def invariant_factors(mat: list[list[int]], ncols: int) -> list[int]:
    """Diagonal of the Smith normal form (nonzero entries, ascending divisibility)."""
    m = [list(r) for r in mat if any(r)]
    diag = []
    while m and any(any(r) for r in m):
        rows, cols = len(m), ncols
        # pivot: smallest nonzero absolute value
        pi, pj = min(((i, j) for i in range(rows) for j in range(cols) if m[i][j]),
                     key=lambda ij: abs(m[ij[0]][ij[1]]))
        m[0], m[pi] = m[pi], m[0]
        for r in m:
            r[0], r[pj] = r[pj], r[0]
        done = False
        while not done:
            done = True
            piv = m[0][0]
            for i in range(1, rows):
                q = m[i][0] // piv
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[0])]
                if m[i][0]:
                    done = False
            for j in range(1, cols):
                q = m[0][j] // piv
                if q:
                    for r in m:
                        r[j] -= q * r[0]
                if m[0][j]:
                    done = False
            if not done:
                # move a smaller remainder into the pivot slot
                cand = [(abs(m[i][0]), i, 0) for i in range(1, rows) if m[i][0]]
                cand += [(abs(m[0][j]), 0, j) for j in range(1, cols) if m[0][j]]
                _, i, j = min(cand)
                if i:
                    m[0], m[i] = m[i], m[0]
                else:
                    for r in m:
                        r[0], r[j] = r[j], r[0]
                continue
            # divisibility: fold in any entry the pivot does not divide
            bad = next(((i, j) for i in range(1, rows) for j in range(1, cols) if m[i][j] % piv), None)
            if bad:
                i, _ = bad
                m[0] = [a + b for a, b in zip(m[0], m[i])]
                done = False
        diag.append(abs(m[0][0]))
        m = [r[1:] for r in m[1:]]
        ncols -= 1
        m = [r for r in m if any(r)]
    return diag


def abelianization(p: GroupPresentation) -> list[int]:
    """Invariant factors of the abelianized group: torsion orders > 1, then a 0 per free summand."""
    k = len(p.generators)
    diag = invariant_factors(relation_matrix(p), k)
    torsion = sorted(x for x in diag if x > 1)
    return torsion + [0] * (k - len(diag))


# -- simplification ----------------------------------------------------------------------

def simplify(p: GroupPresentation, max_len: int = 60) -> GroupPresentation:
    """Tietze reduction: drop trivial relators and eliminate a generator from any
    relator in which it occurs exactly once, shortest relators first.

    The resulting group is isomorphic, so hom counts are unchanged.
    """
    gens = list(range(len(p.generators)))
    rels = [cyclic_reduce(w) for w in p.relators]
    while True:
        rels = [w for w in rels if w]
        rels = list(dict.fromkeys(rels))
        best = None
        for ri, w in enumerate(rels):
            counts: dict[int, int] = {}
            for g, _ in w:
                counts[g] = counts.get(g, 0) + 1
            for g, c in counts.items():
                if c == 1 and (best is None or len(w) < best[0]):
                    best = (len(w), ri, g)
        if best is None:
            break
        _, ri, g = best
        w = rels[ri]
        pos = next(i for i, (h, _) in enumerate(w) if h == g)
        e = w[pos][1]
        # w = u g^e v  =>  g^e = u^-1 v^-1
        value = reduce_word(inverse(w[:pos]) + inverse(w[pos + 1:]))
        if e == -1:
            value = inverse(value)
        others = rels[:ri] + rels[ri + 1:]
        new = []
        for r in others:
            out = []
            for h, f in r:
                if h == g:
                    out.extend(value if f == 1 else inverse(value))
                else:
                    out.append((h, f))
            new.append(cyclic_reduce(tuple(out)))
        if any(len(r) > max_len for r in new):
            # skip this elimination if it blows up; try to stop cleanly
            break
        rels = new
        gens.remove(g)
    index = {g: i for i, g in enumerate(gens)}
    names = tuple(p.generators[g] for g in gens)
    words = tuple(tuple((index[h], f) for h, f in w) for w in rels)
    return GroupPresentation(names, words)


# -- finite groups -----------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteGroupSpec:
    """A finite group by its multiplication table; element 0 need not be the identity."""

    name: str
    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = field(default=())
    identity: int = field(init=False)
    inverses: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.table)
        if n == 0 or any(len(r) != n for r in self.table):
            raise ValueError("table must be square and non-empty")
        if any(not 0 <= v < n for r in self.table for v in r):
            raise ValueError("table is not closed")
        ident = [e for e in range(n) if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n))]
        if len(ident) != 1:
            raise ValueError("table has no identity")
        e = ident[0]
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if self.table[x][y] == e and self.table[y][x] == e]
            if len(ys) != 1:
                raise ValueError(f"element {x} has no inverse")
            inv.append(ys[0])
        # associativity: exhaustive at this size
        t = self.table
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = ta[b]
                tb = t[b]
                for c in range(n):
                    if t[tab][c] != ta[tb[c]]:
                        raise ValueError("table is not associative")
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverses", tuple(inv))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def index(self, label: str) -> int:
        return self.labels.index(label)


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen = set()
    cycles = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        cycles.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(cycles) or "()"


def symmetric_group(k: int) -> FiniteGroupSpec:
    """S_k; the product ``p*q`` applies ``q`` first.  Labels are cycle notation."""
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(index[tuple(p[q[i]] for i in range(k))] for q in perms) for p in perms)
    return FiniteGroupSpec(f"S{k}", table, tuple(_cycle_label(p) for p in perms))


def cyclic_group(k: int) -> FiniteGroupSpec:
    if k < 1:
        raise ValueError("cyclic group order must be positive")
    table = tuple(tuple((a + b) % k for b in range(k)) for a in range(k))
    return FiniteGroupSpec(f"Z{k}", table, tuple(str(a) for a in range(k)))


def builtin_group(name: str) -> FiniteGroupSpec:
    m = re.fullmatch(r"([SZ])(\d+)", name.strip().upper())
    if not m:
        raise ValueError(f"unknown group {name!r}; use S3, S4 or Zk")
    k = int(m.group(2))
    if m.group(1) == "S":
        if k not in (3, 4):
            raise ValueError("built-in symmetric groups are S3 and S4")
        return symmetric_group(k)
    return cyclic_group(k)


# -- hom counting ------------------------------------------------------------------------

@dataclass(frozen=True)
class HomCount:
    total: int
    nonabelian: int

    def as_tuple(self) -> tuple[int, int]:
        return self.total, self.nonabelian


def _eval(word, assign, G: FiniteGroupSpec) -> int:
    t = G.table
    inv = G.inverses
    v = G.identity
    for g, e in word:
        x = assign[g]
        v = t[v][x if e == 1 else inv[x]]
    return v


def iter_homs(p: GroupPresentation, G: FiniteGroupSpec):
    """Yield every homomorphism as a tuple of generator images."""
    k = len(p.generators)
    rels = [w for w in p.relators if w]
    assign: list[int | None] = [None] * k
    order = sorted(range(k), key=lambda g: -sum(1 for w in rels for h, _ in w if h == g))

    def solve_forced():
        """Find a relator with a single unknown occurring once; return (gen, value) or None."""
        for w in rels:
            unknown = [i for i, (h, _) in enumerate(w) if assign[h] is None]
            if len(unknown) == 1:
                i = unknown[0]
                g, e = w[i]
                pre = _eval(w[:i], assign, G)
                post = _eval(w[i + 1:], assign, G)
                # pre * x^e * post = 1  =>  x^e = pre^-1 post^-1
                val = G.table[G.inverses[pre]][G.inverses[post]]
                return g, (val if e == 1 else G.inverses[val])
        return None

    def consistent():
        for w in rels:
            if all(assign[h] is not None for h, _ in w) and _eval(w, assign, G) != G.identity:
                return False
        return True

    def rec():
        if not consistent():
            return
        forced = solve_forced()
        if forced is not None:
            g, val = forced
            assign[g] = val
            yield from rec()
            assign[g] = None
            return
        free = next((g for g in order if assign[g] is None), None)
        if free is None:
            yield tuple(assign)
            return
        for x in range(G.order):
            assign[free] = x
            yield from rec()
        assign[free] = None

    yield from rec()


def _is_abelian_image(images, G: FiniteGroupSpec) -> bool:
    t = G.table
    vals = sorted(set(images))
    for i, a in enumerate(vals):
        for b in vals[i + 1:]:
            if t[a][b] != t[b][a]:
                return False
    return True


def count_homs(p: GroupPresentation, G: FiniteGroupSpec, simplify_first: bool = True) -> HomCount:
    """Exact (total, non-abelian-image) counts of homomorphisms into ``G``."""
    if simplify_first:
        p = simplify(p)
    if len(p.generators) > MAX_HOM_GENERATORS:
        raise TooLarge(f"{len(p.generators)} generators after simplification exceeds {MAX_HOM_GENERATORS}")
    if G.order > MAX_GROUP_ORDER:
        raise TooLarge(f"target group of order {G.order} exceeds {MAX_GROUP_ORDER}")
    total = nonab = 0
    for images in iter_homs(p, G):
        total += 1
        if not _is_abelian_image(images, G):
            nonab += 1
    return HomCount(total, nonab)


def is_homomorphism(p: GroupPresentation, G: FiniteGroupSpec, images: Sequence[int]) -> bool:
    return all(_eval(w, images, G) == G.identity for w in p.relators)


def infinite_cyclic_counts(G: FiniteGroupSpec) -> HomCount:
    """Hom counts of ``⟨a | ⟩`` into G: every element, never a non-abelian image."""
    return HomCount(G.order, 0)


__all__ = [
    "GroupPresentation", "FiniteGroupSpec", "HomCount", "presentation", "family_presentation",
    "recursion_presentation", "abelianization", "invariant_factors", "relation_matrix", "simplify",
    "count_homs", "iter_homs", "is_homomorphism", "symmetric_group", "cyclic_group", "builtin_group",
    "format_presentation", "parse_presentation", "reduce_word", "infinite_cyclic_counts", "InvalidSite",
]
