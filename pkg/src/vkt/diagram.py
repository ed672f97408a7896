"""Wired virtual knot diagrams.

A diagram is a set of signed classical crossings whose ports are paired into
edges.  Crossing ``x`` owns ports ``4x .. 4x+3`` listed counterclockwise:

* port 0: under-strand, incoming
* port 2: under-strand, outgoing
* port 1: over-strand, outgoing for a positive crossing, incoming for a negative one
* port 3: the other over-strand end

With the under-strand pointing up, a positive crossing has its over-strand
running left to right (the usual right-handed crossing).  Virtual crossings
are not stored: any pairing of ports is a legal virtual diagram, and the
counterclockwise port order fixes the carrying surface.  Crossingless loops are
counted in ``free_loops``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DiagramError(ValueError):
    pass


class DomainMismatch(DiagramError):
    pass


class InvalidSite(DiagramError):
    pass


class PatternNotFound(DiagramError):
    pass


ALPHA = "a"
BETA = "b"
# smoothing arcs, as pairs of local port indices
ALPHA_PAIRS = ((0, 1), (2, 3))
BETA_PAIRS = ((1, 2), (3, 0))


def over_in_slot(sign: int) -> int:
    return 3 if sign > 0 else 1


def over_out_slot(sign: int) -> int:
    return 1 if sign > 0 else 3


@dataclass(frozen=True)
class Diagram:
    signs: tuple[int, ...]
    nbr: tuple[int, ...]
    free_loops: int = 0
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.signs)
        if len(self.nbr) != 4 * n:
            raise DiagramError("port table has the wrong length")
        for p, q in enumerate(self.nbr):
            if q == p or not 0 <= q < 4 * n or self.nbr[q] != p:
                raise DiagramError(f"port {p} is not paired into an edge")
            if self.is_in(p) == self.is_in(q):
                raise DiagramError(f"edge {p}-{q} does not join an outgoing end to an incoming end")
        if any(s not in (1, -1) for s in self.signs):
            raise DiagramError("crossing signs must be +1 or -1")
        if n == 0 and self.free_loops < 1:
            raise DiagramError("a diagram needs at least one component")

    # -- construction -------------------------------------------------------------
    @classmethod
    def unknot(cls, loops: int = 1) -> "Diagram":
        return cls((), (), loops)

    @classmethod
    def from_passes(cls, comps: Sequence[Sequence[tuple[int, bool, int]]], name=None) -> "Diagram":
        """Build from per-component pass lists ``(crossing id, over?, sign)``.

        Crossing ids must be exactly ``0..n-1`` and each must occur once over and
        once under.
        """
        signs: dict[int, int] = {}
        kinds: dict[int, list[bool]] = {}
        for comp in comps:
            for x, over, sign in comp:
                kinds.setdefault(x, []).append(over)
                if signs.setdefault(x, sign) != sign:
                    raise DiagramError(f"crossing {x} has inconsistent signs")
        n = len(signs)
        if sorted(signs) != list(range(n)):
            raise DiagramError("crossing ids must be 0..n-1")
        for x, k in kinds.items():
            if sorted(k) != [False, True]:
                raise DiagramError(f"crossing {x} must be passed once over and once under")
        nbr = [-1] * (4 * n)
        free = 0
        for comp in comps:
            if not comp:
                free += 1
                continue
            m = len(comp)
            for j in range(m):
                x, over, sign = comp[j]
                y, over2, sign2 = comp[(j + 1) % m]
                out_p = 4 * x + (over_out_slot(sign) if over else 2)
                in_p = 4 * y + (over_in_slot(sign2) if over2 else 0)
                nbr[out_p] = in_p
                nbr[in_p] = out_p
        return cls(tuple(signs[i] for i in range(n)), tuple(nbr), free, name)

    def renamed(self, name: str | None) -> "Diagram":
        return Diagram(self.signs, self.nbr, self.free_loops, name)

    # -- port helpers --------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.signs)

    def is_in(self, p: int) -> bool:
        k = p & 3
        if k == 0:
            return True
        if k == 2:
            return False
        return k == over_in_slot(self.signs[p >> 2])

    @staticmethod
    def is_over(p: int) -> bool:
        return p & 1 == 1

    @staticmethod
    def through(p: int) -> int:
        """Port on the other side of the crossing along the same strand."""
        return (p & ~3) | ((p + 2) & 3)

    def out_ports(self) -> list[int]:
        return [p for p in range(4 * self.n) if not self.is_in(p)]

    # -- traversal ---------------------------------------------------------------------
    def passes(self) -> list[list[tuple[int, bool, int]]]:
        """Per-component pass lists, each started at its smallest incoming port.

        Crossingless loops are appended as empty lists.
        """
        seen = set()
        comps = []
        for start in range(4 * self.n):
            if start in seen or not self.is_in(start):
                continue
            comp = []
            p = start
            while True:
                seen.add(p)
                x = p >> 2
                comp.append((x, self.is_over(p), self.signs[x]))
                p = self.nbr[self.through(p)]
                if p == start:
                    break
            comps.append(comp)
        comps.extend([] for _ in range(self.free_loops))
        return comps

    def pass_ports(self) -> list[list[int]]:
        """Per-component lists of the incoming port of each pass (no free loops)."""
        seen = set()
        comps = []
        for start in range(4 * self.n):
            if start in seen or not self.is_in(start):
                continue
            comp = []
            p = start
            while True:
                seen.add(p)
                comp.append(p)
                p = self.nbr[self.through(p)]
                if p == start:
                    break
            comps.append(comp)
        return comps


@dataclass(frozen=True)
class StateAssignment:
    """Smoothing choice per crossing: ``choice[x]`` is ``"a"`` (alpha) or ``"b"`` (beta)."""

    choice: str

    def __post_init__(self):
        if set(self.choice) - {ALPHA, BETA}:
            raise ValueError("state choices must be 'a' or 'b'")

    @classmethod
    def from_bits(cls, bits: int, n: int) -> "StateAssignment":
        return cls("".join(BETA if bits >> i & 1 else ALPHA for i in range(n)))

    def c(self) -> int:
        """Number of alpha smoothings minus number of beta smoothings."""
        return self.choice.count(ALPHA) - self.choice.count(BETA)

    def __len__(self):
        return len(self.choice)


@dataclass(frozen=True)
class TwistSite:
    """Two edges, named by their outgoing ports, that get twisted around each other.

    In the twist region the strand of ``first`` enters at the bottom left going
    up.  The strand of ``second`` runs on its right, upward as well unless
    ``antiparallel`` is set, in which case it runs downward.

    By default each strand keeps its own continuation, so an odd number of
    twists carries an implicit virtual crossing.  With ``planar`` the region is
    a planar twisted band: an odd count swaps the ends, and the segment running
    from ``first`` to ``second`` is traversed backwards.  That needs an
    antiparallel pair on one component.
    """

    first: int
    second: int
    antiparallel: bool = False
    planar: bool = False


def components(d: Diagram) -> tuple[int, list[int]]:
    """Component count and, per crossing port, the component label.

    Labels are ordered by the smallest port of each component; crossingless
    loops are counted but own no ports.
    """
    label = [-1] * (4 * d.n)
    count = 0
    for start in range(4 * d.n):
        if label[start] >= 0:
            continue
        p = start
        while label[p] < 0:
            label[p] = count
            label[d.through(p)] = count
            p = d.nbr[d.through(p)]
        count += 1
    return count + d.free_loops, label


def writhe(d: Diagram) -> int:
    return sum(d.signs)


def _state_choice(d: Diagram, s) -> str:
    if isinstance(s, StateAssignment):
        s = s.choice
    if isinstance(s, dict):
        if set(s) != set(range(d.n)):
            raise DomainMismatch("state does not cover exactly the diagram's crossings")
        s = "".join(s[i] for i in range(d.n))
    if len(s) != d.n:
        raise DomainMismatch(f"state has {len(s)} choices for {d.n} crossings")
    return s


def smoothing_partner(d: Diagram, choice: str) -> list[int]:
    part = [0] * (4 * d.n)
    for x, c in enumerate(choice):
        pairs = ALPHA_PAIRS if c == ALPHA else BETA_PAIRS
        for i, j in pairs:
            part[4 * x + i] = 4 * x + j
            part[4 * x + j] = 4 * x + i
    return part


def state_loops(d: Diagram, s) -> list[list[int]]:
    """Closed curves of a state, each as the port sequence it visits.

    A curve enters a crossing at a port, leaves through the smoothing partner,
    and follows the edge to the next port.  Crossingless loops are not listed.
    """
    choice = _state_choice(d, s)
    part = smoothing_partner(d, choice)
    seen = [False] * (4 * d.n)
    loops = []
    for start in range(4 * d.n):
        if seen[start]:
            continue
        walk = []
        p = start
        while not seen[p]:
            q = part[p]
            seen[p] = seen[q] = True
            walk.append(p)
            walk.append(q)
            p = d.nbr[q]
        loops.append(walk)
    return loops


def smooth_count(d: Diagram, s) -> int:
    """Number of closed curves |s| after smoothing every crossing per ``s``."""
    return len(state_loops(d, s)) + d.free_loops


def mirror(d: Diagram) -> Diagram:
    """Swap over and under at every crossing (crossing signs flip)."""
    comps = [[(x, not over, -sign) for x, over, sign in comp] for comp in d.passes()]
    return Diagram.from_passes(comps, name=d.name)


def reverse(d: Diagram) -> Diagram:
    """Reverse the orientation of every component."""
    comps = [[(x, over, sign) for x, over, sign in reversed(comp)] for comp in d.passes()]
    return Diagram.from_passes(comps, name=d.name)


def relabel(d: Diagram, perm: Sequence[int]) -> Diagram:
    """Renumber crossing ``x`` as ``perm[x]``."""
    comps = [[(perm[x], over, sign) for x, over, sign in comp] for comp in d.passes()]
    return Diagram.from_passes(comps, name=d.name)


def disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    off = d1.n
    comps = [c for c in d1.passes() if c]
    comps += [[(x + off, o, s) for x, o, s in c] for c in d2.passes() if c]
    comps += [[] for _ in range(d1.free_loops + d2.free_loops)]
    return Diagram.from_passes(comps)


# -- unoriented rebuild ---------------------------------------------------------------

def _orient(nbr: list[int], free_loops: int, keep_dir: dict[int, bool] | None = None,
            name=None) -> Diagram:
    """Orient an unoriented wiring and normalise every crossing to the port convention.

    Crossing ``x`` has geometric ports ``4x..4x+3`` counterclockwise with its
    over-strand on slots 1 and 3.  ``keep_dir`` maps some ports to True when the
    strand should leave the crossing there; each component follows the first
    such hint it meets.
    """
    n = len(nbr) // 4
    through = Diagram.through
    is_out: list = [None] * (4 * n)
    for start in range(4 * n):
        if is_out[start] is not None:
            continue
        seq = []
        p = start
        while True:
            seq.append(p)
            p = nbr[through(p)]
            if p == start:
                break
        flip = False
        if keep_dir:
            for p in seq:
                if p in keep_dir:
                    flip = keep_dir[p]
                    break
                if through(p) in keep_dir:
                    flip = not keep_dir[through(p)]
                    break
        for p in seq:
            is_out[p] = flip
            is_out[through(p)] = not flip
    signs = []
    rot = []
    for x in range(n):
        r = 2 if is_out[4 * x] else 0
        rot.append(r)
        signs.append(1 if is_out[4 * x + (1 + r) % 4] else -1)
    new_nbr = [0] * (4 * n)

    def newp(p):
        x = p >> 2
        return 4 * x + (((p & 3) - rot[x]) % 4)

    for p in range(4 * n):
        new_nbr[newp(p)] = newp(nbr[p])
    return Diagram(tuple(signs), tuple(new_nbr), free_loops, name)


def _splice(d: Diagram, removed: set[int], inner: dict[int, int]) -> tuple[list[int], int, dict[int, int]]:
    """Delete crossings, joining their ports through ``inner`` arcs.

    Returns (nbr over the surviving crossings renumbered densely, extra free
    loops, old-crossing -> new-crossing map).
    """
    keep = [x for x in range(d.n) if x not in removed]
    remap = {x: i for i, x in enumerate(keep)}
    nbr = [0] * (4 * len(keep))
    used = set()
    for x in keep:
        for k in range(4):
            p = 4 * x + k
            q = d.nbr[p]
            while (q >> 2) in removed:
                used.add(q)
                q2 = inner[q]
                used.add(q2)
                q = d.nbr[q2]
            nbr[4 * remap[x] + k] = 4 * remap[q >> 2] + (q & 3)
    # closed curves made only of removed ports
    loops = 0
    for x in removed:
        for k in range(4):
            p = 4 * x + k
            if p in used:
                continue
            q = p
            while q not in used:
                used.add(q)
                q2 = inner[q]
                used.add(q2)
                q = d.nbr[q2]
            loops += 1
    return nbr, loops, remap


def smooth_crossing(d: Diagram, x: int, kind: str) -> Diagram:
    """Replace crossing ``x`` by its alpha or beta smoothing."""
    pairs = ALPHA_PAIRS if kind == ALPHA else BETA_PAIRS
    inner = {}
    for i, j in pairs:
        inner[4 * x + i] = 4 * x + j
        inner[4 * x + j] = 4 * x + i
    nbr, loops, remap = _splice(d, {x}, inner)
    keep_dir = {}
    for y, ny in remap.items():
        for k in range(4):
            keep_dir[4 * ny + k] = not d.is_in(4 * y + k)
    return _orient(nbr, d.free_loops + loops, keep_dir)


# -- cabling --------------------------------------------------------------------------

def cable(d: Diagram, N: int) -> Diagram:
    """Blackboard-framed N-cable: every crossing becomes an N x N grid.

    Copies are numbered from the left of each oriented strand.  Grid cell
    ``(col, row)`` (1-based, columns left to right and rows bottom to top with
    the under-strand pointing up) crosses under-copy ``col`` with an over-copy.
    """
    if N < 1:
        raise ValueError("cable needs N >= 1")
    if N == 1:
        return d
    n = d.n

    def cell(x, col, row):
        return (x * N + (col - 1)) * N + (row - 1)

    signs = []
    for x in range(n):
        signs.extend([d.signs[x]] * (N * N))
    nbr = [0] * (4 * n * N * N)

    def join(p, q):
        nbr[p] = q
        nbr[q] = p

    for x in range(n):
        for col in range(1, N + 1):
            for row in range(1, N + 1):
                c = cell(x, col, row)
                if row < N:
                    join(4 * c + 2, 4 * cell(x, col, row + 1) + 0)
                if col < N:
                    join(4 * c + 1, 4 * cell(x, col + 1, row) + 3)

    def copy_port(p, k):
        x, slot = p >> 2, p & 3
        pos = d.signs[x] > 0
        if slot == 0:
            return 4 * cell(x, k, 1) + 0
        if slot == 2:
            return 4 * cell(x, k, N) + 2
        row = N + 1 - k if pos else k
        if slot == 3:
            return 4 * cell(x, 1, row) + 3
        return 4 * cell(x, N, row) + 1

    for p in range(4 * n):
        q = d.nbr[p]
        if p < q:
            for k in range(1, N + 1):
                join(copy_port(p, k), copy_port(q, k))
    name = f"{d.name}^({N})" if d.name else None
    return Diagram(tuple(signs), tuple(nbr), d.free_loops * N, name)


# -- twists --------------------------------------------------------------------------

def _edge_position(comps_ports: list[list[int]], d: Diagram, out_port: int) -> tuple[int, int]:
    """(component, pass index) of the pass that leaves through ``out_port``."""
    in_port = d.through(out_port)
    for ci, comp in enumerate(comps_ports):
        for j, p in enumerate(comp):
            if p == in_port:
                return ci, j
    raise InvalidSite(f"port {out_port} is not an outgoing port of the diagram")


def insert_twists(d: Diagram, site: TwistSite, t: int) -> Diagram:
    """Insert ``|t|`` crossings twisting the two site edges around each other.

    Every new crossing has sign ``+1`` when ``t > 0`` and ``-1`` when ``t < 0``.
    New crossings get ids ``n .. n+|t|-1`` in order along the first strand.
    """
    for e in (site.first, site.second):
        if not 0 <= e < 4 * d.n or d.is_in(e):
            raise InvalidSite(f"{e} is not an outgoing port")
    if site.first == site.second:
        raise InvalidSite("twist site needs two distinct edges")
    if t == 0:
        return d
    h = abs(t)
    sign = 1 if t > 0 else -1
    hand = sign * (-1 if site.antiparallel else 1)
    comps_ports = d.pass_ports()
    comps = [[(p >> 2, d.is_over(p), d.signs[p >> 2]) for p in comp] for comp in comps_ports]
    n = d.n
    strand1 = []
    strand2 = []
    for k in range(1, h + 1):
        first_over = (hand > 0) == (k % 2 == 1)
        strand1.append((n + k - 1, first_over, sign))
        strand2.append((n + k - 1, not first_over, sign))
    if site.antiparallel:
        strand2.reverse()
    c1, j1 = _edge_position(comps_ports, d, site.first)
    c2, j2 = _edge_position(comps_ports, d, site.second)
    inserts: dict[tuple[int, int], list] = {(c1, j1): strand1}
    inserts.setdefault((c2, j2), [])
    inserts[(c2, j2)] = inserts[(c2, j2)] + strand2
    if site.planar and h % 2:
        if not site.antiparallel or c1 != c2:
            raise InvalidSite("an odd planar twist needs an antiparallel pair on one component")
        return Diagram.from_passes(_planar_odd(comps, c1, j1, j2, strand1, strand2) +
                                   [[] for _ in range(d.free_loops)], name=d.name)
    new_comps = []
    for ci, comp in enumerate(comps):
        out = []
        for j, ps in enumerate(comp):
            out.append(ps)
            out.extend(inserts.get((ci, j), []))
        new_comps.append(out)
    new_comps.extend([] for _ in range(d.free_loops))
    return Diagram.from_passes(new_comps, name=d.name)


def _planar_odd(comps, c, j1, j2, strand1, strand2):
    """Reconnect through an odd twisted band: strand1, the segment reversed, strand2, the rest."""
    comp = comps[c]
    m = len(comp)
    seq = comp[j1 + 1:] + comp[:j1 + 1]
    k2 = (j2 - j1 - 1) % m
    seg, rest = seq[:k2 + 1], seq[k2 + 1:]
    inside = {}
    for x, _, _ in seg:
        inside[x] = inside.get(x, 0) + 1
    # reversing the segment flips every crossing it shares with the rest of the diagram
    flip = {x for x, k in inside.items() if k == 1}

    def fix(ps):
        x, over, sign = ps
        return (x, over, -sign if x in flip else sign)

    out = [[fix(ps) for ps in cp] for ci, cp in enumerate(comps) if ci != c]
    out.insert(c, strand1 + [fix(ps) for ps in reversed(seg)] + strand2 + [fix(ps) for ps in rest])
    return out


# -- Reidemeister moves ---------------------------------------------------------------

MOVES = ("RI-add", "RI-remove", "RII-add", "RII-remove", "RIII")


def _pass_table(d: Diagram):
    comps_ports = d.pass_ports()
    comps = [[(p >> 2, d.is_over(p), d.signs[p >> 2]) for p in comp] for comp in comps_ports]
    return comps_ports, comps


def _rebuild(comps, free_loops: int, drop: Iterable[int] = (), name=None) -> Diagram:
    drop = set(drop)
    ids = sorted({x for comp in comps for x, _, _ in comp} - drop)
    remap = {x: i for i, x in enumerate(ids)}
    out = []
    for comp in comps:
        kept = [(remap[x], o, s) for x, o, s in comp if x not in drop]
        out.append(kept)
    out.extend([] for _ in range(free_loops))
    return Diagram.from_passes(out, name=name)


def _insert_at(d: Diagram, edge, items: list) -> tuple[list, int]:
    """Pass lists with ``items`` inserted along ``edge``.

    ``edge`` is an outgoing port, or ``("loop", i)`` for the i-th crossingless loop.
    """
    comps_ports, comps = _pass_table(d)
    free = d.free_loops
    if isinstance(edge, tuple) and edge[0] == "loop":
        if not 0 <= edge[1] < d.free_loops:
            raise PatternNotFound("no such crossingless loop")
        comps.append(list(items))
        return comps, free - 1
    c, j = _edge_position(comps_ports, d, edge)
    comps[c] = comps[c][: j + 1] + list(items) + comps[c][j + 1:]
    return comps, free


def ri_add(d: Diagram, edge, sign: int = 1, over_first: bool = True) -> Diagram:
    x = d.n
    items = [(x, True, sign), (x, False, sign)] if over_first else [(x, False, sign), (x, True, sign)]
    comps, free = _insert_at(d, edge, items)
    comps.extend([] for _ in range(free))
    return Diagram.from_passes(comps, name=d.name)


def ri_sites(d: Diagram) -> list[int]:
    """Crossings removable by RI: the two passes are consecutive along the curve."""
    out = []
    for x in range(d.n):
        for k in range(4):
            p = 4 * x + k
            q = d.nbr[p]
            if q >> 2 == x and q != d.through(p) and (q - p) % 2 == 1 and p < q:
                out.append(x)
                break
    return sorted(set(out))


def ri_remove(d: Diagram, x: int) -> Diagram:
    if x not in ri_sites(d):
        raise PatternNotFound(f"crossing {x} is not a curl")
    comps_ports, comps = _pass_table(d)
    return _rebuild(comps, d.free_loops, drop=[x], name=d.name)


def rii_add(d: Diagram, over_edge, under_edge, sign: int = 1, antiparallel: bool = False) -> Diagram:
    """Push the strand of ``under_edge`` under the strand of ``over_edge``.

    The first new crossing met along the over strand has sign ``sign``.
    """
    if over_edge == under_edge:
        raise PatternNotFound("RII needs two distinct edges")
    a, b = d.n, d.n + 1
    top = [(a, True, sign), (b, True, -sign)]
    bottom = [(a, False, sign), (b, False, -sign)]
    if antiparallel:
        bottom.reverse()
    comps_ports, comps = _pass_table(d)
    free = d.free_loops
    inserts = {}
    loop_items = []
    for edge, items in ((over_edge, top), (under_edge, bottom)):
        if isinstance(edge, tuple) and edge[0] == "loop":
            loop_items.append(items)
            continue
        pos = _edge_position(comps_ports, d, edge)
        inserts[pos] = items
    if len(loop_items) == 2:
        raise PatternNotFound("RII between two crossingless loops is not supported")
    new = []
    for ci, comp in enumerate(comps):
        out = []
        for j, ps in enumerate(comp):
            out.append(ps)
            out.extend(inserts.get((ci, j), []))
        new.append(out)
    for items in loop_items:
        new.append(items)
        free -= 1
    new.extend([] for _ in range(free))
    return Diagram.from_passes(new, name=d.name)


def rii_sites(d: Diagram) -> list[tuple[int, int]]:
    """Crossing pairs forming an RII clasp (opposite signs, over passes adjacent,
    under passes adjacent)."""
    out = []
    for x in range(d.n):
        for y in range(x + 1, d.n):
            if d.signs[x] == d.signs[y]:
                continue
            if _adjacent(d, x, y, over=True) and _adjacent(d, x, y, over=False):
                out.append((x, y))
    return out


def _adjacent(d: Diagram, x: int, y: int, over: bool) -> bool:
    for a, b in ((x, y), (y, x)):
        out_slot = over_out_slot(d.signs[a]) if over else 2
        in_slot = over_in_slot(d.signs[b]) if over else 0
        if d.nbr[4 * a + out_slot] == 4 * b + in_slot:
            return True
    return False


def rii_remove(d: Diagram, x: int, y: int) -> Diagram:
    if (min(x, y), max(x, y)) not in rii_sites(d):
        raise PatternNotFound(f"crossings {x},{y} do not form an RII clasp")
    comps_ports, comps = _pass_table(d)
    return _rebuild(comps, d.free_loops, drop=[x, y], name=d.name)


def faces(d: Diagram) -> list[list[int]]:
    """Boundary cycles of the ribbon surface, as port sequences.

    From port ``p`` the boundary runs along the edge to ``q = nbr[p]`` and then
    turns to the next port counterclockwise at ``q``'s crossing.
    """
    seen = set()
    out = []
    for start in range(4 * d.n):
        if start in seen:
            continue
        cyc = []
        p = start
        while p not in seen:
            seen.add(p)
            cyc.append(p)
            q = d.nbr[p]
            p = (q & ~3) | ((q + 1) & 3)
        out.append(cyc)
    return out


def riii_sites(d: Diagram) -> list[tuple[int, int, int]]:
    """Triangular faces on three distinct crossings with one strand over at both
    of its crossings and one strand under at both."""
    out = []
    for f in faces(d):
        if len(f) != 3:
            continue
        xs = [p >> 2 for p in f]
        if len(set(xs)) != 3:
            continue
        kinds = []
        for p in f:
            q = d.nbr[p]
            kinds.append((d.is_over(p), d.is_over(q)))
        if (True, True) in kinds and (False, False) in kinds:
            out.append(tuple(sorted(xs)))
    return sorted(set(out))


def riii(d: Diagram, x: int, y: int, z: int) -> Diagram:
    """Slide one strand of a triangle across the opposite crossing."""
    target = tuple(sorted((x, y, z)))
    tri = None
    for f in faces(d):
        if len(f) == 3 and tuple(sorted(p >> 2 for p in f)) == target:
            kinds = [(d.is_over(p), d.is_over(d.nbr[p])) for p in f]
            if (True, True) in kinds and (False, False) in kinds:
                tri = f
                break
    if tri is None:
        raise PatternNotFound(f"crossings {target} do not bound an RIII triangle")
    comps_ports, comps = _pass_table(d)
    where = {}
    for ci, comp in enumerate(comps_ports):
        for j, p in enumerate(comp):
            where[p] = (ci, j)
    for p in tri:
        q = d.nbr[p]
        # the edge p-q joins two consecutive passes; swap them
        out_p, in_q = (p, q) if not d.is_in(p) else (q, p)
        c1, j1 = where[d.through(out_p)]
        c2, j2 = where[in_q]
        if c1 != c2 or (j1 + 1) % len(comps[c1]) != j2:
            raise PatternNotFound("triangle edge does not join consecutive passes")
        comps[c1][j1], comps[c1][j2] = comps[c1][j2], comps[c1][j1]
    return _rebuild(comps, d.free_loops, name=d.name)


def apply_move(d: Diagram, move: str, **loc) -> Diagram:
    """Apply one Reidemeister move.

    ``RI-add``: edge, sign, over_first.  ``RI-remove``: crossing.
    ``RII-add``: over_edge, under_edge, sign, antiparallel.  ``RII-remove``:
    crossings (pair).  ``RIII``: crossings (triple).
    """
    if move == "RI-add":
        edge = loc.get("edge")
        if edge is None:
            edge = ("loop", 0) if d.n == 0 else d.out_ports()[0]
        return ri_add(d, edge, loc.get("sign", 1), loc.get("over_first", True))
    if move == "RI-remove":
        return ri_remove(d, loc["crossing"])
    if move == "RII-add":
        return rii_add(d, loc["over_edge"], loc["under_edge"], loc.get("sign", 1), loc.get("antiparallel", False))
    if move == "RII-remove":
        return rii_remove(d, *loc["crossings"])
    if move == "RIII":
        return riii(d, *loc["crossings"])
    raise ValueError(f"unknown move {move!r}")


def random_move(d: Diagram, rng: random.Random, kinds: Sequence[str] = ("RII-add", "RII-remove", "RIII")):
    """Pick and apply a random legal move; returns (move, location, new diagram)."""
    options = []
    if "RIII" in kinds:
        options += [("RIII", {"crossings": s}) for s in riii_sites(d)]
    if "RII-remove" in kinds:
        options += [("RII-remove", {"crossings": s}) for s in rii_sites(d)]
    if "RI-remove" in kinds:
        options += [("RI-remove", {"crossing": x}) for x in ri_sites(d)]
    edges = d.out_ports() or []
    edge_choices = edges + [("loop", i) for i in range(d.free_loops)]
    if "RII-add" in kinds and (len(edges) >= 2 or (edges and d.free_loops)):
        # favour edges that share a face, which tends to create triangles
        fs = [f for f in faces(d) if len(f) >= 2]
        if fs and rng.random() < 0.7:
            f = rng.choice(fs)
            ends = [p if not d.is_in(p) else d.nbr[p] for p in f]
            e1, e2 = rng.sample(ends, 2) if len(set(ends)) >= 2 else (None, None)
        else:
            e1, e2 = rng.sample(edges, 2) if len(edges) >= 2 else (edges[0], ("loop", 0))
        if e1 is not None and e1 != e2:
            options.append(("RII-add", {"over_edge": e1, "under_edge": e2,
                                        "sign": rng.choice((1, -1)), "antiparallel": rng.random() < 0.5}))
    if "RI-add" in kinds and edge_choices:
        options.append(("RI-add", {"edge": rng.choice(edge_choices), "sign": rng.choice((1, -1)),
                                   "over_first": rng.random() < 0.5}))
    if not options:
        return None
    move, loc = rng.choice(options)
    return move, loc, apply_move(d, move, **loc)


def random_diagram(n: int, seed: int) -> Diagram:
    """Deterministic random single-component diagram with ``n`` crossings."""
    rng = random.Random(seed)
    if n == 0:
        return Diagram.unknot()
    slots = list(range(2 * n))
    rng.shuffle(slots)
    owner = [0] * (2 * n)
    for i in range(n):
        owner[slots[2 * i]] = i
        owner[slots[2 * i + 1]] = i
    # number crossings by first appearance
    order: dict[int, int] = {}
    for o in owner:
        order.setdefault(o, len(order))
    signs = [rng.choice((1, -1)) for _ in range(n)]
    first_over = [rng.random() < 0.5 for _ in range(n)]
    seen = set()
    comp = []
    for o in owner:
        x = order[o]
        over = first_over[x] if x not in seen else not first_over[x]
        seen.add(x)
        comp.append((x, over, signs[x]))
    return Diagram.from_passes([comp])
