"""Carrying surfaces of virtual knot diagrams and the cancellation-curve obstruction.

The ribbon surface has one disk per classical crossing, ports in
counterclockwise order, and one untwisted band per edge.  Capping its
boundary circles gives a closed orientable surface ``F``.  Curves on ``F`` are
closed walks through the crossing disks; a walk is a list of passages
``(in_port, out_port)`` at successive crossings.

Intersection numbers use a push-off: the second curve is pushed to its left,
and at every passage it then crosses exactly those half-edges that lie
strictly counterclockwise between its exit and its entry port.  The net
outward flow of the first curve through those half-edges is the local count.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bracket import TooLarge
from .diagram import ALPHA, Diagram, StateAssignment, _state_choice, faces, state_loops
from .laurent import LaurentPoly, d_power

MAX_SURFACE_CROSSINGS = 25

Passage = tuple[int, int]


# -- curves as walks and flows ------------------------------------------------------------

def walk_flow(n: int, walk: list[Passage]) -> list[int]:
    """Outward flow per port of a closed walk (+1 leaving, -1 entering)."""
    f = [0] * (4 * n)
    for p_in, p_out in walk:
        f[p_in] -= 1
        f[p_out] += 1
    return f


def intersection(flow_x: list[int], walk_y: list[Passage]) -> int:
    """Algebraic intersection number ``x . y`` of a cycle (as flow) with a closed walk."""
    total = 0
    for p_in, p_out in walk_y:
        base = p_out & ~3
        k = (p_out + 1) & 3
        stop = p_in & 3
        while k != stop:
            total += flow_x[base | k]
            k = (k + 1) & 3
    return total


def _alt_reduce(M: list[list[int]]) -> tuple[list[list[int]], int]:
    """Congruence-reduce an alternating integer matrix to ``[[0,1],[-1,0]]`` blocks plus zeros.

    Returns the basis matrix ``P`` (columns are the new basis vectors written
    in the old basis) and the number of hyperbolic pairs.  Raises if a block
    with entry other than 1 appears (the form on H1 of a closed surface is
    unimodular, so this signals a tracing bug).
    """
    m = len(M)
    M = [row[:] for row in M]
    P = [[int(i == j) for j in range(m)] for i in range(m)]

    def add(r, s, c):  # e_r += c e_s
        if not c:
            return
        for i in range(m):
            M[i][r] += c * M[i][s]
        for j in range(m):
            M[r][j] += c * M[s][j]
        for i in range(m):
            P[i][r] += c * P[i][s]

    def swap(r, s):
        if r == s:
            return
        M[r], M[s] = M[s], M[r]
        for row in M:
            row[r], row[s] = row[s], row[r]
        for row in P:
            row[r], row[s] = row[s], row[r]

    k = 0
    while True:
        cand = [(abs(M[i][j]), i, j) for i in range(k, m) for j in range(k, m) if M[i][j]]
        if not cand:
            break
        _, i, j = min(cand)
        swap(k, i)
        if j == k:
            j = i
        swap(k + 1, j)
        if M[k][k + 1] < 0:
            for row in P:
                row[k + 1] = -row[k + 1]
            for row in M:
                row[k + 1] = -row[k + 1]
            M[k + 1] = [-v for v in M[k + 1]]
        dval = M[k][k + 1]
        clean = True
        for r in range(k + 2, m):
            # kill M[k][r] using e_{k+1}: M(e_k, e_r - q e_{k+1}) = M[k][r] - q d
            add(r, k + 1, -(M[k][r] // dval))
            # kill M[k+1][r] using e_k: M(e_{k+1}, e_r + q e_k) = M[k+1][r] - q d
            add(r, k, M[k + 1][r] // dval)
            if M[k][r] or M[k + 1][r]:
                clean = False
        if not clean:
            continue  # a smaller entry exists now; restart on this block
        if dval != 1:
            raise ArithmeticError(f"intersection form is not unimodular (block {dval})")
        k += 2
    return P, k // 2


# -- surface ---------------------------------------------------------------------------

@dataclass
class SurfaceData:
    genus: int
    boundary_count: int
    #: fundamental cycles of a spanning forest, as closed walks
    cycles: list[list[Passage]] = field(repr=False)
    #: symplectic basis a_1, b_1, ..., a_g, b_g as coefficient rows over ``cycles``
    basis: list[list[int]] = field(repr=False)
    intersection_form: list[list[int]] = field(repr=False)
    n: int = 0

    def basis_flows(self) -> list[list[int]]:
        flows = [walk_flow(self.n, c) for c in self.cycles]
        out = []
        for row in self.basis:
            f = [0] * (4 * self.n)
            for c, fl in zip(row, flows):
                if c:
                    for i, v in enumerate(fl):
                        f[i] += c * v
            out.append(f)
        return out

    def classify(self, flow: list[int]) -> tuple[int, ...]:
        """Coordinates ``(alpha_1, beta_1, ..., alpha_g, beta_g)`` of a cycle given as flow."""
        against = [intersection(flow, c) for c in self.cycles]
        coords = []
        for k in range(self.genus):
            a_row, b_row = self.basis[2 * k], self.basis[2 * k + 1]
            alpha = sum(c * v for c, v in zip(b_row, against))  # z . b_k
            beta = -sum(c * v for c, v in zip(a_row, against))  # a_k . z
            coords += [alpha, beta]
        return tuple(coords)


def _spanning_cycles(d: Diagram) -> list[list[Passage]]:
    """Fundamental cycles of a BFS spanning forest of the crossing graph."""
    n = d.n
    nbr = d.nbr
    parent_port = [-1] * n  # port at the vertex leading towards its parent
    depth = [-1] * n
    tree_edges = set()
    for root in range(n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        queue = [root]
        while queue:
            v = queue.pop(0)
            for k in range(4):
                p = 4 * v + k
                q = nbr[p]
                w = q >> 2
                if depth[w] < 0:
                    depth[w] = depth[v] + 1
                    parent_port[w] = q
                    tree_edges.add(min(p, q))
                    queue.append(w)
    cycles = []
    for p in range(4 * n):
        q = nbr[p]
        if p > q or p in tree_edges:
            continue
        # directed edges (from_port, to_port): p -> q, then tree path q's vertex -> p's vertex
        u, v = p >> 2, q >> 2
        up_v, up_u = [], []
        a, b = v, u
        while depth[a] > depth[b]:
            up_v.append(a)
            a = nbr[parent_port[a]] >> 2
        while depth[b] > depth[a]:
            up_u.append(b)
            b = nbr[parent_port[b]] >> 2
        while a != b:
            up_v.append(a)
            a = nbr[parent_port[a]] >> 2
            up_u.append(b)
            b = nbr[parent_port[b]] >> 2
        edges = [(p, q)]
        for w in up_v:
            edges.append((parent_port[w], nbr[parent_port[w]]))
        for w in reversed(up_u):
            edges.append((nbr[parent_port[w]], parent_port[w]))
        walk = []
        for i, (_, to) in enumerate(edges):
            nxt_from = edges[(i + 1) % len(edges)][0]
            walk.append((to, nxt_from))
        cycles.append(walk)
    return cycles


def _graph_components(d: Diagram) -> list[int]:
    comp = [-1] * d.n
    c = 0
    for s in range(d.n):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = c
        while stack:
            v = stack.pop()
            for k in range(4):
                w = d.nbr[4 * v + k] >> 2
                if comp[w] < 0:
                    comp[w] = c
                    stack.append(w)
        c += 1
    return comp


def carrying_surface(d: Diagram) -> SurfaceData:
    fc = faces(d)
    comp = _graph_components(d)
    ncomp = max(comp) + 1 if comp else 0
    verts = [0] * ncomp
    bnds = [0] * ncomp
    for x in range(d.n):
        verts[comp[x]] += 1
    for f in fc:
        bnds[comp[f[0] >> 2]] += 1
    genus = 0
    for v, b in zip(verts, bnds):
        twice = 2 + v - b
        if twice % 2 or twice < 0:
            raise ArithmeticError("boundary count inconsistent with an orientable surface")
        genus += twice // 2
    cycles = _spanning_cycles(d)
    flows = [walk_flow(d.n, c) for c in cycles]
    M = [[intersection(fx, cy) for cy in cycles] for fx in flows]
    for i in range(len(M)):
        for j in range(len(M)):
            if M[i][j] != -M[j][i]:
                raise ArithmeticError("intersection matrix is not alternating")
    P, pairs = _alt_reduce(M)
    if pairs != genus:
        raise ArithmeticError(f"symplectic rank {pairs} disagrees with genus {genus}")
    basis = [[P[i][j] for i in range(len(cycles))] for j in range(2 * genus)]
    form = [[sum(bi[r] * M[r][s] * bj[s] for r in range(len(M)) for s in range(len(M)) if bi[r] and bj[s])
             for bj in basis] for bi in basis]
    expect = [[0] * (2 * genus) for _ in range(2 * genus)]
    for k in range(genus):
        expect[2 * k][2 * k + 1] = 1
        expect[2 * k + 1][2 * k] = -1
    if form != expect:
        raise ArithmeticError("reduced intersection form is not standard")
    return SurfaceData(genus, len(fc) + d.free_loops, cycles, basis, form, d.n)


def genus(d: Diagram) -> int:
    return carrying_surface(d).genus


# -- states on the surface -----------------------------------------------------------------

def _normalize(cls: tuple[int, ...]) -> tuple[int, ...]:
    for v in cls:
        if v:
            return cls if v > 0 else tuple(-x for x in cls)
    return cls


@dataclass(frozen=True)
class StateCurveClass:
    state: str
    classes: tuple[tuple[int, ...], ...]
    trivial: int
    coefficient: LaurentPoly

    @property
    def multiset(self) -> tuple[tuple[int, ...], ...]:
        """Orientation-free key: each class sign-normalized, then sorted."""
        return tuple(sorted(_normalize(c) for c in self.classes))


def _state_classes(d: Diagram, surf: SurfaceData, choice: str):
    out = []
    for walk in state_loops(d, choice):
        passages = [(walk[i], walk[i + 1]) for i in range(0, len(walk), 2)]
        out.append(surf.classify(walk_flow(d.n, passages)))
    return out


def state_homology(d: Diagram, s, surface: SurfaceData | None = None) -> StateCurveClass:
    choice = _state_choice(d, s)
    surf = surface or carrying_surface(d)
    raw = _state_classes(d, surf, choice)
    nontrivial = tuple(c for c in raw if any(c))
    trivial = len(raw) - len(nontrivial) + d.free_loops
    c = choice.count(ALPHA) * 2 - d.n
    return StateCurveClass(choice, nontrivial, trivial, LaurentPoly.monomial(c))


def knot_class_mod2(d: Diagram, surface: SurfaceData | None = None) -> tuple[int, ...]:
    """Class of the diagram itself (all strands, traversal orientation) reduced mod 2."""
    surf = surface or carrying_surface(d)
    f = [0] * (4 * d.n)
    for comp in d.pass_ports():
        for p in comp:
            f[p] -= 1
            f[d.through(p)] += 1
    return tuple(v % 2 for v in surf.classify(f))


@dataclass
class SurfaceBracket:
    groups: dict[tuple, LaurentPoly]
    #: first state (in enumeration order) landing in each group
    representatives: dict[tuple, str]
    surface: SurfaceData
    #: some state had a homologically trivial curve on a positive-genus surface
    homology_only: bool


def surface_bracket(d: Diagram, max_crossings: int = MAX_SURFACE_CROSSINGS) -> SurfaceBracket:
    """Group ``A^c(s) d^(trivial curves)`` by the orientation-free class multiset of each state."""
    if d.n > max_crossings:
        raise TooLarge(f"surface bracket over {d.n} crossings exceeds the guard of {max_crossings}")
    surf = carrying_surface(d)
    acc: dict[tuple, dict[tuple[int, int], int]] = {}
    first: dict[tuple, str] = {}
    trivial_seen = False
    for bits in itertools.product("ab", repeat=d.n):
        choice = "".join(bits)
        sc = state_homology(d, choice, surf)
        key = sc.multiset
        c = choice.count(ALPHA) * 2 - d.n
        slot = acc.setdefault(key, {})
        slot[(c, sc.trivial)] = slot.get((c, sc.trivial), 0) + 1
        first.setdefault(key, choice)
        if sc.trivial > d.free_loops:
            trivial_seen = True
    groups = {}
    for key, counts in acc.items():
        poly = LaurentPoly()
        for (c, t), mult in sorted(counts.items()):
            poly = poly + LaurentPoly.monomial(c, mult) * d_power(t)
        if not poly.is_zero():
            groups[key] = poly
    return SurfaceBracket(groups, {k: first[k] for k in groups}, surf, trivial_seen and surf.genus > 0)


@dataclass
class Witness:
    handle: int
    state_i: str
    class_i: tuple[int, ...]
    state_j: str
    class_j: tuple[int, ...]
    determinant: int

    def to_json(self) -> dict:
        return {"handle": self.handle + 1, "state_i": self.state_i, "class_i": list(self.class_i),
                "state_j": self.state_j, "class_j": list(self.class_j), "determinant": self.determinant}


@dataclass
class ObstructionResult:
    genus: int
    witnesses: list[Witness]
    certified: bool
    homology_only: bool

    def to_json(self) -> dict:
        out = {
            "genus": self.genus,
            "result": "certificate" if self.certified else "inconclusive",
            "handles": [w.to_json() for w in self.witnesses],
            "homology_only_flag": self.homology_only,
        }
        if self.certified:
            out["conclusion"] = (f"no cancellation curve: minimal genus = {self.genus}, "
                                 "diagram non-trivial and non-classical")
        return out


def obstruction_test(d: Diagram, max_crossings: int = MAX_SURFACE_CROSSINGS) -> ObstructionResult:
    """Search, per handle, two nonzero-coefficient states whose curves meet on that handle.

    A witness on every handle rules out a cancellation curve.  Anything less is
    reported as inconclusive; classicality is never claimed.
    """
    if carrying_surface(d).genus == 0:
        return ObstructionResult(0, [], False, False)
    sb = surface_bracket(d, max_crossings)
    g = sb.surface.genus
    curves = []  # (state, class) over nonzero groups, deterministic order
    for key in sorted(sb.groups):
        for cls in dict.fromkeys(key):
            curves.append((sb.representatives[key], cls))
    witnesses = []
    for k in range(g):
        found = None
        for (si, ci), (sj, cj) in itertools.combinations(curves, 2):
            det = ci[2 * k] * cj[2 * k + 1] - ci[2 * k + 1] * cj[2 * k]
            if det:
                found = Witness(k, si, ci, sj, cj, det)
                break
        if found:
            witnesses.append(found)
    return ObstructionResult(g, witnesses, len(witnesses) == g, sb.homology_only)


__all__ = ["SurfaceData", "StateCurveClass", "ObstructionResult", "Witness", "carrying_surface",
           "genus", "state_homology", "surface_bracket", "SurfaceBracket", "obstruction_test", "intersection",
           "walk_flow", "knot_class_mod2", "StateAssignment"]
