"""Bracket polynomial: brute-force state sum and a matching-state contraction engine.

The contraction engine absorbs crossings one at a time.  Its frontier maps a
perfect matching of the currently open strand ends to the accumulated
coefficient of every partial state inducing that matching.  Matchings are
arbitrary (not planar), so virtual diagrams need no special treatment.

Coefficients inside the engine are packed Laurent polynomials: the integer
``sum c_k 2^(B (k + E))`` with a slot width ``B`` large enough for any partial
sum and an exponent offset ``E`` below every reachable exponent.  Addition is
integer addition, multiplication by ``A^(+-1)`` is a shift, and both are exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagram import (ALPHA, ALPHA_PAIRS, BETA_PAIRS, Diagram, StateAssignment, cable,
                      smoothing_partner, writhe)
from .laurent import ONE, LaurentPoly, d_power

MAX_STATE_SUM_CROSSINGS = 25


class TooLarge(RuntimeError):
    """A resource guard was exceeded."""


# -- brute force ---------------------------------------------------------------------

def _loop_count(nbr, part) -> int:
    seen = bytearray(len(nbr))
    loops = 0
    for start in range(len(nbr)):
        if seen[start]:
            continue
        loops += 1
        p = start
        while not seen[p]:
            q = part[p]
            seen[p] = seen[q] = 1
            p = nbr[q]
    return loops


def bracket_state_sum(d: Diagram, max_crossings: int = MAX_STATE_SUM_CROSSINGS) -> LaurentPoly:
    """Sum of ``A^c(s) d^(|s|-1)`` over all ``2^n`` states."""
    n = d.n
    if n > max_crossings:
        raise TooLarge(f"state sum over {n} crossings exceeds the guard of {max_crossings}")
    counts: dict[tuple[int, int], int] = {}
    for bits in itertools.product((ALPHA, "b"), repeat=n):
        choice = "".join(bits)
        loops = _loop_count(d.nbr, smoothing_partner(d, choice)) + d.free_loops
        c = choice.count(ALPHA) * 2 - n
        counts[(c, loops)] = counts.get((c, loops), 0) + 1
    total = LaurentPoly()
    for (c, loops), mult in sorted(counts.items()):
        total = total + LaurentPoly.monomial(c, mult) * d_power(loops - 1)
    return total


def state_term(d: Diagram, s: StateAssignment) -> LaurentPoly:
    loops = _loop_count(d.nbr, smoothing_partner(d, s.choice)) + d.free_loops
    return LaurentPoly.monomial(s.c()) * d_power(loops - 1)


# -- contraction ---------------------------------------------------------------------

@dataclass
class ContractionStats:
    order: list[int]
    max_frontier: int = 0
    max_open: int = 0


def greedy_order(d: Diagram) -> list[int]:
    """Crossing order that greedily keeps the number of open strand ends small.

    At each step the next crossing is the one whose absorption leaves the
    fewest open ends; ties go to the crossing with more edges into the
    processed region, then to the lower id.
    """
    n = d.n
    if n == 0:
        return []
    nbr = d.nbr
    done = [False] * n
    open_count = 0
    links = [0] * n  # edges from each unprocessed crossing into the processed set
    order = []
    for _ in range(n):
        best = None
        for x in range(n):
            if done[x]:
                continue
            internal = 0
            for k in range(4):
                q = nbr[4 * x + k]
                if q >> 2 == x:
                    internal += 1
            new_open = open_count - links[x] + (4 - links[x] - internal)
            key = (new_open, -links[x], x)
            if best is None or key < best:
                best = key
        x = best[2]
        order.append(x)
        done[x] = True
        open_count = best[0]
        for k in range(4):
            y = nbr[4 * x + k] >> 2
            if not done[y]:
                links[y] += 1
    return order


def _plan(d: Diagram, order: list[int]):
    """Static per-step wiring for the contraction."""
    nbr = d.nbr
    processed = set()
    opened: list[int] = []
    steps = []
    for x in order:
        ports = [4 * x + k for k in range(4)]
        pos_old = {p: i for i, p in enumerate(opened)}
        glue_old = {}  # local slot -> old open index
        glue_in = {}  # local slot -> local slot
        fresh = []
        for k, p in enumerate(ports):
            q = nbr[p]
            if q in pos_old:
                glue_old[k] = pos_old[q]
            elif q >> 2 == x:
                glue_in[k] = q & 3
            else:
                fresh.append(k)
        glued_idx = set(glue_old.values())
        survivors = [i for i in range(len(opened)) if i not in glued_idx]
        new_open = [opened[i] for i in survivors] + [ports[k] for k in fresh]
        order_new = sorted(range(len(new_open)), key=lambda i: new_open[i])
        rank = [0] * len(new_open)
        for r, i in enumerate(order_new):
            rank[i] = r
        surv_new = {i: rank[j] for j, i in enumerate(survivors)}
        fresh_new = {k: rank[len(survivors) + j] for j, k in enumerate(fresh)}
        steps.append((len(opened), glue_old, glue_in, surv_new, fresh_new, len(new_open)))
        processed.add(x)
        opened = sorted(new_open)
    return steps


def _transition(m, n_old, glue_old, glue_in, surv_new, fresh_new, n_new, pairs):
    """Apply one smoothing to the boundary matching ``m`` (a tuple of partner indices).

    Nodes: old open index ``i`` -> ``i``; local crossing slot ``k`` -> ``n_old + k``.
    Every node has degree one (a new open end) or two.  Returns (new matching,
    number of closed loops).
    """
    adj: dict[int, list[int]] = {}

    def link(u, v):
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    for a, b in pairs:
        link(n_old + a, n_old + b)
    for k, i in glue_old.items():
        link(n_old + k, i)
        j = m[i]
        if j not in glued_set(glue_old) or i < j:
            link(i, j)
    for k, k2 in glue_in.items():
        if k < k2:
            link(n_old + k, n_old + k2)
    newm = [0] * n_new
    for i, r in surv_new.items():
        j = m[i]
        if j in surv_new:
            newm[r] = surv_new[j]
    seen = set()
    for node, nb in adj.items():
        if len(nb) != 1 or node in seen:
            continue
        prev, cur = node, nb[0]
        seen.add(node)
        while len(adj[cur]) == 2:
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        seen.add(cur)
        ra = surv_new[node] if node < n_old else fresh_new[node - n_old]
        rb = surv_new[cur] if cur < n_old else fresh_new[cur - n_old]
        newm[ra] = rb
        newm[rb] = ra
    loops = 0
    for node in adj:
        if node in seen:
            continue
        loops += 1
        stack = [node]
        seen.add(node)
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return tuple(newm), loops


def glued_set(glue_old):
    return glue_old.values()


def _decode(v: int, bits: int, offset: int) -> LaurentPoly:
    terms = {}
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    k = -offset
    while v:
        low = v & mask
        if low >= half:
            low -= 1 << bits
        if low:
            terms[k] = low
        v = (v - low) >> bits
        k += 1
    return LaurentPoly(terms)


def bracket_contract(d: Diagram, order: list[int] | None = None, max_frontier: int | None = None,
                     stats: ContractionStats | None = None) -> LaurentPoly:
    """Bracket by sequential contraction; equals :func:`bracket_state_sum` exactly."""
    n = d.n
    if n == 0:
        return d_power(d.free_loops - 1)
    if order is None:
        order = greedy_order(d)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the crossings")
    bits = 3 * n + 8
    offset = 5 * n + 4
    one = 1 << (bits * offset)
    frontier: dict[tuple, int] = {(): one}
    steps = _plan(d, order)
    if stats is not None:
        stats.order = list(order)
    cache: dict = {}
    for step_no, (n_old, glue_old, glue_in, surv_new, fresh_new, n_new) in enumerate(steps):
        nxt: dict[tuple, int] = {}
        cache.clear()
        for m, val in frontier.items():
            for pairs, up in ((ALPHA_PAIRS, True), (BETA_PAIRS, False)):
                newm, loops = _transition(m, n_old, glue_old, glue_in, surv_new, fresh_new, n_new, pairs)
                v = val << bits if up else val >> bits
                for _ in range(loops):
                    v = -((v >> (2 * bits)) + (v << (2 * bits)))
                if newm in nxt:
                    s = nxt[newm] + v
                    if s:
                        nxt[newm] = s
                    else:
                        del nxt[newm]
                else:
                    nxt[newm] = v
        frontier = nxt
        if stats is not None:
            stats.max_frontier = max(stats.max_frontier, len(frontier))
            stats.max_open = max(stats.max_open, n_new)
        if max_frontier is not None and len(frontier) > max_frontier:
            raise TooLarge(f"frontier of {len(frontier)} matchings exceeds the guard of {max_frontier}")
    total = frontier.get((), 0)
    poly = _decode(total, bits, offset)
    return (poly * d_power(d.free_loops)).div_d()


def n_bracket(d: Diagram, N: int, **kw) -> LaurentPoly:
    """N-strand bracket: the bracket of the blackboard N-cable."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return bracket_contract(cable(d, N), **kw)


def f_poly(d: Diagram, **kw) -> LaurentPoly:
    """Writhe-normalised bracket ``(-A^3)^(-w) <K>``."""
    w = writhe(d)
    factor = LaurentPoly.monomial(-3 * w, -1 if w % 2 else 1)
    return factor * bracket_contract(d, **kw)


def bracket(d: Diagram) -> LaurentPoly:
    return bracket_contract(d)


__all__ = ["bracket", "bracket_state_sum", "bracket_contract", "n_bracket", "f_poly",
           "greedy_order", "TooLarge", "ContractionStats", "state_term", "ONE"]
