"""Rotations, the rotation digraph, and the stable-matching lattice.

A rotation is a cyclic sequence of matched pairs ((u_0,w_0),...) where each
w_{k+1} is u_k's successor; eliminating it (every u_k moves on to w_{k+1})
turns one stable matching into another.  Walking one maximal elimination
chain from the U-optimal matching discovers every rotation exactly once.
Precedence arcs make predecessor-closed subsets correspond one-to-one to
stable matchings, which turns optimization over stable matchings into
minimum-weight closure, solved here by max-flow project selection.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._flow import FlowNetwork
from .classic import u_optimal, w_optimal
from .errors import Error, InvalidInput, NoSuccessorDefined, NotClosed
from .profile import Agent, Matching, Side, is_stable


@dataclass(frozen=True)
class Rotation:
    """Cyclic pair sequence, rotated so the smallest u index comes first."""

    cycle: tuple

    @classmethod
    def canonical(cls, pairs):
        pairs = list(pairs)
        start = min(range(len(pairs)), key=lambda k: pairs[k][0])
        return cls(cycle=tuple(pairs[start:] + pairs[:start]))

    def __len__(self):
        return len(self.cycle)

    def moves(self):
        """Yield (u, w_old, w_new) for each agent of side U in the cycle."""
        r = len(self.cycle)
        for k, (u, w) in enumerate(self.cycle):
            yield u, w, self.cycle[(k + 1) % r][1]


def _succ_index(p, pu, pw, i):
    lst = p.u_lists[i]
    for pos in range(int(p.rank_u[i, pu[i]]) + 1, len(lst)):
        j = lst[pos]
        if pw[j] < 0:
            # j is unmatched here, hence in every stable matching, so u may
            # never sink below j (the two would block); the scan is over.
            return -1
        if p.rank_w[j, i] < p.rank_w[j, pw[j]]:
            return j
    return -1


def successor(p, m, u):
    """First agent after M(u) in u's list that is matched and prefers u.

    Defined for side-U agents of a stable matching; returns None when the
    rest of u's list rejects u, raises NoSuccessorDefined when u is
    unmatched.  The scan ends without a successor at an unmatched agent:
    unmatched agents stay unmatched across all stable matchings, so u can
    never be matched below one it finds acceptable.
    """
    if u.side != Side.U:
        raise InvalidInput("successor is defined for side-U agents")
    if m.pu[u.index] < 0:
        raise NoSuccessorDefined("%s is unmatched" % p.name_of(u))
    j = _succ_index(p, m.pu, m.pw, u.index)
    return Agent.w(j) if j >= 0 else None


def _exposed_cycles(p, pu, pw):
    """Cycles of u -> M(successor(u)) over matched U agents, as index pairs."""
    nxt = {}
    for i in range(p.n_u):
        if pu[i] < 0:
            continue
        j = _succ_index(p, pu, pw, i)
        if j >= 0:
            nxt[i] = int(pw[j])
    state = {}  # 0 in progress, 1 done
    cycles = []
    for start in sorted(nxt):
        if start in state:
            continue
        path = []
        seen_at = {}
        node = start
        while node in nxt and node not in state and node not in seen_at:
            seen_at[node] = len(path)
            path.append(node)
            node = nxt[node]
        if node in seen_at:
            cyc = path[seen_at[node]:]
            cycles.append(Rotation.canonical([(i, int(pu[i])) for i in cyc]))
        for i in path:
            state[i] = 1
    return cycles


def exposed_rotations(p, m):
    """All rotations exposed in the stable matching m, pairwise disjoint."""
    if not is_stable(p, m):
        raise InvalidInput("exposed_rotations needs a stable matching")
    return sorted(_exposed_cycles(p, m.pu, m.pw), key=lambda r: r.cycle)


def eliminate(m, rho):
    """Replace each pair (u_k, w_k) of rho with (u_k, w_{k+1})."""
    if any((u, w) not in m.pairs for u, w in rho.cycle):
        raise InvalidInput("rotation is not contained in the matching")
    pairs = set(m.pairs)
    for u, w, w_new in rho.moves():
        pairs.discard((u, w))
        pairs.add((u, w_new))
    return Matching(n_u=m.n_u, n_w=m.n_w, pairs=frozenset(pairs))


@dataclass(frozen=True)
class RotationDigraph:
    """All rotations of a profile plus precedence arcs.

    Arc (a, b) means rotation a must be eliminated before rotation b;
    subsets closed under predecessors correspond exactly to the stable
    matchings, with the empty set mapping to u_optimal.
    """

    rotations: tuple
    arcs: frozenset
    u_opt: Matching

    @property
    def n(self):
        return len(self.rotations)

    @cached_property
    def preds(self):
        out = [[] for _ in range(self.n)]
        for a, b in sorted(self.arcs):
            out[b].append(a)
        return out

    @cached_property
    def succs(self):
        out = [[] for _ in range(self.n)]
        for a, b in sorted(self.arcs):
            out[a].append(b)
        return out

    @cached_property
    def ancestor_masks(self):
        """ancestor_masks[i] has bit j set iff j must precede i (j != i)."""
        masks = [0] * self.n
        for i in range(self.n):  # index order is topological
            acc = 0
            for a in self.preds[i]:
                acc |= masks[a] | (1 << a)
            masks[i] = acc
        return masks

    @cached_property
    def descendant_masks(self):
        masks = [0] * self.n
        for i in range(self.n - 1, -1, -1):
            acc = 0
            for b in self.succs[i]:
                acc |= masks[b] | (1 << b)
            masks[i] = acc
        return masks

    def is_closed(self, subset):
        mask = 0
        for i in subset:
            if not 0 <= i < self.n:
                raise InvalidInput("rotation index %r out of range" % (i,))
            mask |= 1 << i
        for i in subset:
            if self.ancestor_masks[i] & ~mask:
                return False
        return True


def rotation_digraph(p):
    """Discover all rotations of p and wire the precedence arcs.

    Discovery walks one maximal elimination chain from the U-optimal
    matching, always eliminating the canonically smallest exposed rotation;
    the resulting index order is topological.  Arcs come from two rules:
    the rotation that produced a pair precedes the one consuming it, and
    for every agent skipped between w_k and w_{k+1} in u_k's list, the
    rotation that made that agent reject u_k precedes.
    """
    m0 = u_optimal(p)
    pu = m0.pu.copy()
    pw = m0.pw.copy()
    rotations = []
    while True:
        exposed = _exposed_cycles(p, pu, pw)
        if not exposed:
            break
        rho = min(exposed, key=lambda r: r.cycle)
        rotations.append(rho)
        for u, w, w_new in rho.moves():
            pw[w] = -1
        for u, w, w_new in rho.moves():
            pu[u] = w_new
            pw[w_new] = u
    movesto = {}
    crossed = {}
    for idx, rho in enumerate(rotations):
        for u, w_old, w_new in rho.moves():
            key = (u, w_new)
            if key in movesto:
                raise Error("two rotations move u%d's partner to w%d" % key)
            movesto[key] = idx
        r = len(rho.cycle)
        for k, (u, w) in enumerate(rho.cycle):
            u_prev = rho.cycle[(k - 1) % r][0]
            lo = int(p.rank_w[w, u_prev])  # new, better partner
            hi = int(p.rank_w[w, u])  # old one
            for pos in range(lo, hi):
                key = (w, p.w_lists[w][pos])
                if key in crossed:
                    raise Error(
                        "two rotations cross w%d over u%d" % key
                    )
                crossed[key] = idx
    arcs = set()
    pu0, pw0 = m0.pu, m0.pw
    for idx, rho in enumerate(rotations):
        for u, w_old, w_new in rho.moves():
            producer = movesto.get((u, w_old))
            if producer is not None and producer != idx:
                arcs.add((producer, idx))
            lst = p.u_lists[u]
            for pos in range(int(p.rank_u[u, w_old]) + 1, int(p.rank_u[u, w_new])):
                w_between = lst[pos]
                c = crossed.get((w_between, u))
                if c is not None:
                    if c != idx:
                        arcs.add((c, idx))
                elif pw0[w_between] < 0 or (
                    p.rank_w[w_between, pw0[w_between]] > p.rank_w[w_between, u]
                ):
                    # skipped agents are matched and were already rejecting
                    # u at u_optimal, or some earlier rotation crossed them
                    raise Error(
                        "no rotation explains why w%d rejects u%d"
                        % (w_between, u)
                    )
    dg = RotationDigraph(rotations=tuple(rotations), arcs=frozenset(arcs), u_opt=m0)
    assert all(a < b for a, b in dg.arcs), "discovery order is not topological"
    return dg


def matching_of(dg, subset):
    """Eliminate a predecessor-closed rotation subset from u_optimal."""
    if not dg.is_closed(subset):
        raise NotClosed("rotation subset %r is not predecessor-closed" % (sorted(subset),))
    pairs = set(dg.u_opt.pairs)
    for idx in sorted(subset):
        for u, w, w_new in dg.rotations[idx].moves():
            pairs.discard((u, w))
        for u, w, w_new in dg.rotations[idx].moves():
            pairs.add((u, w_new))
    return Matching(n_u=dg.u_opt.n_u, n_w=dg.u_opt.n_w, pairs=frozenset(pairs))


def closed_subsets(dg):
    """Yield every predecessor-closed subset of rotation indices."""

    def extend(i, mask):
        if i == dg.n:
            yield frozenset(k for k in range(dg.n) if mask & (1 << k))
            return
        yield from extend(i + 1, mask)
        if dg.ancestor_masks[i] & ~mask == 0:
            yield from extend(i + 1, mask | (1 << i))

    yield from extend(0, 0)


def enumerate_stable_matchings(p):
    """Every stable matching of p exactly once, via the closed-subset bijection."""
    dg = rotation_digraph(p)
    for subset in closed_subsets(dg):
        yield matching_of(dg, subset)


def stable_pairs(p, dg=None):
    """Pairs appearing in at least one stable matching, as index tuples.

    A pair is stable iff it is in the W-optimal matching or belongs to some
    rotation.
    """
    if dg is None:
        dg = rotation_digraph(p)
    pairs = set(w_optimal(p).pairs)
    for rho in dg.rotations:
        pairs.update(rho.cycle)
    return frozenset(pairs)


@dataclass(frozen=True)
class RotationWeights:
    """Egalitarian-cost delta per rotation: eliminating rho adds delta[rho].

    For any closed subset S, the cost of matching_of(S) equals the cost of
    u_optimal plus the sum of deltas over S.  Ranks come from the measuring
    profile, which may differ from the one the digraph was built on (same
    acceptable sets required); near-stability solvers use that to price
    matchings of a perturbed profile against the original lists.
    """

    delta: tuple

    @classmethod
    def measured(cls, dg, p):
        deltas = []
        for rho in dg.rotations:
            total = 0
            r = len(rho.cycle)
            for k, (u, w) in enumerate(rho.cycle):
                w_new = rho.cycle[(k + 1) % r][1]
                u_prev = rho.cycle[(k - 1) % r][0]
                total += int(p.rank_u[u, w_new]) - int(p.rank_u[u, w])
                total += int(p.rank_w[w, u_prev]) - int(p.rank_w[w, u])
            deltas.append(total)
        return cls(delta=tuple(deltas))


def _reach_masks(n, arcs):
    """Bitmask of nodes reachable from each node along the given arcs."""
    adj = [[] for _ in range(n)]
    for a, b in sorted(arcs):
        adj[a].append(b)
    masks = []
    for start in range(n):
        seen = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen >> y & 1:
                    seen |= 1 << y
                    stack.append(y)
        masks.append(seen)
    return masks


def min_weight_closure(dg, weights, forced=frozenset(), forbidden=frozenset(), extra_arcs=frozenset()):
    """Minimum-total-weight predecessor-closed subset, or None if infeasible.

    The subset must contain ``forced``, avoid ``forbidden``, and respect
    ``extra_arcs`` on top of the digraph's own: an arc (a, b) means b may
    only be chosen together with a.  Extra arcs may create cycles; the
    nodes of a cycle then enter or leave together.  Solved as max-flow
    project selection on the free rotations: forbidden rotations and their
    reachable successors are deleted, forced ones and everything reaching
    them are fixed inside, and the remainder trades off weight against the
    closure arcs.
    """
    if extra_arcs:
        arcs = dg.arcs | frozenset(extra_arcs)
        desc = _reach_masks(dg.n, arcs)
        anc = _reach_masks(dg.n, [(b, a) for a, b in arcs])
    else:
        arcs = dg.arcs
        desc = dg.descendant_masks
        anc = dg.ancestor_masks
    forced_mask = 0
    for i in forced:
        forced_mask |= anc[i] | (1 << i)
    forbidden_mask = 0
    for i in forbidden:
        forbidden_mask |= desc[i] | (1 << i)
    if forced_mask & forbidden_mask:
        return None
    free = [
        i
        for i in range(dg.n)
        if not (forced_mask | forbidden_mask) & (1 << i)
    ]
    chosen = {i for i in range(dg.n) if forced_mask & (1 << i)}
    if free:
        inf = 1 + sum(abs(weights.delta[i]) for i in free)
        net = FlowNetwork()
        for i in free:
            w = weights.delta[i]
            if w > 0:
                net.add_edge("s", i, w)
            elif w < 0:
                net.add_edge(i, "t", -w)
        free_set = set(free)
        for a, b in sorted(arcs):
            if a in free_set and b in free_set:
                net.add_edge(a, b, inf)
        net.max_flow("s", "t")
        dropped = net.source_side("s")
        chosen.update(i for i in free if i not in dropped)
    return frozenset(chosen)
