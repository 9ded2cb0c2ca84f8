"""Swap-distance robustness of stable matchings.

A matching is d-robust when it stays stable under every reordering of the
preference lists that costs at most d adjacent swaps in total.  The checker
reduces this to a rank-gap condition per unmatched acceptable pair; the
solver builds constraints over the rotation digraph: each cheap stable
quadruple (two crossing stable pairs whose agents can be made to block each
other with few swaps) contributes an implication, a forbidden rotation, a
forced rotation, or outright infeasibility, and never-matched agents add
rank thresholds their neighbors' partners must stay above.
"""

from dataclasses import dataclass, replace

from .classic import matched_partition, w_optimal
from .errors import Error, InvalidInput
from .profile import Agent, Matching, Objective, Side, SwapOp, blocking_pairs
from .rotations import (
    RotationWeights,
    matching_of,
    min_weight_closure,
    rotation_digraph,
    stable_pairs,
)


@dataclass(frozen=True)
class StableQuadruple:
    """Four distinct agents (uStar, wStar, u, w) such that some stable
    matching contains both {uStar, w} and {u, wStar}; shifting wStar ahead
    of w and uStar ahead of u makes {uStar, wStar} block that matching."""

    u_star: Agent
    w_star: Agent
    u: Agent
    w: Agent


@dataclass(frozen=True)
class SwapSet:
    """The cheapest swaps realizing a quadruple's threat, plus the two
    reordered lists they produce."""

    swaps: frozenset
    shifted_list_u: tuple
    shifted_list_w: tuple


class RotationTables:
    """Per-pair rotation lookups, six families.

    For an ordered pair (x, y) with x of side U: s1 moves x's partner to y,
    s2 jumps it over y (from better to worse), s3 moves it away from y.
    For (y, x) with y of side W the partner walks upward: t1 moves y's
    partner to x, t2 jumps it over x (from worse to better), t3 moves it
    away from x.  Values are rotation indices; each present entry is
    unique, and an s2/t2 entry excludes s1/s3 resp. t1/t3 for its pair
    because a jumped-over pair is never a stable pair.
    """

    def __init__(self, rotations):
        self.rotations = rotations
        self.s1 = {}
        self.s2 = {}
        self.s3 = {}
        self.t1 = {}
        self.t2 = {}
        self.t3 = {}

    def _get(self, table, x, y):
        idx = table.get((x.index, y.index))
        return None if idx is None else self.rotations[idx]

    def sigma1(self, u, w):
        return self._get(self.s1, u, w)

    def sigma2(self, u, w):
        return self._get(self.s2, u, w)

    def sigma3(self, u, w):
        return self._get(self.s3, u, w)

    def tau1(self, w, u):
        return self._get(self.t1, w, u)

    def tau2(self, w, u):
        return self._get(self.t2, w, u)

    def tau3(self, w, u):
        return self._get(self.t3, w, u)


def _put(table, key, idx, label):
    if key in table:
        raise Error("duplicate %s entry for %r" % (label, key))
    table[key] = idx


def build_rotation_tables(p, dg):
    """Populate the six lookup families in one pass over the rotations."""
    tables = RotationTables(dg.rotations)
    for idx, rho in enumerate(dg.rotations):
        r = len(rho.cycle)
        for k, (u, w) in enumerate(rho.cycle):
            w_new = rho.cycle[(k + 1) % r][1]
            u_prev = rho.cycle[(k - 1) % r][0]
            _put(tables.s3, (u, w), idx, "s3")
            _put(tables.s1, (u, w_new), idx, "s1")
            for pos in range(int(p.rank_u[u, w]) + 1, int(p.rank_u[u, w_new])):
                _put(tables.s2, (u, p.u_lists[u][pos]), idx, "s2")
            _put(tables.t3, (w, u), idx, "t3")
            _put(tables.t1, (w, u_prev), idx, "t1")
            for pos in range(int(p.rank_w[w, u_prev]) + 1, int(p.rank_w[w, u])):
                _put(tables.t2, (w, p.w_lists[w][pos]), idx, "t2")
    overlap = set(tables.s2) & (set(tables.s1) | set(tables.s3))
    overlap |= set(tables.t2) & (set(tables.t1) | set(tables.t3))
    if overlap:
        raise Error("jumped-over pairs also appear as stable pairs: %r" % overlap)
    return tables


def _quadruple_indices(p, q):
    """Unpack a quadruple to indices, checking shape and acceptability."""
    if (
        q.u_star.side != Side.U
        or q.u.side != Side.U
        or q.w_star.side != Side.W
        or q.w.side != Side.W
    ):
        raise InvalidInput("quadruple sides must be (U, W, U, W)")
    us, ws, u, w = q.u_star.index, q.w_star.index, q.u.index, q.w.index
    if us == u or ws == w:
        raise InvalidInput("quadruple agents must be distinct")
    if not (0 <= us < p.n_u and 0 <= u < p.n_u and 0 <= ws < p.n_w and 0 <= w < p.n_w):
        raise InvalidInput("quadruple references unknown agents")
    for ui, wj in ((us, ws), (us, w), (u, ws)):
        if p.rank_u[ui, wj] >= p.len_u[ui]:
            raise InvalidInput(
                "%s and %s are not mutually acceptable"
                % (p.name_of(Agent.u(ui)), p.name_of(Agent.w(wj)))
            )
    return us, ws, u, w


def _pair_masks(dg, tables, pairs):
    """For each stable pair: rotations its presence needs, and the one that
    removes it.  A pair sits in matching_of(S) iff its producing rotation
    (with ancestors) is inside S and its consuming rotation is outside."""
    need = {}
    block = {}
    for pr in pairs:
        i = tables.s1.get(pr)
        need[pr] = 0 if i is None else dg.ancestor_masks[i] | (1 << i)
        i = tables.s3.get(pr)
        block[pr] = 0 if i is None else 1 << i
    return need, block


def _iter_quadruples(p, dg, tables, cap):
    pairs = sorted(stable_pairs(p, dg))
    need, block = _pair_masks(dg, tables, pairs)
    for us, w in pairs:
        for u, ws in pairs:
            if us == u or ws == w:
                continue
            if p.rank_u[us, ws] >= p.len_u[us]:
                continue
            gap = max(int(p.rank_u[us, ws]) - int(p.rank_u[us, w]), 0) + max(
                int(p.rank_w[ws, us]) - int(p.rank_w[ws, u]), 0
            )
            if cap is not None and gap > cap:
                continue
            if (need[(us, w)] | need[(u, ws)]) & (block[(us, w)] | block[(u, ws)]):
                continue
            assert gap > 0, "co-stable pairs cannot block as they stand"
            yield StableQuadruple(Agent.u(us), Agent.w(ws), Agent.u(u), Agent.w(w))


def stable_quadruples(p, max_swap_set_size=None):
    """All stable quadruples of p, cheapest-threat filter optional.

    Parameters
    ----------
    p : Profile
    max_swap_set_size : int, optional
        Keep only quadruples whose swap set has at most this many swaps.

    Yields
    ------
    StableQuadruple in deterministic (stable-pair, stable-pair) order.
    """
    dg = rotation_digraph(p)
    tables = build_rotation_tables(p, dg)
    yield from _iter_quadruples(p, dg, tables, max_swap_set_size)


def _is_costable(p, q, dg, tables):
    us, ws, u, w = q.u_star.index, q.w_star.index, q.u.index, q.w.index
    pairs = stable_pairs(p, dg)
    if (us, w) not in pairs or (u, ws) not in pairs:
        return False
    need, block = _pair_masks(dg, tables, [(us, w), (u, ws)])
    return not (need[(us, w)] | need[(u, ws)]) & (block[(us, w)] | block[(u, ws)])


def _check_quadruple(p, q):
    us, ws, u, w = _quadruple_indices(p, q)
    dg = rotation_digraph(p)
    tables = build_rotation_tables(p, dg)
    if not _is_costable(p, q, dg, tables):
        raise InvalidInput("no stable matching contains both pairs of %r" % (q,))
    return us, ws, u, w


def _shift_in_front(lists, owner, mover, target):
    """Move ``mover`` directly in front of ``target`` in owner's list."""
    lst = list(lists[owner])
    src = lst.index(mover)
    dst = lst.index(target)
    if src <= dst:
        return lists
    del lst[src]
    lst.insert(dst, mover)
    return lists[:owner] + (tuple(lst),) + lists[owner + 1 :]


def swap_set(p, q):
    """The swaps realizing q's threat and the two lists they produce.

    Moving wStar directly in front of w in uStar's list takes one swap per
    agent passed over (w included); likewise for uStar in wStar's list.
    Raises InvalidInput when q is not a stable quadruple of p.
    """
    us, ws, u, w = _check_quadruple(p, q)
    swaps = set()
    for pos in range(int(p.rank_u[us, w]), int(p.rank_u[us, ws])):
        swaps.add(SwapOp(Agent.u(us), Agent.w(ws), Agent.w(p.u_lists[us][pos])))
    for pos in range(int(p.rank_w[ws, u]), int(p.rank_w[ws, us])):
        swaps.add(SwapOp(Agent.w(ws), Agent.u(us), Agent.u(p.w_lists[ws][pos])))
    u_lists = _shift_in_front(p.u_lists, us, ws, w)
    w_lists = _shift_in_front(p.w_lists, ws, us, u)
    return SwapSet(
        swaps=frozenset(swaps),
        shifted_list_u=u_lists[us],
        shifted_list_w=w_lists[ws],
    )


def shifted_profile(p, q):
    """Profile after applying swap_set(p, q); only two lists change."""
    us, ws, u, w = _check_quadruple(p, q)
    return replace(
        p,
        u_lists=_shift_in_front(p.u_lists, us, ws, w),
        w_lists=_shift_in_front(p.w_lists, ws, us, u),
    )


def _pi_index(tables, p, q):
    us, ws, u, w = q.u_star.index, q.w_star.index, q.u.index, q.w.index
    if p.rank_u[us, ws] < p.rank_u[us, w]:
        idx = tables.s2.get((us, ws))
        if idx is None:
            idx = tables.s3.get((us, ws))
        return idx
    return tables.s1.get((us, w))


def _rho_index(tables, p, q):
    us, ws, u, w = q.u_star.index, q.w_star.index, q.u.index, q.w.index
    if p.rank_w[ws, us] < p.rank_w[ws, u]:
        idx = tables.t1.get((ws, us))
        if idx is None:
            idx = tables.t2.get((ws, us))
        return idx
    return tables.t3.get((ws, u))


def pi_of(tables, p, q):
    """The first rotation whose elimination makes uStar prefer wStar to its
    partner once the quadruple's swaps are applied; None if no stable
    matching crosses that line."""
    _quadruple_indices(p, q)
    idx = _pi_index(tables, p, q)
    return None if idx is None else tables.rotations[idx]


def rho_of(tables, p, q):
    """The first rotation that lifts wStar's partner to uStar or better
    (shifted order); eliminating it shields every later matching from q."""
    _quadruple_indices(p, q)
    idx = _rho_index(tables, p, q)
    return None if idx is None else tables.rotations[idx]


def _gap_witness(p, m, ui, wj):
    """Cheapest profile in which (ui, wj) blocks m, by shifting each matched
    endpoint's list."""
    u_lists = p.u_lists
    w_lists = p.w_lists
    if m.pu[ui] >= 0:
        u_lists = _shift_in_front(u_lists, ui, wj, int(m.pu[ui]))
    if m.pw[wj] >= 0:
        w_lists = _shift_in_front(w_lists, wj, ui, int(m.pw[wj]))
    return replace(p, u_lists=u_lists, w_lists=w_lists)


def is_d_robust(p, m, d):
    """Decide whether m stays stable in every profile within swap distance d.

    Returns ``(True, None)`` or ``(False, (profile, (u, w)))`` where the
    profile lies within distance d of p and the pair blocks m there.  The
    check walks every acceptable pair outside m: the threat costs
    rank(other) - rank(partner) swaps on each matched side (nothing on an
    unmatched side), and m is d-robust iff every such pair costs more
    than d.
    """
    if d < 0:
        raise InvalidInput("d must be nonnegative")
    bp = blocking_pairs(p, m)
    if bp:
        return False, (p, bp[0])
    for ui in range(p.n_u):
        for pos, wj in enumerate(p.u_lists[ui]):
            if m.pu[ui] == wj:
                continue
            cost = 0
            if m.pu[ui] >= 0:
                cost += max(pos - int(p.rank_u[ui, m.pu[ui]]), 0)
            if m.pw[wj] >= 0:
                cost += max(int(p.rank_w[wj, ui]) - int(p.rank_w[wj, m.pw[wj]]), 0)
            if cost <= d:
                witness = _gap_witness(p, m, ui, wj)
                return False, (witness, (Agent.u(ui), Agent.w(wj)))
    return True, None


def _threshold_constraints(p, dg, d):
    """Partner-rank ceilings induced by never-matched agents.

    A matched agent z with a never-matched acceptable s is threatened as
    soon as rank(partner) >= rank(s) - d: s accepts z outright, so d swaps
    in z's list suffice for a blocking pair.  Returns (forced, forbidden)
    rotation index sets, or None when even the best stable partner violates
    a ceiling.
    """
    m0 = dg.u_opt
    mz = w_optimal(p)
    never_u = [i for i in range(p.n_u) if m0.pu[i] < 0]
    never_w = [j for j in range(p.n_w) if m0.pw[j] < 0]
    forced = set()
    forbidden = set()

    moves_u = {}
    moves_w = {}
    for idx, rho in enumerate(dg.rotations):
        for u, w, w_new in rho.moves():
            moves_u.setdefault(u, []).append(
                (idx, int(p.rank_u[u, w]), int(p.rank_u[u, w_new]))
            )
        r = len(rho.cycle)
        for k, (u, w) in enumerate(rho.cycle):
            u_prev = rho.cycle[(k - 1) % r][0]
            moves_w.setdefault(w, []).append(
                (idx, int(p.rank_w[w, u]), int(p.rank_w[w, u_prev]))
            )

    for z in range(p.n_u):
        if m0.pu[z] < 0:
            continue
        ceilings = [int(p.rank_u[z, s]) for s in never_w if p.rank_u[z, s] < p.len_u[z]]
        if not ceilings:
            continue
        t = min(ceilings) - d - 1
        if int(p.rank_u[z, m0.pu[z]]) > t:
            return None
        # partners only sink down z's list, so forbid the unique crossing
        crossing = [
            idx for idx, lo, hi in moves_u.get(z, ()) if lo <= t < hi
        ]
        assert len(crossing) <= 1
        forbidden.update(crossing)

    for z in range(p.n_w):
        if m0.pw[z] < 0:
            continue
        ceilings = [int(p.rank_w[z, s]) for s in never_u if p.rank_w[z, s] < p.len_w[z]]
        if not ceilings:
            continue
        t = min(ceilings) - d - 1
        if int(p.rank_w[z, mz.pw[z]]) > t:
            return None
        if int(p.rank_w[z, m0.pw[z]]) <= t:
            continue
        # partners only climb z's list, so force the unique crossing
        crossing = [
            idx for idx, hi, lo in moves_w.get(z, ()) if lo <= t < hi
        ]
        assert len(crossing) == 1
        forced.update(crossing)

    return forced, forbidden


def _collect_constraints(p, dg, tables, d):
    """Constraint system over rotations for d-robustness, or None.

    Each cheap quadruple leaves one of: an implication arc (rho, pi)
    meaning pi in S requires rho in S, a forbidden pi (its threat can
    never be answered), a forced rho (the threat is live from the start),
    or infeasibility when neither rotation exists.
    """
    extra_arcs = set()
    forced = set()
    forbidden = set()
    for q in _iter_quadruples(p, dg, tables, d):
        pi = _pi_index(tables, p, q)
        rho = _rho_index(tables, p, q)
        if pi is None and rho is None:
            return None
        if pi is not None and rho is not None:
            if pi != rho:
                extra_arcs.add((rho, pi))
        elif pi is not None:
            forbidden.add(pi)
        else:
            forced.add(rho)
    thresholds = _threshold_constraints(p, dg, d)
    if thresholds is None:
        return None
    forced.update(thresholds[0])
    forbidden.update(thresholds[1])
    return extra_arcs, forced, forbidden


def _bfs(starts, adj):
    seen = set(starts)
    queue = list(starts)
    while queue:
        x = queue.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _closed_set_for(dg, extra_arcs, forced, forbidden):
    """The smallest admissible closed set, or None when constraints clash."""
    adj = [[] for _ in range(dg.n)]
    radj = [[] for _ in range(dg.n)]
    for a, b in sorted(dg.arcs | frozenset(extra_arcs)):
        adj[a].append(b)
        radj[b].append(a)
    deleted = _bfs(forbidden, adj)
    if deleted & forced:
        return None
    chosen = _bfs(forced, radj)
    assert not chosen & deleted, "an ancestor of a forced rotation was deleted"
    return frozenset(chosen)


def find_d_robust(p, d):
    """A d-robust matching of p, or None when none exists.

    Builds the rotation digraph, turns every quadruple with a swap set of
    at most d swaps plus every never-matched threshold into constraints,
    and returns the matching of the smallest closed rotation set that
    satisfies them all.
    """
    if d < 0:
        raise InvalidInput("d must be nonnegative")
    dg = rotation_digraph(p)
    tables = build_rotation_tables(p, dg)
    constraints = _collect_constraints(p, dg, tables, d)
    if constraints is None:
        return None
    extra_arcs, forced, forbidden = constraints
    chosen = _closed_set_for(dg, extra_arcs, forced, forbidden)
    if chosen is None:
        return None
    return matching_of(dg, chosen)


def find_d_robust_optimal(p, d, objective):
    """Best d-robust matching under Perfect or Egalitarian objectives.

    Perfect succeeds iff the profile matches everybody (all stable
    matchings match the same agents).  Egalitarian solves minimum-weight
    closure under the same constraint system find_d_robust uses.
    """
    if objective == Objective.PERFECT:
        if matched_partition(p).n_unmatched > 0:
            return None
        return find_d_robust(p, d)
    if objective != Objective.EGALITARIAN:
        raise InvalidInput("objective must be Perfect or Egalitarian")
    if d < 0:
        raise InvalidInput("d must be nonnegative")
    dg = rotation_digraph(p)
    tables = build_rotation_tables(p, dg)
    constraints = _collect_constraints(p, dg, tables, d)
    if constraints is None:
        return None
    extra_arcs, forced, forbidden = constraints
    weights = RotationWeights.measured(dg, p)
    chosen = min_weight_closure(
        dg, weights, forced=forced, forbidden=forbidden, extra_arcs=extra_arcs
    )
    if chosen is None:
        return None
    return matching_of(dg, chosen)


def max_robustness(p, cap=None):
    """Largest d admitting a d-robust matching, with a witness matching.

    Searches upward from 0 (d-robust implies (d-1)-robust, so the feasible
    region is a prefix).  The search stops at ``cap`` (default: the larger
    side size) or at the total-inversion bound, past which every profile in
    the ball has already appeared.
    """
    if cap is None:
        cap = max(p.n_u, p.n_w)
    exhaustion = sum(l * (l - 1) // 2 for l in map(len, p.u_lists)) + sum(
        l * (l - 1) // 2 for l in map(len, p.w_lists)
    )
    limit = min(cap, exhaustion)
    best = find_d_robust(p, 0)
    if best is None:
        return None
    d = 0
    while d < limit:
        nxt = find_d_robust(p, d + 1)
        if nxt is None:
            break
        d += 1
        best = nxt
    return d, best
