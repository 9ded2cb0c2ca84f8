"""Brute-force reference implementations, used only for validation.

Everything here trades speed for being an unarguable transcription of the
definitions: matchings are enumerated outright, profile balls are walked
swap by swap, and the robustness/near-stability definitions are applied
literally.  The fast engines are tested against this module; none of them
call into it.

Caps are hard errors (TooLarge), never silent truncation.
"""

import itertools

import numpy as np

from . import _kernels
from .errors import InvalidInput, TooLarge
from .profile import (
    Matching,
    Objective,
    Profile,
    egalitarian_cost,
    is_perfect,
    is_stable,
    swap_distance,
)

MATCHING_CAP = 6
PROFILE_CAP = 2_000_000


def enumerate_matchings(p, cap=MATCHING_CAP):
    """Yield every matching over mutually acceptable pairs exactly once.

    Recursion over U agents; each agent either stays unmatched or takes an
    acceptable, still-free partner.  Raises TooLarge when either side
    exceeds ``cap``.
    """
    if max(p.n_u, p.n_w) > cap:
        raise TooLarge(
            "matching enumeration capped at side size %d, got %dx%d"
            % (cap, p.n_u, p.n_w)
        )
    pairs = []
    used = set()

    def extend(i):
        if i == p.n_u:
            yield Matching.from_pairs(p.n_u, p.n_w, pairs)
            return
        yield from extend(i + 1)  # u_i unmatched
        for j in p.u_lists[i]:
            if j not in used:
                used.add(j)
                pairs.append((i, j))
                yield from extend(i + 1)
                pairs.pop()
                used.remove(j)

    yield from extend(0)


def enumerate_stable_bf(p, cap=MATCHING_CAP):
    """All stable matchings by filtering the full enumeration."""
    return [m for m in enumerate_matchings(p, cap=cap) if is_stable(p, m)]


def _neighbors(lists):
    """All single-swap variants of one side's lists, as (agent, lists)."""
    for a, lst in enumerate(lists):
        for k in range(len(lst) - 1):
            swapped = list(lst)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            out = list(lists)
            out[a] = tuple(swapped)
            yield tuple(out)


def _list_ball(lst, d):
    """All orderings of one list within Kendall-tau distance d, BFS order."""
    seen = {lst}
    frontier = [lst]
    out = [lst]
    for _ in range(d):
        nxt = []
        for cur in frontier:
            for k in range(len(cur) - 1):
                var = list(cur)
                var[k], var[k + 1] = var[k + 1], var[k]
                var = tuple(var)
                if var not in seen:
                    seen.add(var)
                    nxt.append(var)
                    out.append(var)
        frontier = nxt
    return out


def profiles_within(p, d, mode, max_profiles=PROFILE_CAP):
    """Every profile within swap distance d of p, each exactly once.

    mode "global": total distance over all lists ≤ d (BFS by layers, so
    closer profiles come first).  mode "local": every agent's own list
    within d (cartesian product of per-list balls).  Raises TooLarge when
    the ball exceeds ``max_profiles``.
    """
    if mode not in ("global", "local"):
        raise InvalidInput("mode must be 'global' or 'local', got %r" % mode)
    if mode == "global":
        start = (p.u_lists, p.w_lists)
        seen = {start}
        frontier = [start]
        yield p
        count = 1
        for _ in range(d):
            nxt = []
            for u_lists, w_lists in frontier:
                for var in _neighbors(u_lists):
                    key = (var, w_lists)
                    if key not in seen:
                        seen.add(key)
                        nxt.append(key)
                for var in _neighbors(w_lists):
                    key = (u_lists, var)
                    if key not in seen:
                        seen.add(key)
                        nxt.append(key)
            count += len(nxt)
            if count > max_profiles:
                raise TooLarge("profile ball exceeds %d profiles" % max_profiles)
            for u_lists, w_lists in nxt:
                yield Profile(u_lists, w_lists, p.u_names, p.w_names)
            frontier = nxt
        return
    u_balls = [_list_ball(lst, d) for lst in p.u_lists]
    w_balls = [_list_ball(lst, d) for lst in p.w_lists]
    total = 1
    for ball in itertools.chain(u_balls, w_balls):
        total *= len(ball)
        if total > max_profiles:
            raise TooLarge("profile ball exceeds %d profiles" % max_profiles)
    for u_combo in itertools.product(*u_balls):
        for w_combo in itertools.product(*w_balls):
            yield Profile(tuple(u_combo), tuple(w_combo), p.u_names, p.w_names)


def brute_is_d_robust(p, m, d, max_profiles=PROFILE_CAP):
    """Definitional check: m stable in every profile within distance d."""
    for q in profiles_within(p, d, "global", max_profiles=max_profiles):
        if not is_stable(q, m):
            return False
    return True


def brute_global_cost(p, m, max_d=3, max_profiles=PROFILE_CAP):
    """Smallest total swap distance to a profile where m is stable.

    Walks ball layers outward, so the first hit is a closest witness;
    returns (cost, witness profile), or None when no profile within max_d
    works (the true cost is then larger, possibly infinite).
    """
    for q in profiles_within(p, max_d, "global", max_profiles=max_profiles):
        if is_stable(q, m):
            return (int(swap_distance(p, q)), q)
    return None


def _variant_rank_rows(lists, n_other, d):
    """Per-agent rank rows for every list ordering within distance d."""
    balls = [_list_ball(lst, d) for lst in lists]
    width = max(len(b) for b in balls) if balls else 1
    rows = np.empty((len(lists), width, n_other), dtype=np.int64)
    counts = np.empty(len(lists), dtype=np.int64)
    for a, ball in enumerate(balls):
        counts[a] = len(ball)
        rows[a, :, :] = len(lists[a])
        for c, variant in enumerate(ball):
            for k, other in enumerate(variant):
                rows[a, c, other] = k
    return rows, counts


def brute_is_locally_d_stable(p, m, d):
    """Is m stable in some profile whose every list moved at most d swaps?

    Exhaustive over the product of per-list balls, organized so each W
    agent's choice is checked independently once the U side is fixed.
    """
    ru, cnt_u = _variant_rank_rows(p.u_lists, p.n_w, d)
    rw, cnt_w = _variant_rank_rows(p.w_lists, p.n_u, d)
    return bool(
        _kernels.stabilizable_product(
            ru, rw, p.len_u, p.len_w, cnt_u, cnt_w, m.pu, m.pw
        )
    )


def _objective_ok(p, m, objective, eta):
    if objective == Objective.PERFECT:
        return is_perfect(p, m)
    if objective == Objective.EGALITARIAN:
        if eta is None:
            raise InvalidInput("egalitarian objective needs an eta bound")
        return egalitarian_cost(p, m) <= eta
    raise InvalidInput("objective must be perfect or egalitarian")


def brute_solve_near(p, budget, mode, objective, eta=None, max_profiles=PROFILE_CAP):
    """Exhaustive near-stable solver mirroring solve_global_near/solve_local_near.

    Looks for a matching that satisfies the objective in p (costs always
    measured against p) and is stable in some profile within the budget.
    Returns (matching, witness profile) for mode "global", the matching
    alone for mode "local", None when there is none.
    """
    objective = Objective(objective)
    candidates = [
        m
        for m in enumerate_matchings(p)
        if _objective_ok(p, m, objective, eta)
    ]
    if mode == "global":
        for q in profiles_within(p, budget, "global", max_profiles=max_profiles):
            for m in candidates:
                if is_stable(q, m):
                    return (m, q)
        return None
    if mode == "local":
        for m in candidates:
            for q in profiles_within(p, budget, "local", max_profiles=max_profiles):
                if is_stable(q, m):
                    return m
        return None
    raise InvalidInput("mode must be 'global' or 'local', got %r" % mode)
