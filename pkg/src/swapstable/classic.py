"""Deferred acceptance and the matched/unmatched partition.

The proposal loop runs in ascending agent order so outputs are bit-stable,
though the resulting matching is order-independent anyway.  Which agents
are matched does not depend on the stable matching chosen, so the
partition is read off the U-optimal one.
"""

from collections import deque
from dataclasses import dataclass

from .profile import Agent, Matching, Profile


def _propose(n_u, n_w, u_lists, rank_w):
    """Proposer-optimal deferred acceptance over index lists."""
    nxt = [0] * n_u
    pw = [-1] * n_w
    free = deque(range(n_u))
    while free:
        i = free.popleft()
        lst = u_lists[i]
        placed = False
        while nxt[i] < len(lst):
            j = lst[nxt[i]]
            nxt[i] += 1
            cur = pw[j]
            if cur < 0:
                pw[j] = i
                placed = True
                break
            if rank_w[j, i] < rank_w[j, cur]:
                pw[j] = i
                free.append(cur)
                placed = True
                break
        if not placed:
            pass  # exhausted the list, stays unmatched
    return [(i, j) for j, i in enumerate(pw) if i >= 0]


def u_optimal(p):
    """Stable matching where every U-agent does weakly best.

    Parameters
    ----------
    p : Profile

    Returns
    -------
    Matching
        Stable in p; no U-agent has a better partner in any other stable
        matching of p.
    """
    pairs = _propose(p.n_u, p.n_w, p.u_lists, p.rank_w)
    return Matching.from_pairs(p.n_u, p.n_w, pairs)


def w_optimal(p):
    """Stable matching where every W-agent does weakly best."""
    pairs = _propose(p.n_w, p.n_u, p.w_lists, p.rank_u)
    return Matching.from_pairs(p.n_u, p.n_w, [(i, j) for j, i in pairs])


@dataclass(frozen=True)
class PartitionResult:
    """Agents matched in every stable matching vs. matched in none."""

    matched_agents: frozenset
    unmatched_agents: frozenset
    n_matched: int
    n_unmatched: int


def matched_partition(p):
    """Split agents into always-matched and never-matched sets.

    Every stable matching of a profile matches exactly the same agents,
    so one run of deferred acceptance determines the split.
    """
    m = u_optimal(p)
    matched = set()
    for i, j in m.pairs:
        matched.add(Agent.u(i))
        matched.add(Agent.w(j))
    unmatched = frozenset(a for a in p.agents() if a not in matched)
    return PartitionResult(
        matched_agents=frozenset(matched),
        unmatched_agents=unmatched,
        n_matched=len(matched),
        n_unmatched=len(unmatched),
    )
