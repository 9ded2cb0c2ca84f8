"""Shared strategies and small utilities for the test suite."""

import random

from hypothesis import strategies as st

from swapstable import Agent, Matching, Side, SwapOp, validate_profile


@st.composite
def profiles(draw, max_side=4, min_side=0, complete=False):
    """Random valid profile; mutual acceptability holds by construction."""
    n_u = draw(st.integers(min_side, max_side))
    n_w = draw(st.integers(min_side, max_side))
    accept = [
        [complete or draw(st.booleans()) for _ in range(n_w)] for _ in range(n_u)
    ]
    u_lists = []
    for i in range(n_u):
        base = [j for j in range(n_w) if accept[i][j]]
        u_lists.append(list(draw(st.permutations(base))))
    w_lists = []
    for j in range(n_w):
        base = [i for i in range(n_u) if accept[i][j]]
        w_lists.append(list(draw(st.permutations(base))))
    return validate_profile(u_lists, w_lists)


def random_matching(p, rng, skip_chance=0.2):
    """A random valid (not necessarily stable) matching of p."""
    pairs = []
    free_w = set(range(p.n_w))
    order = list(range(p.n_u))
    rng.shuffle(order)
    for i in order:
        options = [j for j in p.u_lists[i] if j in free_w]
        if options and rng.random() >= skip_chance:
            j = rng.choice(options)
            pairs.append((i, j))
            free_w.discard(j)
    return Matching.from_pairs(p.n_u, p.n_w, pairs)


def random_profiles(count, n_u, n_w, density, seed_base=0):
    """Deterministic batch of gen_random instances."""
    from swapstable import gen_random

    return [gen_random(n_u, n_w, density, seed=seed_base + k) for k in range(count)]


def random_swap(p, rng):
    """A random adjacent transposition applicable to p, or None."""
    sized = [(Agent.u(i), lst) for i, lst in enumerate(p.u_lists) if len(lst) >= 2]
    sized += [(Agent.w(j), lst) for j, lst in enumerate(p.w_lists) if len(lst) >= 2]
    if not sized:
        return None
    owner, lst = rng.choice(sized)
    pos = rng.randrange(len(lst) - 1)
    wrap = Agent.w if owner.side == Side.U else Agent.u
    return SwapOp(owner, wrap(lst[pos]), wrap(lst[pos + 1]))


def make_rng(seed):
    return random.Random(seed)
