"""Deterministic fixtures and seeded random instances.

The crown-like family (gen_example2) has a unique stable matching whose
egalitarian cost grows as n²−1 while one swap away a cost-(n+1) matching
becomes stable; the four-agent instance (gen_example3) has a unique,
non-perfect stable matching that one swap turns perfect; the cyclic Latin
square is the extremal family for robustness (its diagonal matching is
(n−1)-robust).  gen_example1_fixture reconstructs a 4x4 profile with a
prescribed five-matching lattice by constraint search.
"""

import itertools
import random
from functools import lru_cache

from . import oracle
from .errors import InvalidInput
from .profile import Matching, Profile, is_stable, validate_profile


def gen_example2(n):
    """Crown family on sides {a_0..a_{n-1}, x_1..x_n} / {b_0..b_{n-1}, y_1..y_n}.

    a_i wants b_i then b_{i+1 (mod n)}; x_i wants y_i then b_1..b_{n-1};
    b_0 ranks a_0 over a_{n-1}; b_i (i ≥ 1) ranks a_{i-1} first, then every
    x, then a_i; y_i only accepts x_i.  Needs n ≥ 2.
    """
    if n < 2:
        raise InvalidInput("gen_example2 needs n >= 2")
    u_names = ["a%d" % i for i in range(n)] + ["x%d" % i for i in range(1, n + 1)]
    w_names = ["b%d" % j for j in range(n)] + ["y%d" % i for i in range(1, n + 1)]
    u_lists = []
    for i in range(n):
        u_lists.append([i, (i + 1) % n])
    for i in range(1, n + 1):
        u_lists.append([n + i - 1] + list(range(1, n)))
    w_lists = [[0, n - 1]]
    for j in range(1, n):
        w_lists.append([j - 1] + list(range(n, 2 * n)) + [j])
    for i in range(1, n + 1):
        w_lists.append([n + i - 1])
    return validate_profile(u_lists, w_lists, u_names, w_names)


def example2_stable_matching(n):
    """The unique stable matching of gen_example2(n): a_i-b_i and x_i-y_i."""
    pairs = [(i, i) for i in range(2 * n)]
    return Matching.from_pairs(2 * n, 2 * n, pairs)


def example2_rotated_matching(n):
    """The cheap near-stable matching: a_i-b_{i+1} and x_i-y_i."""
    pairs = [(i, (i + 1) % n) for i in range(n)]
    pairs += [(n + k, n + k) for k in range(n)]
    return Matching.from_pairs(2 * n, 2 * n, pairs)


def gen_example3():
    """Four agents: a1: b1; a2: b1 b2; b1: a2 a1; b2: a2."""
    return validate_profile(
        [[0], [0, 1]],
        [[1, 0], [1]],
        ["a1", "a2"],
        ["b1", "b2"],
    )


def gen_cyclic_latin(n):
    """Complete n x n profile where u_i ranks w_{i+k} at position k.

    Every unmatched pair of the diagonal matching has rank sum exactly n,
    which makes the diagonal top-choice matching (n−1)-robust and the
    profile position-wise distinct.
    """
    if n < 1:
        raise InvalidInput("gen_cyclic_latin needs n >= 1")
    u_lists = [[(i + k) % n for k in range(n)] for i in range(n)]
    w_lists = [[(j + k) % n for k in range(n)] for j in range(n)]
    return validate_profile(u_lists, w_lists)


def gen_random(n_u, n_w, density, seed):
    """Seeded random profile; each cross pair acceptable with prob density.

    Acceptability is drawn pair by pair (mutual by construction), then each
    agent's list is an independent shuffle of its acceptable set.  The same
    seed always gives the same profile.
    """
    if not 0 <= density <= 1:
        raise InvalidInput("density must be within [0, 1], got %r" % (density,))
    if n_u < 0 or n_w < 0:
        raise InvalidInput("side sizes must be nonnegative")
    rng = random.Random(seed)
    u_lists = [[] for _ in range(n_u)]
    w_lists = [[] for _ in range(n_w)]
    for i in range(n_u):
        for j in range(n_w):
            if rng.random() < density:
                u_lists[i].append(j)
                w_lists[j].append(i)
    for lst in u_lists:
        rng.shuffle(lst)
    for lst in w_lists:
        rng.shuffle(lst)
    return validate_profile(u_lists, w_lists)


# --- Example-1 fixture reconstruction -------------------------------------

# Five target matchings over u1..u4 / w1..w4 (0-based indices), forming a
# lattice M1 < M3 < {M4, M5} < M2.
_M1 = ((0, 1), (1, 2), (2, 3), (3, 0))
_M2 = ((0, 0), (1, 1), (2, 2), (3, 3))
_M3 = ((0, 2), (1, 3), (2, 0), (3, 1))
_M4 = ((0, 0), (1, 3), (2, 2), (3, 1))
_M5 = ((0, 2), (1, 1), (2, 0), (3, 3))
_TARGETS = (_M1, _M2, _M3, _M4, _M5)

# Partner-sequence constraints: each agent must rank its lattice-path
# partners in this relative order; the remaining agent slots anywhere.
_U_CHAINS = [
    ([1, 2, 0], 3),  # u1: w2 > w3 > w1, w4 free
    ([2, 3, 1], 0),  # u2: w3 > w4 > w2, w1 free
    ([3, 0, 2, 1], None),  # u3 fully pinned: w4 > w1 > w3 > w2
    ([0, 1, 3], 2),  # u4: w1 > w2 > w4, w3 free
]
_W_CHAINS = [
    ([0, 2, 3], 1),  # w1: u1 > u3 > u4, u2 free
    ([1, 2, 3, 0], None),  # w2 fully pinned: u2 > u3 > u4 > u1
    ([2, 0, 1], 3),  # w3: u3 > u1 > u2, u4 free
    ([3, 1, 2], 0),  # w4: u4 > u2 > u3, u1 free
]


def _insertions(chain, free):
    if free is None:
        return [tuple(chain)]
    return [
        tuple(chain[:k]) + (free,) + tuple(chain[k:])
        for k in range(len(chain) + 1)
    ]


@lru_cache(maxsize=1)
def gen_example1_fixture():
    """Search for a complete 4x4 profile with the prescribed lattice.

    Wanted: exactly the five target matchings are stable, and M2 is the
    only 1-robust one.  Returns None when no candidate satisfies every
    fact; the search space is the 4096 orderings compatible with the
    partner-sequence constraints.
    """
    targets = [Matching.from_pairs(4, 4, t) for t in _TARGETS]
    target_keys = {t.pairs for t in targets}
    u_options = [_insertions(c, f) for c, f in _U_CHAINS]
    w_options = [_insertions(c, f) for c, f in _W_CHAINS]
    all_matchings = None
    for u_combo in itertools.product(*u_options):
        for w_combo in itertools.product(*w_options):
            cand = Profile(
                tuple(u_combo),
                tuple(w_combo),
                ("u1", "u2", "u3", "u4"),
                ("w1", "w2", "w3", "w4"),
            )
            if not all(is_stable(cand, t) for t in targets):
                continue
            if all_matchings is None:
                all_matchings = list(oracle.enumerate_matchings(cand))
            stable_keys = {
                m.pairs for m in all_matchings if is_stable(cand, m)
            }
            if stable_keys != target_keys:
                continue
            ball = list(oracle.profiles_within(cand, 1, "global"))
            if not all(is_stable(q, targets[1]) for q in ball):
                continue
            if any(
                all(is_stable(q, t) for q in ball)
                for t in targets
                if t is not targets[1]
            ):
                continue
            return validate_profile(
                cand.u_lists, cand.w_lists, cand.u_names, cand.w_names
            )
    return None
