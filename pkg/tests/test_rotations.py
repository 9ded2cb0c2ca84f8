"""Rotation poset: successor maps, closed-subset bijection, weighted closures."""

import random

import pytest
from hypothesis import given, settings

from swapstable import (
    Agent,
    InvalidInput,
    NoSuccessorDefined,
    NotClosed,
    Rotation,
    RotationWeights,
    closed_subsets,
    egalitarian_cost,
    eliminate,
    enumerate_stable_matchings,
    exposed_rotations,
    gen_random,
    is_stable,
    matching_of,
    min_weight_closure,
    rotation_digraph,
    stable_pairs,
    successor,
    u_optimal,
    w_optimal,
)
from swapstable.oracle import enumerate_stable_bf

from helpers import profiles, random_profiles


def brute_successor(p, m, i):
    lst = p.u_lists[i]
    for pos in range(int(p.rank_u[i, m.pu[i]]) + 1, len(lst)):
        j = lst[pos]
        if m.pw[j] < 0:
            return None
        if p.rank_w[j, i] < p.rank_w[j, m.pw[j]]:
            return Agent.w(j)
    return None


@settings(max_examples=80, deadline=None)
@given(profiles(max_side=5))
def test_successor_matches_definition(p):
    for m in enumerate_stable_bf(p):
        for i in range(p.n_u):
            u = Agent.u(i)
            if m.pu[i] < 0:
                with pytest.raises(NoSuccessorDefined):
                    successor(p, m, u)
            else:
                assert successor(p, m, u) == brute_successor(p, m, i)


def test_successor_rejects_side_w():
    p = gen_random(3, 3, 1.0, seed=5)
    with pytest.raises(InvalidInput):
        successor(p, u_optimal(p), Agent.w(0))


def test_rotation_canonical_and_moves():
    rho = Rotation.canonical([(3, 1), (0, 2), (2, 0)])
    assert rho.cycle == ((0, 2), (2, 0), (3, 1))
    assert list(rho.moves()) == [(0, 2, 0), (2, 0, 1), (3, 1, 2)]
    assert len(rho) == 3


@settings(max_examples=80, deadline=None)
@given(profiles(max_side=5))
def test_closed_subsets_enumerate_exactly_the_stable_matchings(p):
    dg = rotation_digraph(p)
    subsets = list(closed_subsets(dg))
    produced = [matching_of(dg, s) for s in subsets]
    assert len(set(produced)) == len(subsets)
    assert set(produced) == set(enumerate_stable_bf(p))
    assert matching_of(dg, frozenset()) == u_optimal(p)
    assert matching_of(dg, frozenset(range(dg.n))) == w_optimal(p)
    assert set(enumerate_stable_matchings(p)) == set(produced)


def test_matching_of_rejects_open_subsets():
    for p in random_profiles(40, 5, 5, 1.0, seed_base=300):
        dg = rotation_digraph(p)
        for a, b in dg.arcs:
            with pytest.raises(NotClosed):
                matching_of(dg, frozenset([b]))
            break


@settings(max_examples=60, deadline=None)
@given(profiles(max_side=5))
def test_measured_weights_reproduce_egalitarian_deltas(p):
    dg = rotation_digraph(p)
    weights = RotationWeights.measured(dg, p)
    base = egalitarian_cost(p, u_optimal(p))
    for s in closed_subsets(dg):
        expected = base + sum(weights.delta[r] for r in s)
        assert egalitarian_cost(p, matching_of(dg, s)) == expected


def brute_closure(dg, delta, forced, forbidden, extra_arcs):
    best = None
    for s in closed_subsets(dg):
        if not forced <= s or s & forbidden:
            continue
        if any(b in s and a not in s for a, b in extra_arcs):
            continue
        w = sum(delta[r] for r in s)
        if best is None or w < best[0]:
            best = (w, s)
    return best


def test_min_weight_closure_agrees_with_enumeration():
    rng = random.Random(7)
    checked = 0
    for p in random_profiles(120, 5, 5, 1.0, seed_base=900):
        dg = rotation_digraph(p)
        if dg.n == 0:
            continue
        delta = [rng.randint(-5, 5) for _ in range(dg.n)]
        nodes = list(range(dg.n))
        forced = frozenset(rng.sample(nodes, k=rng.randint(0, min(2, dg.n))))
        rest = [i for i in nodes if i not in forced]
        forbidden = frozenset(rng.sample(rest, k=rng.randint(0, min(2, len(rest)))))
        extra = frozenset(
            (rng.choice(nodes), rng.choice(nodes)) for _ in range(rng.randint(0, 2))
        )
        got = min_weight_closure(
            dg, RotationWeights(delta=tuple(delta)), forced, forbidden, extra
        )
        want = brute_closure(dg, delta, forced, forbidden, extra)
        if want is None:
            assert got is None
        else:
            assert got is not None
            assert sum(delta[r] for r in got) == want[0]
            assert forced <= got and not got & forbidden
            closed_under = dg.arcs | extra
            assert all(a in got for a, b in closed_under if b in got)
            checked += 1
    assert checked > 40


def test_elimination_walks_the_lattice():
    for p in random_profiles(60, 5, 5, 1.0, seed_base=40):
        everything = set(enumerate_stable_bf(p))
        m = u_optimal(p)
        seen = {m}
        while True:
            rotations = exposed_rotations(p, m)
            if not rotations:
                break
            m = eliminate(m, rotations[0])
            assert is_stable(p, m)
            seen.add(m)
        assert m == w_optimal(p)
        assert seen <= everything


def test_eliminate_and_exposed_reject_bad_inputs():
    p = gen_random(4, 4, 1.0, seed=0)
    dg = rotation_digraph(p)
    assert dg.n > 0
    with pytest.raises(InvalidInput):
        eliminate(w_optimal(p), dg.rotations[0])
    bad = matching_of(dg, frozenset())
    bad = bad.__class__(n_u=bad.n_u, n_w=bad.n_w, pairs=frozenset())
    with pytest.raises(InvalidInput):
        exposed_rotations(p, bad)


@settings(max_examples=60, deadline=None)
@given(profiles(max_side=5))
def test_stable_pairs_is_union_over_stable_matchings(p):
    union = set()
    for m in enumerate_stable_bf(p):
        union |= set(m.pairs)
    assert set(stable_pairs(p)) == union
