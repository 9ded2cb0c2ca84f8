"""Core profile, matching, swap and blocking-pair behavior."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swapstable import (
    INFINITE,
    Agent,
    AnalysisQuery,
    InvalidInput,
    InvalidMatching,
    Matching,
    NonAdjacentSwap,
    Objective,
    Side,
    SwapOp,
    UnknownAgent,
    ValidationError,
    apply_swap,
    blocking_pairs,
    egalitarian_cost,
    is_perfect,
    is_stable,
    rank,
    swap_distance,
    swap_distance_per_agent,
    validate_matching,
    validate_profile,
)

from helpers import profiles, random_matching, make_rng


def test_validate_profile_collects_all_issues():
    with pytest.raises(ValidationError) as err:
        validate_profile([[0, 0], [5]], [[0], [1]])
    issues = "\n".join(err.value.issues)
    assert "repeats" in issues
    assert "out-of-range" in issues
    assert len(err.value.issues) >= 2


def test_validate_profile_asymmetry_names_both_agents():
    with pytest.raises(ValidationError) as err:
        validate_profile([[0]], [[]], ["left"], ["right"])
    assert "left lists right but not vice versa" in str(err.value)


def test_duplicate_names_rejected():
    with pytest.raises(ValidationError) as err:
        validate_profile([[]], [[]], ["x"], ["x"])
    assert "duplicate agent name 'x'" in str(err.value)


def test_default_names():
    p = validate_profile([[0], [0]], [[0, 1]])
    assert p.u_names == ("u1", "u2")
    assert p.w_names == ("w1",)
    assert p.agent_named("u2") == Agent.u(1)
    assert p.name_of(Agent.w(0)) == "w1"
    with pytest.raises(UnknownAgent):
        p.agent_named("nobody")


def test_rank_convention():
    p = validate_profile([[1, 0]], [[0], [0]])
    assert rank(p, Agent.u(0), Agent.w(1)) == 0
    assert rank(p, Agent.u(0), Agent.w(0)) == 1
    q = validate_profile([[1]], [[], [0]])
    # unacceptable partner ranks as the list length
    assert rank(q, Agent.u(0), Agent.w(0)) == 1


def test_apply_swap_and_adjacency():
    p = validate_profile([[0, 1, 2]], [[0], [0], [0]])
    s = SwapOp(Agent.u(0), Agent.w(0), Agent.w(1))
    q = apply_swap(p, s)
    assert q.u_lists[0] == (1, 0, 2)
    assert swap_distance(p, q) == 1
    with pytest.raises(NonAdjacentSwap):
        apply_swap(p, SwapOp(Agent.u(0), Agent.w(0), Agent.w(2)))
    with pytest.raises(InvalidInput):
        apply_swap(p, SwapOp(Agent.u(0), Agent.u(0), Agent.w(1)))


def test_swap_distance_infinite_on_different_acceptable_sets():
    p = validate_profile([[0]], [[0]])
    q = validate_profile([[]], [[]])
    assert swap_distance(p, q) == INFINITE
    per = swap_distance_per_agent(p, q)
    assert per[Agent.u(0)] == INFINITE


def _naive_inversions(a, b):
    pos = {x: k for k, x in enumerate(b)}
    return sum(
        1
        for s in range(len(a))
        for t in range(s + 1, len(a))
        if pos[a[s]] > pos[a[t]]
    )


@settings(max_examples=60, deadline=None)
@given(profiles(max_side=4), st.randoms(use_true_random=False))
def test_swap_distance_matches_pairwise_inversion_count(p, pyrng):
    lists_u = [list(lst) for lst in p.u_lists]
    lists_w = [list(lst) for lst in p.w_lists]
    for lst in lists_u + lists_w:
        pyrng.shuffle(lst)
    q = validate_profile(lists_u, lists_w, p.u_names, p.w_names)
    want = sum(
        _naive_inversions(a, b)
        for a, b in zip(p.u_lists + p.w_lists, q.u_lists + q.w_lists)
    )
    assert swap_distance(p, q) == want
    assert swap_distance(q, p) == want
    assert swap_distance(p, p) == 0


@settings(max_examples=80, deadline=None)
@given(profiles(max_side=4), st.integers(0, 2**30))
def test_blocking_pairs_match_definition(p, seed):
    m = random_matching(p, make_rng(seed))
    got = set(blocking_pairs(p, m))
    expect = set()
    for i in range(p.n_u):
        for j in p.u_lists[i]:
            if m.pu[i] == j:
                continue
            u_better = m.pu[i] < 0 or p.rank_u[i, j] < p.rank_u[i, m.pu[i]]
            w_better = m.pw[j] < 0 or p.rank_w[j, i] < p.rank_w[j, m.pw[j]]
            if u_better and w_better:
                expect.add((Agent.u(i), Agent.w(j)))
    assert got == expect
    assert is_stable(p, m) == (not expect)


@settings(max_examples=60, deadline=None)
@given(profiles(max_side=4), st.integers(0, 2**30))
def test_egalitarian_cost_matches_definition(p, seed):
    m = random_matching(p, make_rng(seed))
    want = 0
    for i in range(p.n_u):
        want += p.rank_u[i, m.pu[i]] if m.pu[i] >= 0 else len(p.u_lists[i])
    for j in range(p.n_w):
        want += p.rank_w[j, m.pw[j]] if m.pw[j] >= 0 else len(p.w_lists[j])
    assert egalitarian_cost(p, m) == want


def test_matching_validation():
    p = validate_profile([[0], []], [[0]])
    with pytest.raises(InvalidMatching):
        Matching.from_pairs(2, 1, [(0, 0), (1, 0)])  # w shared
    with pytest.raises(InvalidMatching):
        validate_matching(p, Matching.from_pairs(2, 1, [(1, 0)]))  # not acceptable
    with pytest.raises(InvalidMatching):
        validate_matching(p, Matching.from_pairs(1, 1, [(0, 0)]))  # wrong size
    m = Matching.from_pairs(2, 1, [(0, 0)])
    validate_matching(p, m)
    assert m.partner_of(Agent.u(0)) == Agent.w(0)
    assert m.partner_of(Agent.u(1)) is None


def test_is_perfect():
    p = validate_profile([[0], [0]], [[0, 1]])
    assert not is_perfect(p, Matching.from_pairs(2, 1, [(0, 0)]))
    q = validate_profile([[0]], [[0]])
    assert is_perfect(q, Matching.from_pairs(1, 1, [(0, 0)]))
    assert not is_perfect(q, Matching.empty(1, 1))


def test_analysis_query_requires_eta_exactly_for_egalitarian():
    AnalysisQuery(d=1, objective=Objective.EGALITARIAN, eta=5)
    AnalysisQuery(d=1, objective=Objective.PERFECT)
    with pytest.raises(InvalidInput):
        AnalysisQuery(d=1, objective=Objective.EGALITARIAN)
    with pytest.raises(InvalidInput):
        AnalysisQuery(d=1, objective=Objective.PERFECT, eta=5)


def test_agent_and_side_helpers():
    assert Agent.u(3).side is Side.U
    assert Agent.w(0).side is Side.W
    p = validate_profile([[0]], [[0]], ["a"], ["b"])
    assert list(p.agents()) == [Agent.u(0), Agent.w(0)]
    assert p.list_of(Agent.u(0)) == (0,)
    with pytest.raises(UnknownAgent):
        p.list_of(Agent.u(7))
