import pytest

from ftbfs.sdk.errors import InconsistentChainError, InstanceTooLargeError
from ftbfs.sdk.graph import FailureMode, FailureSpec, GraphModel, gen_graph, remove_failures
from ftbfs.sdk.paths import (
    build_base_chain,
    build_failure_schedule,
    common_prefix,
    detour,
    exhaustive_preferred_oracle,
    lex_shortest_path,
    preferred_path,
)
from ftbfs.sdk.verifier import bfs_distances

EDGE = FailureMode.EDGE
VERTEX = FailureMode.VERTEX


def edges(*items):
    return FailureSpec.of(EDGE, items)


def test_lex_shortest_path_prefers_smaller_index(diamond):
    """0->3 in DIAMOND goes through 1, not 2."""
    assert lex_shortest_path(diamond, 0, 3).vertices == (0, 1, 3)


def test_lex_shortest_path_unique(p4):
    """A path graph has exactly one route."""
    rec = lex_shortest_path(p4, 0, 3)
    assert rec.vertices == (0, 1, 2, 3)
    assert rec.length == 3
    assert rec.last_edge == (2, 3)


def test_lex_shortest_path_twodiv(twodiv):
    """Of the three length-4 routes 0->4, the smallest sequence wins."""
    assert lex_shortest_path(twodiv, 0, 4).vertices == (0, 1, 2, 3, 4)


def test_lex_shortest_path_on_view_and_unreachable(diamond):
    """Views are searched like graphs; a cut-off target yields None."""
    view = remove_failures(diamond, edges((1, 3)))
    rec = lex_shortest_path(view, 0, 3)
    assert rec.vertices == (0, 2, 3)
    assert rec.avoided == edges((1, 3))
    cut = remove_failures(diamond, edges((1, 3), (2, 3)))
    assert lex_shortest_path(cut, 0, 3) is None


def test_lex_shortest_path_from_removed_vertex(diamond):
    """A removed endpoint has no path, even though its old neighbours still reach the target."""
    view = remove_failures(diamond, FailureSpec.of(FailureMode.VERTEX, [1]))
    assert lex_shortest_path(view, 1, 3) is None
    assert lex_shortest_path(view, 0, 1) is None
    assert lex_shortest_path(view, 0, 3).vertices == (0, 2, 3)


def test_lex_shortest_path_rejects_bad_vertex(diamond):
    """Vertices must be in range."""
    with pytest.raises(ValueError, match="out of range"):
        lex_shortest_path(diamond, 0, 9)


def test_preferred_path_leaves_p0_earliest(twodiv):
    """Under (2,3) the detour leaving at 1 beats the one leaving at 2."""
    chain = build_base_chain(twodiv, 0, 4, EDGE)
    rec = preferred_path(twodiv, 0, 4, chain, edges((2, 3)))
    assert rec.vertices == (0, 1, 5, 6, 4)
    assert rec.div0 == 1


def test_preferred_path_diamond(diamond):
    """Single failure reroutes; the pair cuts 3 off."""
    chain = build_base_chain(diamond, 0, 3, EDGE)
    assert preferred_path(diamond, 0, 3, chain, edges((1, 3))).vertices == (0, 2, 3)
    assert preferred_path(diamond, 0, 3, chain, edges((1, 3), (0, 2))) is None
    assert preferred_path(diamond, 0, 3, chain, FailureSpec.empty()).vertices == (0, 1, 3)


def test_preferred_path_rejects_foreign_failure(diamond):
    """A failure that is not on P0 does not extend the chain."""
    chain = build_base_chain(diamond, 0, 3, EDGE)
    with pytest.raises(InconsistentChainError, match="not a failed element"):
        preferred_path(diamond, 0, 3, chain, edges((0, 2)))
    with pytest.raises(InconsistentChainError, match="used for"):
        preferred_path(diamond, 0, 2, chain, edges((1, 3)))


def test_preferred_path_vertex_mode(diamond):
    """Failing vertex 1 leaves the route through 2."""
    chain = build_base_chain(diamond, 0, 3, VERTEX)
    rec = preferred_path(diamond, 0, 3, chain, FailureSpec.of(VERTEX, [1]))
    assert rec.vertices == (0, 2, 3)


def test_schedule_p4_single_failures(p4):
    """Singles follow the empty set, farthest failed edge first."""
    _, schedule = build_failure_schedule(p4, 0, 3, 1, EDGE)
    assert [e.failure for e in schedule] == [
        FailureSpec.empty(EDGE), edges((2, 3)), edges((1, 2)), edges((0, 1))]


def test_schedule_twodiv_pairs_by_first_failure(twodiv):
    """All pairs with e1=(3,4) come before any pair with e1=(2,3)."""
    _, schedule = build_failure_schedule(twodiv, 0, 4, 2, EDGE)
    firsts = [e.first for e in schedule if len(e.failure) == 2]
    assert (3, 4) in firsts and (2, 3) in firsts
    assert max(i for i, f in enumerate(firsts) if f == (3, 4)) < min(i for i, f in enumerate(firsts) if f == (2, 3))


def test_schedule_c5_pair_order(c5):
    """On C5 the pairs under e1=(1,2) walk P1=[0,4,3,2] from its far end."""
    chain, schedule = build_failure_schedule(c5, 0, 2, 2, EDGE)
    assert chain.p0.vertices == (0, 1, 2)
    assert chain.entry((1, 2)).p1.vertices == (0, 4, 3, 2)
    pairs = [(e.first, e.second) for e in schedule if len(e.failure) == 2]
    assert pairs[:3] == [((1, 2), (2, 3)), ((1, 2), (3, 4)), ((1, 2), (0, 4))]
    assert all(len(e.failure) < 2 for e in schedule[:3])


def test_schedule_pairs_respect_position_on_p0(twodiv):
    """A second failure that is also on P0 always lies farther from s than the first."""
    chain, schedule = build_failure_schedule(twodiv, 0, 4, 2, EDGE)
    p0 = chain.p0.vertices
    p0_edges = [tuple(sorted(x)) for x in zip(p0, p0[1:])]
    for e in schedule:
        if len(e.failure) == 2 and e.second in p0_edges:
            assert p0_edges.index(e.first) < p0_edges.index(e.second)


def test_schedule_vertex_mode_skips_endpoints_and_sources(c5):
    """Vertex failures are internal vertices only, never protected sources."""
    _, schedule = build_failure_schedule(c5, 0, 2, 2, VERTEX, protected=(0, 4))
    failed = {x for e in schedule for x in e.failure}
    assert failed <= {1, 3}
    assert 4 not in failed


def test_schedule_rejects_same_endpoints(diamond):
    """s must differ from v."""
    with pytest.raises(ValueError, match="must differ"):
        build_failure_schedule(diamond, 2, 2, 1, EDGE)


def test_schedule_unreachable_target_is_only_empty_failure():
    """An isolated target gets the empty failure and nothing else."""
    g = gen_graph(GraphModel.PATH, 3).with_edges([(0, 1)])
    chain, schedule = build_failure_schedule(g, 0, 2, 2, EDGE)
    assert chain.p0 is None
    assert [len(e.failure) for e in schedule] == [0]


def test_detour_is_last_off_base_subpath(c5, twodiv):
    """The detour keeps its endpoints on the base path."""
    assert detour(c5, (0, 4, 3, 2), [(0, 1, 2)]) == (0, 4, 3, 2)
    assert detour(twodiv, (0, 1, 5, 6, 4), [(0, 1, 2, 3, 4)]) == (1, 5, 6, 4)
    assert detour(twodiv, (0, 1, 2, 3, 4), [(0, 1, 2, 3, 4)]) == ()


def test_common_prefix_index():
    """Index of the last shared vertex."""
    assert common_prefix((0, 1, 2), (0, 1, 5)) == 1
    assert common_prefix((0, 1), (0, 1)) == 1
    assert common_prefix((0, 1), (2, 1)) == -1


def _schedule_agreement(g, s, v, k, mode):
    chain, schedule = build_failure_schedule(g, s, v, k, mode)
    for entry in schedule:
        f = entry.failure
        fast = preferred_path(g, s, v, chain, f)
        slow = exhaustive_preferred_oracle(g, s, v, chain, f)
        assert (fast is None) == (slow is None), f"{s}->{v} under {f}"
        if fast is None: continue
        assert fast.vertices == slow.vertices, f"{s}->{v} under {f}"
        dist = bfs_distances(remove_failures(g, f), s)[v]
        assert fast.length == dist


def test_oracle_agrees_on_diamond(diamond):
    """Every scheduled failure set on DIAMOND gets the same path from both routes."""
    for v in (1, 2, 3):
        _schedule_agreement(diamond, 0, v, 2, EDGE)


def test_oracle_agrees_on_twodiv_and_c5(twodiv, c5):
    """Fixture graphs agree in both failure modes."""
    for mode in (EDGE, VERTEX):
        for v in range(1, twodiv.n):
            _schedule_agreement(twodiv, 0, v, 2, mode)
        for v in range(1, c5.n):
            _schedule_agreement(c5, 0, v, 2, mode)


@pytest.mark.slow
def test_oracle_agrees_on_seeded_corpus():
    """Seeded G(10, 0.3): fast and brute-force preferred paths coincide for all scheduled sets."""
    for seed in range(100):
        g = gen_graph(GraphModel.GNP, 10, 0.3, seed)
        for v in range(1, g.n):
            _schedule_agreement(g, 0, v, 2, EDGE)


def test_oracle_size_guard(monkeypatch):
    """The brute-force oracle refuses instances above FTBFS_ORACLE_MAX_N."""
    monkeypatch.setenv("FTBFS_ORACLE_MAX_N", "5")
    g = gen_graph(GraphModel.PATH, 6)
    chain = build_base_chain(g, 0, 5, EDGE)
    with pytest.raises(InstanceTooLargeError, match="n <= 5"):
        exhaustive_preferred_oracle(g, 0, 5, chain, FailureSpec.empty())
