import random

import pytest

from conftest import corpus_from_lines
from venuenet.graph import VenueGraph
from venuenet.linkage import MatchPair
from venuenet.networks import (
    CouplingMatrix,
    ThresholdRule,
    ThresholdRuleError,
    UndefinedVenueError,
    apply_threshold,
    build_citation_network,
    build_coupling_matrix,
    build_knowledge_network,
    cosine_similarity,
    format_summary_table,
    summarize,
)


class TestCouplingMatrix:
    def test_two_venues_one_shared_external_key(self):
        corpus = corpus_from_lines(
            '{"id": "p1", "title": "A", "venue": "v1", "refs": ["shared classic"]}',
            '{"id": "p2", "title": "B", "venue": "v2", "refs": ["shared classic"]}',
        )
        m = build_coupling_matrix(corpus)
        assert m.venues == ["v1", "v2"]
        assert m.vectors["v1"] == {"shared classic": 1}
        assert m.vectors["v2"] == {"shared classic": 1}
        assert m.universe_size == 1

    def test_venue_without_references_excluded(self):
        corpus = corpus_from_lines(
            '{"id": "p1", "title": "A", "venue": "v1", "refs": []}',
            '{"id": "p2", "title": "B", "venue": "v2", "refs": ["x y"]}',
        )
        m = build_coupling_matrix(corpus)
        assert m.venues == ["v2"]

    def test_counts_accumulate(self):
        corpus = corpus_from_lines(
            '{"id": "p1", "title": "A", "venue": "v1", "refs": ["r"]}',
            '{"id": "p2", "title": "B", "venue": "v1", "refs": ["r"]}',
        )
        m = build_coupling_matrix(corpus)
        assert m.vectors["v1"] == {"r": 2}
        assert m.publication_counts["v1"] == 2

    def test_records_without_venue_skipped(self):
        corpus = corpus_from_lines(
            '{"id": "p1", "title": "A", "refs": ["r"]}',
        )
        assert build_coupling_matrix(corpus).venues == []

    def test_resolved_vs_raw_keys(self):
        corpus = corpus_from_lines(
            '{"id": "p1", "title": "A", "venue": "v1", "refs": ["p2", "  Raw   String "]}',
            '{"id": "p2", "title": "B", "venue": "v2", "refs": ["x"]}',
        )
        m = build_coupling_matrix(corpus)
        assert m.vectors["v1"] == {"p2": 1, "raw string": 1}

    def test_json_round_trip(self):
        corpus = corpus_from_lines(
            '{"id": "p1", "title": "A", "venue": "v1", "refs": ["r", "r", "s"]}',
        )
        m = build_coupling_matrix(corpus)
        again = CouplingMatrix.from_json(m.to_json())
        assert again.venues == m.venues
        assert again.vectors == m.vectors
        assert again.publication_counts == m.publication_counts


class TestCosine:
    def _matrix(self, vectors):
        return CouplingMatrix(venues=sorted(vectors), vectors=vectors)

    def test_identical_vectors_exact_one(self):
        m = self._matrix({"v1": {"a": 3, "b": 7}, "v2": {"a": 3, "b": 7}})
        assert cosine_similarity(m, "v1", "v2") == 1.0

    def test_disjoint_zero(self):
        m = self._matrix({"v1": {"a": 1}, "v2": {"b": 1}})
        assert cosine_similarity(m, "v1", "v2") == 0.0

    def test_half(self):
        m = self._matrix({"v1": {"a": 1, "b": 1}, "v2": {"b": 1, "c": 1}})
        assert cosine_similarity(m, "v1", "v2") == 0.5

    def test_undefined_venue(self):
        m = self._matrix({"v1": {"a": 1}})
        with pytest.raises(UndefinedVenueError):
            cosine_similarity(m, "v1", "nope")

    def test_symmetry_and_range(self):
        rng = random.Random(12)
        keys = [f"k{i}" for i in range(10)]
        for _ in range(50):
            v1 = {k: rng.randint(1, 9) for k in rng.sample(keys, rng.randint(1, 8))}
            v2 = {k: rng.randint(1, 9) for k in rng.sample(keys, rng.randint(1, 8))}
            m = self._matrix({"v1": v1, "v2": v2})
            c12 = cosine_similarity(m, "v1", "v2")
            assert c12 == cosine_similarity(m, "v2", "v1")
            assert 0.0 <= c12 <= 1.0 + 1e-15

    def test_scale_invariance(self):
        rng = random.Random(13)
        keys = [f"k{i}" for i in range(8)]
        for _ in range(30):
            v1 = {k: rng.randint(1, 9) for k in rng.sample(keys, 5)}
            v2 = {k: rng.randint(1, 9) for k in rng.sample(keys, 5)}
            scale = rng.randint(2, 10)
            m1 = self._matrix({"v1": v1, "v2": v2})
            m2 = self._matrix({"v1": {k: c * scale for k, c in v1.items()}, "v2": v2})
            assert cosine_similarity(m1, "v1", "v2") == pytest.approx(
                cosine_similarity(m2, "v1", "v2"), abs=1e-12
            )


class TestKnowledgeNetwork:
    def test_shared_key_triangle(self):
        corpus = corpus_from_lines(
            '{"id": "p1", "title": "A", "venue": "v1", "refs": ["shared"]}',
            '{"id": "p2", "title": "B", "venue": "v2", "refs": ["shared"]}',
            '{"id": "p3", "title": "C", "venue": "v3", "refs": ["shared"]}',
        )
        g = build_knowledge_network(build_coupling_matrix(corpus))
        assert g.node_count() == 3
        assert g.edge_count() == 3
        for u, v, w in g.edges():
            assert w == 1.0
        assert g.nodes["v1"]["publication_count"] == 1

    def test_disjoint_venues_no_edge(self):
        corpus = corpus_from_lines(
            '{"id": "p1", "title": "A", "venue": "v1", "refs": ["one"]}',
            '{"id": "p2", "title": "B", "venue": "v2", "refs": ["two"]}',
        )
        g = build_knowledge_network(build_coupling_matrix(corpus))
        assert g.node_count() == 2
        assert g.edge_count() == 0

    def test_single_venue(self):
        corpus = corpus_from_lines('{"id": "p1", "title": "A", "venue": "v1", "refs": ["r"]}')
        g = build_knowledge_network(build_coupling_matrix(corpus))
        assert g.node_count() == 1
        assert g.edge_count() == 0


class TestCitationNetwork:
    def test_single_citation(self):
        corpus = corpus_from_lines(
            '{"id": "a1", "title": "A", "venue": "A", "refs": ["b1"]}',
            '{"id": "b1", "title": "B", "venue": "B", "refs": []}',
        )
        g = build_citation_network(corpus)
        assert g.directed
        assert g.weight("A", "B") == 1.0

    def test_counts_aggregate(self):
        corpus = corpus_from_lines(
            '{"id": "a1", "title": "A", "venue": "A", "refs": ["b1"]}',
            '{"id": "a2", "title": "A2", "venue": "A", "refs": ["b1"]}',
            '{"id": "b1", "title": "B", "venue": "B", "refs": []}',
        )
        g = build_citation_network(corpus)
        assert g.weight("A", "B") == 2.0

    def test_mutual_citation_two_edges(self):
        corpus = corpus_from_lines(
            '{"id": "a1", "title": "A", "venue": "A", "refs": ["b1"]}',
            '{"id": "b1", "title": "B", "venue": "B", "refs": ["a1"]}',
        )
        g = build_citation_network(corpus)
        assert g.weight("A", "B") == 1.0
        assert g.weight("B", "A") == 1.0

    def test_self_citations_are_metadata(self):
        corpus = corpus_from_lines(
            '{"id": "a1", "title": "A", "venue": "A", "refs": ["a2", "b1"]}',
            '{"id": "a2", "title": "A2", "venue": "A", "refs": []}',
            '{"id": "b1", "title": "B", "venue": "B", "refs": []}',
        )
        g = build_citation_network(corpus)
        assert not g.has_edge("A", "A")
        assert g.nodes["A"]["self_citations"] == 1
        assert g.nodes["B"]["self_citations"] == 0

    def test_resolution_through_matches(self):
        corpus = corpus_from_lines(
            '{"id": "a1", "title": "A", "venue": "A", "refs": ["cx9"]}',
            '{"id": "b1", "title": "B", "venue": "B", "refs": []}',
        )
        matches = [MatchPair(left="b1", right="cx9", jaccard=1.0, sw_similarity=1.0)]
        g = build_citation_network(corpus, matches)
        assert g.weight("A", "B") == 1.0

    def test_total_weight_identity(self):
        # total edge weight == resolvable references minus within-venue citations
        rng = random.Random(31)
        venues = ["X", "Y", "Z"]
        lines = []
        ids = [f"p{i}" for i in range(30)]
        for i, pid in enumerate(ids):
            refs = rng.sample(ids, rng.randint(0, 4))
            refs = [r for r in refs if r != pid] + (["external thing"] if rng.random() < 0.5 else [])
            lines.append(
                '{"id": "%s", "title": "T", "venue": "%s", "refs": %s}'
                % (pid, venues[i % 3], str(refs).replace("'", '"'))
            )
        corpus = corpus_from_lines(*lines)
        g = build_citation_network(corpus)
        resolvable = 0
        within = 0
        for rec in corpus.records:
            for t in rec.references:
                if corpus.has_record(t):
                    resolvable += 1
                    if corpus.record(t).venue_key == rec.venue_key:
                        within += 1
        assert g.total_edge_weight() == resolvable - within


class TestThreshold:
    def _undirected(self, *weights):
        g = VenueGraph()
        for i, w in enumerate(weights):
            g.add_edge("hub", f"n{i}", w)
        return g

    def test_cosine_boundary_inclusive(self):
        g = self._undirected(0.1, 0.0999, 0.5)
        reduced = apply_threshold(g, ThresholdRule("cosine", 0.1))
        weights = sorted(w for _, _, w in reduced.edges())
        assert weights == [0.1, 0.5]

    def test_citation_boundary_exclusive(self):
        g = VenueGraph(directed=True)
        g.add_edge("a", "b", 50.0)
        g.add_edge("a", "c", 51.0)
        reduced = apply_threshold(g, ThresholdRule("citation", 50.0))
        assert not reduced.has_edge("a", "b")
        assert reduced.weight("a", "c") == 51.0

    def test_identity_when_all_pass(self):
        g = self._undirected(0.5, 0.9)
        reduced = apply_threshold(g, ThresholdRule("cosine", 0.1))
        assert reduced == g

    def test_isolated_nodes_removed(self):
        g = self._undirected(0.05, 0.5)
        g.add_node("loner")
        reduced = apply_threshold(g, ThresholdRule("cosine", 0.1))
        assert sorted(reduced.nodes) == ["hub", "n1"]

    def test_rule_graph_mismatch(self):
        with pytest.raises(ThresholdRuleError):
            apply_threshold(VenueGraph(directed=True), ThresholdRule("cosine", 0.1))
        with pytest.raises(ThresholdRuleError):
            apply_threshold(VenueGraph(directed=False), ThresholdRule("citation", 50))

    def test_pure_filter_never_alters_weights(self):
        rng = random.Random(41)
        g = VenueGraph()
        for i in range(30):
            g.add_edge(f"a{rng.randint(0, 9)}x", f"b{i}", rng.random())
        reduced = apply_threshold(g, ThresholdRule("cosine", 0.3))
        original = {(u, v): w for u, v, w in g.edges()}
        for u, v, w in reduced.edges():
            assert original[(u, v)] == w
        assert all(w >= 0.3 for _, _, w in reduced.edges())
        assert {(u, v) for u, v, _ in reduced.edges()} == {
            (u, v) for (u, v), w in original.items() if w >= 0.3
        }

    def test_unknown_rule_kind(self):
        with pytest.raises(ValueError):
            ThresholdRule("weird", 1.0)


class TestSummarize:
    def test_triangle(self):
        g = VenueGraph()
        g.add_edge("a", "b", 1.0)
        g.add_edge("b", "c", 1.0)
        g.add_edge("a", "c", 1.0)
        s = summarize(g)
        assert (s.nodes, s.edges, s.components) == (3, 3, 1)
        assert s.density == 1.0
        assert s.clustering_coefficient == 1.0

    def test_two_disjoint_edges(self):
        g = VenueGraph()
        g.add_edge("a", "b", 1.0)
        g.add_edge("c", "d", 1.0)
        s = summarize(g)
        assert s.components == 2
        assert s.density == pytest.approx(1 / 3, abs=1e-12)

    def test_empty_graph(self):
        s = summarize(VenueGraph())
        assert (s.nodes, s.edges, s.components, s.density, s.clustering_coefficient) == (
            0,
            0,
            0,
            0.0,
            0.0,
        )

    def test_table_formatting(self):
        g = VenueGraph()
        g.add_edge("a", "b", 1.0)
        table = format_summary_table({"K": summarize(g), "K'": summarize(g)})
        lines = table.strip().split("\n")
        assert lines[0].split() == ["Property", "K", "K'"]
        assert lines[1].startswith("Nodes")
        assert len(lines) == 6
