import pytest

from venuenet.exports import ExportError, FORMATS, export_graph, import_graph
from venuenet.graph import VenueGraph


def weighted_triangle():
    g = VenueGraph()
    g.add_node("v1", publication_count=10)
    g.add_node("v2", publication_count=20)
    g.add_node("v3", publication_count=5)
    g.add_edge("v1", "v2", 0.5)
    g.add_edge("v2", "v3", 0.25)
    g.add_edge("v1", "v3", 0.125)
    return g


def directed_two_cycle():
    g = VenueGraph(directed=True)
    g.add_edge("a", "b", 2.0)
    g.add_edge("b", "a", 3.0)
    return g


def clustered_graph():
    g = VenueGraph()
    g.add_node("v1", publication_count=3, cluster="c1", kind="journal")
    g.add_node("v2", publication_count=4, cluster="c1", kind="conference")
    g.add_node("v3", publication_count=1, cluster="c2", kind="journal")
    g.add_edge("v1", "v2", 0.7071067811865476)
    return g


def graph_with_isolate():
    g = VenueGraph()
    g.add_edge("a", "b", 1.0)
    g.add_node("loner", publication_count=0)
    return g


ALL_GRAPHS = [weighted_triangle, directed_two_cycle, clustered_graph, graph_with_isolate]


class TestRoundTrips:
    @pytest.mark.parametrize("fmt", FORMATS)
    @pytest.mark.parametrize("make", ALL_GRAPHS, ids=lambda f: f.__name__)
    def test_import_export_identity(self, fmt, make):
        g = make()
        again = import_graph(export_graph(g, fmt), fmt)
        assert again == g
        assert again.directed == g.directed
        assert again.nodes == g.nodes
        assert again.sorted_edges() == g.sorted_edges()

    @pytest.mark.parametrize("fmt", FORMATS)
    def test_weights_preserved_exactly(self, fmt):
        g = VenueGraph()
        g.add_edge("a", "b", 0.1)  # not dyadic; repr round-trip must still be exact
        g.add_edge("a", "c", 1e-9)
        again = import_graph(export_graph(g, fmt), fmt)
        assert again.weight("a", "b") == 0.1
        assert again.weight("a", "c") == 1e-9


class TestGraphML:
    def test_edgedefault_directed(self):
        data = export_graph(directed_two_cycle(), "graphml").decode("utf-8")
        assert 'edgedefault="directed"' in data
        assert data.count("<edge") == 2

    def test_node_attribute_keys_declared(self):
        data = export_graph(clustered_graph(), "graphml").decode("utf-8")
        assert 'attr.name="cluster"' in data
        assert 'attr.name="publication_count"' in data
        assert 'attr.type="long"' in data
        assert 'attr.name="weight"' in data

    def test_cluster_attribute_present_for_all_nodes(self):
        g = clustered_graph()
        again = import_graph(export_graph(g, "graphml"), "graphml")
        for node in again.nodes:
            assert "cluster" in again.nodes[node]
            assert "publication_count" in again.nodes[node]


class TestTsvDialect:
    def test_header_names_directedness(self):
        data = export_graph(weighted_triangle(), "edge-tsv").decode("utf-8")
        assert data.splitlines()[0] == "# venuenet-graph directed=false"
        data = export_graph(directed_two_cycle(), "edge-tsv").decode("utf-8")
        assert data.splitlines()[0] == "# venuenet-graph directed=true"

    def test_edge_rows_are_plain_tsv(self):
        data = export_graph(weighted_triangle(), "edge-tsv").decode("utf-8")
        rows = [l for l in data.splitlines() if l and not l.startswith("#")]
        assert rows == ["v1\tv2\t0.5", "v1\tv3\t0.125", "v2\tv3\t0.25"]

    def test_missing_header_rejected(self):
        with pytest.raises(ExportError):
            import_graph(b"a\tb\t1.0\n", "edge-tsv")


class TestErrors:
    def test_unknown_format(self):
        with pytest.raises(ExportError):
            export_graph(VenueGraph(), "dot")
        with pytest.raises(ExportError):
            import_graph(b"", "dot")

    def test_json_format_tag_checked(self):
        with pytest.raises(ExportError):
            import_graph(b'{"format": "other", "directed": false, "nodes": [], "edges": []}', "json")
