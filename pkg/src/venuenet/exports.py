"""Graph serialization: GraphML, edge TSV, and JSON, each with a matching
importer so export/import round-trips reproduce the graph exactly.

The TSV dialect keeps the edge rows as plain (source, target, weight) so
naive TSV consumers work unchanged; directedness and node attributes ride
along in `#`-prefixed comment lines.
"""

from __future__ import annotations

import io
import json
import xml.etree.ElementTree as ET

from .graph import VenueGraph

FORMATS = ("graphml", "edge-tsv", "json")

_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


class ExportError(Exception):
    pass


def export_graph(g: VenueGraph, format: str) -> bytes:
    if format == "graphml":
        return _to_graphml(g)
    if format == "edge-tsv":
        return _to_tsv(g)
    if format == "json":
        return _to_json(g)
    raise ExportError(f"unknown export format {format!r}")


def import_graph(data: bytes, format: str) -> VenueGraph:
    if format == "graphml":
        return _from_graphml(data)
    if format == "edge-tsv":
        return _from_tsv(data)
    if format == "json":
        return _from_json(data)
    raise ExportError(f"unknown export format {format!r}")


def write_graph(g: VenueGraph, path, format: str = "edge-tsv") -> None:
    with open(path, "wb") as fh:
        fh.write(export_graph(g, format))


def load_graph(path, format: str = "edge-tsv") -> VenueGraph:
    with open(path, "rb") as fh:
        return import_graph(fh.read(), format)


# -- GraphML ---------------------------------------------------------------


def _attr_type(values: list) -> str:
    if all(isinstance(v, bool) for v in values):
        return "boolean"
    if all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        return "long"
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        return "double"
    return "string"


def _format_attr(value, attr_type: str) -> str:
    if attr_type == "boolean":
        return "true" if value else "false"
    if attr_type == "double":
        return repr(float(value))
    return str(value)


def _parse_attr(text: str, attr_type: str):
    if attr_type == "boolean":
        return text == "true"
    if attr_type in ("long", "int"):
        return int(text)
    if attr_type in ("double", "float"):
        return float(text)
    return text


def _to_graphml(g: VenueGraph) -> bytes:
    root = ET.Element("graphml", xmlns=_GRAPHML_NS)
    attr_values: dict[str, list] = {}
    for attrs in g.nodes.values():
        for name, value in attrs.items():
            attr_values.setdefault(name, []).append(value)
    attr_types = {name: _attr_type(values) for name, values in sorted(attr_values.items())}

    key_ids: dict[str, str] = {}
    for i, (name, attr_type) in enumerate(sorted(attr_types.items())):
        key_id = f"d{i}"
        key_ids[name] = key_id
        ET.SubElement(
            root, "key", id=key_id, attrib={"for": "node", "attr.name": name, "attr.type": attr_type}
        )
    weight_key = f"d{len(key_ids)}"
    ET.SubElement(
        root,
        "key",
        id=weight_key,
        attrib={"for": "edge", "attr.name": "weight", "attr.type": "double"},
    )

    graph_el = ET.SubElement(
        root, "graph", edgedefault="directed" if g.directed else "undirected"
    )
    for node in sorted(g.nodes):
        node_el = ET.SubElement(graph_el, "node", id=node)
        for name in sorted(g.nodes[node]):
            data = ET.SubElement(node_el, "data", key=key_ids[name])
            data.text = _format_attr(g.nodes[node][name], attr_types[name])
    for u, v, w in g.sorted_edges():
        edge_el = ET.SubElement(graph_el, "edge", source=u, target=v)
        data = ET.SubElement(edge_el, "data", key=weight_key)
        data.text = repr(w)

    ET.indent(root)
    buf = io.BytesIO()
    ET.ElementTree(root).write(buf, encoding="utf-8", xml_declaration=True)
    return buf.getvalue()


def _from_graphml(data: bytes) -> VenueGraph:
    root = ET.fromstring(data.decode("utf-8"))
    ns = {"g": _GRAPHML_NS}
    keys: dict[str, tuple[str, str]] = {}  # key id -> (attr name, attr type)
    for key_el in root.findall("g:key", ns):
        keys[key_el.get("id")] = (key_el.get("attr.name"), key_el.get("attr.type"))
    graph_el = root.find("g:graph", ns)
    if graph_el is None:
        raise ExportError("GraphML document has no graph element")
    g = VenueGraph(directed=graph_el.get("edgedefault") == "directed")
    for node_el in graph_el.findall("g:node", ns):
        attrs = {}
        for data_el in node_el.findall("g:data", ns):
            name, attr_type = keys[data_el.get("key")]
            attrs[name] = _parse_attr(data_el.text or "", attr_type)
        g.add_node(node_el.get("id"), **attrs)
    for edge_el in graph_el.findall("g:edge", ns):
        weight = 1.0
        for data_el in edge_el.findall("g:data", ns):
            name, _ = keys[data_el.get("key")]
            if name == "weight":
                weight = float(data_el.text)
        g.add_edge(edge_el.get("source"), edge_el.get("target"), weight)
    return g


# -- edge TSV ---------------------------------------------------------------


def _to_tsv(g: VenueGraph) -> bytes:
    out = io.StringIO()
    out.write(f"# venuenet-graph directed={'true' if g.directed else 'false'}\n")
    for node in sorted(g.nodes):
        attrs = json.dumps(g.nodes[node], sort_keys=True)
        out.write(f"#node\t{node}\t{attrs}\n")
    for u, v, w in g.sorted_edges():
        out.write(f"{u}\t{v}\t{w!r}\n")
    return out.getvalue().encode("utf-8")


def _from_tsv(data: bytes) -> VenueGraph:
    lines = data.decode("utf-8").splitlines()
    if not lines or not lines[0].startswith("# venuenet-graph"):
        raise ExportError("missing edge-tsv header line")
    directed = "directed=true" in lines[0]
    g = VenueGraph(directed=directed)
    for line in lines[1:]:
        if not line:
            continue
        if line.startswith("#node\t"):
            _, node, attrs = line.split("\t", 2)
            g.add_node(node, **json.loads(attrs))
            continue
        if line.startswith("#"):
            continue
        u, v, w = line.split("\t")
        g.add_edge(u, v, float(w))
    return g


# -- JSON -------------------------------------------------------------------


def _to_json(g: VenueGraph) -> bytes:
    obj = {
        "format": "venuenet-graph/1",
        "directed": g.directed,
        "nodes": [[node, g.nodes[node]] for node in sorted(g.nodes)],
        "edges": [[u, v, w] for u, v, w in g.sorted_edges()],
    }
    return (json.dumps(obj, sort_keys=True, indent=0) + "\n").encode("utf-8")


def _from_json(data: bytes) -> VenueGraph:
    obj = json.loads(data.decode("utf-8"))
    if obj.get("format") != "venuenet-graph/1":
        raise ExportError(f"unknown JSON graph format {obj.get('format')!r}")
    g = VenueGraph(directed=bool(obj["directed"]))
    for node, attrs in obj["nodes"]:
        g.add_node(node, **attrs)
    for u, v, w in obj["edges"]:
        g.add_edge(u, v, float(w))
    return g
