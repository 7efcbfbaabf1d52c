"""Venue-level network construction.

Bibliographic coupling counts are aggregated per venue over full reference
lists, including references that resolve to nothing inside the corpus (those
still discriminate venues, e.g. citations into other disciplines). The
knowledge network weights venue pairs by cosine similarity of their coupling
vectors; the citation network counts inter-venue citations along references
that resolve to corpus records, directly or through cross-corpus matches.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import metrics
from .corpus import Corpus
from .graph import VenueGraph
from .linkage import MatchPair

COSINE_MIN_DEFAULT = 0.1
CITATION_MIN_DEFAULT = 50.0


class NetworkError(Exception):
    pass


class UndefinedVenueError(NetworkError):
    pass


class ThresholdRuleError(NetworkError):
    """Threshold rule applied to a graph of the wrong directedness."""


@dataclass
class CouplingMatrix:
    """Sparse venue x cited-publication coupling counts.

    vectors[v][k] is the number of times venue v cites publication key k;
    keys are record ids for in-corpus targets and normalized raw strings
    otherwise. Venues with no citations at all are not represented.
    """

    venues: list[str]
    vectors: dict[str, dict[str, int]]
    publication_counts: dict[str, int] = field(default_factory=dict)

    @property
    def universe_size(self) -> int:
        universe: set[str] = set()
        for vec in self.vectors.values():
            universe.update(vec)
        return len(universe)

    def norm_squared(self, venue: str) -> int:
        return sum(c * c for c in self.vectors[venue].values())

    def to_json(self) -> bytes:
        obj = {
            "venues": self.venues,
            "vectors": {v: dict(sorted(self.vectors[v].items())) for v in sorted(self.vectors)},
            "publication_counts": dict(sorted(self.publication_counts.items())),
        }
        return json.dumps(obj, sort_keys=True, indent=0).encode("utf-8")

    @classmethod
    def from_json(cls, data: bytes) -> "CouplingMatrix":
        obj = json.loads(data.decode("utf-8"))
        return cls(
            venues=list(obj["venues"]),
            vectors={v: {k: int(c) for k, c in vec.items()} for v, vec in obj["vectors"].items()},
            publication_counts={v: int(c) for v, c in obj.get("publication_counts", {}).items()},
        )


def normalize_reference_key(target: str) -> str:
    return " ".join(target.lower().split())


def build_coupling_matrix(c: Corpus) -> CouplingMatrix:
    """Aggregate reference counts per venue over the full reference lists.

    Records without a venue are skipped; venues whose papers carry no
    references end up with empty vectors and are excluded from the matrix.
    """
    vectors: dict[str, dict[str, int]] = {}
    publication_counts: dict[str, int] = {}
    for rec in c.records:
        venue = rec.venue_key
        if venue is None:
            continue
        publication_counts[venue] = publication_counts.get(venue, 0) + 1
        if not rec.references:
            continue
        vec = vectors.setdefault(venue, {})
        for target in rec.references:
            key = target if c.has_record(target) else normalize_reference_key(target)
            vec[key] = vec.get(key, 0) + 1
    venues = sorted(vectors)
    return CouplingMatrix(
        venues=venues,
        vectors={v: vectors[v] for v in venues},
        publication_counts={v: publication_counts[v] for v in venues},
    )


def cosine_similarity(m: CouplingMatrix, i: str, j: str) -> float:
    """Cosine of the coupling vectors of venues i and j."""
    if i not in m.vectors:
        raise UndefinedVenueError(f"venue {i!r} not in coupling matrix")
    if j not in m.vectors:
        raise UndefinedVenueError(f"venue {j!r} not in coupling matrix")
    return cosine_of_vectors(m.vectors[i], m.vectors[j])


def cosine_of_vectors(a: dict[str, int], b: dict[str, int]) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = 0
    for key, count in a.items():
        other = b.get(key)
        if other is not None:
            dot += count * other
    if dot == 0:
        return 0.0
    norm_a = sum(c * c for c in a.values())
    norm_b = sum(c * c for c in b.values())
    return dot / math.sqrt(norm_a * norm_b)


def build_knowledge_network(m: CouplingMatrix) -> VenueGraph:
    """Undirected venue graph weighted by coupling-vector cosine similarity.

    Every matrix venue becomes a node; venue pairs with orthogonal vectors
    simply carry no edge. Candidate pairs are found through an inverted
    index over cited keys, so disjoint venues are never compared.
    """
    g = VenueGraph(directed=False)
    for venue in m.venues:
        g.add_node(venue, publication_count=m.publication_counts.get(venue, 0))

    by_key: dict[str, list[str]] = {}
    for venue in m.venues:
        for key in m.vectors[venue]:
            by_key.setdefault(key, []).append(venue)

    dots: dict[tuple[str, str], int] = {}
    for key, sharing in by_key.items():
        if len(sharing) < 2:
            continue
        for x in range(len(sharing)):
            vi = sharing[x]
            ci = m.vectors[vi][key]
            for y in range(x + 1, len(sharing)):
                vj = sharing[y]
                pair = (vi, vj) if vi <= vj else (vj, vi)
                dots[pair] = dots.get(pair, 0) + ci * m.vectors[vj][key]

    norms = {venue: m.norm_squared(venue) for venue in m.venues}
    for (vi, vj), dot in sorted(dots.items()):
        weight = dot / math.sqrt(norms[vi] * norms[vj])
        if weight > 0:
            g.add_edge(vi, vj, weight)
    return g


def build_citation_network(c: Corpus, matches: list[MatchPair] | None = None) -> VenueGraph:
    """Directed venue graph with inter-venue citation counts as weights.

    A reference counts when its target resolves to a corpus record (directly,
    or via a match pair whose right id equals the target). Within-venue
    citations become node metadata (`self_citations`), not edges; venues with
    no citation activity at all are left out.
    """
    right_to_left: dict[str, str] = {}
    if matches:
        for pair in matches:
            if pair.right not in right_to_left or pair.left < right_to_left[pair.right]:
                right_to_left[pair.right] = pair.left

    edge_counts: dict[tuple[str, str], int] = {}
    self_citations: dict[str, int] = {}
    publication_counts: dict[str, int] = {}
    for rec in c.records:
        src_venue = rec.venue_key
        if src_venue is None:
            continue
        publication_counts[src_venue] = publication_counts.get(src_venue, 0) + 1
        for target in rec.references:
            resolved = target if c.has_record(target) else right_to_left.get(target)
            if resolved is None or not c.has_record(resolved):
                continue
            dst_venue = c.record(resolved).venue_key
            if dst_venue is None:
                continue
            if dst_venue == src_venue:
                self_citations[src_venue] = self_citations.get(src_venue, 0) + 1
            else:
                pair = (src_venue, dst_venue)
                edge_counts[pair] = edge_counts.get(pair, 0) + 1

    g = VenueGraph(directed=True)
    active = sorted(
        {v for pair in edge_counts for v in pair} | set(self_citations)
    )
    for venue in active:
        g.add_node(
            venue,
            publication_count=publication_counts.get(venue, 0),
            self_citations=self_citations.get(venue, 0),
        )
    for (src, dst), count in sorted(edge_counts.items()):
        g.add_edge(src, dst, float(count))
    return g


@dataclass(frozen=True)
class ThresholdRule:
    """Edge filter: `cosine` keeps weight >= value on undirected graphs,
    `citation` keeps weight > value on directed graphs."""

    kind: str  # "cosine" | "citation"
    value: float

    def __post_init__(self):
        if self.kind not in ("cosine", "citation"):
            raise ValueError(f"unknown threshold kind {self.kind!r}")

    def keeps(self, weight: float) -> bool:
        if self.kind == "cosine":
            return weight >= self.value
        return weight > self.value


def apply_threshold(g: VenueGraph, rule: ThresholdRule) -> VenueGraph:
    """Reduced copy keeping only edges passing the rule; nodes left isolated
    by the filtering are dropped. Weights are never altered."""
    if rule.kind == "cosine" and g.directed:
        raise ThresholdRuleError("cosine threshold applies to undirected graphs")
    if rule.kind == "citation" and not g.directed:
        raise ThresholdRuleError("citation threshold applies to directed graphs")

    kept = [(u, v, w) for u, v, w in g.edges() if rule.keeps(w)]
    survivors = {u for u, _, _ in kept} | {v for _, v, _ in kept}
    reduced = VenueGraph(directed=g.directed)
    for key in sorted(survivors):
        reduced.add_node(key, **g.nodes[key])
    for u, v, w in sorted(kept):
        reduced.add_edge(u, v, w)
    return reduced


@dataclass
class NetworkSummary:
    nodes: int
    edges: int
    components: int
    density: float
    clustering_coefficient: float

    ROW_NAMES = ("Nodes", "Edges", "Components", "Density", "Clustering coef.")

    def rows(self) -> list[tuple[str, str]]:
        return [
            ("Nodes", f"{self.nodes:,}"),
            ("Edges", f"{self.edges:,}"),
            ("Components", f"{self.components:,}"),
            ("Density", f"{self.density * 100:.2g}%"),
            ("Clustering coef.", f"{self.clustering_coefficient:.3f}"),
        ]

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "edges": self.edges,
            "components": self.components,
            "density": self.density,
            "clustering_coefficient": self.clustering_coefficient,
        }


def summarize(g: VenueGraph) -> NetworkSummary:
    return NetworkSummary(
        nodes=g.node_count(),
        edges=g.edge_count(),
        components=metrics.component_count(g),
        density=metrics.density(g),
        clustering_coefficient=metrics.average_clustering_coefficient(g),
    )


def format_summary_table(summaries: dict[str, NetworkSummary]) -> str:
    """Aligned text table with one column per network."""
    names = list(summaries)
    header = ["Property"] + names
    rows = [header]
    for i, row_name in enumerate(NetworkSummary.ROW_NAMES):
        row = [row_name] + [summaries[name].rows()[i][1] for name in names]
        rows.append(row)
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"
