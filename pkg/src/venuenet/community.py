"""Greedy modularity clustering and cluster-level network projection.

The clustering is plain Clauset-Newman-Moore agglomeration: start from
singletons, repeatedly apply the merge with the largest modularity gain, stop
when no merge gains. Cluster ids are the lexicographically smallest member
venue key, which makes tie-breaking total and runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import VenueGraph
from .networks import CouplingMatrix, cosine_of_vectors


class CommunityError(Exception):
    pass


class IncompleteAssignmentError(CommunityError):
    pass


@dataclass
class ClusterPartition:
    assignment: dict[str, str]  # venue key -> cluster id
    q: float

    @property
    def cluster_count(self) -> int:
        return len(set(self.assignment.values()))

    def clusters(self) -> dict[str, list[str]]:
        grouped: dict[str, list[str]] = {}
        for venue in sorted(self.assignment):
            grouped.setdefault(self.assignment[venue], []).append(venue)
        return grouped

    def member_sets(self) -> set[frozenset[str]]:
        return {frozenset(members) for members in self.clusters().values()}


def modularity(g: VenueGraph, assignment: dict[str, str], weighted: bool = True) -> float:
    """Newman modularity Q of a node-to-cluster assignment.

    Q = sum over clusters of (intra-cluster edge weight / m) minus
    (cluster degree sum / 2m) squared, with m the total edge weight.
    Defined as 0 on edgeless graphs.
    """
    missing = [v for v in g.nodes if v not in assignment]
    if missing:
        raise IncompleteAssignmentError(f"assignment misses {len(missing)} nodes, e.g. {missing[0]!r}")

    def wt(w: float) -> float:
        return w if weighted else 1.0

    m = sum(wt(w) for _, _, w in g.edges())
    if m == 0:
        return 0.0
    intra: dict[str, float] = {}
    degree_sum: dict[str, float] = {}
    for u, v, w in g.edges():
        cu, cv = assignment[u], assignment[v]
        if cu == cv:
            intra[cu] = intra.get(cu, 0.0) + wt(w)
        degree_sum[cu] = degree_sum.get(cu, 0.0) + wt(w)
        degree_sum[cv] = degree_sum.get(cv, 0.0) + wt(w)

    q = 0.0
    for cluster in set(assignment.values()):
        e_cc = intra.get(cluster, 0.0) / m
        a_c = degree_sum.get(cluster, 0.0) / (2 * m)
        q += e_cc - a_c * a_c
    return q


def greedy_modularity_partition(
    g: VenueGraph, weighted: bool = True, trace: list | None = None
) -> ClusterPartition:
    """Agglomerate singleton clusters by best modularity gain.

    The merge candidate is the connected cluster pair with the largest
    dQ = w_between/m - S_i*S_j/(2m^2); ties go to the smallest (sorted)
    pair of cluster ids. Stops when no merge has dQ > 0 and returns the
    best-Q state seen. When `trace` is given, a snapshot (assignment copy,
    incrementally tracked Q) is appended after every merge.
    """
    if g.directed:
        raise CommunityError("greedy modularity clustering expects an undirected graph")
    nodes = sorted(g.nodes)
    if not nodes:
        return ClusterPartition(assignment={}, q=0.0)

    def wt(w: float) -> float:
        return w if weighted else 1.0

    m = sum(wt(w) for _, _, w in g.edges())
    if m == 0:
        return ClusterPartition(assignment={v: v for v in nodes}, q=0.0)

    # cluster id = smallest member key; singletons to start
    members: dict[str, list[str]] = {v: [v] for v in nodes}
    degree_sum: dict[str, float] = {v: sum(wt(w) for w in g.neighbors(v).values()) for v in nodes}
    intra: dict[str, float] = {v: 0.0 for v in nodes}
    between: dict[str, dict[str, float]] = {v: {} for v in nodes}
    for u, v, w in g.edges():
        between[u][v] = between[u].get(v, 0.0) + wt(w)
        between[v][u] = between[v].get(u, 0.0) + wt(w)

    assignment = {v: v for v in nodes}
    q = modularity(g, assignment, weighted=weighted)
    best_q = q
    best_assignment = dict(assignment)
    two_m_sq = 2 * m * m

    while True:
        best_gain = 0.0
        best_pair: tuple[str, str] | None = None
        for ci in sorted(between):
            row = between[ci]
            si = degree_sum[ci]
            for cj in row:
                if cj <= ci:
                    continue
                gain = row[cj] / m - si * degree_sum[cj] / two_m_sq
                if gain > best_gain or (
                    gain == best_gain
                    and best_pair is not None
                    and gain > 0.0
                    and (ci, cj) < best_pair
                ):
                    best_gain = gain
                    best_pair = (ci, cj)
        if best_pair is None or best_gain <= 0.0:
            break

        ci, cj = best_pair  # ci < cj, so the merged cluster keeps id ci
        members[ci].extend(members[cj])
        intra[ci] += intra[cj] + between[ci][cj]
        degree_sum[ci] += degree_sum[cj]
        del between[ci][cj]
        for ck, w in between[cj].items():
            if ck == ci:
                continue
            between[ci][ck] = between[ci].get(ck, 0.0) + w
            link = between[ck]
            link[ci] = link.get(ci, 0.0) + w
            del link[cj]
        del between[cj]
        del members[cj]
        del intra[cj]
        del degree_sum[cj]
        for venue in members[ci]:
            assignment[venue] = ci

        q += best_gain
        if trace is not None:
            trace.append((dict(assignment), q))
        if q > best_q:
            best_q = q
            best_assignment = dict(assignment)

    return ClusterPartition(assignment=best_assignment, q=modularity(g, best_assignment, weighted=weighted))


@dataclass
class ClusterProjection:
    """Outcome of projecting a coupling matrix onto a partition."""

    cluster_matrix: CouplingMatrix
    new_assignments: dict[str, str]  # previously un-clustered venue -> cluster
    unassigned: list[str]  # venues orthogonal to every cluster
    graph: VenueGraph


def project_to_cluster_network(m: CouplingMatrix, p: ClusterPartition) -> ClusterProjection:
    """Aggregate coupling counts per cluster, adopt un-clustered venues, and
    build the cluster-level cosine network.

    Venues present in the matrix but missing from the partition are assigned
    to the cluster whose aggregate vector they are most cosine-similar to
    (ties to the smallest cluster id); venues orthogonal to every cluster stay
    unassigned. The cluster graph is computed over aggregates that include
    the adopted venues.
    """
    aggregates: dict[str, dict[str, int]] = {}
    venue_counts: dict[str, int] = {}
    pub_counts: dict[str, int] = {}
    for venue, cluster in p.assignment.items():
        agg = aggregates.setdefault(cluster, {})
        venue_counts[cluster] = venue_counts.get(cluster, 0) + 1
        pub_counts[cluster] = pub_counts.get(cluster, 0) + m.publication_counts.get(venue, 0)
        for key, count in m.vectors.get(venue, {}).items():
            agg[key] = agg.get(key, 0) + count

    cluster_ids = sorted(aggregates)
    new_assignments: dict[str, str] = {}
    unassigned: list[str] = []
    for venue in m.venues:
        if venue in p.assignment:
            continue
        vec = m.vectors[venue]
        best_cluster = None
        best_cos = 0.0
        for cluster in cluster_ids:
            cos = cosine_of_vectors(vec, aggregates[cluster])
            if cos > best_cos:
                best_cos = cos
                best_cluster = cluster
        if best_cluster is None:
            unassigned.append(venue)
        else:
            new_assignments[venue] = best_cluster

    for venue, cluster in new_assignments.items():
        agg = aggregates[cluster]
        venue_counts[cluster] += 1
        pub_counts[cluster] = pub_counts.get(cluster, 0) + m.publication_counts.get(venue, 0)
        for key, count in m.vectors[venue].items():
            agg[key] = agg.get(key, 0) + count

    cluster_matrix = CouplingMatrix(
        venues=cluster_ids,
        vectors={c: aggregates[c] for c in cluster_ids},
        publication_counts={c: pub_counts.get(c, 0) for c in cluster_ids},
    )

    graph = VenueGraph(directed=False)
    for cluster in cluster_ids:
        graph.add_node(
            cluster,
            venue_count=venue_counts.get(cluster, 0),
            publication_count=pub_counts.get(cluster, 0),
        )
    for x in range(len(cluster_ids)):
        for y in range(x + 1, len(cluster_ids)):
            weight = cosine_of_vectors(aggregates[cluster_ids[x]], aggregates[cluster_ids[y]])
            if weight > 0:
                graph.add_edge(cluster_ids[x], cluster_ids[y], weight)

    return ClusterProjection(
        cluster_matrix=cluster_matrix,
        new_assignments=new_assignments,
        unassigned=unassigned,
        graph=graph,
    )


def cluster_domain_composition(
    p: ClusterPartition, domains: dict[str, str]
) -> dict[str, dict[str, int]]:
    """Per-cluster venue counts by domain label; venues absent from the
    domain table count as 'uncategorized'. Supports labeling clusters by
    their dominant domain without any manual step."""
    composition: dict[str, dict[str, int]] = {}
    for venue in sorted(p.assignment):
        cluster = p.assignment[venue]
        domain = domains.get(venue, "uncategorized")
        bucket = composition.setdefault(cluster, {})
        bucket[domain] = bucket.get(domain, 0) + 1
    return composition


PARTITION_HEADER = "venue_key\tcluster_id"


def write_partition(p: ClusterPartition, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# q={p.q!r} clusters={p.cluster_count}\n")
        fh.write(PARTITION_HEADER + "\n")
        for venue in sorted(p.assignment):
            fh.write(f"{venue}\t{p.assignment[venue]}\n")


def read_partition(path) -> ClusterPartition:
    assignment: dict[str, str] = {}
    q = 0.0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                for token in line[1:].split():
                    if token.startswith("q="):
                        q = float(token[2:])
                continue
            if not line or line == PARTITION_HEADER:
                continue
            venue, cluster = line.split("\t")
            assignment[venue] = cluster
    return ClusterPartition(assignment=assignment, q=q)
