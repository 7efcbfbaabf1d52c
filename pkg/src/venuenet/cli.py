"""Command line interface.

Exit codes: 0 on success, 1 on input errors (unreadable or malformed files,
bad parameters), 2 on pipeline stage failures.
"""

from __future__ import annotations

import sys

import click

from . import community, linkage, metrics, networks, subgraphs
from .corpus import Corpus, CorpusError, load_corpus, parse_corpus, save_corpus, slice_by_year, validate_corpus
from .exports import ExportError, FORMATS, export_graph, load_graph, write_graph
from .graph import VenueGraph
from .pipeline import ConfigError, PipelineConfig, StageError, run_pipeline
from .subgraphs import ProfileRow


def _fail_input(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_corpus_or_fail(path: str) -> Corpus:
    try:
        return load_corpus(path)
    except (OSError, CorpusError) as exc:
        _fail_input(str(exc))


def _load_graph_or_fail(path: str, fmt: str = "edge-tsv") -> VenueGraph:
    try:
        return load_graph(path, fmt)
    except (OSError, ExportError, ValueError) as exc:
        _fail_input(str(exc))


@click.group()
def main() -> None:
    """Build, cluster, rank, and classify venue-level publication networks."""


@main.command()
@click.argument("input_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["jsonl", "dblp-xml"]), default="jsonl")
@click.option("--source", type=click.Choice(["metadata-corpus", "citation-corpus"]), default="metadata-corpus")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def ingest(input_path: str, fmt: str, source: str, out: str) -> None:
    """Parse a corpus file and write it in canonical JSONL form."""
    try:
        with open(input_path, "rb") as fh:
            corpus = parse_corpus(fh, fmt, source=source)
    except (OSError, CorpusError) as exc:
        _fail_input(str(exc))
    save_corpus(corpus, out)
    report = validate_corpus(corpus)
    click.echo(
        f"ingested {report.record_count} records, {len(corpus.venue_table)} venues; "
        f"{report.unresolved_reference_count} unresolved / {report.resolved_reference_count} resolved references"
    )
    if not report.is_clean():
        click.echo(
            f"warning: {len(report.dangling_venue_keys)} dangling venues, "
            f"{len(report.empty_title_ids)} empty titles",
            err=True,
        )


@main.command(name="slice")
@click.argument("corpus_path", type=click.Path(dir_okay=False))
@click.option("--year", required=True, type=int)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def slice_cmd(corpus_path: str, year: int, out: str) -> None:
    """Keep only records published up to and including YEAR."""
    corpus = _load_corpus_or_fail(corpus_path)
    try:
        sliced = slice_by_year(corpus, year)
    except ValueError as exc:
        _fail_input(str(exc))
    save_corpus(sliced, out)
    click.echo(f"kept {len(sliced.records)} of {len(corpus.records)} records")


@main.command()
@click.option("--left", required=True, type=click.Path(dir_okay=False))
@click.option("--right", required=True, type=click.Path(dir_okay=False))
@click.option("--jaccard-min", default=linkage.DEFAULT_JACCARD_MIN, show_default=True)
@click.option("--sw-min", default=linkage.DEFAULT_SW_MIN, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def link(left: str, right: str, jaccard_min: float, sw_min: float, out: str) -> None:
    """Match records of the left (metadata) corpus to the right (citation) one."""
    a = _load_corpus_or_fail(left)
    b = _load_corpus_or_fail(right)
    matches = linkage.link_corpora(a, b, jaccard_min=jaccard_min, sw_min=sw_min)
    linkage.write_matches(matches, out)
    unmatchable = len(linkage.unmatchable_records(a)) + len(linkage.unmatchable_records(b))
    click.echo(f"{len(matches)} match pairs written ({unmatchable} records unmatchable: no authors)")


@main.command()
@click.argument("corpus_path", type=click.Path(dir_okay=False))
@click.option("--network", type=click.Choice(["knowledge", "citation"]), required=True)
@click.option("--matches", "matches_path", type=click.Path(dir_okay=False))
@click.option("--threshold", "threshold_value", type=float, default=None, help="Apply the matching edge threshold before writing.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--matrix-out", type=click.Path(dir_okay=False), help="Also write the coupling matrix (knowledge only).")
def build(
    corpus_path: str,
    network: str,
    matches_path: str | None,
    threshold_value: float | None,
    out: str,
    matrix_out: str | None,
) -> None:
    """Build the knowledge (undirected cosine) or citation (directed count) network."""
    corpus = _load_corpus_or_fail(corpus_path)
    if network == "knowledge":
        matrix = networks.build_coupling_matrix(corpus)
        graph = networks.build_knowledge_network(matrix)
        if matrix_out:
            with open(matrix_out, "wb") as fh:
                fh.write(matrix.to_json())
    else:
        matches = linkage.read_matches(matches_path) if matches_path else None
        graph = networks.build_citation_network(corpus, matches)
    summaries = {network: networks.summarize(graph)}
    if threshold_value is not None:
        rule = networks.ThresholdRule(
            "cosine" if network == "knowledge" else "citation", threshold_value
        )
        graph = networks.apply_threshold(graph, rule)
        summaries["reduced"] = networks.summarize(graph)
    write_graph(graph, out)
    click.echo(networks.format_summary_table(summaries), nl=False)


@main.command()
@click.argument("graph_path", type=click.Path(dir_okay=False))
@click.option("--rule", type=click.Choice(["cosine", "citation"]), required=True)
@click.option("--min", "value", type=float, default=None, help="Threshold value (defaults: cosine 0.1, citation 50).")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def threshold(graph_path: str, rule: str, value: float | None, out: str) -> None:
    """Filter edges by threshold and drop nodes left isolated."""
    graph = _load_graph_or_fail(graph_path)
    if value is None:
        value = networks.COSINE_MIN_DEFAULT if rule == "cosine" else networks.CITATION_MIN_DEFAULT
    try:
        reduced = networks.apply_threshold(graph, networks.ThresholdRule(rule, value))
    except networks.ThresholdRuleError as exc:
        _fail_input(str(exc))
    write_graph(reduced, out)
    summaries = {"full": networks.summarize(graph), "reduced": networks.summarize(reduced)}
    click.echo(networks.format_summary_table(summaries), nl=False)


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--unweighted", is_flag=True, help="Ignore edge weights when clustering.")
@click.option("--domains", "domains_path", type=click.Path(dir_okay=False), help="venue_key<TAB>domain table for composition output.")
@click.option("--composition-out", type=click.Path(dir_okay=False), help="Write per-cluster domain composition TSV.")
def cluster(graph_path: str, out: str, unweighted: bool, domains_path: str | None, composition_out: str | None) -> None:
    """Greedy modularity clustering of an undirected graph."""
    graph = _load_graph_or_fail(graph_path)
    try:
        partition = community.greedy_modularity_partition(graph, weighted=not unweighted)
    except community.CommunityError as exc:
        _fail_input(str(exc))
    community.write_partition(partition, out)
    if composition_out:
        domains: dict[str, str] = {}
        if domains_path:
            try:
                with open(domains_path, encoding="utf-8") as fh:
                    for line in fh:
                        if line.strip() and "\t" in line:
                            venue, domain = line.rstrip("\n").split("\t")[:2]
                            domains[venue] = domain
            except OSError as exc:
                _fail_input(str(exc))
        composition = community.cluster_domain_composition(partition, domains)
        with open(composition_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("cluster_id\tdomain\tvenues\n")
            for cluster in sorted(composition):
                for domain in sorted(composition[cluster]):
                    fh.write(f"{cluster}\t{domain}\t{composition[cluster][domain]}\n")
    click.echo(f"{partition.cluster_count} clusters, Q={partition.q:.4f}")


@main.command()
@click.option("--matrix", "matrix_path", required=True, type=click.Path(dir_okay=False))
@click.option("--partition", "partition_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--assignment-out", type=click.Path(dir_okay=False))
def project(matrix_path: str, partition_path: str, out: str, assignment_out: str | None) -> None:
    """Aggregate coupling to cluster level and build the cluster network."""
    try:
        with open(matrix_path, "rb") as fh:
            matrix = networks.CouplingMatrix.from_json(fh.read())
        partition = community.read_partition(partition_path)
    except (OSError, ValueError) as exc:
        _fail_input(str(exc))
    projection = community.project_to_cluster_network(matrix, partition)
    write_graph(projection.graph, out)
    if assignment_out:
        with open(assignment_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("venue_key\tcluster_id\n")
            for venue in sorted(projection.new_assignments):
                fh.write(f"{venue}\t{projection.new_assignments[venue]}\n")
    click.echo(
        f"{len(projection.new_assignments)} venues assigned to clusters, "
        f"{len(projection.unassigned)} left unassigned"
    )


@main.command(name="metrics")
@click.option("--graph", "graph_path", required=True, type=click.Path(dir_okay=False))
@click.option("--metric", type=click.Choice(["density", "clustering", "betweenness", "pagerank", "lcc"]), required=True)
@click.option("--d", "damping", default=0.85, show_default=True)
@click.option("--tol", default=1e-8, show_default=True)
@click.option("--max-iter", default=200, show_default=True)
@click.option("--normalized/--no-normalized", default=True, show_default=True)
@click.option("--weighted/--unweighted", default=False, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write per-node TSV (betweenness, pagerank).")
def metrics_cmd(
    graph_path: str,
    metric: str,
    damping: float,
    tol: float,
    max_iter: int,
    normalized: bool,
    weighted: bool,
    out: str | None,
) -> None:
    """Compute a graph metric; per-node metrics print sorted descending."""
    graph = _load_graph_or_fail(graph_path)
    try:
        if metric == "density":
            click.echo(repr(metrics.density(graph)))
            return
        if metric == "clustering":
            click.echo(repr(metrics.average_clustering_coefficient(graph)))
            return
        if metric == "lcc":
            click.echo(repr(metrics.largest_component_fraction(graph)))
            return
        if metric == "betweenness":
            vector = metrics.betweenness_centrality(graph, weighted=weighted, normalized=normalized)
        else:
            vector = metrics.pagerank(graph, d=damping, tol=tol, max_iter=max_iter)
            if not vector.converged:
                click.echo(
                    f"warning: pagerank did not converge (residual {vector.residual:.3g})", err=True
                )
    except metrics.MetricError as exc:
        _fail_input(str(exc))
    lines = [f"{node}\t{value!r}" for node, value in vector.top()]
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"node\t{vector.metric}\n")
            fh.write("\n".join(lines) + ("\n" if lines else ""))
        click.echo(f"wrote {len(lines)} rows")
    else:
        click.echo("\n".join(lines))


@main.command(name="subgraphs")
@click.argument("corpus_path", type=click.Path(dir_okay=False))
@click.option("--venue-kind", type=click.Choice(["all", "journal", "conference"]), default="all", show_default=True)
@click.option("--subgraph", "family", type=click.Choice(["both", "coauthorship", "citation"]), default="both", show_default=True)
@click.option("--pagerank", "pagerank_path", type=click.Path(dir_okay=False), help="Per-venue PageRank TSV to join in.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def subgraphs_cmd(corpus_path: str, venue_kind: str, family: str, pagerank_path: str | None, out: str) -> None:
    """Profile and classify per-venue co-authorship and citation subgraphs."""
    corpus = _load_corpus_or_fail(corpus_path)
    ranks: dict[str, float] = {}
    if pagerank_path:
        with open(pagerank_path, encoding="utf-8") as fh:
            fh.readline()
            for line in fh:
                node, value = line.rstrip("\n").split("\t")
                ranks[node] = float(value)

    citation_index = subgraphs.publication_citation_graph(corpus)
    families = ["coauthorship", "citation"] if family == "both" else [family]
    rows: dict[str, list[ProfileRow]] = {f: [] for f in families}
    by_venue = corpus.records_by_venue()
    for venue in sorted(by_venue):
        kind = corpus.venue_kind(venue)
        if venue_kind != "all" and kind != venue_kind:
            continue
        for fam in families:
            if fam == "coauthorship":
                sg = subgraphs.extract_coauthorship_subgraph(corpus, venue, records=by_venue[venue])
            else:
                sg = subgraphs.extract_citation_subgraph(
                    corpus, venue, citation_index, records=by_venue[venue]
                )
            if sg.graph.node_count() == 0:
                continue
            profile = subgraphs.subgraph_profile(sg)
            rows[fam].append(
                ProfileRow(
                    venue_key=venue,
                    kind=kind,
                    profile=profile,
                    pagerank=ranks.get(venue),
                    network_type=subgraphs.classify_network_type(profile),
                )
            )
    subgraphs.write_profiles(rows, out)
    click.echo(f"profiled {sum(len(v) for v in rows.values())} subgraphs")


@main.command()
@click.option("--profiles", "profiles_path", required=True, type=click.Path(dir_okay=False))
@click.option("--bins", default=20, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Histogram TSV path.")
@click.option("--medians-out", required=True, type=click.Path(dir_okay=False))
def stats(profiles_path: str, bins: int, out: str, medians_out: str) -> None:
    """Normalized metric histograms and per-PageRank medians from profiles."""
    try:
        rows = subgraphs.read_profiles(profiles_path)
    except (OSError, ValueError) as exc:
        _fail_input(str(exc))
    first = True
    for family in sorted(rows):
        if not rows[family]:
            continue
        report = subgraphs.profile_statistics(rows[family], bins=bins)
        subgraphs.write_stat_report(report, family, out, medians_out, append=not first)
        first = False
    click.echo(f"wrote statistics for {sum(len(v) for v in rows.values())} profiles")


@main.command()
@click.argument("graph_path", type=click.Path(dir_okay=False))
@click.option("--in-format", type=click.Choice(list(FORMATS)), default="edge-tsv", show_default=True)
@click.option("--format", "fmt", type=click.Choice(list(FORMATS)), required=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def export(graph_path: str, in_format: str, fmt: str, out: str) -> None:
    """Re-serialize a graph into GraphML, edge TSV, or JSON."""
    graph = _load_graph_or_fail(graph_path, in_format)
    try:
        with open(out, "wb") as fh:
            fh.write(export_graph(graph, fmt))
    except OSError as exc:
        _fail_input(f"cannot write {out!r}: {exc}")
    click.echo(f"wrote {fmt} with {graph.node_count()} nodes, {graph.edge_count()} edges")


@main.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Pipeline config file.")
@click.option("--corpus", "corpus_path", type=click.Path(dir_okay=False), help="Self-contained corpus (overrides config).")
@click.option("--left", type=click.Path(dir_okay=False), help="Metadata corpus.")
@click.option("--right", type=click.Path(dir_okay=False), help="Citation corpus.")
@click.option("--out-dir", type=click.Path(file_okay=False), help="Output directory (overrides config).")
@click.option("--cosine-min", type=float, default=None, help="Knowledge-network threshold (overrides config).")
@click.option("--citation-min", type=float, default=None, help="Citation-network threshold (overrides config).")
def run(
    config_path: str | None,
    corpus_path: str | None,
    left: str | None,
    right: str | None,
    out_dir: str | None,
    cosine_min: float | None,
    citation_min: float | None,
) -> None:
    """Run the full pipeline and write a manifest of hashed artifacts."""
    try:
        cfg = PipelineConfig.load(config_path) if config_path else PipelineConfig()
        if corpus_path:
            cfg.metadata_corpus = corpus_path
            cfg.citation_corpus = ""
        if left:
            cfg.metadata_corpus = left
        if right:
            cfg.citation_corpus = right
        if out_dir:
            cfg.out_dir = out_dir
        if cosine_min is not None:
            cfg.cosine_min = cosine_min
        if citation_min is not None:
            cfg.citation_min = citation_min
        cfg.validate()
    except (OSError, ConfigError) as exc:
        _fail_input(str(exc))

    try:
        manifest = run_pipeline(cfg)
    except StageError as exc:
        click.echo(f"error: {exc}", err=True)
        if exc.stage == "ingest" and isinstance(exc.cause, (OSError, CorpusError)):
            sys.exit(1)
        sys.exit(2)
    stages = ", ".join(manifest.stage_names())
    click.echo(f"pipeline complete: {stages}")
    click.echo(f"manifest: {cfg.out_dir}/manifest.json")


if __name__ == "__main__":
    main()
