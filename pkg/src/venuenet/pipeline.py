"""End-to-end pipeline: ingest, link, build, threshold, cluster, project,
metrics, subgraphs, stats. One configuration in, a manifest of hashed
artifacts out; reruns with identical config and inputs produce byte-identical
outputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import community, linkage, metrics, networks, subgraphs
from .corpus import YEAR_MAX, YEAR_MIN, Corpus, parse_corpus, save_corpus, validate_corpus
from .exports import export_graph, write_graph
from .graph import VenueGraph
from .subgraphs import ClassificationCuts, ProfileRow

CONFIG_SCHEMA = "venuenet-config/1"
MANIFEST_SCHEMA = "venuenet-manifest/1"

STAGES = (
    "ingest",
    "link",
    "build",
    "threshold",
    "cluster",
    "project",
    "metrics",
    "subgraphs",
    "stats",
)


class PipelineError(Exception):
    pass


class ConfigError(PipelineError):
    pass


class StageError(PipelineError):
    def __init__(self, stage: str, cause: Exception, manifest: "RunManifest"):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.manifest = manifest


@dataclass
class PipelineConfig:
    metadata_corpus: str = ""
    citation_corpus: str = ""  # empty: single self-contained corpus
    corpus_format: str = "jsonl"
    jaccard_min: float = linkage.DEFAULT_JACCARD_MIN
    sw_min: float = linkage.DEFAULT_SW_MIN
    cosine_min: float = networks.COSINE_MIN_DEFAULT
    citation_min: float = networks.CITATION_MIN_DEFAULT
    pagerank_d: float = 0.85
    pagerank_tol: float = 1e-8
    pagerank_max_iter: int = 200
    cut_very_low: float = 0.05
    cut_low: float = 0.25
    cut_medium: float = 0.6
    cut_high: float = 0.85
    histogram_bins: int = 20
    slice_years: tuple[int, ...] = ()
    out_dir: str = "out"

    def classification_cuts(self) -> ClassificationCuts:
        return ClassificationCuts(
            very_low_max=self.cut_very_low,
            low_max=self.cut_low,
            medium_max=self.cut_medium,
            high_max=self.cut_high,
        )

    def validate(self) -> None:
        if not self.metadata_corpus:
            raise ConfigError("metadata_corpus is required")
        for path in (self.metadata_corpus, self.citation_corpus):
            if path and not Path(path).is_file():
                raise ConfigError(f"corpus file not found: {path}")
        if self.corpus_format not in ("jsonl", "dblp-xml"):
            raise ConfigError(f"unknown corpus_format {self.corpus_format!r}")
        for name in ("jaccard_min", "sw_min", "cosine_min"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.citation_min < 0:
            raise ConfigError(f"citation_min must be >= 0, got {self.citation_min}")
        if not 0.0 < self.pagerank_d < 1.0:
            raise ConfigError(f"pagerank_d must be in (0, 1), got {self.pagerank_d}")
        if not self.pagerank_tol > 0:
            raise ConfigError(f"pagerank_tol must be > 0, got {self.pagerank_tol}")
        if self.pagerank_max_iter < 1:
            raise ConfigError(f"pagerank_max_iter must be >= 1, got {self.pagerank_max_iter}")
        cuts = (self.cut_very_low, self.cut_low, self.cut_medium, self.cut_high)
        if not all(0.0 < c < 1.0 for c in cuts) or sorted(cuts) != list(cuts) or len(set(cuts)) != 4:
            raise ConfigError(f"classification cuts must be strictly increasing in (0, 1), got {cuts}")
        if self.histogram_bins < 1:
            raise ConfigError(f"histogram_bins must be >= 1, got {self.histogram_bins}")
        for year in self.slice_years:
            if not YEAR_MIN <= year <= YEAR_MAX:
                raise ConfigError(f"slice year {year} outside [{YEAR_MIN}, {YEAR_MAX}]")
        if not self.out_dir:
            raise ConfigError("out_dir is required")

    def to_dict(self) -> dict:
        return {
            f.name: (list(getattr(self, f.name)) if f.name == "slice_years" else getattr(self, f.name))
            for f in fields(self)
        }

    def to_text(self) -> str:
        lines = [f"schema = {CONFIG_SCHEMA}"]
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "slice_years":
                value = ",".join(str(y) for y in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        values: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line {lineno} is not 'key = value': {raw!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
        schema = values.pop("schema", CONFIG_SCHEMA)
        if schema != CONFIG_SCHEMA:
            raise ConfigError(f"unsupported config schema {schema!r}")

        kwargs: dict = {}
        by_name = {f.name: f for f in fields(cls)}
        for key, value in values.items():
            if key not in by_name:
                raise ConfigError(f"unknown config key {key!r}")
            kind = by_name[key].type
            if key == "slice_years":
                kwargs[key] = tuple(int(v) for v in value.split(",") if v.strip()) if value else ()
            elif kind == "float":
                kwargs[key] = float(value)
            elif kind == "int":
                kwargs[key] = int(value)
            else:
                kwargs[key] = value
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


@dataclass
class StageRecord:
    name: str
    outputs: list[dict] = field(default_factory=list)


@dataclass
class RunManifest:
    config: dict
    stages: list[StageRecord] = field(default_factory=list)
    failed_stage: str | None = None

    def stage_names(self) -> list[str]:
        return [s.name for s in self.stages]

    def to_dict(self) -> dict:
        out = {
            "schema": MANIFEST_SCHEMA,
            "config": self.config,
            "stages": [{"name": s.name, "outputs": s.outputs} for s in self.stages],
        }
        if self.failed_stage is not None:
            out["failed_stage"] = self.failed_stage
        return out

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class _Run:
    """Mutable state threaded through the pipeline stages."""

    def __init__(self, cfg: PipelineConfig):
        self.cfg = cfg
        self.out_dir = Path(cfg.out_dir)
        self.manifest = RunManifest(config=cfg.to_dict())
        self.meta: Corpus | None = None
        self.cite: Corpus | None = None
        self.linked: Corpus | None = None
        self.matches: list[linkage.MatchPair] = []
        self.coupling: networks.CouplingMatrix | None = None
        self.knowledge: VenueGraph | None = None
        self.citation: VenueGraph | None = None
        self.knowledge_reduced: VenueGraph | None = None
        self.citation_reduced: VenueGraph | None = None
        self.partition: community.ClusterPartition | None = None
        self.pagerank: metrics.MetricVector | None = None
        self.profiles: dict[str, list[ProfileRow]] = {}

    def record(self, stage: str, *paths: Path) -> None:
        rec = StageRecord(name=stage)
        for path in paths:
            rec.outputs.append(
                {
                    "path": str(path.relative_to(self.out_dir)),
                    "sha256": _sha256(path),
                    "bytes": path.stat().st_size,
                }
            )
        self.manifest.stages.append(rec)


def _write_metric_tsv(vector: metrics.MetricVector, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"node\t{vector.metric}\n")
        for node, value in vector.top():
            fh.write(f"{node}\t{value!r}\n")


def _stage_ingest(run: _Run) -> None:
    cfg = run.cfg
    with open(cfg.metadata_corpus, "rb") as fh:
        run.meta = parse_corpus(fh, cfg.corpus_format, source="metadata-corpus")
    out = run.out_dir / "corpus_metadata.jsonl"
    save_corpus(run.meta, out)
    report = validate_corpus(run.meta)
    report_path = run.out_dir / "validation_metadata.json"
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    outputs = [out, report_path]

    if cfg.citation_corpus:
        with open(cfg.citation_corpus, "rb") as fh:
            run.cite = parse_corpus(fh, cfg.corpus_format, source="citation-corpus")
        cite_out = run.out_dir / "corpus_citation.jsonl"
        save_corpus(run.cite, cite_out)
        outputs.append(cite_out)
    run.record("ingest", *outputs)


def _stage_link(run: _Run) -> None:
    cfg = run.cfg
    if run.cite is not None:
        run.matches = linkage.link_corpora(
            run.meta, run.cite, jaccard_min=cfg.jaccard_min, sw_min=cfg.sw_min
        )
        run.linked = linkage.attach_references(run.meta, run.cite, run.matches)
    else:
        run.matches = []
        run.linked = run.meta
    path = run.out_dir / "matches.tsv"
    linkage.write_matches(run.matches, path)
    run.record("link", path)


def _stage_build(run: _Run) -> None:
    run.coupling = networks.build_coupling_matrix(run.linked)
    coupling_path = run.out_dir / "coupling.json"
    with open(coupling_path, "wb") as fh:
        fh.write(run.coupling.to_json())
    run.knowledge = networks.build_knowledge_network(run.coupling)
    run.citation = networks.build_citation_network(run.linked, run.matches)
    k_path = run.out_dir / "knowledge_full.tsv"
    f_path = run.out_dir / "citation_full.tsv"
    write_graph(run.knowledge, k_path)
    write_graph(run.citation, f_path)
    run.record("build", coupling_path, k_path, f_path)


def _stage_threshold(run: _Run) -> None:
    cfg = run.cfg
    run.knowledge_reduced = networks.apply_threshold(
        run.knowledge, networks.ThresholdRule("cosine", cfg.cosine_min)
    )
    run.citation_reduced = networks.apply_threshold(
        run.citation, networks.ThresholdRule("citation", cfg.citation_min)
    )
    k_path = run.out_dir / "knowledge.tsv"
    f_path = run.out_dir / "citation.tsv"
    write_graph(run.knowledge_reduced, k_path)
    write_graph(run.citation_reduced, f_path)

    summaries = {
        "F": networks.summarize(run.citation),
        "F'": networks.summarize(run.citation_reduced),
        "K": networks.summarize(run.knowledge),
        "K'": networks.summarize(run.knowledge_reduced),
    }
    table_path = run.out_dir / "network_summary.txt"
    with open(table_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(networks.format_summary_table(summaries))
    json_path = run.out_dir / "network_summary.json"
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump({k: v.to_dict() for k, v in summaries.items()}, fh, sort_keys=True, indent=2)
        fh.write("\n")
    run.record("threshold", k_path, f_path, table_path, json_path)


def _stage_cluster(run: _Run) -> None:
    run.partition = community.greedy_modularity_partition(run.knowledge_reduced)
    path = run.out_dir / "partition.tsv"
    community.write_partition(run.partition, path)
    run.record("cluster", path)


def _stage_project(run: _Run) -> None:
    projection = community.project_to_cluster_network(run.coupling, run.partition)
    graph_path = run.out_dir / "cluster_graph.tsv"
    write_graph(projection.graph, graph_path)
    assign_path = run.out_dir / "cluster_assignment.tsv"
    with open(assign_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("venue_key\tcluster_id\trule\n")
        for venue in sorted(run.partition.assignment):
            fh.write(f"{venue}\t{run.partition.assignment[venue]}\tclustered\n")
        for venue in sorted(projection.new_assignments):
            fh.write(f"{venue}\t{projection.new_assignments[venue]}\tbest-cosine\n")
        for venue in projection.unassigned:
            fh.write(f"{venue}\t\tunassigned\n")

    clustered = run.knowledge_reduced.copy()
    for venue in clustered.nodes:
        clustered.nodes[venue]["cluster"] = run.partition.assignment.get(venue, "")
    graphml_path = run.out_dir / "knowledge_clustered.graphml"
    with open(graphml_path, "wb") as fh:
        fh.write(export_graph(clustered, "graphml"))
    run.record("project", graph_path, assign_path, graphml_path)


def _stage_metrics(run: _Run) -> None:
    cfg = run.cfg
    betweenness = metrics.betweenness_centrality(
        run.citation_reduced, weighted=True, normalized=True
    )
    run.pagerank = metrics.pagerank(
        run.citation_reduced, d=cfg.pagerank_d, tol=cfg.pagerank_tol, max_iter=cfg.pagerank_max_iter
    )
    b_path = run.out_dir / "betweenness.tsv"
    p_path = run.out_dir / "pagerank.tsv"
    _write_metric_tsv(betweenness, b_path)
    _write_metric_tsv(run.pagerank, p_path)
    run.record("metrics", b_path, p_path)


def _stage_subgraphs(run: _Run) -> None:
    cfg = run.cfg
    corpus = run.linked
    cuts = cfg.classification_cuts()
    citation_index = subgraphs.publication_citation_graph(corpus)
    ranks = run.pagerank.values if run.pagerank else {}

    by_family: dict[str, list[ProfileRow]] = {"coauthorship": [], "citation": []}
    by_venue = corpus.records_by_venue()
    for venue in sorted(by_venue):
        kind = corpus.venue_kind(venue)
        rank = ranks.get(venue)
        coauth = subgraphs.extract_coauthorship_subgraph(corpus, venue, records=by_venue[venue])
        if coauth.graph.node_count() > 0:
            profile = subgraphs.subgraph_profile(coauth)
            by_family["coauthorship"].append(
                ProfileRow(
                    venue_key=venue,
                    kind=kind,
                    profile=profile,
                    pagerank=rank,
                    network_type=subgraphs.classify_network_type(profile, cuts),
                )
            )
        cite = subgraphs.extract_citation_subgraph(
            corpus, venue, citation_index, records=by_venue[venue]
        )
        if cite.graph.node_count() > 0:
            profile = subgraphs.subgraph_profile(cite)
            by_family["citation"].append(
                ProfileRow(
                    venue_key=venue,
                    kind=kind,
                    profile=profile,
                    pagerank=rank,
                    network_type=subgraphs.classify_network_type(profile, cuts),
                )
            )

    run.profiles = by_family
    path = run.out_dir / "profiles.tsv"
    subgraphs.write_profiles(by_family, path)
    run.record("subgraphs", path)


def _stage_stats(run: _Run) -> None:
    cfg = run.cfg
    hist_path = run.out_dir / "histograms.tsv"
    med_path = run.out_dir / "medians.tsv"
    first = True
    for family in sorted(run.profiles):
        rows = run.profiles[family]
        if not rows:
            continue
        report = subgraphs.profile_statistics(rows, bins=cfg.histogram_bins)
        subgraphs.write_stat_report(report, family, hist_path, med_path, append=not first)
        first = False
    if first:  # no profiles at all; still emit headered files
        with open(hist_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("subgraph\tmetric\tvenue_kind\tbin_lo\tbin_hi\tmass\n")
        with open(med_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("subgraph\tmetric\tpagerank_bin\tmedian\n")
    run.record("stats", hist_path, med_path)


def _stage_snapshots(run: _Run) -> None:
    from .corpus import slice_by_year

    cfg = run.cfg
    outputs = []
    for year in cfg.slice_years:
        year_dir = run.out_dir / "snapshots" / str(year)
        year_dir.mkdir(parents=True, exist_ok=True)
        sliced = slice_by_year(run.linked, year)
        coupling = networks.build_coupling_matrix(sliced)
        knowledge = networks.build_knowledge_network(coupling)
        reduced = networks.apply_threshold(
            knowledge, networks.ThresholdRule("cosine", cfg.cosine_min)
        )
        full_path = year_dir / "knowledge_full.tsv"
        reduced_path = year_dir / "knowledge.tsv"
        write_graph(knowledge, full_path)
        write_graph(reduced, reduced_path)
        outputs.extend([full_path, reduced_path])
    run.record("snapshots", *outputs)


_STAGE_FUNCS = {
    "ingest": _stage_ingest,
    "link": _stage_link,
    "build": _stage_build,
    "threshold": _stage_threshold,
    "cluster": _stage_cluster,
    "project": _stage_project,
    "metrics": _stage_metrics,
    "subgraphs": _stage_subgraphs,
    "stats": _stage_stats,
    "snapshots": _stage_snapshots,
}


def run_pipeline(cfg: PipelineConfig) -> RunManifest:
    """Execute all stages, writing artifacts and a manifest under cfg.out_dir.

    Any stage failure aborts the run; the raised StageError names the stage
    and carries the manifest of stages completed so far, which is also written
    to disk.
    """
    cfg.validate()
    run = _Run(cfg)
    run.out_dir.mkdir(parents=True, exist_ok=True)
    cfg.save(run.out_dir / "config.txt")

    stage_list = list(STAGES)
    if cfg.slice_years:
        stage_list.append("snapshots")
    for stage in stage_list:
        func = _STAGE_FUNCS[stage]
        try:
            func(run)
        except Exception as exc:
            run.manifest.failed_stage = stage
            run.manifest.save(run.out_dir / "manifest.json")
            raise StageError(stage, exc, run.manifest) from exc

    run.manifest.save(run.out_dir / "manifest.json")
    return run.manifest
