"""Synthetic graphs and corpora: archetype generators mirroring the four
structural network types, and corpus builders with planted ground truth for
benchmarking linkage, clustering, and the full pipeline.
"""

from __future__ import annotations

import random
import string
from dataclasses import replace

from .corpus import (
    CITATION_CORPUS,
    METADATA_CORPUS,
    AuthorName,
    Corpus,
    PublicationRecord,
    VenueInfo,
)
from .graph import VenueGraph

# -- archetype graphs -----------------------------------------------------


def _node(i: int) -> str:
    return f"n{i:03d}"


def _add_clique(g: VenueGraph, members: list[str]) -> None:
    for x in range(len(members)):
        for y in range(x + 1, len(members)):
            g.add_edge(members[x], members[y], 1.0)


def sparse_random_graph(n: int, seed: int, mean_degree: float = 0.8) -> VenueGraph:
    """Subcritical Erdos-Renyi graph: almost everything very low."""
    rng = random.Random(seed)
    g = VenueGraph(directed=False)
    for i in range(n):
        g.add_node(_node(i))
    p = mean_degree / max(n - 1, 1)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.add_edge(_node(i), _node(j), 1.0)
    return g


def disconnected_cliques_graph(n: int, seed: int, size_range: tuple[int, int] = (5, 8)) -> VenueGraph:
    """Small fully-connected working groups with nothing between them."""
    rng = random.Random(seed)
    g = VenueGraph(directed=False)
    i = 0
    while i < n:
        size = min(rng.randint(*size_range), n - i)
        members = [_node(i + k) for k in range(size)]
        for m in members:
            g.add_node(m)
        _add_clique(g, members)
        i += size
    return g


def bridged_components_graph(
    n: int, seed: int, connected_fraction: float = 0.72, size_range: tuple[int, int] = (6, 9)
) -> VenueGraph:
    """Several clusters bridged into one large body, plus a few stray groups.

    The connected part is a ring of cliques joined by single edges between
    distinct port nodes, so no single node dominates the shortest paths.
    """
    rng = random.Random(seed)
    g = VenueGraph(directed=False)
    target = int(round(n * connected_fraction))
    cliques: list[list[str]] = []
    i = 0
    while i < target:
        size = min(rng.randint(*size_range), target - i)
        if target - (i + size) == 1:  # avoid a dangling 1-clique in the ring
            size += 1
        members = [_node(i + k) for k in range(size)]
        for m in members:
            g.add_node(m)
        _add_clique(g, members)
        cliques.append(members)
        i += size
    for c in range(len(cliques)):
        here = cliques[c]
        there = cliques[(c + 1) % len(cliques)]
        if here is there:
            continue
        g.add_edge(here[-1], there[0], 1.0)
    while i < n:
        size = min(rng.randint(4, 7), n - i)
        members = [_node(i + k) for k in range(size)]
        for m in members:
            g.add_node(m)
        _add_clique(g, members)
        i += size
    return g


def core_satellite_graph(
    n: int,
    seed: int,
    core_fraction: float = 0.25,
    core_density: float = 0.5,
    satellite_size_range: tuple[int, int] = (3, 5),
) -> VenueGraph:
    """A dense core plus small satellite groups, all docked at one gateway.

    The gateway sits on nearly every cross-group shortest path, which is what
    drives the maximum betweenness toward 1.
    """
    rng = random.Random(seed)
    g = VenueGraph(directed=False)
    hub = _node(0)
    g.add_node(hub)
    core_size = max(3, int(round(n * core_fraction)))
    core = [_node(i) for i in range(1, 1 + core_size)]
    for m in core:
        g.add_node(m)
        g.add_edge(hub, m, 1.0)
    for x in range(core_size):
        for y in range(x + 1, core_size):
            if rng.random() < core_density:
                g.add_edge(core[x], core[y], 1.0)
    i = 1 + core_size
    while i < n:
        size = min(rng.randint(*satellite_size_range), n - i)
        members = [_node(i + k) for k in range(size)]
        for m in members:
            g.add_node(m)
        _add_clique(g, members)
        g.add_edge(members[0], hub, 1.0)
        i += size
    return g


ARCHETYPE_GENERATORS = {
    "Type1": sparse_random_graph,
    "Type2": disconnected_cliques_graph,
    "Type3": bridged_components_graph,
    "Type4": core_satellite_graph,
}

# -- synthetic corpora ----------------------------------------------------

_FIRST_NAMES = (
    "Ada", "Alan", "Edsger", "Grace", "Barbara", "Donald", "John", "Leslie",
    "Judea", "Frances", "Niklaus", "Tony", "Robin", "Shafi", "Silvio", "Manuel",
)


def _surname(rng: random.Random) -> str:
    length = rng.randint(5, 8)
    first = rng.choice(string.ascii_uppercase)
    rest = "".join(rng.choice("aeioubcdfglmnprstvz") for _ in range(length - 1))
    return first + rest


def _word(rng: random.Random) -> str:
    length = rng.randint(4, 8)
    return "".join(rng.choice("aeioubcdfghklmnprstvwyz") for _ in range(length))


def _vocabulary(rng: random.Random, size: int) -> list[str]:
    words: set[str] = set()
    while len(words) < size:
        words.add(_word(rng))
    return sorted(words)


def planted_group_corpus(
    groups: int = 3,
    venues_per_group: int = 10,
    papers_per_venue: int = 12,
    refs_per_paper: int = 6,
    pool_size: int = 40,
    classic_refs: int = 2,
    authors_per_venue: int = 8,
    seed: int = 7,
) -> tuple[Corpus, dict[str, int]]:
    """Corpus with planted topic groups: intra-group coupling dominates.

    Papers of a venue draw external references from the group's private key
    pool and cite the group's "classic" in-corpus papers, so both the
    knowledge and citation networks cluster along the planted groups.
    Returns the corpus and the venue -> group-index truth map.
    """
    rng = random.Random(seed)
    vocab = _vocabulary(rng, 400)
    surnames = [_surname(rng) for _ in range(groups * venues_per_group * 3)]

    records: list[PublicationRecord] = []
    venue_table: dict[str, VenueInfo] = {}
    truth: dict[str, int] = {}
    classics: dict[int, list[str]] = {gi: [] for gi in range(groups)}

    venue_authors: dict[str, list[str]] = {}
    for gi in range(groups):
        for vi in range(venues_per_group):
            venue = f"g{gi}v{vi:02d}"
            kind = "journal" if vi % 2 == 0 else "conference"
            venue_table[venue] = VenueInfo(name=f"Venue {venue.upper()}", kind=kind)
            truth[venue] = gi
            venue_authors[venue] = [
                f"{rng.choice(_FIRST_NAMES)} {rng.choice(surnames)}"
                for _ in range(authors_per_venue)
            ]

    pools = {
        gi: [f"ext:g{gi}:k{j:03d}" for j in range(pool_size)] for gi in range(groups)
    }
    # first paper of each venue acts as a group classic
    for gi in range(groups):
        for vi in range(venues_per_group):
            classics[gi].append(f"g{gi}v{vi:02d}p000")

    for gi in range(groups):
        for vi in range(venues_per_group):
            venue = f"g{gi}v{vi:02d}"
            for pi in range(papers_per_venue):
                record_id = f"{venue}p{pi:03d}"
                title = " ".join(rng.choice(vocab) for _ in range(rng.randint(7, 11)))
                author_count = rng.randint(1, 3)
                names = rng.sample(venue_authors[venue], author_count)
                refs = rng.sample(pools[gi], min(refs_per_paper, pool_size))
                cite_targets = [t for t in classics[gi] if t != record_id]
                refs += rng.sample(cite_targets, min(classic_refs, len(cite_targets)))
                records.append(
                    PublicationRecord(
                        record_id=record_id,
                        source=METADATA_CORPUS,
                        title=title,
                        authors=tuple(AuthorName.from_full_name(n) for n in names),
                        venue_key=venue,
                        year=1990 + (pi % 20),
                        references=tuple(refs),
                    )
                )

    return Corpus(records=records, venue_table=venue_table, source=METADATA_CORPUS), truth


def split_for_linkage(corpus: Corpus, prefix: str = "cx-") -> tuple[Corpus, Corpus]:
    """Split a self-contained corpus into a metadata side (no references) and
    a citation side (prefixed ids, full references) for exercising linkage."""
    meta_records = [replace(r, references=(), source=METADATA_CORPUS) for r in corpus.records]
    cite_records = []
    ids = {r.record_id for r in corpus.records}
    for r in corpus.records:
        refs = tuple(prefix + t if t in ids else t for t in r.references)
        cite_records.append(
            replace(r, record_id=prefix + r.record_id, references=refs, source=CITATION_CORPUS)
        )
    meta = Corpus(records=meta_records, venue_table=dict(corpus.venue_table), source=METADATA_CORPUS)
    cite = Corpus(records=cite_records, venue_table={}, source=CITATION_CORPUS)
    return meta, cite


def _corrupt_token(token: str, rng: random.Random) -> str:
    letters = string.ascii_lowercase
    pos = rng.randrange(len(token))
    op = rng.choice(("substitute", "delete", "insert"))
    if op == "substitute":
        replacement = rng.choice([c for c in letters if c != token[pos]])
        return token[:pos] + replacement + token[pos + 1 :]
    if op == "delete" and len(token) > 1:
        return token[:pos] + token[pos + 1 :]
    return token[:pos] + rng.choice(letters) + token[pos:]


def linkage_benchmark_corpora(
    n: int = 1000,
    seed: int = 11,
    last_name_pool: int = 300,
    title_tokens: tuple[int, int] = (8, 12),
    max_corrupted_tokens: int = 2,
) -> tuple[Corpus, Corpus, set[tuple[str, str]]]:
    """Metadata corpus plus a duplicated citation corpus whose titles carry
    up to `max_corrupted_tokens` single-character token typos. Author last
    names are drawn from a shared pool so canopies collide across records.
    Returns both corpora and the set of planted (left, right) pairs."""
    rng = random.Random(seed)
    vocab = _vocabulary(rng, 3000)
    surnames = [_surname(rng) for _ in range(last_name_pool)]

    titles: set[str] = set()
    meta_records = []
    cite_records = []
    truth: set[tuple[str, str]] = set()
    for i in range(n):
        while True:
            title = " ".join(rng.choice(vocab) for _ in range(rng.randint(*title_tokens)))
            if title not in titles:
                titles.add(title)
                break
        authors = tuple(
            AuthorName.from_full_name(f"{rng.choice(_FIRST_NAMES)} {rng.choice(surnames)}")
            for _ in range(rng.randint(1, 3))
        )
        left_id = f"m{i:04d}"
        right_id = f"c{i:04d}"
        meta_records.append(
            PublicationRecord(
                record_id=left_id,
                source=METADATA_CORPUS,
                title=title,
                authors=authors,
                venue_key=None,
                year=2000,
                references=(),
            )
        )
        tokens = title.split()
        corrupt_count = rng.choice((0, 1, 1, 2, 2))
        corrupt_count = min(corrupt_count, max_corrupted_tokens)
        for pos in rng.sample(range(len(tokens)), corrupt_count):
            tokens[pos] = _corrupt_token(tokens[pos], rng)
        cite_records.append(
            PublicationRecord(
                record_id=right_id,
                source=CITATION_CORPUS,
                title=" ".join(tokens),
                authors=authors,
                venue_key=None,
                year=2000,
                references=(),
            )
        )
        truth.add((left_id, right_id))

    meta = Corpus(records=meta_records, venue_table={}, source=METADATA_CORPUS)
    cite = Corpus(records=cite_records, venue_table={}, source=CITATION_CORPUS)
    return meta, cite, truth


def scale_corpus(
    venues: int = 1000,
    papers_per_venue: int = 100,
    groups: int = 30,
    pool_size: int = 120,
    pool_refs: int = 5,
    classic_refs: int = 2,
    hub_venues_per_group: int = 3,
    classics_per_hub: int = 10,
    authors_per_venue: int = 30,
    seed: int = 3,
) -> Corpus:
    """Large benchmark corpus with group structure sized for throughput runs.

    Each group's papers cite "classic" papers hosted by a few hub venues, so
    inter-venue citation counts concentrate enough to survive thresholding,
    while external-pool references give dense intra-group coupling.
    """
    rng = random.Random(seed)
    vocab = _vocabulary(rng, 2000)
    surnames = [_surname(rng) for _ in range(2000)]

    venue_keys = [f"v{vi:04d}" for vi in range(venues)]
    group_of = {venue_keys[vi]: vi % groups for vi in range(venues)}
    venue_table = {
        key: VenueInfo(name=f"Venue {key.upper()}", kind="journal" if vi % 2 == 0 else "conference")
        for vi, key in enumerate(venue_keys)
    }
    pools = {gi: [f"ext:g{gi:02d}:k{j:03d}" for j in range(pool_size)] for gi in range(groups)}

    hubs: dict[int, list[str]] = {gi: [] for gi in range(groups)}
    for key in venue_keys:
        gi = group_of[key]
        if len(hubs[gi]) < hub_venues_per_group:
            hubs[gi].append(key)
    classics = {
        gi: [f"{hub}p{pi:03d}" for hub in hubs[gi] for pi in range(classics_per_hub)]
        for gi in range(groups)
    }

    records: list[PublicationRecord] = []
    for key in venue_keys:
        gi = group_of[key]
        pool = pools[gi]
        group_classics = classics[gi]
        authors = [
            f"{rng.choice(_FIRST_NAMES)} {rng.choice(surnames)}" for _ in range(authors_per_venue)
        ]
        for pi in range(papers_per_venue):
            record_id = f"{key}p{pi:03d}"
            refs = rng.sample(pool, pool_refs)
            refs += rng.sample([t for t in group_classics if t != record_id], classic_refs)
            names = rng.sample(authors, rng.randint(2, 3))
            records.append(
                PublicationRecord(
                    record_id=record_id,
                    source=METADATA_CORPUS,
                    title=" ".join(rng.choice(vocab) for _ in range(7)),
                    authors=tuple(AuthorName.from_full_name(n) for n in names),
                    venue_key=key,
                    year=1980 + (pi % 30),
                    references=tuple(refs),
                )
            )

    return Corpus(records=records, venue_table=venue_table, source=METADATA_CORPUS)
