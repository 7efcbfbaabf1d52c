"""Publication corpus model, parsers, and time slicing.

Two input formats are supported:

* canonical JSONL: one JSON object per line. A record line looks like
  ``{"id": "p1", "title": "...", "authors": ["A B"], "venue": "v1",
  "year": 1995, "refs": ["p2", "raw citation string"]}``. Optional venue
  metadata lines ``{"venue_key": "v1", "name": "...", "kind": "journal"}``
  and a single ``{"source": "metadata-corpus"}`` header line may appear.
* a DBLP-style XML subset covering ``article`` and ``inproceedings``
  elements with key attribute, title, author, year, and journal/booktitle
  children. ``cite`` children become references.

Reference targets are plain strings: either the record id of another
publication (resolvable) or a raw citation string (kept as-is; references
may legitimately point at preprints or venues outside the corpus).
"""

from __future__ import annotations

import io
import json
import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass, replace
from typing import BinaryIO, Iterable

YEAR_MIN = 1900
YEAR_MAX = 2100

JOURNAL = "journal"
CONFERENCE = "conference"
UNKNOWN_KIND = "unknown"

METADATA_CORPUS = "metadata-corpus"
CITATION_CORPUS = "citation-corpus"


class CorpusError(Exception):
    """Base class for corpus parsing and validation failures."""


class MalformedEntryError(CorpusError):
    def __init__(self, position: str, reason: str):
        super().__init__(f"malformed entry at {position}: {reason}")
        self.position = position
        self.reason = reason


class DuplicateRecordIdError(CorpusError):
    def __init__(self, record_id: str, position: str):
        super().__init__(f"duplicate record id {record_id!r} at {position}")
        self.record_id = record_id


def last_name_key(full_name: str) -> str:
    """Normalized last-name blocking key: lowercase, diacritics folded to
    ASCII, final whitespace-delimited token."""
    stripped = full_name.strip().lower()
    if not stripped:
        return ""
    token = stripped.split()[-1]
    folded = unicodedata.normalize("NFKD", token)
    ascii_token = "".join(c for c in folded if not unicodedata.combining(c) and ord(c) < 128)
    return ascii_token if ascii_token else token


@dataclass(frozen=True, slots=True)
class AuthorName:
    full_name: str
    last_name_key: str

    @classmethod
    def from_full_name(cls, full_name: str) -> "AuthorName":
        return cls(full_name=full_name, last_name_key=last_name_key(full_name))


@dataclass(slots=True)
class PublicationRecord:
    record_id: str
    source: str
    title: str
    authors: tuple[AuthorName, ...]
    venue_key: str | None
    year: int | None
    references: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class VenueInfo:
    name: str
    kind: str = UNKNOWN_KIND


@dataclass
class Corpus:
    records: list[PublicationRecord]
    venue_table: dict[str, VenueInfo]
    source: str = METADATA_CORPUS

    def __post_init__(self) -> None:
        self._by_id: dict[str, PublicationRecord] = {r.record_id: r for r in self.records}

    def record(self, record_id: str) -> PublicationRecord:
        return self._by_id[record_id]

    def has_record(self, record_id: str) -> bool:
        return record_id in self._by_id

    def records_by_venue(self) -> dict[str, list[PublicationRecord]]:
        index: dict[str, list[PublicationRecord]] = {}
        for rec in self.records:
            if rec.venue_key is not None:
                index.setdefault(rec.venue_key, []).append(rec)
        return index

    def venue_kind(self, venue_key: str) -> str:
        info = self.venue_table.get(venue_key)
        return info.kind if info else UNKNOWN_KIND

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.records == other.records
            and self.venue_table == other.venue_table
            and self.source == other.source
        )


@dataclass
class ValidationReport:
    record_count: int
    dangling_venue_keys: list[str]
    empty_title_ids: list[str]
    unresolved_reference_count: int
    resolved_reference_count: int
    no_venue_count: int
    no_author_count: int

    def is_clean(self) -> bool:
        return not self.dangling_venue_keys and not self.empty_title_ids

    def to_dict(self) -> dict:
        return {
            "record_count": self.record_count,
            "dangling_venue_keys": self.dangling_venue_keys,
            "empty_title_ids": self.empty_title_ids,
            "unresolved_reference_count": self.unresolved_reference_count,
            "resolved_reference_count": self.resolved_reference_count,
            "no_venue_count": self.no_venue_count,
            "no_author_count": self.no_author_count,
        }


# -- parsing ------------------------------------------------------------


def _check_year(year, position: str) -> int | None:
    if year is None:
        return None
    if not isinstance(year, int) or isinstance(year, bool):
        raise MalformedEntryError(position, f"year must be an integer, got {year!r}")
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise MalformedEntryError(position, f"year {year} outside [{YEAR_MIN}, {YEAR_MAX}]")
    return year


def _make_authors(names: Iterable[str], position: str) -> tuple[AuthorName, ...]:
    authors = []
    for name in names:
        if not isinstance(name, str) or not name.strip():
            raise MalformedEntryError(position, f"empty or non-string author name {name!r}")
        authors.append(AuthorName.from_full_name(name))
    return tuple(authors)


def parse_jsonl(stream: BinaryIO | Iterable[bytes], source: str = METADATA_CORPUS) -> Corpus:
    records: list[PublicationRecord] = []
    venue_table: dict[str, VenueInfo] = {}
    seen_ids: set[str] = set()

    for lineno, raw in enumerate(stream, start=1):
        line = raw.decode("utf-8").strip()
        if not line:
            continue
        position = f"line {lineno}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedEntryError(position, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise MalformedEntryError(position, "expected a JSON object")

        if "source" in obj and "id" not in obj and "venue_key" not in obj:
            source = obj["source"]
            continue
        if "venue_key" in obj and "id" not in obj:
            key = obj["venue_key"]
            venue_table[key] = VenueInfo(
                name=obj.get("name", key), kind=obj.get("kind", UNKNOWN_KIND)
            )
            continue

        if "id" not in obj:
            raise MalformedEntryError(position, "record missing 'id'")
        record_id = obj["id"]
        if not isinstance(record_id, str) or not record_id:
            raise MalformedEntryError(position, f"record id must be a non-empty string, got {record_id!r}")
        if record_id in seen_ids:
            raise DuplicateRecordIdError(record_id, position)
        seen_ids.add(record_id)

        title = obj.get("title", "")
        if not isinstance(title, str):
            raise MalformedEntryError(position, "title must be a string")
        venue_key = obj.get("venue")
        if venue_key is not None and (not isinstance(venue_key, str) or not venue_key):
            raise MalformedEntryError(position, f"venue must be a non-empty string or null, got {venue_key!r}")
        refs = obj.get("refs", [])
        if not isinstance(refs, list) or any(not isinstance(t, str) or not t for t in refs):
            raise MalformedEntryError(position, "refs must be a list of non-empty strings")

        records.append(
            PublicationRecord(
                record_id=record_id,
                source=source,
                title=title,
                authors=_make_authors(obj.get("authors", []), position),
                venue_key=venue_key,
                year=_check_year(obj.get("year"), position),
                references=tuple(refs),
            )
        )
        if venue_key is not None and venue_key not in venue_table:
            venue_table[venue_key] = VenueInfo(name=venue_key, kind=UNKNOWN_KIND)

    corpus = Corpus(records=records, venue_table=venue_table, source=source)
    for rec in corpus.records:
        rec.source = source
    return corpus


_DBLP_KINDS = {"article": JOURNAL, "inproceedings": CONFERENCE}


def parse_dblp_xml(stream: BinaryIO, source: str = METADATA_CORPUS) -> Corpus:
    """Parse the supported DBLP export subset (article / inproceedings)."""
    records: list[PublicationRecord] = []
    venue_table: dict[str, VenueInfo] = {}
    seen_ids: set[str] = set()
    index = 0

    try:
        events = ET.iterparse(stream, events=("end",))
        for _, elem in events:
            if elem.tag not in _DBLP_KINDS:
                continue
            index += 1
            key = elem.get("key")
            position = f"element {index} ({elem.tag})"
            if not key:
                raise MalformedEntryError(position, "missing key attribute")
            position = f"element {index} (key={key})"
            if key in seen_ids:
                raise DuplicateRecordIdError(key, position)
            seen_ids.add(key)

            title = "".join((elem.findtext("title") or "").split("\n")).strip()
            if not title:
                raise MalformedEntryError(position, "missing title")
            year_text = elem.findtext("year")
            year = None
            if year_text:
                try:
                    year = int(year_text)
                except ValueError as exc:
                    raise MalformedEntryError(position, f"non-numeric year {year_text!r}") from exc
                year = _check_year(year, position)

            venue_name = elem.findtext("journal") or elem.findtext("booktitle")
            parts = key.split("/")
            venue_key = "/".join(parts[:2]) if len(parts) >= 3 else None
            if venue_key is not None and venue_key not in venue_table:
                venue_table[venue_key] = VenueInfo(
                    name=venue_name or venue_key, kind=_DBLP_KINDS[elem.tag]
                )

            refs = tuple(
                c.text.strip()
                for c in elem.findall("cite")
                if c.text and c.text.strip() and c.text.strip() != "..."
            )
            authors = _make_authors(
                (a.text or "" for a in elem.findall("author")), position
            )
            records.append(
                PublicationRecord(
                    record_id=key,
                    source=source,
                    title=title,
                    authors=authors,
                    venue_key=venue_key,
                    year=year,
                    references=refs,
                )
            )
            elem.clear()
    except ET.ParseError as exc:
        raise MalformedEntryError(f"line {exc.position[0]}", f"XML syntax error: {exc.msg if hasattr(exc, 'msg') else exc}") from exc

    return Corpus(records=records, venue_table=venue_table, source=source)


def parse_corpus(stream: BinaryIO, format: str, source: str = METADATA_CORPUS) -> Corpus:
    if format == "jsonl":
        return parse_jsonl(stream, source=source)
    if format == "dblp-xml":
        return parse_dblp_xml(stream, source=source)
    raise ValueError(f"unknown corpus format {format!r}")


def serialize_corpus(corpus: Corpus) -> bytes:
    """Canonical JSONL serialization; parse(serialize(c)) == c."""
    out = io.StringIO()
    out.write(json.dumps({"source": corpus.source}, sort_keys=True) + "\n")
    for key in sorted(corpus.venue_table):
        info = corpus.venue_table[key]
        out.write(
            json.dumps(
                {"venue_key": key, "name": info.name, "kind": info.kind}, sort_keys=True
            )
            + "\n"
        )
    for rec in corpus.records:
        obj: dict = {
            "id": rec.record_id,
            "title": rec.title,
            "authors": [a.full_name for a in rec.authors],
            "refs": list(rec.references),
        }
        if rec.venue_key is not None:
            obj["venue"] = rec.venue_key
        if rec.year is not None:
            obj["year"] = rec.year
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    return out.getvalue().encode("utf-8")


def load_corpus(path) -> Corpus:
    with open(path, "rb") as fh:
        return parse_jsonl(fh)


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_corpus(corpus))


# -- validation and slicing ----------------------------------------------


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Report structural issues without mutating anything."""
    dangling: list[str] = []
    empty_titles: list[str] = []
    unresolved = 0
    resolved = 0
    no_venue = 0
    no_author = 0
    seen_dangling: set[str] = set()

    for rec in corpus.records:
        if rec.venue_key is None:
            no_venue += 1
        elif rec.venue_key not in corpus.venue_table and rec.venue_key not in seen_dangling:
            seen_dangling.add(rec.venue_key)
            dangling.append(rec.venue_key)
        if not rec.title.strip():
            empty_titles.append(rec.record_id)
        if not rec.authors:
            no_author += 1
        for target in rec.references:
            if corpus.has_record(target):
                resolved += 1
            else:
                unresolved += 1

    return ValidationReport(
        record_count=len(corpus.records),
        dangling_venue_keys=sorted(dangling),
        empty_title_ids=empty_titles,
        unresolved_reference_count=unresolved,
        resolved_reference_count=resolved,
        no_venue_count=no_venue,
        no_author_count=no_author,
    )


def slice_by_year(corpus: Corpus, cutoff: int) -> Corpus:
    """Sub-corpus of records published up to and including the cutoff year.

    Records without a year are excluded; the venue table is restricted to
    venues still referenced by the surviving records.
    """
    if not YEAR_MIN <= cutoff <= YEAR_MAX:
        raise ValueError(f"cutoff {cutoff} outside [{YEAR_MIN}, {YEAR_MAX}]")
    kept = [replace(r) for r in corpus.records if r.year is not None and r.year <= cutoff]
    used_venues = {r.venue_key for r in kept if r.venue_key is not None}
    venue_table = {k: v for k, v in corpus.venue_table.items() if k in used_venues}
    return Corpus(records=kept, venue_table=venue_table, source=corpus.source)
