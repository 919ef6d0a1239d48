"""Film record parsing, keyword quality filtering and keyword normalization.

Records are line-delimited JSON objects::

    {"film_id": "m1", "year": 2001, "countries": ["United States"],
     "keywords": [{"text": "war", "likes": 5, "dislikes": 0}], "score": 1200}

``score`` is optional.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class IngestError(Exception):
    """Base class for dataset-level ingest failures."""


class DuplicateFilmIdError(IngestError):
    def __init__(self, film_id: str):
        super().__init__(f"duplicate film_id {film_id!r}")
        self.film_id = film_id


class InvalidKeywordError(ValueError):
    pass


@dataclass(frozen=True)
class LineError:
    line_no: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line_no}: {self.message}"


class RecordParseError(IngestError):
    def __init__(self, errors: Sequence[LineError]):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class KeywordStat:
    text: str
    likes: int
    dislikes: int

    def __post_init__(self):
        if not isinstance(self.text, str) or not self.text.strip():
            raise InvalidKeywordError("keyword text is empty")
        for name in ("likes", "dislikes"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")


@dataclass(frozen=True)
class FilmRecord:
    film_id: str
    year: int
    countries: tuple[str, ...]
    keywords: tuple[KeywordStat, ...] = ()
    score: float | None = None

    def __post_init__(self):
        if not isinstance(self.film_id, str) or not self.film_id:
            raise ValueError("film_id must be a non-empty string")
        if isinstance(self.year, bool) or not isinstance(self.year, int):
            raise ValueError(f"year must be an integer, got {self.year!r}")
        countries = normalize_countries(self.countries)
        if not countries:
            raise ValueError("countries must be non-empty")
        object.__setattr__(self, "countries", countries)
        object.__setattr__(self, "keywords", tuple(self.keywords))


@dataclass(frozen=True)
class FilterPolicy:
    min_likes: int = 3
    require_likes_exceed_dislikes: bool = True
    # record-level passthrough: keep films whose score exceeds this; None disables
    min_film_score: float | None = None

    def __post_init__(self):
        if self.min_likes < 0:
            raise ValueError("min_likes must be >= 0")

    def keeps(self, kw: KeywordStat) -> bool:
        if kw.likes < self.min_likes:
            return False
        return not self.require_likes_exceed_dislikes or kw.likes > kw.dislikes


def normalize_country(label: str) -> str:
    return " ".join(label.split()).lower()


def normalize_countries(labels: Iterable[str]) -> tuple[str, ...]:
    if isinstance(labels, str):
        raise ValueError("countries must be a list of strings")
    seen: dict[str, None] = {}
    for label in labels:
        if not isinstance(label, str):
            raise ValueError(f"country label must be a string, got {label!r}")
        norm = normalize_country(label)
        if not norm:
            raise ValueError("empty country label")
        seen.setdefault(norm, None)
    return tuple(seen)


# ---------------------------------------------------------------- parsing


def _keyword_from_json(obj) -> KeywordStat:
    if isinstance(obj, Mapping):
        return KeywordStat(obj["text"], obj["likes"], obj["dislikes"])
    if isinstance(obj, (list, tuple)) and len(obj) == 3:
        return KeywordStat(*obj)
    raise ValueError(f"malformed keyword entry {obj!r}")


def record_from_json(obj: Mapping) -> FilmRecord:
    if not isinstance(obj, Mapping):
        raise ValueError("record must be a JSON object")
    score = obj.get("score")
    if score is not None and (isinstance(score, bool) or not isinstance(score, (int, float))):
        raise ValueError(f"score must be numeric, got {score!r}")
    return FilmRecord(
        film_id=obj["film_id"],
        year=obj["year"],
        countries=obj["countries"],
        keywords=tuple(_keyword_from_json(k) for k in obj.get("keywords", ())),
        score=score,
    )


def record_to_json(rec: FilmRecord) -> dict:
    out = {
        "film_id": rec.film_id,
        "year": rec.year,
        "countries": list(rec.countries),
        "keywords": [
            {"text": k.text, "likes": k.likes, "dislikes": k.dislikes} for k in rec.keywords
        ],
    }
    if rec.score is not None:
        out["score"] = rec.score
    return out


def parse_records(
    stream: Iterable[bytes | str], errors: list[LineError] | None = None
) -> list[FilmRecord]:
    """Parse line-delimited JSON film records, preserving input order.

    Malformed lines are collected into ``errors`` when a list is supplied and
    skipped; otherwise a :class:`RecordParseError` listing every bad line is
    raised after the whole stream has been read. Duplicate ``film_id`` values
    always raise :class:`DuplicateFilmIdError`.
    """
    records: list[FilmRecord] = []
    bad: list[LineError] = []
    seen: set[str] = set()
    for line_no, raw in enumerate(stream, start=1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        if not line.strip():
            continue
        try:
            rec = record_from_json(json.loads(line))
        except (ValueError, KeyError, TypeError) as exc:
            msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
            bad.append(LineError(line_no, msg))
            continue
        if rec.film_id in seen:
            raise DuplicateFilmIdError(rec.film_id)
        seen.add(rec.film_id)
        records.append(rec)
    if bad:
        if errors is None:
            raise RecordParseError(bad)
        errors.extend(bad)
    return records


def serialize_records(records: Iterable[FilmRecord]) -> str:
    return "".join(json.dumps(record_to_json(r), ensure_ascii=False) + "\n" for r in records)


def read_records(path: str | Path, errors: list[LineError] | None = None) -> list[FilmRecord]:
    with open(path, "rb") as fh:
        return parse_records(fh, errors)


def write_records(records: Iterable[FilmRecord], path: str | Path) -> None:
    Path(path).write_text(serialize_records(records), encoding="utf-8", newline="\n")


# -------------------------------------------------------------- filtering


def filter_keywords(records: Iterable[FilmRecord], policy: FilterPolicy = FilterPolicy()) -> list[FilmRecord]:
    """Drop low-quality keywords; records themselves are always kept."""
    return [replace(r, keywords=tuple(k for k in r.keywords if policy.keeps(k))) for r in records]


def filter_by_score(records: Iterable[FilmRecord], policy: FilterPolicy) -> list[FilmRecord]:
    """Apply the optional record-level score threshold.

    Records without a score pass through untouched.
    """
    if policy.min_film_score is None:
        return list(records)
    return [r for r in records if r.score is None or r.score > policy.min_film_score]


# ---------------------------------------------------------- normalization

_ES_SUFFIXES = ("ches", "shes", "ses", "xes", "zes")


def _strip_once(tok: str) -> str:
    if tok.endswith("ies") and len(tok) > 3:
        return tok[:-3] + "y"
    for suf in _ES_SUFFIXES:
        if tok.endswith(suf) and len(tok) > len(suf):
            return tok[:-2]
    if tok.endswith("s") and not tok.endswith("ss") and len(tok) > 1:
        return tok[:-1]
    if tok.endswith("ing") and len(tok) - 3 >= 3:
        return tok[:-3]
    if tok.endswith("ed") and len(tok) - 2 >= 3:
        return tok[:-2]
    return tok


def lemmatize_token(tok: str) -> str:
    # iterate to a fixed point so normalization is idempotent
    while True:
        nxt = _strip_once(tok)
        if nxt == tok:
            return tok
        tok = nxt


def clean_keyword(text: str) -> str:
    return " ".join(text.lower().split())


def normalize_keyword(text: str, lemma_map: Mapping[str, str] | None = None) -> str:
    """Reduce a raw keyword to its lemma form.

    >>> normalize_keyword("  Gun Fights ")
    'gun fight'
    """
    s = clean_keyword(text)
    if not s:
        raise InvalidKeywordError(f"keyword {text!r} is empty after trimming")
    if lemma_map and s in lemma_map:
        return lemma_map[s]
    out = " ".join(lemmatize_token(t) for t in s.split(" "))
    if lemma_map and out in lemma_map:
        return lemma_map[out]
    return out


def parse_lemma_map(lines: Iterable[str]) -> dict[str, str]:
    """Read ``raw<TAB>lemma`` lines; ``#`` starts a comment line.

    Chains (a->b, b->c) are resolved and every lemma maps to itself, so a
    mapped value is always a fixed point of :func:`normalize_keyword`.
    """
    raw: dict[str, str] = {}
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"lemma map line {line_no}: expected raw<TAB>lemma")
        key, val = clean_keyword(parts[0]), clean_keyword(parts[1])
        if not key or not val:
            raise ValueError(f"lemma map line {line_no}: empty entry")
        raw[key] = val
    resolved: dict[str, str] = {}
    for key in raw:
        val, hops = raw[key], 0
        while val in raw and raw[val] != val:
            val = raw[val]
            hops += 1
            if hops > len(raw):
                raise ValueError(f"lemma map has a cycle through {key!r}")
        resolved[key] = val
    for val in set(resolved.values()):
        resolved.setdefault(val, val)
    return resolved


def load_lemma_map(path: str | Path) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_lemma_map(fh)


def normalize_records(
    records: Iterable[FilmRecord], lemma_map: Mapping[str, str] | None = None
) -> list[FilmRecord]:
    return [
        replace(
            r,
            keywords=tuple(
                KeywordStat(normalize_keyword(k.text, lemma_map), k.likes, k.dislikes)
                for k in r.keywords
            ),
        )
        for r in records
    ]


# ----------------------------------------------------------------- fixtures

_BASE_WORDS = (
    "war", "gun fight", "cemetery", "police", "politics", "ambush", "prayer",
    "desert", "revolver", "lawyer", "thief", "forest", "apology", "surrealism",
    "warrior", "massacre", "prisoner", "priest", "jungle", "guilt", "anger",
    "tent", "poverty", "terrorism", "corruption", "jail", "comedy", "religion",
    "survival", "hallucination", "interrogation", "confrontation",
)


def _keyword_vocab(n: int) -> list[str]:
    vocab = list(_BASE_WORDS[:n])
    i = 0
    while len(vocab) < n:
        vocab.append(f"{_BASE_WORDS[i % len(_BASE_WORDS)]} {i // len(_BASE_WORDS) + 2}")
        i += 1
    return vocab


def _surface_form(rng: random.Random, lemma: str) -> str:
    """Render a lemma the way a crawled keyword might look."""
    form = lemma
    r = rng.random()
    if r < 0.2 and not re.search(r"(s|x|z|ch|sh|y|\d)$", form):
        form += "s"
    elif r < 0.3:
        form = form.title()
    elif r < 0.35:
        form = f"  {form} "
    return form


def generate_fixture(seed: int, n_countries: int, n_films: int, n_keywords: int) -> list[FilmRecord]:
    """Deterministic synthetic film corpus.

    Every country appears in at least one film. Countries fall into regions
    that favour their own slice of the vocabulary, which gives the network
    some community structure. Like and dislike counts are drawn so that
    roughly half the keywords survive the default policy.
    """
    if min(n_countries, n_films, n_keywords) < 1:
        raise ValueError("all fixture sizes must be >= 1")
    rng = random.Random(seed)
    countries = [f"country {i:03d}" for i in range(n_countries)]
    vocab = _keyword_vocab(n_keywords)
    n_regions = max(1, min(n_countries // 4, n_keywords // 3))
    region_of = {c: i % n_regions for i, c in enumerate(countries)}
    home_vocab = [[w for j, w in enumerate(vocab) if j % n_regions == r] for r in range(n_regions)]
    order = countries[:]
    rng.shuffle(order)
    film_countries: list[list[str]] = [[] for _ in range(n_films)]
    for j, c in enumerate(order):
        film_countries[j % n_films].append(c)
    records = []
    for i in range(n_films):
        cs = film_countries[i]
        if not cs:
            cs.append(rng.choice(countries))
        if n_countries > 1 and rng.random() < 0.25:
            extra = rng.choice(countries)
            if extra not in cs:
                cs.append(extra)
        home = home_vocab[region_of[cs[0]]]
        picked: list[str] = []
        for _ in range(rng.randint(1, min(n_keywords, 6))):
            pool = home if rng.random() < 0.85 else vocab
            lemma = rng.choice(pool)
            if lemma not in picked:
                picked.append(lemma)
        kws = []
        for lemma in picked:
            likes = rng.randint(0, 9)
            dislikes = rng.randint(0, 5)
            kws.append(KeywordStat(_surface_form(rng, lemma), likes, dislikes))
        records.append(
            FilmRecord(
                film_id=f"f{seed}-{i:05d}",
                year=rng.randint(1960, 2023),
                countries=tuple(cs),
                keywords=tuple(kws),
                score=rng.randint(100, 5000),
            )
        )
    return records


def generate_hub_fixture(seed: int, n_countries: int = 12, films_per_country: int = 3) -> list[FilmRecord]:
    """Corpus with one hub country sharing a keyword with every other country.

    Peripheral countries form a sparse ring: country i shares one extra
    keyword with country i+1 only. All keywords pass the default policy.
    """
    if n_countries < 4:
        raise ValueError("hub fixture needs at least 4 countries")
    rng = random.Random(seed)
    hub = "hub country"
    periphery = [f"country {i:03d}" for i in range(n_countries - 1)]
    records: list[FilmRecord] = []

    def kw(text):
        likes = rng.randint(5, 20)
        return KeywordStat(text, likes, rng.randint(0, likes - 1))

    for i, c in enumerate(periphery):
        own = f"theme {i}"
        ring = f"bond {i}"
        prev = f"bond {(i - 1) % len(periphery)}"
        for j in range(films_per_country):
            records.append(FilmRecord(f"p{i}-{j}", 2000 + j, (c,), (kw(own), kw(ring), kw(prev))))
    for j in range(films_per_country):
        themes = tuple(kw(f"theme {i}") for i in range(len(periphery)))
        records.append(FilmRecord(f"h-{j}", 2000 + j, (hub,), themes))
    rng.shuffle(records)
    return records
