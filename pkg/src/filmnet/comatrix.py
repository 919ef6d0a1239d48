"""Country x keyword tallies and the symmetric country co-occurrence matrix."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .ingest import FilmRecord, normalize_keyword


class WeightMode(str, Enum):
    MIN = "min"
    PRODUCT = "product"
    BINARY = "binary"


class EmptyInputError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CountryKeywordCounts:
    """``counts[c, k]`` = number of distinct films of country ``c`` tagged with lemma ``k``."""

    countries: tuple[str, ...]
    keywords: tuple[str, ...]
    counts: np.ndarray

    def row(self, country: str) -> dict[str, int]:
        i = self.countries.index(country)
        return {k: int(v) for k, v in zip(self.keywords, self.counts[i]) if v}

    def __eq__(self, other):
        if not isinstance(other, CountryKeywordCounts):
            return NotImplemented
        return (
            self.countries == other.countries
            and self.keywords == other.keywords
            and np.array_equal(self.counts, other.counts)
        )

    @classmethod
    def from_rows(cls, rows: dict[str, dict[str, int]]) -> "CountryKeywordCounts":
        countries = tuple(sorted(rows))
        keywords = tuple(sorted({k for r in rows.values() for k in r}))
        kidx = {k: j for j, k in enumerate(keywords)}
        counts = np.zeros((len(countries), len(keywords)), dtype=np.int64)
        for i, c in enumerate(countries):
            for k, v in rows[c].items():
                counts[i, kidx[k]] = v
        return cls(countries, keywords, counts)


@dataclass(frozen=True, eq=False)
class CoMatrix:
    countries: tuple[str, ...]
    weights: np.ndarray
    weight_mode: WeightMode = WeightMode.MIN

    def __eq__(self, other):
        if not isinstance(other, CoMatrix):
            return NotImplemented
        return self.countries == other.countries and np.array_equal(self.weights, other.weights)

    def weight(self, a: str, b: str) -> int:
        return int(self.weights[self.countries.index(a), self.countries.index(b)])


def tally_counts(
    records: Iterable[FilmRecord], normalizer: Callable[[str], str] | None = normalize_keyword
) -> CountryKeywordCounts:
    """Count, per country, the distinct films carrying each lemma.

    A co-produced film contributes to every one of its countries.
    """
    rows: dict[str, dict[str, int]] = {}
    for rec in records:
        lemmas = {normalizer(k.text) if normalizer else k.text for k in rec.keywords}
        for c in rec.countries:
            row = rows.setdefault(c, {})
            for lemma in lemmas:
                row[lemma] = row.get(lemma, 0) + 1
    return CountryKeywordCounts.from_rows(rows)


def build_matrix(counts: CountryKeywordCounts, mode: WeightMode | str = WeightMode.MIN) -> CoMatrix:
    mode = WeightMode(mode)
    n = len(counts.countries)
    if n < 1:
        raise EmptyInputError("no countries to build a matrix from")
    C = counts.counts.astype(np.int64)
    if mode is WeightMode.PRODUCT:
        W = C @ C.T
    elif mode is WeightMode.BINARY:
        B = (C > 0).astype(np.int64)
        W = B @ B.T
    else:
        W = np.zeros((n, n), dtype=np.int64)
        # keyword columns nobody uses twice cannot contribute
        used = (C > 0).sum(axis=0) >= 2
        Cu = C[:, used]
        for a in range(n - 1):
            W[a, a + 1:] = np.minimum(Cu[a], Cu[a + 1:]).sum(axis=1)
        W = W + W.T
    np.fill_diagonal(W, 0)
    return CoMatrix(counts.countries, W, mode)


def matrix_to_edge_list(m: CoMatrix) -> list[tuple[str, str, int]]:
    """Positive-weight unordered pairs as ``(a, b, w)`` with ``a < b``, sorted."""
    edges = []
    n = len(m.countries)
    for i in range(n):
        for j in range(i + 1, n):
            w = int(m.weights[i, j])
            if w > 0:
                a, b = sorted((m.countries[i], m.countries[j]))
                edges.append((a, b, w))
    edges.sort()
    return edges


# ------------------------------------------------------------------- I/O


def matrix_to_csv(m: CoMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["", *m.countries])
    for label, row in zip(m.countries, m.weights):
        w.writerow([label, *(int(v) for v in row)])
    return buf.getvalue()


def matrix_from_csv(text: str, mode: WeightMode | str = WeightMode.MIN) -> CoMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise EmptyInputError("empty matrix file")
    header = tuple(rows[0][1:])
    if len(rows) - 1 != len(header):
        raise ValueError("matrix must be square")
    W = np.zeros((len(header), len(header)), dtype=np.int64)
    for i, row in enumerate(rows[1:]):
        if row[0] != header[i]:
            raise ValueError(f"row label {row[0]!r} does not match column {header[i]!r}")
        W[i] = [int(v) for v in row[1:]]
    if not np.array_equal(W, W.T):
        raise ValueError("matrix is not symmetric")
    if np.any(np.diag(W)) or np.any(W < 0):
        raise ValueError("matrix needs a zero diagonal and non-negative weights")
    return CoMatrix(header, W, WeightMode(mode))


def edge_list_to_csv(edges: Iterable[tuple[str, str, int]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["source", "target", "weight"])
    w.writerows(edges)
    return buf.getvalue()


def counts_to_csv(counts: CountryKeywordCounts) -> str:
    """Long format ``country,keyword,count`` (non-zero cells only)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["country", "keyword", "count"])
    for i, c in enumerate(counts.countries):
        nz = np.flatnonzero(counts.counts[i])
        if not len(nz):
            w.writerow([c, "", 0])  # keeps keyword-less countries present
        for j in nz:
            w.writerow([c, counts.keywords[j], int(counts.counts[i, j])])
    return buf.getvalue()


def counts_from_csv(text: str) -> CountryKeywordCounts:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ["country", "keyword", "count"]:
        raise ValueError("counts file needs header country,keyword,count")
    rows: dict[str, dict[str, int]] = {}
    for r in reader:
        row = rows.setdefault(r["country"], {})
        if r["keyword"]:
            row[r["keyword"]] = int(r["count"])
    return CountryKeywordCounts.from_rows(rows)


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
