import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filmnet.ingest import (
    DuplicateFilmIdError,
    FilmRecord,
    FilterPolicy,
    InvalidKeywordError,
    KeywordStat,
    RecordParseError,
    filter_by_score,
    filter_keywords,
    generate_fixture,
    generate_hub_fixture,
    lemmatize_token,
    normalize_keyword,
    parse_lemma_map,
    parse_records,
    serialize_records,
)


def line(**obj):
    return (json.dumps(obj) + "\n").encode()


class TestParseRecords:
    def test_single_line_maps_fields(self):
        data = line(film_id="m1", year=2001, countries=["United States"],
                    keywords=[{"text": "war", "likes": 5, "dislikes": 0}])
        (rec,) = parse_records(io.BytesIO(data))
        assert rec == FilmRecord("m1", 2001, ("united states",), (KeywordStat("war", 5, 0),))

    def test_empty_stream(self):
        assert parse_records(io.BytesIO(b"")) == []

    def test_duplicate_id_names_the_id(self):
        data = line(film_id="m1", year=2001, countries=["a"]) + line(film_id="m1", year=2002, countries=["b"])
        with pytest.raises(DuplicateFilmIdError, match="m1"):
            parse_records(io.BytesIO(data))

    def test_malformed_lines_are_collected_with_line_numbers(self):
        data = (
            line(film_id="m1", year=2001, countries=["a"])
            + b"{not json\n"
            + line(film_id="m2", year="soon", countries=["a"])
            + line(film_id="m3", year=2003, countries=[])
            + line(film_id="m4", year=2004, countries=["b"])
        )
        errors = []
        recs = parse_records(io.BytesIO(data), errors)
        assert [r.film_id for r in recs] == ["m1", "m4"]
        assert [e.line_no for e in errors] == [2, 3, 4]

    def test_malformed_line_raises_without_collector(self):
        with pytest.raises(RecordParseError) as info:
            parse_records(io.BytesIO(b'{"film_id": "x"}\n'))
        assert info.value.errors[0].line_no == 1

    def test_country_labels_trimmed_casefolded_deduplicated(self):
        (rec,) = parse_records([json.dumps({"film_id": "m", "year": 1, "countries": [" UK ", "uk", "United  Kingdom"]})])
        assert rec.countries == ("uk", "united kingdom")

    def test_negative_likes_rejected(self):
        errors = []
        parse_records([json.dumps({"film_id": "m", "year": 1, "countries": ["a"],
                                   "keywords": [{"text": "x", "likes": -1, "dislikes": 0}]})], errors)
        assert len(errors) == 1

    def test_score_passthrough(self):
        (rec,) = parse_records([json.dumps({"film_id": "m", "year": 1, "countries": ["a"], "score": 1500})])
        assert rec.score == 1500


class TestFilterKeywords:
    def rec(self, *kws):
        return FilmRecord("m", 2000, ("a",), tuple(KeywordStat(t, l, d) for t, l, d in kws))

    def test_three_likes_two_dislikes_kept(self):
        (r,) = filter_keywords([self.rec(("x", 3, 2))])
        assert len(r.keywords) == 1

    def test_equal_likes_and_dislikes_removed(self):
        (r,) = filter_keywords([self.rec(("x", 3, 3))])
        assert r.keywords == ()

    def test_below_min_likes_removed(self):
        (r,) = filter_keywords([self.rec(("x", 2, 0))])
        assert r.keywords == ()

    def test_disabled_policy_keeps_everything(self):
        policy = FilterPolicy(min_likes=0, require_likes_exceed_dislikes=False)
        (r,) = filter_keywords([self.rec(("x", 0, 0))], policy)
        assert len(r.keywords) == 1

    def test_records_never_dropped(self):
        recs = [self.rec(("x", 0, 9)), self.rec()]
        assert len(filter_keywords(recs)) == 2

    def test_score_filter_keeps_unscored(self):
        recs = [FilmRecord("a", 1, ("x",), score=1001), FilmRecord("b", 1, ("x",), score=1000),
                FilmRecord("c", 1, ("x",))]
        kept = filter_by_score(recs, FilterPolicy(min_film_score=1000))
        assert [r.film_id for r in kept] == ["a", "c"]

    def test_negative_min_likes_rejected(self):
        with pytest.raises(ValueError):
            FilterPolicy(min_likes=-1)


keyword_stats = st.builds(KeywordStat, st.sampled_from(["war", "gun", "tent"]), st.integers(0, 8), st.integers(0, 8))
film_records = st.builds(
    FilmRecord,
    film_id=st.text("abc123", min_size=1, max_size=6),
    year=st.integers(1900, 2030),
    countries=st.lists(st.sampled_from(["us", "uk", "fr", "jp"]), min_size=1, max_size=3),
    keywords=st.lists(keyword_stats, max_size=5).map(tuple),
)
policies = st.builds(FilterPolicy, st.integers(0, 6), st.booleans())


@given(st.lists(film_records, max_size=6), policies)
def test_filter_is_idempotent(records, policy):
    once = filter_keywords(records, policy)
    assert filter_keywords(once, policy) == once


@given(st.lists(film_records, max_size=6), policies)
def test_filter_preserves_identity_fields(records, policy):
    out = filter_keywords(records, policy)
    assert [(r.film_id, r.year, r.countries) for r in out] == [(r.film_id, r.year, r.countries) for r in records]


@given(st.lists(film_records, max_size=6, unique_by=lambda r: r.film_id))
def test_parse_serialize_round_trip(records):
    text = serialize_records(records)
    assert parse_records(io.StringIO(text)) == records


class TestNormalizeKeyword:
    # one row per suffix rule, each checked in isolation
    @pytest.mark.parametrize(
        "token, expected",
        [
            ("cities", "city"),        # -ies -> -y
            ("buses", "bu"),           # -ses: strip -es, then trailing -s
            ("boxes", "box"),          # -xes
            ("quizzes", "quizz"),      # -zes: strip -es only
            ("churches", "church"),    # -ches
            ("dishes", "dish"),        # -shes
            ("fights", "fight"),       # -s
            ("glass", "glass"),        # -ss kept
            ("running", "runn"),       # -ing with stem >= 3
            ("sing", "sing"),          # stem "s" too short
            ("wanted", "want"),        # -ed with stem >= 3
            ("red", "red"),            # stem "r" too short
            ("war", "war"),            # no rule fires
        ],
    )
    def test_rules(self, token, expected):
        assert lemmatize_token(token) == expected

    def test_gun_fights(self):
        assert normalize_keyword("  Gun Fights ") == "gun fight"

    def test_already_a_lemma(self):
        assert normalize_keyword("war") == "war"

    def test_lemma_map_wins(self):
        assert normalize_keyword("cemeteries", {"cemeteries": "cemetery"}) == "cemetery"

    def test_empty_after_trim(self):
        with pytest.raises(InvalidKeywordError):
            normalize_keyword("   ")

    def test_collapses_internal_whitespace(self):
        assert normalize_keyword("near   death\texperience") == "near death experience"


def test_lemma_map_parsing_resolves_chains_and_comments():
    m = parse_lemma_map(["# comment\n", "Cemeteries\tcemetery\n", "\n", "graveyards\tcemeteries\n"])
    assert m["cemeteries"] == "cemetery"
    assert m["graveyards"] == "cemetery"
    assert m["cemetery"] == "cemetery"


def test_lemma_map_rejects_bad_line():
    with pytest.raises(ValueError, match="line 1"):
        parse_lemma_map(["only-one-column\n"])


words = st.text(alphabet="abcdeginrsxyzhS ", min_size=1, max_size=24).filter(lambda s: s.strip())


@given(words)
def test_normalize_is_idempotent(text):
    once = normalize_keyword(text)
    assert normalize_keyword(once) == once


@given(words, st.dictionaries(words, words, max_size=4))
def test_normalize_is_idempotent_with_lemma_map(text, raw_map):
    lines = [f"{k.strip()}\t{v.strip()}\n" for k, v in raw_map.items()]
    try:
        lemma_map = parse_lemma_map(lines)
    except ValueError:
        return  # cyclic map
    once = normalize_keyword(text, lemma_map)
    assert normalize_keyword(once, lemma_map) == once


class TestFixture:
    def test_deterministic(self):
        a = serialize_records(generate_fixture(7, 3, 10, 5))
        b = serialize_records(generate_fixture(7, 3, 10, 5))
        assert a == b

    def test_minimal(self):
        (rec,) = generate_fixture(7, 1, 1, 1)
        assert len(rec.countries) == 1

    def test_seeds_differ(self):
        assert generate_fixture(8, 3, 10, 5) != generate_fixture(7, 3, 10, 5)

    @pytest.mark.parametrize("sizes", [(5, 2, 4), (3, 10, 5), (40, 200, 30)])
    def test_every_country_appears(self, sizes):
        recs = generate_fixture(1, *sizes)
        seen = {c for r in recs for c in r.countries}
        assert len(seen) == sizes[0]

    def test_about_half_the_keywords_survive(self):
        recs = generate_fixture(3, 30, 400, 30)
        before = sum(len(r.keywords) for r in recs)
        after = sum(len(r.keywords) for r in filter_keywords(recs))
        assert 0.35 < after / before < 0.65

    def test_zero_size_rejected(self):
        with pytest.raises(ValueError):
            generate_fixture(0, 3, 0, 5)

    def test_hub_fixture_survives_filter(self):
        recs = generate_hub_fixture(0, 8)
        assert filter_keywords(recs) == recs
