from __future__ import annotations

import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cookieaudit.cookies import parse_set_cookie
from cookieaudit.domains import (
    Party,
    PublicSuffixList,
    classify_party,
    default_suffix_list,
    default_tracker_list,
    host_of,
    is_tracker,
    load_tracker_list,
    registrable_domain,
)
from cookieaudit.errors import BareSuffix, EmptyTrackerList
from cookieaudit.har import SiteRef

from oracle import registrable as oracle_registrable

# expected values below were derived by hand from the published suffix
# algorithm (exact, wildcard, exception, implicit-star) and frozen
REGISTRABLE_CASES = [
    ("example.com", "example.com"),
    ("www.example.com", "example.com"),
    ("a.b.c.example.com", "example.com"),
    ("sub.tracker.co.uk", "tracker.co.uk"),
    ("tracker.co.uk", "tracker.co.uk"),
    ("city.kawasaki.jp", "city.kawasaki.jp"),        # exception rule
    ("www.city.kawasaki.jp", "city.kawasaki.jp"),
    ("foo.bar.kawasaki.jp", "foo.bar.kawasaki.jp"),  # wildcard rule
    ("tracker-0042.test", "tracker-0042.test"),      # unlisted TLD: implicit star
    ("sub.tracker-0042.test", "tracker-0042.test"),
    ("203.0.113.9", "203.0.113.9"),                  # IP literals stand alone
    ("2001:db8::1", "2001:db8::1"),
    ("WWW.Example.COM", "example.com"),
    ("example.com.", "example.com"),
]

BARE_CASES = ["com", "co.uk", "bar.kawasaki.jp", "test", ""]


@pytest.mark.parametrize("host,expected", REGISTRABLE_CASES)
def test_registrable_domain(host, expected):
    assert registrable_domain(host) == expected


@pytest.mark.parametrize("host", BARE_CASES)
def test_bare_suffix_raises(host):
    with pytest.raises(BareSuffix):
        registrable_domain(host)


def test_idn_rules_match_both_forms():
    # the snapshot stores IDN rules in unicode; punycode hosts must match too
    assert registrable_domain("foo.中国") == "foo.中国"
    assert registrable_domain("sub.foo.xn--fiqs8s") == "foo.xn--fiqs8s"


def test_registrable_idempotent_on_fixed_cases():
    for _, rd in REGISTRABLE_CASES:
        assert registrable_domain(rd) == rd


def test_matches_independent_oracle_for_simple_suffixes():
    hosts = [
        "a.example.com", "example.com", "x.y.z.example.net",
        "shop.co.uk", "deep.shop.co.uk", "10.0.0.1", "plain.org",
    ]
    for host in hosts:
        assert registrable_domain(host) == oracle_registrable(host), host


def test_host_of():
    assert host_of("https://User:pw@WWW.Example.com:8443/x?y#z") == "www.example.com"
    assert host_of("http://[2001:db8::1]/p") == "2001:db8::1"
    assert host_of("data:text/plain,hi") is None
    assert host_of("not a url at all \x00") is None


def test_suffix_list_label_and_counts():
    psl = default_suffix_list()
    assert psl.label == "public_suffix_snapshot.dat (2026-08-22)"


def test_suffix_list_from_handle():
    rules = "// demo rules\n// Snapshot frozen: 2030-01-01.\ncom\n*.wild\n!ok.wild\n"
    psl = PublicSuffixList.load(io.StringIO(rules), label="demo")
    assert psl.label == "demo (2030-01-01)"  # freeze date folded in
    assert psl.registrable_domain("a.com") == "a.com"
    assert psl.registrable_domain("a.b.wild") == "a.b.wild"
    assert psl.registrable_domain("ok.wild") == "ok.wild"
    with pytest.raises(BareSuffix):
        psl.registrable_domain("b.wild")


def test_tracker_list_normalizes_and_counts_skips():
    text = "\n".join([
        "# comment",
        "ads.example.com   # trailing note",
        "www.ads.example.com",   # same registrable domain
        "TRACKER.NET",
        "co.uk",                 # bare suffix, skipped
        "",
    ])
    trackers = load_tracker_list(io.StringIO(text), source_label="inline")
    assert trackers.entries == frozenset({"example.com", "tracker.net"})
    assert trackers.entry_count == 2
    assert trackers.skipped == 1
    assert trackers.source_label == "inline"


def test_tracker_list_empty_raises():
    with pytest.raises(EmptyTrackerList):
        load_tracker_list(io.StringIO("# nothing here\n\n"))


def test_bundled_tracker_list_pinned_size():
    trackers = default_tracker_list()
    assert trackers.entry_count == 1232
    assert len(trackers.entries) == 1232
    assert trackers.skipped == 0


def test_is_tracker_registrable_mode_covers_subdomains():
    trackers = load_tracker_list(io.StringIO("ads.example\n"))
    assert is_tracker("ads.example", trackers)
    assert is_tracker("pixel.ads.example", trackers)
    assert is_tracker("a.b.pixel.ads.example", trackers)
    assert not is_tracker("notads.example", trackers)
    assert not is_tracker("ads.example.evil.com", trackers)


def test_is_tracker_exact_mode_requires_equality():
    trackers = load_tracker_list(io.StringIO("ads.example\n"))
    assert is_tracker("ads.example", trackers, mode="exact")
    assert not is_tracker("pixel.ads.example", trackers, mode="exact")
    assert is_tracker("  ADS.example. ", trackers, mode="exact")  # normalized first


def test_is_tracker_bare_suffix_is_not_a_match():
    trackers = load_tracker_list(io.StringIO("ads.example\n"))
    assert not is_tracker("co.uk", trackers)
    assert not is_tracker("", trackers)


def test_classify_party():
    from datetime import datetime, timezone

    ref = datetime(2026, 3, 1, tzinfo=timezone.utc)
    site = SiteRef(url="https://www.example.com/")
    same = parse_set_cookie("a=1; Domain=example.com", "https://cdn.example.com/x", ref)
    other = parse_set_cookie("b=2", "https://pixel.adnet.test/x", ref)
    assert classify_party(same, site) is Party.FIRST_PARTY
    assert classify_party(other, site) is Party.THIRD_PARTY


_LABEL = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789", min_size=1, max_size=8)


@settings(max_examples=150, deadline=None)
@given(labels=st.lists(_LABEL, min_size=1, max_size=4), tld=st.sampled_from(["com", "net", "org", "co.uk"]))
def test_registrable_idempotent_property(labels, tld):
    host = ".".join(labels + [tld])
    rd = registrable_domain(host)
    assert registrable_domain(rd) == rd
    assert host == rd or host.endswith("." + rd)
