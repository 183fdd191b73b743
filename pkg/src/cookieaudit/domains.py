"""Registrable-domain (eTLD+1) logic and tracker-blocklist matching.

Party and tracker decisions both reduce hostnames to their registrable
domain: one label below the public suffix, per the publicsuffix.org rule
set (longest-match with wildcard and exception rules). The rule snapshot
is vendored under data/ and pinned; operators may point at a newer file.
"""

from __future__ import annotations

import ipaddress
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import IO, TYPE_CHECKING, Iterable
from urllib.parse import urlsplit

from .errors import BareSuffix, EmptyTrackerList

if TYPE_CHECKING:
    from .cookies import Cookie
    from .har import SiteRef

from enum import Enum


class Party(Enum):
    FIRST_PARTY = "first-party"
    THIRD_PARTY = "third-party"


def host_of(url: str) -> str | None:
    """Lowercased hostname of a URL, stripped of port/userinfo/brackets."""
    try:
        return urlsplit(url).hostname
    except ValueError:
        return None


def _idna_form(name: str) -> str | None:
    if all(ord(c) < 128 for c in name):
        return name
    try:
        return ".".join(label.encode("idna").decode("ascii") for label in name.split("."))
    except UnicodeError:
        return None


def _is_ip_literal(host: str) -> bool:
    try:
        ipaddress.ip_address(host.strip("[]"))
    except ValueError:
        return False
    return True


class PublicSuffixList:
    """Public-suffix rule set supporting exact, wildcard and exception rules.

    Rules with non-ASCII labels are indexed in both unicode and IDNA form,
    so lookups work for hosts in either representation.
    """

    def __init__(self, rules: Iterable[str], label: str = "") -> None:
        self.label = label
        self._exact: set[str] = set()
        self._wildcard: set[str] = set()  # parents of "*." rules
        self._exception: set[str] = set()
        for raw in rules:
            rule = raw.strip().lower()
            if not rule:
                continue
            if rule.startswith("!"):
                self._add(self._exception, rule[1:])
            elif rule.startswith("*."):
                self._add(self._wildcard, rule[2:])
            else:
                self._add(self._exact, rule)
        if not self._exact and not self._wildcard:
            raise ValueError("suffix rule set is empty")

    @staticmethod
    def _add(bucket: set[str], rule: str) -> None:
        bucket.add(rule)
        ascii_rule = _idna_form(rule)
        if ascii_rule is not None:
            bucket.add(ascii_rule)

    @classmethod
    def load(cls, source: str | Path | IO[str], label: str = "") -> "PublicSuffixList":
        """Parse the standard text format: one rule per line, // comments."""
        if isinstance(source, (str, Path)):
            text = Path(source).read_text(encoding="utf-8")
            label = label or Path(source).name
        else:
            text = source.read()
        rules = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("//"):
                # The snapshot header carries its freeze date; surface it.
                if "frozen:" in line.lower():
                    stamp = line.split(":", 1)[1].strip().split()[0].rstrip(".")
                    label = f"{label} ({stamp})" if label else stamp
                continue
            rules.append(line.split()[0])
        return cls(rules, label=label)

    def _suffix_length(self, labels: list[str]) -> int:
        """Number of labels in the prevailing public suffix."""
        n = len(labels)
        for i in range(n):
            candidate = ".".join(labels[i:])
            if candidate in self._exception:
                return n - i - 1
            if ".".join(labels[i + 1:]) in self._wildcard:
                return n - i
            if candidate in self._exact:
                return n - i
        return 1  # implicit "*" rule: the rightmost label

    def _split(self, host: str) -> tuple[list[str], int]:
        cleaned = host.strip().lower().strip(".")
        if not cleaned or any(not label for label in cleaned.split(".")):
            raise BareSuffix(f"not a usable DNS name: {host!r}")
        labels = cleaned.split(".")
        lookup = _idna_form(cleaned)
        lookup_labels = lookup.split(".") if lookup is not None else labels
        return labels, self._suffix_length(lookup_labels)

    def public_suffix(self, host: str) -> str:
        if _is_ip_literal(host):
            return host.strip("[]")
        labels, ps_len = self._split(host)
        return ".".join(labels[-ps_len:])

    def registrable_domain(self, host: str) -> str:
        """eTLD+1 of a host; IP literals are their own registrable domain.

        Raises BareSuffix when the host is itself a public suffix and so
        has no registrable domain.
        """
        if _is_ip_literal(host):
            return host.strip("[]")
        labels, ps_len = self._split(host)
        if ps_len >= len(labels):
            raise BareSuffix(f"host is a public suffix: {host!r}")
        return ".".join(labels[-(ps_len + 1):])


@lru_cache(maxsize=1)
def default_suffix_list() -> PublicSuffixList:
    """The vendored rule snapshot shipped with the package."""
    ref = resources.files("cookieaudit").joinpath("data/public_suffix_snapshot.dat")
    with ref.open("r", encoding="utf-8") as fh:
        return PublicSuffixList.load(fh, label="public_suffix_snapshot.dat")


def registrable_domain(host: str, psl: PublicSuffixList | None = None) -> str:
    return (psl or default_suffix_list()).registrable_domain(host)


def classify_party(cookie: "Cookie", site: "SiteRef", psl: PublicSuffixList | None = None) -> Party:
    """First party iff cookie and site share a registrable domain."""
    psl = psl or default_suffix_list()
    site_host = host_of(site.url)
    if site_host is None:
        raise BareSuffix(f"site URL has no host: {site.url!r}")
    same = psl.registrable_domain(cookie.domain) == psl.registrable_domain(site_host)
    return Party.FIRST_PARTY if same else Party.THIRD_PARTY


@dataclass(frozen=True)
class TrackerList:
    """Immutable set of tracker registrable domains plus provenance."""

    entries: frozenset[str]
    source_label: str
    entry_count: int
    skipped: int = 0

    def __post_init__(self) -> None:
        if self.entry_count != len(self.entries):
            raise ValueError("entry_count must equal the entry set cardinality")


def load_tracker_list(
    source: str | Path | IO[str],
    psl: PublicSuffixList | None = None,
    source_label: str = "",
) -> TrackerList:
    """Load a newline-delimited domain blocklist (# comments allowed).

    Entries are normalized to registrable domains and de-duplicated;
    lines that have no registrable domain are skipped and counted.
    Raises EmptyTrackerList when no valid entry remains.
    """
    psl = psl or default_suffix_list()
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
        source_label = source_label or Path(source).name
    else:
        text = source.read()
    entries: set[str] = set()
    skipped = 0
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            entries.add(psl.registrable_domain(line))
        except BareSuffix:
            skipped += 1
    if not entries:
        raise EmptyTrackerList(f"no valid entries in {source_label or 'tracker list'}")
    return TrackerList(
        entries=frozenset(entries),
        source_label=source_label,
        entry_count=len(entries),
        skipped=skipped,
    )


@lru_cache(maxsize=1)
def default_tracker_list() -> TrackerList:
    """The pinned tracker-domain snapshot shipped with the package."""
    ref = resources.files("cookieaudit").joinpath("data/tracker_domains.txt")
    with ref.open("r", encoding="utf-8") as fh:
        return load_tracker_list(fh, source_label="tracker_domains.txt")


def is_tracker(
    domain: str,
    trackers: TrackerList,
    mode: str = "registrable",
    psl: PublicSuffixList | None = None,
) -> bool:
    """True when the domain belongs to a listed tracker.

    mode "registrable" (default) matches by eTLD+1, so subdomains of a
    listed domain match; mode "exact" requires the host itself to be an
    entry. Hosts with no registrable domain never match.
    """
    if mode == "exact":
        return domain.strip().lower().strip(".") in trackers.entries
    if mode != "registrable":
        raise ValueError(f"unknown match mode: {mode!r}")
    try:
        return registrable_domain(domain, psl) in trackers.entries
    except BareSuffix:
        return False
