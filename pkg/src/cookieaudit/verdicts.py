"""The profiling-cookie decision pipeline: visit and site verdicts.

A cookie counts as profiling when three findings hold at once: it is
third-party relative to the visited site, it is persistent under the
configured threshold, and its domain belongs to a listed tracker. A
visit violates when it sets at least one profiling cookie before any
consent was given; a site violates when any of its visits does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cookies import (
    MONTH_SECONDS,
    Cookie,
    Persistence,
    classify_persistence,
    parse_set_cookie,
    to_utc,
)
from .domains import Party, PublicSuffixList, TrackerList, default_suffix_list, host_of
from .errors import (
    AllVisitsFailed,
    BareSuffix,
    EmptyTrackerList,
    FailedVisit,
    UnparseableCookie,
)
from .har import HarArchive, SiteRef, extract_set_cookie_events, parse_iso8601


@dataclass
class ProfilingDecision:
    """Findings for one observed cookie.

    tracker_domain is the cookie's registrable domain when it matched the
    tracker list, None otherwise; profiling cookies always carry it.
    """

    cookie: Cookie
    party: Party
    persistence: Persistence
    tracker_matched: bool
    is_profiling: bool
    tracker_domain: str | None = None

    @property
    def identity(self) -> tuple[str, str | None, str]:
        """Dedup key for a cookie across visits: name, domain, path."""
        return (self.cookie.name, self.tracker_domain, self.cookie.path)


@dataclass
class VisitVerdict:
    """All decisions from one capture, plus its violation flag."""

    visit_id: str
    site: SiteRef
    decisions: list[ProfilingDecision]
    violation: bool
    warnings: dict[str, int] = field(default_factory=dict)

    @property
    def profiling_cookies(self) -> list[ProfilingDecision]:
        return [d for d in self.decisions if d.is_profiling]


@dataclass
class SiteVerdict:
    """Aggregate over every completed visit to one site."""

    site: SiteRef
    visits: list[VisitVerdict]
    violation: bool
    distinct_trackers: list[str]
    failed_visits: int = 0

    @property
    def profiling_identities(self) -> set[tuple[str, str | None, str]]:
        return {
            d.identity for v in self.visits for d in v.profiling_cookies
        }


@dataclass
class ConsentDiff:
    """Profiling cookies before consent versus after it was granted."""

    site: SiteRef
    before_count: int
    after_total: int
    added_after: list[tuple[str, str | None, str]]
    banner_present: bool | None = None
    refresh_on_consent: bool | None = None

    @property
    def clean_before(self) -> bool:
        return self.before_count == 0


def audit_visit(
    archive: HarArchive,
    site: SiteRef,
    trackers: TrackerList,
    threshold: float = MONTH_SECONDS,
    psl: PublicSuffixList | None = None,
    match_mode: str = "registrable",
    inclusive: bool = True,
) -> VisitVerdict:
    """Judge one capture against the tracker list and threshold.

    Raises FailedVisit when the capture holds no usable transaction at
    all, and BareSuffix when the site URL itself has no registrable
    domain. Cookies that cannot be parsed, or whose domain is a bare
    public suffix, are counted in the verdict warnings; a bare-suffix
    cookie is treated as third-party but can never match a tracker.
    """
    if not trackers.entries:
        raise EmptyTrackerList("tracker list has no entries")
    if not archive.transactions:
        raise FailedVisit(f"no usable transactions in visit {archive.visit_id!r}")
    psl = psl or default_suffix_list()
    site_host = host_of(site.url)
    if site_host is None:
        raise BareSuffix(f"site URL has no host: {site.url!r}")
    site_rd = psl.registrable_domain(site_host)

    warnings = dict(archive.warnings)

    def warn(key: str) -> None:
        warnings[key] = warnings.get(key, 0) + 1

    decisions: list[ProfilingDecision] = []
    for event in extract_set_cookie_events(archive):
        try:
            cookie = parse_set_cookie(
                event.header_value, event.request_url, event.reference_time
            )
        except UnparseableCookie:
            warn("unparseable_cookies")
            continue
        try:
            rd: str | None = psl.registrable_domain(cookie.domain)
        except BareSuffix:
            rd = None
            warn("bare_suffixes")
        party = Party.FIRST_PARTY if rd is not None and rd == site_rd else Party.THIRD_PARTY
        persistence = classify_persistence(cookie, threshold, inclusive)
        if rd is None:
            matched = False
        elif match_mode == "registrable":
            matched = rd in trackers.entries
        elif match_mode == "exact":
            matched = cookie.domain in trackers.entries
        else:
            raise ValueError(f"unknown match mode: {match_mode!r}")
        is_profiling = (
            party is Party.THIRD_PARTY
            and persistence is Persistence.PERSISTENT
            and matched
        )
        decisions.append(
            ProfilingDecision(
                cookie=cookie,
                party=party,
                persistence=persistence,
                tracker_matched=matched,
                is_profiling=is_profiling,
                tracker_domain=rd if matched else None,
            )
        )

    return VisitVerdict(
        visit_id=archive.visit_id,
        site=site,
        decisions=decisions,
        violation=any(d.is_profiling for d in decisions),
        warnings=warnings,
    )


def audit_site(
    visits: list[VisitVerdict],
    site: SiteRef | None = None,
    failed_visits: int = 0,
) -> SiteVerdict:
    """Fold visit verdicts into a site verdict: any violating visit counts.

    Raises AllVisitsFailed when no visit verdict is available at all.
    """
    if not visits:
        raise AllVisitsFailed(
            f"no completed visits for {site.url if site else 'site'}"
        )
    site = site or visits[0].site
    trackers = sorted(
        {
            d.tracker_domain
            for v in visits
            for d in v.profiling_cookies
            if d.tracker_domain is not None
        }
    )
    return SiteVerdict(
        site=site,
        visits=list(visits),
        violation=any(v.violation for v in visits),
        distinct_trackers=trackers,
        failed_visits=failed_visits,
    )


def diff_consent(
    before: SiteVerdict,
    after: VisitVerdict,
    banner_present: bool | None = None,
    refresh_on_consent: bool | None = None,
) -> ConsentDiff:
    """Compare profiling cookies before consent with one post-consent visit."""
    before_ids = before.profiling_identities
    after_ids = {d.identity for d in after.profiling_cookies}
    return ConsentDiff(
        site=before.site,
        before_count=len(before_ids),
        after_total=len(before_ids | after_ids),
        added_after=sorted(after_ids - before_ids),
        banner_present=banner_present,
        refresh_on_consent=refresh_on_consent,
    )


def _dt_out(value) -> str | None:
    if value is None:
        return None
    text = to_utc(value).isoformat()
    return text[:-6] + "Z" if text.endswith("+00:00") else text


def _cookie_to_dict(cookie: Cookie) -> dict:
    return {
        "name": cookie.name,
        "value": cookie.value,
        "domain": cookie.domain,
        "path": cookie.path,
        "expiry": _dt_out(cookie.expiry),
        "max_age": cookie.max_age,
        "set_from_url": cookie.set_from_url,
        "reference_time": _dt_out(cookie.reference_time),
        "lifetime": cookie.lifetime,
        "expiry_malformed": cookie.expiry_malformed,
    }


def _cookie_from_dict(data: dict) -> Cookie:
    return Cookie(
        name=data["name"],
        value=data["value"],
        domain=data["domain"],
        path=data["path"],
        expiry=parse_iso8601(data["expiry"]) if data.get("expiry") else None,
        max_age=data.get("max_age"),
        set_from_url=data["set_from_url"],
        reference_time=parse_iso8601(data["reference_time"]),
        lifetime=data.get("lifetime"),
        expiry_malformed=bool(data.get("expiry_malformed", False)),
    )


def _site_to_dict(site: SiteRef) -> dict:
    return {
        "url": site.url,
        "country": site.country,
        "category": site.category,
        "site_id": site.site_id,
    }


def _site_from_dict(data: dict) -> SiteRef:
    return SiteRef(
        url=data["url"],
        country=data.get("country", ""),
        category=data.get("category", ""),
        site_id=data.get("site_id", ""),
    )


def _decision_to_dict(decision: ProfilingDecision) -> dict:
    return {
        "cookie": _cookie_to_dict(decision.cookie),
        "party": decision.party.value,
        "persistence": decision.persistence.value,
        "tracker_matched": decision.tracker_matched,
        "tracker_domain": decision.tracker_domain,
        "is_profiling": decision.is_profiling,
    }


def _decision_from_dict(data: dict) -> ProfilingDecision:
    return ProfilingDecision(
        cookie=_cookie_from_dict(data["cookie"]),
        party=Party(data["party"]),
        persistence=Persistence(data["persistence"]),
        tracker_matched=data["tracker_matched"],
        is_profiling=data["is_profiling"],
        tracker_domain=data.get("tracker_domain"),
    )


def visit_verdict_to_dict(verdict: VisitVerdict) -> dict:
    return {
        "visit_id": verdict.visit_id,
        "site": _site_to_dict(verdict.site),
        "violation": verdict.violation,
        "warnings": dict(verdict.warnings),
        "decisions": [_decision_to_dict(d) for d in verdict.decisions],
    }


def visit_verdict_from_dict(data: dict) -> VisitVerdict:
    return VisitVerdict(
        visit_id=data["visit_id"],
        site=_site_from_dict(data["site"]),
        decisions=[_decision_from_dict(d) for d in data["decisions"]],
        violation=data["violation"],
        warnings=dict(data.get("warnings", {})),
    )


def site_verdict_to_dict(verdict: SiteVerdict, provenance: dict | None = None) -> dict:
    out = {
        "site": _site_to_dict(verdict.site),
        "violation": verdict.violation,
        "failed_visits": verdict.failed_visits,
        "distinct_trackers": list(verdict.distinct_trackers),
        "visits": [visit_verdict_to_dict(v) for v in verdict.visits],
    }
    if provenance is not None:
        out["provenance"] = dict(provenance)
    return out


def site_verdict_from_dict(data: dict) -> SiteVerdict:
    return SiteVerdict(
        site=_site_from_dict(data["site"]),
        visits=[visit_verdict_from_dict(v) for v in data["visits"]],
        violation=data["violation"],
        distinct_trackers=list(data.get("distinct_trackers", [])),
        failed_visits=data.get("failed_visits", 0),
    )
