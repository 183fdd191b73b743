#!/usr/bin/env python3
"""Regenerate the committed capture fixtures under tests/fixtures/.

Every timestamp is fixed, so reruns are byte-identical. The scenarios
are hand-designed; tests assert against expectations written down
independently in the test modules, not against anything computed here.
"""

from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone
from email.utils import format_datetime
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
BASE = datetime(2026, 4, 7, 9, 0, 0, tzinfo=timezone.utc)

MONTH = 30 * 86400
YEAR = 365 * 86400

TRACKER_FILE = """\
# campaign tracker list (fixture)
adtrack.com
pixelsync.net
bigbrother.co.uk
tracker-0042.test
statsbeacon.org
www.adtrack.com   # duplicate once normalized
com               # bare suffix: loaders skip this line

"""

CAMPAIGN_CFG = """\
# example campaign configuration
site_list = sites.csv
har_input_dir = captures
output_dir = out
tracker_list = trackers.txt
visits_per_site = 5
lifetime_threshold_seconds = 2592000
match_mode = registrable
worker_count = 4
col_avg_countries = FR,DE,IT
"""


def iso(dt: datetime) -> str:
    return dt.strftime("%Y-%m-%dT%H:%M:%S.000Z")


def http_date(dt: datetime) -> str:
    return format_datetime(dt, usegmt=True)


def entry(
    url: str,
    started: datetime,
    cookies: list[str] | None = None,
    status: int = 200,
    ctype: str = "text/html",
    date_header: bool = False,
    merge_cookies: bool = False,
) -> dict:
    headers = [{"name": "Content-Type", "value": ctype}]
    if date_header:
        headers.append({"name": "Date", "value": http_date(started)})
    cookies = cookies or []
    if merge_cookies and len(cookies) > 1:
        headers.append({"name": "Set-Cookie", "value": "\n".join(cookies)})
    else:
        for line in cookies:
            headers.append({"name": "Set-Cookie", "value": line})
    return {
        "startedDateTime": iso(started),
        "time": 120,
        "request": {"method": "GET", "url": url, "headers": [], "queryString": []},
        "response": {
            "status": status,
            "statusText": "OK" if status == 200 else "",
            "headers": headers,
            "content": {"size": 0, "mimeType": ctype},
        },
        "cache": {},
        "timings": {"send": 1, "wait": 100, "receive": 19},
    }


def har_doc(site_url: str, started: datetime, entries: list[dict]) -> dict:
    return {
        "log": {
            "version": "1.2",
            "creator": {"name": "fixture-capture", "version": "1.0"},
            "pages": [{
                "startedDateTime": iso(started),
                "id": "page_1",
                "title": site_url,
                "pageTimings": {"onContentLoad": 300, "onLoad": 900},
            }],
            "entries": entries,
        }
    }


def boilerplate(site_host: str, started: datetime, fp_cookie: str | None) -> list[dict]:
    main = entry(
        f"https://{site_host}/",
        started,
        cookies=[fp_cookie] if fp_cookie else [],
        date_header=True,
    )
    static = entry(
        f"https://{site_host}/static/app.js",
        started + timedelta(seconds=1),
        ctype="application/javascript",
    )
    icon = entry(
        f"https://{site_host}/favicon.ico",
        started + timedelta(seconds=2),
        ctype="image/x-icon",
    )
    return [main, static, icon]


def write_har(path: Path, site_url: str, started: datetime, entries: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = har_doc(site_url, started, entries)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


# per-visit extras: list of (url_path_host, offset_s, cookies, kwargs)
def pixel(host: str, started: datetime, cookies: list[str], **kwargs) -> dict:
    kwargs.setdefault("ctype", "image/gif")
    return entry(f"https://{host}/pixel.gif", started, cookies=cookies, **kwargs)


CAMPAIGN_SITES: list[tuple[str, str, str]] = [
    # (site_id, country, category); URL is https://www.<site_id>.com/
    ("fr-news-01", "FR", "news"),
    ("fr-news-02", "FR", "news"),
    ("fr-news-03", "FR", "news"),
    ("fr-news-04", "FR", "news"),
    ("fr-shop-01", "FR", "shop"),
    ("fr-shop-02", "FR", "shop"),
    ("fr-shop-03", "FR", "shop"),
    ("de-news-01", "DE", "news"),
    ("de-news-02", "DE", "news"),
    ("de-news-03", "DE", "news"),
    ("de-shop-01", "DE", "shop"),
    ("de-shop-02", "DE", "shop"),
    ("de-shop-03", "DE", "shop"),
    ("de-shop-04", "DE", "shop"),
    ("it-news-01", "IT", "news"),
    ("it-news-02", "IT", "news"),
    ("it-news-03", "IT", "news"),
    ("it-shop-01", "IT", "shop"),
    ("it-shop-02", "IT", "shop"),
    ("it-shop-03", "IT", "shop"),
]


def campaign_visit_entries(site_id: str, visit_n: int, started: datetime) -> list[dict]:
    """The extra (non-boilerplate) entries for one campaign visit."""
    t = lambda s: started + timedelta(seconds=s)
    extras: list[dict] = []

    if site_id == "fr-news-01" and visit_n == 1:
        # year-long tracker cookie on the very first visit
        extras.append(pixel("cdn.adtrack.com", t(3), [
            f"uid=a1b2c3; Max-Age={YEAR}; Path=/; Domain=.adtrack.com; Secure",
        ]))
    elif site_id == "fr-news-02" and visit_n == 3:
        # expires-form tracker cookie, anchored to the response Date header
        extras.append(pixel("sync.pixelsync.net", t(4), [
            f"psync=tok42; Expires={http_date(t(4) + timedelta(seconds=90 * 86400))}; Path=/",
        ], date_header=True))
    elif site_id == "fr-news-03":
        # short-lived tracker cookie: one second below the threshold
        extras.append(pixel("adtrack.com", t(3), [
            f"tmp=x; Max-Age={MONTH - 1}; Path=/",
        ]))
    elif site_id == "fr-news-04":
        # deletion plus malformed expiry: both stay session-class
        extras.append(pixel("adtrack.com", t(3), [
            "old=gone; Max-Age=0; Path=/",
            "odd=val; Expires=sometime-later; Path=/",
        ]))
    elif site_id == "fr-shop-01" and visit_n == 2:
        # merged header: harmless first, profiling second
        extras.append(pixel("a.b.adtrack.com", t(5), [
            "tmp=1; Path=/",
            f"uid=deadbeef; Max-Age={YEAR}; Domain=adtrack.com; Path=/",
        ], merge_cookies=True))
    elif site_id == "fr-shop-02":
        # persistent third-party cookie from an unlisted service
        extras.append(pixel("cdnstats.com", t(3), [
            f"perf=9f; Max-Age={YEAR}; Path=/",
        ]))
    elif site_id == "fr-shop-03":
        # bare-suffix declared domain plus a session tracker cookie
        extras.append(pixel("widgets.cdnstats.com", t(3), [
            "odd=1; Domain=com; Max-Age=99999999; Path=/",
        ]))
        extras.append(pixel("adtrack.com", t(4), ["sess=s1; Path=/"]))
    elif site_id == "de-news-01" and visit_n == 1:
        # two distinct trackers, both persistent
        extras.append(pixel("cdn.adtrack.com", t(3), [
            f"uid=u9; Max-Age={YEAR}; Domain=.adtrack.com; Path=/",
        ]))
        extras.append(pixel("sync.pixelsync.net", t(4), [
            f"psync=p7; Max-Age={2 * YEAR}; Path=/",
        ]))
    elif site_id == "de-news-02":
        # exactly the threshold: persistent on every visit
        extras.append(pixel("eu.bigbrother.co.uk", t(3), [
            f"bbid=b{visit_n}; Max-Age={MONTH}; Domain=.bigbrother.co.uk; Path=/",
        ]))
    elif site_id == "de-news-03" and visit_n == 4:
        extras.append(pixel("adtrack.com", t(3), [
            f"uid=late; Max-Age={YEAR}; Path=/",
        ]))
    elif site_id == "de-shop-01" and visit_n == 5:
        # placeholder-list tracker, persistent, last visit only
        extras.append(pixel("tracker-0042.test", t(3), [
            f"tt=1; Max-Age={MONTH + 1}; Path=/",
        ]))
    elif site_id == "de-shop-03":
        extras.append(pixel("adtrack.com", t(3), ["s=1; Path=/"]))  # session only
    elif site_id == "it-news-01":
        # tracker cookies that never persist
        extras.append(pixel("sync.pixelsync.net", t(3), [
            "p=1; Path=/",
            "q=2; Max-Age=600; Path=/",
        ]))
    elif site_id == "it-news-02":
        pass  # quiet site: boilerplate only
    elif site_id == "it-news-03":
        extras.append(pixel("cdnstats.com", t(3), ["m=3; Max-Age=120; Path=/"]))
    elif site_id == "it-shop-01" and visit_n == 1:
        extras.append(pixel("pixelsync.net", t(3), [
            f"psync=it1; Expires={http_date(t(3) + timedelta(seconds=YEAR))}; Path=/shop",
        ], date_header=True))
    elif site_id == "it-shop-02":
        extras.append(pixel("adtrack.com", t(3), ["v=0; Max-Age=-5; Path=/"]))
    return extras


def gen_campaign() -> None:
    root = ROOT / "campaign"
    captures = root / "captures"
    captures.mkdir(parents=True, exist_ok=True)

    lines = ["site_id,url,country,category"]
    for idx, (site_id, country, category) in enumerate(CAMPAIGN_SITES):
        site_host = f"www.{site_id}.com"
        lines.append(f"{site_id},https://{site_host}/,{country},{category}")
        for visit_n in range(1, 6):
            if site_id == "de-shop-02" and visit_n == 2:
                continue  # missing capture: counted as a failed visit
            path = captures / f"{site_id}__{visit_n}.har"
            if site_id == "it-shop-03":
                # this site never produced a usable capture
                if visit_n == 1:
                    path.write_text("{ not valid json", encoding="utf-8")
                elif visit_n == 2:
                    path.write_text(
                        json.dumps({"log": {"version": "1.2", "entries": []}}) + "\n",
                        encoding="utf-8",
                    )
                continue  # visits 3..5 missing entirely
            started = BASE + timedelta(minutes=idx * 10, seconds=visit_n * 60)
            fp = f"session_id=v{visit_n}; Path=/" if visit_n % 2 == 1 else None
            entries = boilerplate(site_host, started, fp)
            entries += campaign_visit_entries(site_id, visit_n, started)
            write_har(path, f"https://{site_host}/", started, entries)

    (root / "sites.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (root / "trackers.txt").write_text(TRACKER_FILE, encoding="utf-8")
    (root / "campaign.cfg").write_text(CAMPAIGN_CFG, encoding="utf-8")


CONSENT_SITES = [f"cs-{n:02d}" for n in range(1, 11)]
CLEAN_BEFORE = {"cs-01", "cs-02", "cs-03", "cs-04"}
ADDS_AFTER = {"cs-01", "cs-02", "cs-05", "cs-06", "cs-07"}

ANNOTATIONS = """\
site_id,banner_present,refresh_on_consent
cs-01,true,false
cs-02,true,false
cs-03,true,
cs-04,true,false
cs-05,true,true
cs-06,true,false
cs-07,false,false
cs-08,false,false
cs-09,false,
cs-10,,
"""


def gen_consent() -> None:
    root = ROOT / "consent"
    before = root / "before"
    after = root / "after"
    before.mkdir(parents=True, exist_ok=True)
    after.mkdir(parents=True, exist_ok=True)

    lines = ["site_id,url,country,category"]
    for idx, site_id in enumerate(CONSENT_SITES):
        site_host = f"www.{site_id}.org"
        site_url = f"https://{site_host}/"
        lines.append(f"{site_id},{site_url},FR,consent")
        dirty = site_id not in CLEAN_BEFORE

        for visit_n in (1, 2):
            started = BASE + timedelta(hours=2, minutes=idx * 7, seconds=visit_n * 45)
            entries = boilerplate(site_host, started, "fpsess=1; Path=/")
            if dirty:
                t3 = started + timedelta(seconds=3)
                entries.append(pixel("sync.pixelsync.net", t3, [
                    f"psync=pre{idx}; Max-Age={YEAR}; Path=/",
                ]))
            write_har(before / f"{site_id}__{visit_n}.har", site_url, started, entries)

        started = BASE + timedelta(hours=3, minutes=idx * 7)
        entries = boilerplate(site_host, started, "fpsess=1; Path=/")
        if dirty:
            # the pre-consent cookie shows up again: not an addition
            entries.append(pixel("sync.pixelsync.net", started + timedelta(seconds=3), [
                f"psync=pre{idx}; Max-Age={YEAR}; Path=/",
            ]))
        if site_id in ADDS_AFTER:
            tracker = "cdn.adtrack.com" if site_id in CLEAN_BEFORE else "eu.bigbrother.co.uk"
            domain = "adtrack.com" if site_id in CLEAN_BEFORE else "bigbrother.co.uk"
            entries.append(pixel(tracker, started + timedelta(seconds=5), [
                f"postid=c{idx}; Max-Age={YEAR}; Domain=.{domain}; Path=/",
            ]))
        write_har(after / f"{site_id}__consent.har", site_url, started, entries)

    (root / "sites.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (root / "annotations.csv").write_text(ANNOTATIONS, encoding="utf-8")


def main() -> None:
    gen_campaign()
    gen_consent()
    har_count = len(list(ROOT.rglob("*.har")))
    print(f"fixtures written under {ROOT} ({har_count} capture files)")


if __name__ == "__main__":
    main()
