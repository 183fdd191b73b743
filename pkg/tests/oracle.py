"""Naive reference implementations used to cross-check the package.

Everything here is deliberately blunt: linear scans, a hard-coded
two-level suffix table sized to the synthetic universe, and suffix-string
tracker matching. No code is shared with the package under test.
"""

from __future__ import annotations

import email.utils
import json
import math
import re
from datetime import datetime, timezone
from urllib.parse import urlsplit

THRESHOLD = 30 * 86400
EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
TWO_LABEL_SUFFIXES = {"co.uk"}
IP_RE = re.compile(r"^\d{1,3}(\.\d{1,3}){3}$")
INT_RE = re.compile(r"^-?\d+$")

DATE_FORMATS = (
    "%a, %d-%b-%Y %H:%M:%S GMT",
    "%a, %d-%b-%y %H:%M:%S GMT",
    "%A, %d-%b-%y %H:%M:%S GMT",
    "%a %b %d %H:%M:%S %Y",
)


def registrable(host: str) -> str | None:
    """Registrable domain under the synthetic universe's suffix rules."""
    host = host.strip().lower().strip(".")
    if not host:
        return None
    if IP_RE.match(host):
        return host
    labels = host.split(".")
    if ".".join(labels[-2:]) in TWO_LABEL_SUFFIXES:
        return ".".join(labels[-3:]) if len(labels) >= 3 else None
    return ".".join(labels[-2:]) if len(labels) >= 2 else None


def parse_date(text: str) -> datetime | None:
    text = text.strip()
    if not text:
        return None
    parsed = None
    try:
        parsed = email.utils.parsedate_to_datetime(text)
    except (TypeError, ValueError):
        parsed = None
    if parsed is None:
        for fmt in DATE_FORMATS:
            try:
                parsed = datetime.strptime(text, fmt)
                break
            except ValueError:
                continue
    if parsed is None:
        return None
    if parsed.tzinfo is None:
        return parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def parse_iso(text) -> datetime | None:
    if not isinstance(text, str) or not text.strip():
        return None
    text = text.strip()
    if text[-1] in "zZ":
        text = text[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError:
        return None
    if parsed.tzinfo is None:
        return parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def parse_cookie(line: str, request_url: str, reference: datetime) -> dict | None:
    segs = line.split(";")
    head = segs[0]
    if "=" not in head:
        return None
    name, value = head.split("=", 1)
    name = name.strip()
    if not name:
        return None
    host = urlsplit(request_url).hostname
    if not host:
        return None
    attrs: dict[str, str] = {}
    for seg in segs[1:]:
        key, _, val = seg.partition("=")
        attrs[key.strip().lower()] = val.strip()
    domain = attrs.get("domain", "").lstrip(".").rstrip(".").lower() or host.lower()
    raw_path = attrs.get("path", "")
    path = raw_path if raw_path.startswith("/") else "/"
    lifetime: float | None
    if "max-age" in attrs and INT_RE.match(attrs["max-age"]):
        lifetime = float(int(attrs["max-age"]))
    elif "expires" in attrs:
        expiry = parse_date(attrs["expires"])
        lifetime = None if expiry is None else (expiry - reference).total_seconds()
    else:
        lifetime = None
    return {
        "name": name,
        "value": value.strip(),
        "domain": domain,
        "path": path,
        "lifetime": lifetime,
    }


def classify(lifetime: float | None, threshold: float = THRESHOLD, inclusive: bool = True) -> str:
    if lifetime is None or lifetime <= 0:
        return "session"
    if inclusive:
        return "persistent" if lifetime >= threshold else "short"
    return "persistent" if lifetime > threshold else "short"


def tracker_match(domain: str, entries, mode: str = "registrable") -> bool:
    domain = domain.strip().lower().strip(".")
    if mode == "exact":
        return any(domain == e for e in entries)
    return any(domain == e or domain.endswith("." + e) for e in entries)


def audit_visit(
    har_text: str,
    site_url: str,
    tracker_entries,
    threshold: float = THRESHOLD,
    inclusive: bool = True,
    mode: str = "registrable",
) -> dict:
    """Full naive re-derivation of one visit verdict from raw HAR text."""
    log = json.loads(har_text)["log"]
    stamps: list[datetime] = []
    for page in log.get("pages") or []:
        if isinstance(page, dict):
            stamp = parse_iso(page.get("startedDateTime"))
            if stamp is not None:
                stamps.append(stamp)

    prepared = []
    for entry in log.get("entries") or []:
        if not isinstance(entry, dict):
            continue
        request = entry.get("request") or {}
        url = request.get("url")
        host = None
        if isinstance(url, str):
            try:
                host = urlsplit(url).hostname
            except ValueError:
                host = None
        if not host:
            continue
        response = entry.get("response")
        if not isinstance(response, dict):
            continue
        headers = [
            (h.get("name", ""), h.get("value", ""))
            for h in response.get("headers") or []
            if isinstance(h, dict)
        ]
        started = parse_iso(entry.get("startedDateTime"))
        if started is not None:
            stamps.append(started)
        prepared.append((url, headers, started))

    fallback = min(stamps) if stamps else EPOCH
    site_rd = registrable(urlsplit(site_url).hostname or "")

    cookies = []
    unparseable = 0
    for url, headers, started in prepared:
        date_value = None
        for key, value in headers:
            if key.lower() == "date":
                date_value = parse_date(value)
                break
        reference = date_value or started or fallback
        for key, value in headers:
            if key.lower() != "set-cookie":
                continue
            for line in value.split("\n"):
                line = line.strip()
                if not line:
                    continue
                cookie = parse_cookie(line, url, reference)
                if cookie is None:
                    unparseable += 1
                else:
                    cookies.append(cookie)

    rows = []
    profiling = set()
    for cookie in cookies:
        rd = registrable(cookie["domain"])
        party = "first" if rd is not None and rd == site_rd else "third"
        persistence = classify(cookie["lifetime"], threshold, inclusive)
        matched = tracker_match(cookie["domain"], tracker_entries, mode)
        if rd is None:
            matched = False
        flag = party == "third" and persistence == "persistent" and matched
        if flag:
            profiling.add((cookie["name"], rd, cookie["path"]))
        rows.append({
            "name": cookie["name"],
            "domain": cookie["domain"],
            "registrable": rd,
            "path": cookie["path"],
            "lifetime": cookie["lifetime"],
            "party": party,
            "persistence": persistence,
            "tracker": matched,
            "profiling": flag,
        })
    return {
        "violation": bool(profiling),
        "profiling": profiling,
        "rows": rows,
        "cookies": len(cookies),
        "unparseable": unparseable,
    }


def quantile_nearest_rank(values, p: float) -> float:
    """Nearest-rank quantile: the ceil(p*n)-th smallest, 1-indexed."""
    ordered = sorted(values)
    rank = max(1, math.ceil(p * len(ordered)))
    return ordered[rank - 1]


def cdf_points(lifetimes) -> list[tuple[float, float]]:
    kept = sorted(v for v in lifetimes if v is not None and v > 0)
    if not kept:
        return []
    return [
        (v, sum(1 for w in kept if w <= v) / len(kept))
        for v in sorted(set(kept))
    ]


def matrix_cells(rows) -> dict[tuple[str, str], tuple[int, int]]:
    """rows: (country, category, violated) triples -> cell tallies."""
    cells: dict[tuple[str, str], list[int]] = {}
    for country, category, violated in rows:
        tally = cells.setdefault((country, category), [0, 0])
        tally[0] += 1 if violated else 0
        tally[1] += 1
    return {key: (num, den) for key, (num, den) in cells.items()}
