"""HAR capture model: archives, transactions and Set-Cookie events.

Only the slice of HAR 1.2 the audit needs is modeled: per-entry request
URL, response status and headers, and timing. Malformed entries are
dropped and counted in the archive warnings instead of aborting a visit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import NamedTuple
from urllib.parse import urlsplit

from .cookies import parse_http_date, to_utc
from .errors import EmptyArchive, MalformedHar

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def parse_iso8601(value: str) -> datetime | None:
    """Parse a HAR timestamp (ISO-8601, Z suffix allowed); None if unreadable."""
    if not isinstance(value, str) or not value.strip():
        return None
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        return to_utc(datetime.fromisoformat(text))
    except ValueError:
        return None


@dataclass(frozen=True)
class SiteRef:
    """A site under audit, as named in the campaign list."""

    url: str
    country: str = ""
    category: str = ""
    site_id: str = ""


@dataclass
class Transaction:
    """One request/response pair from a capture."""

    request_url: str
    response_status: int
    response_headers: list[tuple[str, str]]
    started: datetime | None = None
    response_date: datetime | None = None

    def headers_named(self, name: str) -> list[str]:
        """Values of all response headers with the given name, in order."""
        wanted = name.lower()
        return [value for key, value in self.response_headers if key.lower() == wanted]


@dataclass
class HarArchive:
    """All transactions observed during one visit to one site."""

    visit_id: str
    site: SiteRef | None
    started_at: datetime
    transactions: list[Transaction]
    source_meta: dict = field(default_factory=dict)
    warnings: dict[str, int] = field(default_factory=dict)


class SetCookieEvent(NamedTuple):
    """One Set-Cookie line, tied to where and when it was observed."""

    header_value: str
    request_url: str
    reference_time: datetime


def _warn(warnings: dict[str, int], key: str) -> None:
    warnings[key] = warnings.get(key, 0) + 1


def parse_har(
    raw: str | bytes,
    visit_id: str = "",
    site: SiteRef | None = None,
    source_meta: dict | None = None,
) -> HarArchive:
    """Parse raw HAR JSON into an archive.

    Raises MalformedHar when the document is not HAR-shaped JSON and
    EmptyArchive when it contains no entries at all. Entries without a
    usable request URL or any response are dropped and counted in the
    archive warnings.
    """
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedHar(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("log"), dict):
        raise MalformedHar("missing top-level log object")
    log = doc["log"]
    entries = log.get("entries")
    if not isinstance(entries, list):
        raise MalformedHar("log.entries is not a list")
    if not entries:
        raise EmptyArchive(f"no entries in capture {visit_id or '<unnamed>'}")

    warnings: dict[str, int] = {}
    timestamps: list[datetime] = []
    pages = log.get("pages")
    if isinstance(pages, list):
        for page in pages:
            if isinstance(page, dict):
                stamp = parse_iso8601(page.get("startedDateTime", ""))
                if stamp is not None:
                    timestamps.append(stamp)

    transactions: list[Transaction] = []
    for entry in entries:
        if not isinstance(entry, dict):
            _warn(warnings, "entries_not_objects")
            continue
        request = entry.get("request")
        url = request.get("url") if isinstance(request, dict) else None
        host = None
        if isinstance(url, str):
            try:
                host = urlsplit(url).hostname
            except ValueError:
                host = None
        if not host:
            _warn(warnings, "entries_with_bad_url")
            continue
        response = entry.get("response")
        if not isinstance(response, dict):
            _warn(warnings, "entries_without_response")
            continue
        headers: list[tuple[str, str]] = []
        raw_headers = response.get("headers")
        if isinstance(raw_headers, list):
            for header in raw_headers:
                if (
                    isinstance(header, dict)
                    and isinstance(header.get("name"), str)
                    and isinstance(header.get("value"), str)
                ):
                    headers.append((header["name"], header["value"]))
        started = parse_iso8601(entry.get("startedDateTime", ""))
        if started is not None:
            timestamps.append(started)
        status = response.get("status")
        date_header = next(
            (v for k, v in headers if k.lower() == "date"), None
        )
        transactions.append(
            Transaction(
                request_url=url,
                response_status=status if isinstance(status, int) else 0,
                response_headers=headers,
                started=started,
                response_date=parse_http_date(date_header) if date_header else None,
            )
        )

    if timestamps:
        started_at = min(timestamps)
    else:
        started_at = EPOCH
        _warn(warnings, "missing_timestamps")

    meta = dict(source_meta or {})
    creator = log.get("creator")
    if isinstance(creator, dict) and "creator" not in meta:
        name = creator.get("name", "")
        version = creator.get("version", "")
        meta["creator"] = f"{name} {version}".strip()

    return HarArchive(
        visit_id=visit_id,
        site=site,
        started_at=started_at,
        transactions=transactions,
        source_meta=meta,
        warnings=warnings,
    )


def load_har(
    path: str | Path,
    visit_id: str = "",
    site: SiteRef | None = None,
    source_meta: dict | None = None,
) -> HarArchive:
    """Read and parse a .har file; visit_id defaults to the file stem."""
    path = Path(path)
    meta = dict(source_meta or {})
    meta.setdefault("source_path", str(path))
    return parse_har(
        path.read_bytes(),
        visit_id=visit_id or path.stem,
        site=site,
        source_meta=meta,
    )


def extract_set_cookie_events(archive: HarArchive) -> list[SetCookieEvent]:
    """Every Set-Cookie line in the archive, one event per line.

    Exporters that fold repeated headers into one newline-joined value
    are unfolded, so k lines always yield k events. The reference time
    for each event falls back from the response Date header to the entry
    start time to the archive start time.
    """
    events: list[SetCookieEvent] = []
    for txn in archive.transactions:
        reference = txn.response_date or txn.started or archive.started_at
        for value in txn.headers_named("set-cookie"):
            for line in value.split("\n"):
                line = line.strip()
                if line:
                    events.append(SetCookieEvent(line, txn.request_url, reference))
    return events
