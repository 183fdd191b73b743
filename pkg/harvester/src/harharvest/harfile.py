"""HAR 1.2 document assembly and output.

One page per file; every fetched exchange becomes one entry with its
Set-Cookie headers kept as separate header objects. Run metadata that
HAR has no field for (visit tag, device, profile mode) rides in the
custom `_meta` key, which consumers are free to ignore.
"""

from __future__ import annotations

import json
from datetime import datetime
from pathlib import Path

from .fetch import FetchRecord

CREATOR = {"name": "harharvest", "version": "0.1.0"}


def _iso(moment: datetime) -> str:
    return moment.isoformat(timespec="milliseconds").replace("+00:00", "Z")


def _headers(pairs: list[tuple[str, str]]) -> list[dict]:
    return [{"name": name, "value": value} for name, value in pairs]


def _entry(record: FetchRecord, page_id: str) -> dict:
    return {
        "pageref": page_id,
        "startedDateTime": _iso(record.started_at),
        "time": round(record.time_ms, 3),
        "request": {
            "method": record.method,
            "url": record.url,
            "httpVersion": record.http_version,
            "headers": _headers(record.request_headers),
            "queryString": [],
            "cookies": [],
            "headersSize": -1,
            "bodySize": 0,
        },
        "response": {
            "status": record.status,
            "statusText": record.status_text,
            "httpVersion": record.http_version,
            "headers": _headers(record.response_headers),
            "cookies": [],
            "content": {"size": len(record.body), "mimeType": record.mime_type},
            "redirectURL": record.location or "",
            "headersSize": -1,
            "bodySize": len(record.body),
        },
        "cache": {},
        "timings": {"send": 0, "wait": round(record.time_ms, 3), "receive": 0},
    }


def build_har(
    records: list[FetchRecord],
    page_url: str,
    meta: dict | None = None,
) -> dict:
    """HAR document for one visit; records must be non-empty."""
    if not records:
        raise ValueError("a capture needs at least one exchange")
    page_id = "page_1"
    log: dict = {
        "version": "1.2",
        "creator": dict(CREATOR),
        "pages": [
            {
                "startedDateTime": _iso(records[0].started_at),
                "id": page_id,
                "title": page_url,
                "pageTimings": {},
            }
        ],
        "entries": [_entry(record, page_id) for record in records],
    }
    if meta:
        log["_meta"] = dict(meta)
    return {"log": log}


def write_har(doc: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
