"""One-visit HTTP session: isolated cookie jar, no automatic redirects.

Redirects are followed by the caller so every hop becomes its own
capture entry, the way browsers record them. Response bodies are read
up to a cap; recorded sizes reflect bytes read, not wire size.
"""

from __future__ import annotations

import http.client
import http.cookiejar
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import NavigationError

BODY_CAP = 2 * 1024 * 1024
MAX_REDIRECTS = 5
_REDIRECT_CODES = (301, 302, 303, 307, 308)


@dataclass
class FetchRecord:
    """Everything remembered about one request/response exchange."""

    url: str
    method: str
    started_at: datetime
    time_ms: float
    status: int
    status_text: str
    http_version: str
    request_headers: list[tuple[str, str]]
    response_headers: list[tuple[str, str]]
    body: bytes = b""
    mime_type: str = ""

    @property
    def location(self) -> str | None:
        for name, value in self.response_headers:
            if name.lower() == "location":
                return value
        return None

    @property
    def is_redirect(self) -> bool:
        return self.status in _REDIRECT_CODES and self.location is not None


class _NoRedirect(urllib.request.HTTPRedirectHandler):
    def redirect_request(self, req, fp, code, msg, headers, newurl):  # noqa: N802
        return None


@dataclass
class VisitSession:
    """Cookie jar plus opener for the lifetime of one page visit."""

    jar: http.cookiejar.CookieJar = field(default_factory=http.cookiejar.CookieJar)
    user_agent: str = "harharvest/0.1"

    def __post_init__(self) -> None:
        self._opener = urllib.request.build_opener(
            _NoRedirect(), urllib.request.HTTPCookieProcessor(self.jar)
        )

    def fetch(self, url: str, timeout: float) -> FetchRecord:
        """GET one URL; raises NavigationError when no response came back."""
        request = urllib.request.Request(
            url, headers={"User-Agent": self.user_agent, "Accept": "*/*"}
        )
        started_at = datetime.now(timezone.utc)
        t0 = time.monotonic()
        version = "HTTP/1.1"
        try:
            with self._opener.open(request, timeout=timeout) as response:
                body = response.read(BODY_CAP)
                status = response.status
                status_text = response.reason or ""
                headers = list(response.headers.items())
                if getattr(response, "version", 11) == 10:
                    version = "HTTP/1.0"
        except urllib.error.HTTPError as err:
            # non-2xx still carries a full response, including redirects
            try:
                body = err.read(BODY_CAP)
            except (OSError, ValueError, AttributeError):
                body = b""
            status = err.code
            status_text = str(err.reason or "")
            headers = list(err.headers.items()) if err.headers is not None else []
        except (urllib.error.URLError, http.client.HTTPException, OSError, ValueError) as exc:
            reason = getattr(exc, "reason", None) or exc
            raise NavigationError(url, str(reason)) from None
        time_ms = (time.monotonic() - t0) * 1000.0
        mime = next((v for k, v in headers if k.lower() == "content-type"), "")
        return FetchRecord(
            url=url,
            method="GET",
            started_at=started_at,
            time_ms=time_ms,
            status=status,
            status_text=status_text,
            http_version=version,
            request_headers=[(k, v) for k, v in request.header_items()],
            response_headers=headers,
            body=body,
            mime_type=mime.split(";")[0].strip(),
        )
