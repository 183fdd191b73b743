"""Bundled fixture web servers for end-to-end exercises.

Two tiny HTTP servers on separate loopback addresses: a "site" that
sets a first-party session cookie, and a "tracker" on another address
whose pixel sets a 365-day cookie, making it third-party relative to
the site. The site also honors a consent cookie by setting one extra
persistent cookie, so consent-profile flows can be exercised.

Runnable standalone: python -m harharvest.fixtures
"""

from __future__ import annotations

import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import urlsplit

YEAR_SECONDS = 365 * 86400

PIXEL_GIF = (
    b"GIF89a\x01\x00\x01\x00\x80\x00\x00\x00\x00\x00\xff\xff\xff!"
    b"\xf9\x04\x01\x00\x00\x00\x00,\x00\x00\x00\x00\x01\x00\x01\x00"
    b"\x00\x02\x02D\x01\x00;"
)

_PAGE = """<!doctype html>
<html><head><title>{title}</title>
<link rel="stylesheet" href="/style.css">
</head><body>
<h1>{title}</h1>
{extra}
<script src="/app.js"></script>
</body></html>
"""


class _QuietHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, format: str, *args) -> None:  # noqa: A002
        pass

    def _reply(
        self,
        body: bytes,
        content_type: str,
        cookies: list[str] | None = None,
        status: int = 200,
        extra_headers: list[tuple[str, str]] | None = None,
    ) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        for line in cookies or []:
            self.send_header("Set-Cookie", line)
        for name, value in extra_headers or []:
            self.send_header(name, value)
        self.end_headers()
        self.wfile.write(body)

    def _cookie_names(self) -> set[str]:
        header = self.headers.get("Cookie", "")
        names = set()
        for part in header.split(";"):
            name = part.split("=", 1)[0].strip()
            if name:
                names.add(name)
        return names


class _SiteHandler(_QuietHandler):
    """Pages of the fixture site; tracker pixel URL comes from the server."""

    def do_GET(self) -> None:  # noqa: N802
        path = urlsplit(self.path).path
        server: FixtureSiteServer = self.server  # type: ignore[assignment]
        had_cookies = "yes" if self._cookie_names() else "no"
        echo = [("X-Request-Had-Cookies", had_cookies)]

        if path == "/tracker-page":
            pixel = f'<img src="{server.tracker_pixel_url}" width="1" height="1">'
            cookies = ["sid=abc123; Path=/"]
            if "consent" in self._cookie_names():
                cookies.append(f"prefs=saved; Max-Age={YEAR_SECONDS}; Path=/")
            body = _PAGE.format(title="Tracked page", extra=pixel).encode()
            self._reply(body, "text/html; charset=utf-8", cookies, extra_headers=echo)
        elif path == "/control-page":
            body = _PAGE.format(title="Control page", extra="").encode()
            self._reply(body, "text/html; charset=utf-8", ["sid=abc123; Path=/"], extra_headers=echo)
        elif path == "/consent":
            body = b"<!doctype html><html><body>consent recorded</body></html>"
            self._reply(
                body,
                "text/html; charset=utf-8",
                [f"consent=yes; Max-Age={YEAR_SECONDS}; Path=/"],
                extra_headers=echo,
            )
        elif path == "/slow-page":
            slow = '<img src="/slow-resource">'
            body = _PAGE.format(title="Slow page", extra=slow).encode()
            self._reply(body, "text/html; charset=utf-8", ["sid=abc123; Path=/"], extra_headers=echo)
        elif path == "/slow-resource":
            time.sleep(server.slow_seconds)
            self._reply(PIXEL_GIF, "image/gif")
        elif path == "/redirect":
            self._reply(b"", "text/plain", status=302, extra_headers=[("Location", "/tracker-page")])
        elif path == "/app.js":
            self._reply(b"console.log('fixture');", "application/javascript")
        elif path == "/style.css":
            self._reply(b"body { margin: 0 }", "text/css")
        else:
            self._reply(b"not found", "text/plain", status=404)


class _TrackerHandler(_QuietHandler):
    def do_GET(self) -> None:  # noqa: N802
        path = urlsplit(self.path).path
        if path == "/pixel.gif":
            self._reply(
                PIXEL_GIF,
                "image/gif",
                [f"track=t-42; Max-Age={YEAR_SECONDS}; Path=/"],
            )
        else:
            self._reply(b"not found", "text/plain", status=404)


class FixtureSiteServer(ThreadingHTTPServer):
    daemon_threads = True
    tracker_pixel_url: str = ""
    slow_seconds: float = 2.0


class FixtureTrackerServer(ThreadingHTTPServer):
    daemon_threads = True


class FixtureCluster:
    """Both fixture servers on ephemeral ports, started together.

    site_host and tracker_host must differ so the pixel cookie is
    third-party; loopback aliases (127.0.0.1 / 127.0.0.2) work without
    any host configuration.
    """

    def __init__(
        self,
        site_host: str = "127.0.0.1",
        tracker_host: str = "127.0.0.2",
        slow_seconds: float = 2.0,
    ):
        self.site_host = site_host
        self.tracker_host = tracker_host
        self._tracker = FixtureTrackerServer((tracker_host, 0), _TrackerHandler)
        self.tracker_base = f"http://{tracker_host}:{self._tracker.server_address[1]}"
        self._site = FixtureSiteServer((site_host, 0), _SiteHandler)
        self._site.tracker_pixel_url = f"{self.tracker_base}/pixel.gif"
        self._site.slow_seconds = slow_seconds
        self.site_base = f"http://{site_host}:{self._site.server_address[1]}"
        self._threads = [
            threading.Thread(target=server.serve_forever, daemon=True)
            for server in (self._site, self._tracker)
        ]

    def start(self) -> "FixtureCluster":
        for thread in self._threads:
            thread.start()
        return self

    def stop(self) -> None:
        for server in (self._site, self._tracker):
            server.shutdown()
            server.server_close()

    def __enter__(self) -> "FixtureCluster":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()

    def url(self, path: str) -> str:
        return f"{self.site_base}{path}"


def main() -> None:
    with FixtureCluster() as cluster:
        print(f"site:    {cluster.site_base}")
        print(f"  pages: /tracker-page /control-page /consent /slow-page /redirect")
        print(f"tracker: {cluster.tracker_base}/pixel.gif")
        print("Ctrl+C to stop")
        try:
            while True:
                time.sleep(3600)
        except KeyboardInterrupt:
            pass


if __name__ == "__main__":
    main()
