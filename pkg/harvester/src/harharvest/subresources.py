"""Static subresource extraction from HTML.

A real browser discovers subresources by executing the page; this
harvester only sees markup, so it collects the statically declared
ones: script/img/iframe/frame src, embed src, and link href for
stylesheet and icon rels.
"""

from __future__ import annotations

from html.parser import HTMLParser
from urllib.parse import urljoin, urlsplit

_SRC_TAGS = {"script", "img", "iframe", "frame", "embed"}
_LINK_RELS = {"stylesheet", "icon", "shortcut icon", "apple-touch-icon"}


class _Collector(HTMLParser):
    def __init__(self) -> None:
        super().__init__()
        self.found: list[str] = []

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        by_name = {name: value for name, value in attrs if value is not None}
        if tag in _SRC_TAGS and by_name.get("src"):
            self.found.append(by_name["src"])
        elif tag == "link" and by_name.get("href"):
            rel = (by_name.get("rel") or "").strip().lower()
            if rel in _LINK_RELS:
                self.found.append(by_name["href"])


def extract_subresources(html: str, base_url: str) -> list[str]:
    """Absolute http(s) subresource URLs, deduplicated in document order."""
    collector = _Collector()
    collector.feed(html)
    out: list[str] = []
    seen: set[str] = set()
    for raw in collector.found:
        url = urljoin(base_url, raw.strip())
        if urlsplit(url).scheme not in ("http", "https"):
            continue
        if url == base_url or url in seen:
            continue
        seen.add(url)
        out.append(url)
    return out
