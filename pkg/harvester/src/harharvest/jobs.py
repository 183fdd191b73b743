"""Harvest job definition and site-list parsing."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .devices import device_profile
from .errors import JobError

# site ids become file names, so keep them to a safe alphabet
_SITE_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

FRESH = "fresh"


@dataclass
class HarvestJob:
    """One site to visit N times.

    profile_mode is either the literal "fresh" (empty cookie store and
    cache before every repeat) or the path of a saved profile captured
    after consent was given.
    """

    url: str
    site_id: str
    repeats: int = 5
    timeout_seconds: float = 90.0
    profile_mode: str = FRESH
    device_profile: str = "desktop"
    exit_label: str | None = None
    name_pattern: str = "{site_id}__{n}.har"

    def __post_init__(self) -> None:
        if not self.url.startswith(("http://", "https://")):
            raise JobError(f"{self.site_id or self.url}: url must be http(s)")
        if not _SITE_ID_RE.match(self.site_id):
            raise JobError(f"unsafe site_id {self.site_id!r}")
        if self.repeats < 1:
            raise JobError(f"{self.site_id}: repeats must be >= 1, got {self.repeats}")
        if self.timeout_seconds <= 0:
            raise JobError(f"{self.site_id}: timeout must be positive")
        if "{site_id}" not in self.name_pattern or "{n}" not in self.name_pattern:
            raise JobError(f"{self.site_id}: name_pattern needs {{site_id}} and {{n}}")
        device_profile(self.device_profile)  # validates the name

    @property
    def fresh(self) -> bool:
        return self.profile_mode == FRESH

    @property
    def profile_path(self) -> Path | None:
        return None if self.fresh else Path(self.profile_mode)

    def output_name(self, n: int) -> str:
        return self.name_pattern.format(site_id=self.site_id, n=n)


def read_site_lines(path: str | Path) -> list[tuple[str, str]]:
    """Parse a site list: `site_id url` per line, # comments allowed."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise JobError(f"cannot read site list {path}: {exc}") from None
    out: list[tuple[str, str]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise JobError(f"{path}:{lineno}: expected `site_id url`")
        site_id, url = parts
        if site_id in seen:
            raise JobError(f"{path}:{lineno}: duplicate site_id {site_id!r}")
        seen.add(site_id)
        out.append((site_id, url))
    if not out:
        raise JobError(f"{path}: site list is empty")
    return out
