"""Campaign configuration: key/value config files and site lists.

Config files are plain text, one `key = value` per line, # comments.
Relative paths are resolved against the config file's directory, so a
campaign directory can be moved or checked in as a whole.
"""

from __future__ import annotations

import csv
import hashlib
import json
import re
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError
from .har import SiteRef

MATCH_MODES = ("registrable", "exact")
# "gte": a lifetime equal to the threshold already counts as persistent
THRESHOLD_COMPARATORS = ("gte", "gt")

# site ids become file names, so keep them to a safe alphabet
_SITE_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


@dataclass
class CampaignConfig:
    site_list: Path
    har_input_dir: Path
    output_dir: Path
    tracker_list: Path | None = None
    suffix_snapshot: Path | None = None
    visits_per_site: int = 5
    lifetime_threshold_seconds: float = 30 * 86400
    threshold_comparator: str = "gte"
    match_mode: str = "registrable"
    worker_count: int = 4
    col_avg_countries: list[str] = field(default_factory=list)
    har_name_pattern: str = "{site_id}__{n}.har"


_PATH_KEYS = ("site_list", "har_input_dir", "output_dir", "tracker_list", "suffix_snapshot")
_REQUIRED = ("site_list", "har_input_dir", "output_dir")


def load_config(path: str | Path) -> CampaignConfig:
    """Read a campaign config file; unknown keys and bad values are fatal."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    known = {f.name for f in fields(CampaignConfig)}
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        raw[key] = value.strip()

    for key in _REQUIRED:
        if not raw.get(key):
            raise ConfigError(f"{path}: missing required key {key!r}")

    base = path.parent
    kwargs: dict = {}
    for key, value in raw.items():
        if key in _PATH_KEYS:
            if value:
                candidate = Path(value)
                kwargs[key] = candidate if candidate.is_absolute() else base / candidate
        elif key in ("visits_per_site", "worker_count"):
            try:
                number = int(value)
            except ValueError:
                raise ConfigError(f"{path}: {key} must be an integer, got {value!r}") from None
            if number < 1:
                raise ConfigError(f"{path}: {key} must be positive, got {number}")
            kwargs[key] = number
        elif key == "lifetime_threshold_seconds":
            try:
                seconds = float(value)
            except ValueError:
                raise ConfigError(f"{path}: {key} must be a number, got {value!r}") from None
            if seconds <= 0:
                raise ConfigError(f"{path}: {key} must be positive, got {seconds}")
            kwargs[key] = seconds
        elif key == "match_mode":
            if value not in MATCH_MODES:
                raise ConfigError(f"{path}: match_mode must be one of {MATCH_MODES}, got {value!r}")
            kwargs[key] = value
        elif key == "threshold_comparator":
            if value not in THRESHOLD_COMPARATORS:
                raise ConfigError(
                    f"{path}: threshold_comparator must be one of {THRESHOLD_COMPARATORS}, got {value!r}"
                )
            kwargs[key] = value
        elif key == "col_avg_countries":
            kwargs[key] = [c.strip() for c in value.split(",") if c.strip()]
        elif key == "har_name_pattern":
            if "{site_id}" not in value or "{n}" not in value:
                raise ConfigError(
                    f"{path}: har_name_pattern must contain {{site_id}} and {{n}}, got {value!r}"
                )
            kwargs[key] = value
    return CampaignConfig(**kwargs)


def read_site_list(path: str | Path) -> list[SiteRef]:
    """Read the campaign site CSV: site_id,url,country,category."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read site list {path}: {exc}") from None
    reader = csv.DictReader(text.splitlines())
    needed = {"site_id", "url", "country", "category"}
    if reader.fieldnames is None or not needed.issubset(set(reader.fieldnames)):
        raise ConfigError(
            f"{path}: site list must have columns site_id,url,country,category"
        )
    sites: list[SiteRef] = []
    seen: set[str] = set()
    for row_num, row in enumerate(reader, start=2):
        site_id = (row.get("site_id") or "").strip()
        url = (row.get("url") or "").strip()
        if not site_id or not url:
            raise ConfigError(f"{path}:{row_num}: site_id and url are required")
        if not _SITE_ID_RE.match(site_id):
            raise ConfigError(f"{path}:{row_num}: unsafe site_id {site_id!r}")
        if site_id in seen:
            raise ConfigError(f"{path}:{row_num}: duplicate site_id {site_id!r}")
        seen.add(site_id)
        sites.append(
            SiteRef(
                url=url,
                country=(row.get("country") or "").strip(),
                category=(row.get("category") or "").strip(),
                site_id=site_id,
            )
        )
    if not sites:
        raise ConfigError(f"{path}: site list is empty")
    return sites


def config_fingerprint(config: CampaignConfig) -> str:
    """Stable hash of the effective configuration, for the run manifest."""
    doc = {
        "site_list": str(config.site_list),
        "har_input_dir": str(config.har_input_dir),
        "output_dir": str(config.output_dir),
        "tracker_list": str(config.tracker_list) if config.tracker_list else None,
        "suffix_snapshot": str(config.suffix_snapshot) if config.suffix_snapshot else None,
        "visits_per_site": config.visits_per_site,
        "lifetime_threshold_seconds": config.lifetime_threshold_seconds,
        "threshold_comparator": config.threshold_comparator,
        "match_mode": config.match_mode,
        "worker_count": config.worker_count,
        "col_avg_countries": list(config.col_avg_countries),
        "har_name_pattern": config.har_name_pattern,
    }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
