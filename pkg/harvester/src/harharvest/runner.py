"""Visit execution: load a page and its subresources, emit captures.

A visit fetches the document (following redirects hop by hop), then the
statically declared subresources, all against one isolated cookie jar.
The whole visit shares a time budget; hitting it still emits whatever
was captured, tagged as a timeout, so auditors can decide what partial
evidence is worth. Only a page that never answered produces no file.
"""

from __future__ import annotations

import csv
import http.cookiejar
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urljoin

from .devices import DeviceProfile, device_profile
from .errors import BrowserUnavailable, HarvestError, NavigationError, OutputCollision, ProfileMissing
from .fetch import MAX_REDIRECTS, FetchRecord, VisitSession
from .harfile import build_har, write_har
from .jobs import HarvestJob
from .subresources import extract_subresources

ENGINES = ("http",)
PER_REQUEST_CAP = 30.0
CONSENT_SUFFIX = "__consent.har"


@dataclass
class LogRow:
    site_id: str
    visit_n: int
    status: str  # ok | timeout | error
    reason: str


@dataclass
class HarvestLog:
    """Thread-safe collection of per-visit outcomes."""

    rows: list[LogRow] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._lock = threading.Lock()

    def add(self, site_id: str, visit_n: int, status: str, reason: str = "") -> None:
        with self._lock:
            self.rows.append(LogRow(site_id, visit_n, status, reason))

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["site_id", "visit_n", "status", "reason"])
            for row in sorted(self.rows, key=lambda r: (r.site_id, r.visit_n)):
                writer.writerow([row.site_id, row.visit_n, row.status, row.reason])


def load_profile(path: Path) -> http.cookiejar.LWPCookieJar:
    """Load a saved browsing profile (cookie jar); typed error if absent."""
    jar = http.cookiejar.LWPCookieJar()
    try:
        jar.load(str(path), ignore_discard=True)
    except (OSError, http.cookiejar.LoadError) as exc:
        raise ProfileMissing(f"cannot load profile {path}: {exc}") from None
    return jar


def visit(
    url: str,
    jar: http.cookiejar.CookieJar,
    device: DeviceProfile,
    timeout_seconds: float,
) -> tuple[list[FetchRecord], bool]:
    """Load one page; returns (exchanges, timed_out).

    Raises NavigationError when the document itself never produced a
    response; subresource failures are skipped instead.
    """
    session = VisitSession(jar=jar, user_agent=device.user_agent)
    deadline = time.monotonic() + timeout_seconds
    records: list[FetchRecord] = []

    def budget() -> float:
        return deadline - time.monotonic()

    current = url
    for _ in range(MAX_REDIRECTS + 1):
        if budget() <= 0:
            if records:
                return records, True
            raise NavigationError(url, "visit deadline exceeded before any response")
        try:
            record = session.fetch(current, timeout=min(budget(), PER_REQUEST_CAP))
        except NavigationError:
            if records and budget() <= 0:
                return records, True
            raise
        records.append(record)
        if not record.is_redirect:
            break
        current = urljoin(current, record.location or "")
    else:
        raise NavigationError(url, f"more than {MAX_REDIRECTS} redirects")

    main = records[-1]
    if main.status == 200 and main.mime_type == "text/html":
        html = main.body.decode("utf-8", errors="replace")
        for sub_url in extract_subresources(html, main.url):
            if budget() <= 0:
                return records, True
            try:
                records.append(session.fetch(sub_url, timeout=min(budget(), PER_REQUEST_CAP)))
            except NavigationError:
                if budget() <= 0:
                    return records, True
                continue  # a broken subresource is not a failed visit
    return records, False


def _visit_meta(job: HarvestJob, device: DeviceProfile, n: int, timed_out: bool) -> dict:
    meta = {
        "visit": n,
        "visit_tag": "fresh" if job.fresh else "after-consent",
        "status": "timeout" if timed_out else "ok",
        "device": device.name,
        "screen": device.screen,
        "user_agent": device.user_agent,
        "profile_mode": job.profile_mode,
    }
    if job.exit_label:
        meta["exit_label"] = job.exit_label
    return meta


def _claim_outputs(
    paths: list[Path],
    claimed: set[Path] | None,
    lock: threading.Lock | None,
) -> None:
    if claimed is None:
        return
    guard = lock or threading.Lock()
    with guard:
        for path in paths:
            if path in claimed:
                raise OutputCollision(str(path))
        claimed.update(paths)


def harvest(
    job: HarvestJob,
    out_dir: Path,
    engine: str = "http",
    log: HarvestLog | None = None,
    claimed: set[Path] | None = None,
    lock: threading.Lock | None = None,
) -> list[Path]:
    """Visit job.url job.repeats times; one capture per successful repeat.

    Failed repeats are logged with a reason and skipped, never fatal.
    """
    if engine not in ENGINES:
        raise BrowserUnavailable(
            f"engine {engine!r} has no runtime in this build (available: {', '.join(ENGINES)})"
        )
    device = device_profile(job.device_profile)
    log = log if log is not None else HarvestLog()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    targets = [out_dir / job.output_name(n) for n in range(1, job.repeats + 1)]
    if len(set(targets)) != len(targets):
        raise OutputCollision(f"{job.site_id}: name_pattern repeats a file name")
    _claim_outputs(targets, claimed, lock)
    if not job.fresh:
        load_profile(job.profile_path)  # fail early, before any fetch

    produced: list[Path] = []
    for n, target in enumerate(targets, start=1):
        # fresh mode: a brand-new jar per repeat; saved mode: reload the
        # profile so repeats all start from the captured state
        jar: http.cookiejar.CookieJar
        jar = http.cookiejar.CookieJar() if job.fresh else load_profile(job.profile_path)
        try:
            records, timed_out = visit(job.url, jar, device, job.timeout_seconds)
        except NavigationError as exc:
            log.add(job.site_id, n, "error", exc.reason)
            continue
        write_har(build_har(records, job.url, _visit_meta(job, device, n, timed_out)), target)
        log.add(job.site_id, n, "timeout" if timed_out else "ok")
        produced.append(target)
    return produced


def harvest_with_consent(
    url: str,
    saved_profile: str | Path,
    out_dir: Path,
    site_id: str,
    device: str = "desktop",
    timeout_seconds: float = 90.0,
    engine: str = "http",
) -> Path:
    """One visit under a previously captured consent profile."""
    if engine not in ENGINES:
        raise BrowserUnavailable(
            f"engine {engine!r} has no runtime in this build (available: {', '.join(ENGINES)})"
        )
    job = HarvestJob(
        url=url,
        site_id=site_id,
        repeats=1,
        timeout_seconds=timeout_seconds,
        profile_mode=str(saved_profile),
        device_profile=device,
    )
    dev = device_profile(device)
    jar = load_profile(job.profile_path)
    records, timed_out = visit(url, jar, dev, timeout_seconds)
    out_dir = Path(out_dir)
    target = out_dir / f"{site_id}{CONSENT_SUFFIX}"
    write_har(build_har(records, url, _visit_meta(job, dev, 1, timed_out)), target)
    return target


def capture_consent_profile(
    consent_url: str,
    profile_path: str | Path,
    device: str = "desktop",
    timeout_seconds: float = 90.0,
) -> Path:
    """Visit a consent-granting URL with a fresh jar and save the result.

    This is the scripted stand-in for the manual step of clicking a
    consent banner and keeping the browsing profile.
    """
    profile_path = Path(profile_path)
    dev = device_profile(device)
    jar = http.cookiejar.LWPCookieJar()
    visit(consent_url, jar, dev, timeout_seconds)
    profile_path.parent.mkdir(parents=True, exist_ok=True)
    jar.save(str(profile_path), ignore_discard=True)
    return profile_path


def harvest_many(
    jobs: list[HarvestJob],
    out_dir: Path,
    workers: int = 2,
    engine: str = "http",
) -> tuple[dict[str, list[Path]], HarvestLog]:
    """Run jobs on a bounded worker pool with isolated state per visit.

    Jars are created per visit and never shared; output paths are
    claimed up front so two jobs can never write the same file.
    """
    log = HarvestLog()
    claimed: set[Path] = set()
    lock = threading.Lock()

    def run(job: HarvestJob) -> tuple[str, list[Path]]:
        try:
            return job.site_id, harvest(
                job, out_dir, engine=engine, log=log, claimed=claimed, lock=lock
            )
        except BrowserUnavailable:
            raise
        except HarvestError as exc:
            log.add(job.site_id, 0, "error", str(exc))
            return job.site_id, []

    results: dict[str, list[Path]] = {}
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for site_id, paths in pool.map(run, jobs):
            results.setdefault(site_id, []).extend(paths)
    return results, log
