from __future__ import annotations

import json
from pathlib import Path

import pytest

from harharvest import (
    BrowserUnavailable,
    HarvestJob,
    HarvestLog,
    JobError,
    harvest,
    harvest_many,
)


def _set_cookie_headers(har_path: Path) -> list[tuple[str, str]]:
    doc = json.loads(har_path.read_text())
    out = []
    for entry in doc["log"]["entries"]:
        for header in entry["response"]["headers"]:
            if header["name"].lower() == "set-cookie":
                out.append((entry["request"]["url"], header["value"]))
    return out


def test_harvest_writes_one_file_per_repeat(cluster, tmp_path: Path):
    job = HarvestJob(url=cluster.url("/tracker-page"), site_id="site-a",
                     repeats=2, timeout_seconds=10.0)
    log = HarvestLog()
    paths = harvest(job, tmp_path, log=log)
    assert [p.name for p in paths] == ["site-a__1.har", "site-a__2.har"]
    assert all(p.is_file() for p in paths)
    assert [(r.visit_n, r.status) for r in log.rows] == [(1, "ok"), (2, "ok")]
    # each visit captured the first-party session cookie and the tracker pixel cookie
    for path in paths:
        cookies = _set_cookie_headers(path)
        assert len(cookies) == 2
        names = {value.split("=", 1)[0] for _, value in cookies}
        assert names == {"sid", "track"}


def test_fresh_mode_never_replays_cookies(cluster, tmp_path: Path):
    job = HarvestJob(url=cluster.url("/tracker-page"), site_id="site-b",
                     repeats=3, timeout_seconds=10.0)
    paths = harvest(job, tmp_path)
    for path in paths:
        doc = json.loads(path.read_text())
        main = doc["log"]["entries"][0]
        sent = {h["name"].lower() for h in main["request"]["headers"]}
        assert "cookie" not in sent
        echo = {h["name"]: h["value"] for h in main["response"]["headers"]}
        assert echo.get("X-Request-Had-Cookies") == "no"


def test_unreachable_url_logs_navigation_error(tmp_path: Path):
    job = HarvestJob(url="http://127.0.0.1:9/none", site_id="dead",
                     repeats=2, timeout_seconds=5.0)
    log = HarvestLog()
    paths = harvest(job, tmp_path, log=log)
    assert paths == []
    assert [r.status for r in log.rows] == ["error", "error"]
    assert all(r.reason for r in log.rows)


def test_timeout_emits_partial_capture_tagged(cluster, tmp_path: Path):
    job = HarvestJob(url=cluster.url("/slow-page"), site_id="slow",
                     repeats=1, timeout_seconds=0.7)
    log = HarvestLog()
    paths = harvest(job, tmp_path, log=log)
    assert len(paths) == 1
    assert log.rows[0].status == "timeout"
    doc = json.loads(paths[0].read_text())
    assert doc["log"]["_meta"]["status"] == "timeout"
    urls = [entry["request"]["url"] for entry in doc["log"]["entries"]]
    assert cluster.url("/slow-page") in urls  # the document made it in


def test_redirects_recorded_hop_by_hop(cluster, tmp_path: Path):
    job = HarvestJob(url=cluster.url("/redirect"), site_id="hop",
                     repeats=1, timeout_seconds=10.0)
    paths = harvest(job, tmp_path)
    doc = json.loads(paths[0].read_text())
    entries = doc["log"]["entries"]
    assert entries[0]["response"]["status"] == 302
    assert entries[0]["response"]["redirectURL"] == "/tracker-page"
    assert entries[1]["request"]["url"] == cluster.url("/tracker-page")
    assert entries[1]["response"]["status"] == 200


def test_har_metadata_and_device(cluster, tmp_path: Path):
    job = HarvestJob(url=cluster.url("/control-page"), site_id="meta",
                     repeats=1, timeout_seconds=10.0, device_profile="nexus-phone",
                     exit_label="DE")
    paths = harvest(job, tmp_path)
    doc = json.loads(paths[0].read_text())
    meta = doc["log"]["_meta"]
    assert meta["device"] == "nexus-phone"
    assert meta["screen"] == "412x732"
    assert meta["visit_tag"] == "fresh"
    assert meta["exit_label"] == "DE"
    main = doc["log"]["entries"][0]
    agents = [h["value"] for h in main["request"]["headers"] if h["name"].lower() == "user-agent"]
    assert agents and "Nexus 5" in agents[0]


def test_unknown_engine_is_refused(cluster, tmp_path: Path):
    job = HarvestJob(url=cluster.url("/control-page"), site_id="eng", repeats=1)
    with pytest.raises(BrowserUnavailable):
        harvest(job, tmp_path, engine="browser")


def test_job_validation():
    with pytest.raises(JobError):
        HarvestJob(url="ftp://x/", site_id="a")
    with pytest.raises(JobError):
        HarvestJob(url="http://x/", site_id="../evil")
    with pytest.raises(JobError):
        HarvestJob(url="http://x/", site_id="a", repeats=0)
    with pytest.raises(JobError):
        HarvestJob(url="http://x/", site_id="a", device_profile="teapot")
    with pytest.raises(JobError):
        HarvestJob(url="http://x/", site_id="a", name_pattern="static.har")


def test_harvest_many_collision_and_log(cluster, tmp_path: Path):
    # same site_id twice: the second job must not overwrite the first's files
    jobs = [
        HarvestJob(url=cluster.url("/control-page"), site_id="dup", repeats=2, timeout_seconds=10.0),
        HarvestJob(url=cluster.url("/tracker-page"), site_id="dup", repeats=2, timeout_seconds=10.0),
        HarvestJob(url=cluster.url("/control-page"), site_id="solo", repeats=1, timeout_seconds=10.0),
    ]
    results, log = harvest_many(jobs, tmp_path, workers=2)
    produced = sorted(p.name for paths in results.values() for p in paths)
    collisions = [r for r in log.rows if "collision" in r.reason]
    assert len(collisions) == 1
    assert produced.count("dup__1.har") == 1
    assert "solo__1.har" in produced
