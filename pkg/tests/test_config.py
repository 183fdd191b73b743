from __future__ import annotations

from pathlib import Path

import pytest

from cookieaudit.config import config_fingerprint, load_config, read_site_list
from cookieaudit.errors import ConfigError


def _write(tmp_path: Path, text: str, name: str = "run.cfg") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


MINIMAL = "site_list = sites.csv\nhar_input_dir = captures\noutput_dir = out\n"


def test_minimal_config_with_defaults(tmp_path: Path):
    config = load_config(_write(tmp_path, MINIMAL))
    assert config.site_list == tmp_path / "sites.csv"
    assert config.har_input_dir == tmp_path / "captures"
    assert config.output_dir == tmp_path / "out"
    assert config.tracker_list is None
    assert config.visits_per_site == 5
    assert config.lifetime_threshold_seconds == 2592000
    assert config.match_mode == "registrable"
    assert config.worker_count == 4
    assert config.col_avg_countries == []
    assert config.threshold_comparator == "gte"
    assert config.har_name_pattern == "{site_id}__{n}.har"


def test_full_config_and_absolute_paths(tmp_path: Path):
    text = (
        "site_list = /abs/sites.csv\n"
        "har_input_dir = caps   # comment\n"
        "output_dir = out\n"
        "tracker_list = trackers.txt\n"
        "visits_per_site = 3\n"
        "lifetime_threshold_seconds = 86400\n"
        "threshold_comparator = gt\n"
        "match_mode = exact\n"
        "worker_count = 2\n"
        "col_avg_countries = FR, DE,IT\n"
        "har_name_pattern = {site_id}.visit{n}.har\n"
    )
    config = load_config(_write(tmp_path, text))
    assert config.site_list == Path("/abs/sites.csv")
    assert config.har_input_dir == tmp_path / "caps"
    assert config.tracker_list == tmp_path / "trackers.txt"
    assert config.visits_per_site == 3
    assert config.lifetime_threshold_seconds == 86400.0
    assert config.threshold_comparator == "gt"
    assert config.match_mode == "exact"
    assert config.col_avg_countries == ["FR", "DE", "IT"]
    assert config.har_name_pattern == "{site_id}.visit{n}.har"


@pytest.mark.parametrize(
    "mutation",
    [
        "mystery_key = 1",
        "site_list = again.csv\nsite_list = twice.csv",
        "visits_per_site = zero",
        "visits_per_site = 0",
        "lifetime_threshold_seconds = -5",
        "match_mode = fuzzy",
        "threshold_comparator = maybe",
        "har_name_pattern = fixed-name.har",
        "just some words",
    ],
)
def test_bad_config_lines_fatal(tmp_path: Path, mutation: str):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, MINIMAL + mutation + "\n"))


def test_missing_required_key(tmp_path: Path):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "site_list = s.csv\nhar_input_dir = caps\n"))


def test_missing_config_file(tmp_path: Path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")


SITES = "site_id,url,country,category\ns1,https://a.example/,FR,news\ns2,https://b.example/,DE,shop\n"


def test_read_site_list(tmp_path: Path):
    sites = read_site_list(_write(tmp_path, SITES, "sites.csv"))
    assert [s.site_id for s in sites] == ["s1", "s2"]
    assert sites[0].url == "https://a.example/"
    assert sites[1].country == "DE"
    assert sites[1].category == "shop"


@pytest.mark.parametrize(
    "text",
    [
        "url,country,category\nhttps://a.example/,FR,news\n",         # missing column
        "site_id,url,country,category\n",                              # empty
        "site_id,url,country,category\ns1,,FR,news\n",                 # missing url
        "site_id,url,country,category\n../evil,https://a.example/,FR,news\n",
        "site_id,url,country,category\ns1,https://a.example/,FR,news\ns1,https://b.example/,DE,shop\n",
    ],
)
def test_bad_site_lists_fatal(tmp_path: Path, text: str):
    with pytest.raises(ConfigError):
        read_site_list(_write(tmp_path, text, "sites.csv"))


def test_fingerprint_tracks_effective_settings(tmp_path: Path):
    first = load_config(_write(tmp_path, MINIMAL, "a.cfg"))
    second = load_config(_write(tmp_path, MINIMAL, "b.cfg"))
    assert config_fingerprint(first) == config_fingerprint(second)
    third = load_config(_write(tmp_path, MINIMAL + "visits_per_site = 9\n", "c.cfg"))
    assert config_fingerprint(third) != config_fingerprint(first)
    fourth = load_config(_write(tmp_path, MINIMAL + "threshold_comparator = gt\n", "d.cfg"))
    assert config_fingerprint(fourth) != config_fingerprint(first)
