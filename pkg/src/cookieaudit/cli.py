"""Command line interface.

Verbs: audit one site's captures, run a whole campaign from a config
file, render campaign reports, diff pre- and post-consent captures, and
dump lifetime CDFs. Output files are deterministic for a given input
tree; the run manifest carries the only timestamp.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .analytics import (
    build_matrix,
    matrix_to_csv,
    rank_trackers,
    trackers_to_csv,
)
from .config import CampaignConfig, config_fingerprint, load_config, read_site_list
from .cookies import MONTH_SECONDS, lifetime_cdf
from .domains import Party, PublicSuffixList, TrackerList, default_suffix_list, load_tracker_list
from .errors import (
    AllVisitsFailed,
    AnnotationError,
    BareSuffix,
    ConfigError,
    CookieAuditError,
    EmptyArchive,
    EmptyTrackerList,
    FailedVisit,
    MalformedHar,
    UnknownLabel,
)
from .har import SiteRef, load_har
from .verdicts import (
    SiteVerdict,
    VisitVerdict,
    audit_site,
    audit_visit,
    diff_consent,
    site_verdict_from_dict,
    site_verdict_to_dict,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_FAILED_VISITS = 3
EXIT_PARTIAL = 4

AUDIT_COVERAGE_GATE = 0.95

log = logging.getLogger("cookieaudit")


def _load_suffixes(path: Path | None) -> PublicSuffixList:
    if path is not None:
        return PublicSuffixList.load(path)
    return default_suffix_list()


def _load_trackers(path: Path | None, psl: PublicSuffixList) -> TrackerList:
    if path is not None:
        return load_tracker_list(path, psl=psl)
    ref = resources.files("cookieaudit").joinpath("data/tracker_domains.txt")
    with ref.open("r", encoding="utf-8") as fh:
        return load_tracker_list(fh, psl=psl, source_label="tracker_domains.txt")


def _provenance(
    trackers: TrackerList,
    psl: PublicSuffixList,
    threshold: float,
    match_mode: str,
    comparator: str = "gte",
) -> dict:
    return {
        "tracker_list": {"label": trackers.source_label, "entries": trackers.entry_count},
        "suffix_snapshot": psl.label,
        "threshold_seconds": threshold,
        "threshold_comparator": comparator,
        "match_mode": match_mode,
    }


def _dump_json(doc: dict, output: Path | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8")


def _audit_one_site(
    site: SiteRef,
    har_paths: list[Path],
    trackers: TrackerList,
    psl: PublicSuffixList,
    threshold: float,
    match_mode: str,
    inclusive: bool = True,
) -> tuple[SiteVerdict | None, int]:
    """Audit every listed capture; returns (verdict or None, failed count)."""
    visits: list[VisitVerdict] = []
    failed = 0
    for har_path in har_paths:
        if not har_path.exists():
            log.warning("missing capture: %s", har_path)
            failed += 1
            continue
        try:
            archive = load_har(har_path, site=site)
            visits.append(
                audit_visit(
                    archive, site, trackers,
                    threshold=threshold, psl=psl, match_mode=match_mode,
                    inclusive=inclusive,
                )
            )
        except (MalformedHar, EmptyArchive, FailedVisit) as exc:
            log.warning("failed visit %s: %s", har_path.name, exc)
            failed += 1
    if not visits:
        return None, failed
    return audit_site(visits, site, failed_visits=failed), failed


def cmd_audit(args: argparse.Namespace) -> int:
    psl = _load_suffixes(args.suffix_snapshot)
    trackers = _load_trackers(args.tracker_list, psl)
    site = SiteRef(url=args.site_url, site_id=args.site_id)
    inclusive = args.threshold_comparator == "gte"
    verdict, failed = _audit_one_site(
        site, [Path(p) for p in args.har],
        trackers, psl, args.threshold, args.match_mode, inclusive,
    )
    if verdict is None:
        log.error("all %d captures failed for %s", failed, args.site_url)
        return EXIT_FAILED_VISITS
    doc = site_verdict_to_dict(
        verdict,
        provenance=_provenance(
            trackers, psl, args.threshold, args.match_mode, args.threshold_comparator
        ),
    )
    _dump_json(doc, args.output)
    return EXIT_OK


def cmd_campaign(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    sites = read_site_list(config.site_list)
    if not config.har_input_dir.is_dir():
        raise ConfigError(f"har input dir does not exist: {config.har_input_dir}")
    if not any(p.is_file() for p in config.har_input_dir.iterdir()):
        raise ConfigError(f"har input dir is empty: {config.har_input_dir}")
    psl = _load_suffixes(config.suffix_snapshot)
    trackers = _load_trackers(config.tracker_list, psl)
    threshold = config.lifetime_threshold_seconds
    inclusive = config.threshold_comparator == "gte"

    verdict_dir = config.output_dir / "verdicts"
    verdict_dir.mkdir(parents=True, exist_ok=True)
    provenance = _provenance(
        trackers, psl, threshold, config.match_mode, config.threshold_comparator
    )

    def run_site(site: SiteRef) -> tuple[SiteRef, SiteVerdict | None, int]:
        paths = [
            config.har_input_dir / config.har_name_pattern.format(site_id=site.site_id, n=n)
            for n in range(1, config.visits_per_site + 1)
        ]
        try:
            verdict, failed = _audit_one_site(
                site, paths, trackers, psl, threshold, config.match_mode, inclusive
            )
        except BareSuffix as exc:
            log.warning("site %s skipped: %s", site.site_id, exc)
            return site, None, config.visits_per_site
        return site, verdict, failed

    with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
        results = list(pool.map(run_site, sites))
    results.sort(key=lambda item: item[0].site_id)

    audited = 0
    visits_audited = 0
    visits_failed = 0
    failed_site_ids: list[str] = []
    for site, verdict, failed in results:
        visits_failed += failed
        if verdict is None:
            failed_site_ids.append(site.site_id)
            continue
        audited += 1
        visits_audited += len(verdict.visits)
        _dump_json(
            site_verdict_to_dict(verdict, provenance=provenance),
            verdict_dir / f"{site.site_id}.json",
        )

    coverage = audited / len(sites)
    manifest = {
        "config_hash": config_fingerprint(config),
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "sites_total": len(sites),
        "sites_audited": audited,
        "sites_failed": len(failed_site_ids),
        "failed_site_ids": sorted(failed_site_ids),
        "visits_expected": len(sites) * config.visits_per_site,
        "visits_audited": visits_audited,
        "visits_failed": visits_failed,
        "coverage": coverage,
        **provenance,
    }
    _dump_json(manifest, config.output_dir / "manifest.json")
    log.info(
        "campaign done: %d/%d sites audited, %d visits failed",
        audited, len(sites), visits_failed,
    )
    if coverage < AUDIT_COVERAGE_GATE:
        log.error(
            "coverage %.1f%% below the %.0f%% gate",
            coverage * 100, AUDIT_COVERAGE_GATE * 100,
        )
        return EXIT_PARTIAL
    return EXIT_OK


def _load_verdicts(verdict_dir: Path) -> dict[str, SiteVerdict]:
    verdicts: dict[str, SiteVerdict] = {}
    for path in sorted(verdict_dir.glob("*.json")):
        data = json.loads(path.read_text(encoding="utf-8"))
        verdict = site_verdict_from_dict(data)
        verdicts[verdict.site.site_id or path.stem] = verdict
    return verdicts


def cmd_report(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    sites = read_site_list(config.site_list)
    verdict_dir = config.output_dir / "verdicts"
    if not verdict_dir.is_dir():
        raise ConfigError(f"no verdicts directory at {verdict_dir}; run campaign first")
    by_id = _load_verdicts(verdict_dir)

    countries: list[str] = []
    categories: list[str] = []
    for site in sites:
        if site.country and site.country not in countries:
            countries.append(site.country)
        if site.category and site.category not in categories:
            categories.append(site.category)

    ordered = [by_id[s.site_id] for s in sites if s.site_id in by_id]
    excluded = len(sites) - len(ordered)
    matrix = build_matrix(
        ordered, countries, categories,
        col_avg_countries=config.col_avg_countries or None,
        excluded_sites=excluded,
    )
    ranking = rank_trackers(ordered)

    third_party = [
        d.cookie
        for verdict in ordered
        for visit in verdict.visits
        for d in visit.decisions
        if d.party is Party.THIRD_PARTY
    ]
    points = lifetime_cdf(third_party)

    report_dir = config.output_dir / "reports"
    report_dir.mkdir(parents=True, exist_ok=True)
    (report_dir / "matrix.csv").write_text(matrix_to_csv(matrix), encoding="utf-8")
    (report_dir / "trackers.csv").write_text(trackers_to_csv(ranking), encoding="utf-8")
    _dump_json(
        {
            "party": Party.THIRD_PARTY.value,
            "cookies_total": len(third_party),
            "cookies_with_lifetime": sum(
                1 for c in third_party if c.lifetime is not None and c.lifetime > 0
            ),
            "points": [[value, fraction] for value, fraction in points],
        },
        report_dir / "lifetime_cdf.json",
    )
    log.info("reports written to %s", report_dir)
    return EXIT_OK


def _parse_bool(text: str, where: str) -> bool | None:
    norm = text.strip().lower()
    if norm in ("", "na", "n/a"):
        return None
    if norm in ("true", "yes", "1"):
        return True
    if norm in ("false", "no", "0"):
        return False
    raise AnnotationError(f"{where}: not a boolean: {text!r}")


def read_annotations(path: Path, known_ids: set[str]) -> dict[str, tuple[bool | None, bool | None]]:
    """Read the visual-annotation sidecar: site_id,banner_present,refresh_on_consent."""
    import csv

    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AnnotationError(f"cannot read annotations {path}: {exc}") from None
    reader = csv.DictReader(text.splitlines())
    needed = {"site_id", "banner_present", "refresh_on_consent"}
    if reader.fieldnames is None or not needed.issubset(set(reader.fieldnames)):
        raise AnnotationError(
            f"{path}: annotations need columns site_id,banner_present,refresh_on_consent"
        )
    out: dict[str, tuple[bool | None, bool | None]] = {}
    for line_num, row in enumerate(reader, start=2):
        site_id = (row.get("site_id") or "").strip()
        if not site_id:
            raise AnnotationError(f"{path}:{line_num}: missing site_id")
        if site_id not in known_ids:
            raise AnnotationError(f"{path}:{line_num}: unknown site_id {site_id!r}")
        banner = _parse_bool(row.get("banner_present") or "", f"{path}:{line_num}")
        refresh = _parse_bool(row.get("refresh_on_consent") or "", f"{path}:{line_num}")
        out[site_id] = (banner, refresh)
    return out


def cmd_diff_consent(args: argparse.Namespace) -> int:
    psl = _load_suffixes(args.suffix_snapshot)
    trackers = _load_trackers(args.tracker_list, psl)
    sites = read_site_list(args.site_list)
    inclusive = args.threshold_comparator == "gte"
    annotations = (
        read_annotations(args.annotations, {s.site_id for s in sites})
        if args.annotations
        else {}
    )

    rows = []
    skipped: list[str] = []
    for site in sites:
        before_paths = [
            args.before_dir / f"{site.site_id}__{n}.har"
            for n in range(1, args.visits_per_site + 1)
        ]
        after_path = args.after_dir / f"{site.site_id}__consent.har"
        before_verdict, _ = _audit_one_site(
            site, before_paths, trackers, psl, args.threshold, args.match_mode, inclusive
        )
        if before_verdict is None or not after_path.exists():
            log.warning("skipping %s: incomplete captures", site.site_id)
            skipped.append(site.site_id)
            continue
        try:
            after_archive = load_har(after_path, site=site)
            after_verdict = audit_visit(
                after_archive, site, trackers,
                threshold=args.threshold, psl=psl, match_mode=args.match_mode,
                inclusive=inclusive,
            )
        except (MalformedHar, EmptyArchive, FailedVisit) as exc:
            log.warning("skipping %s: bad consent capture: %s", site.site_id, exc)
            skipped.append(site.site_id)
            continue
        banner, refresh = annotations.get(site.site_id, (None, None))
        diff = diff_consent(
            before_verdict, after_verdict,
            banner_present=banner, refresh_on_consent=refresh,
        )
        rows.append({
            "site_id": site.site_id,
            "url": site.url,
            "before_count": diff.before_count,
            "after_total": diff.after_total,
            "added_after": [list(identity) for identity in diff.added_after],
            "clean_before": diff.clean_before,
            "banner_present": diff.banner_present,
            "refresh_on_consent": diff.refresh_on_consent,
        })

    rows.sort(key=lambda r: r["site_id"])
    doc = {
        "sites": rows,
        "summary": {
            "sites_compared": len(rows),
            "sites_skipped": sorted(skipped),
            "clean_before": sum(1 for r in rows if r["clean_before"]),
            "added_after_consent": sum(1 for r in rows if r["added_after"]),
            "banners_present": sum(1 for r in rows if r["banner_present"] is True),
            "refresh_on_consent": sum(1 for r in rows if r["refresh_on_consent"] is True),
        },
        "provenance": _provenance(
            trackers, psl, args.threshold, args.match_mode, args.threshold_comparator
        ),
    }
    _dump_json(doc, args.output)
    return EXIT_OK


def cmd_cdf(args: argparse.Namespace) -> int:
    by_id = _load_verdicts(args.verdicts_dir)
    if not by_id:
        raise ConfigError(f"no verdict files under {args.verdicts_dir}")
    wanted = {
        "third": (Party.THIRD_PARTY,),
        "first": (Party.FIRST_PARTY,),
        "all": (Party.FIRST_PARTY, Party.THIRD_PARTY),
    }[args.party]
    cookies = [
        d.cookie
        for verdict in by_id.values()
        for visit in verdict.visits
        for d in visit.decisions
        if d.party in wanted
    ]
    points = lifetime_cdf(cookies)
    _dump_json(
        {
            "party": args.party,
            "cookies_total": len(cookies),
            "cookies_with_lifetime": sum(
                1 for c in cookies if c.lifetime is not None and c.lifetime > 0
            ),
            "points": [[value, fraction] for value, fraction in points],
        },
        args.output,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cookieaudit",
        description="Audit first-visit captures for profiling cookies set before consent.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="chatty progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    matching = argparse.ArgumentParser(add_help=False)
    matching.add_argument("--tracker-list", type=Path, default=None,
                          help="tracker domain file (default: bundled snapshot)")
    matching.add_argument("--suffix-snapshot", type=Path, default=None,
                          help="public suffix rules file (default: bundled snapshot)")
    matching.add_argument("--threshold", type=float, default=float(MONTH_SECONDS),
                          help="persistence threshold in seconds (default: %(default)s)")
    matching.add_argument("--threshold-comparator", choices=("gte", "gt"), default="gte",
                          help="whether a lifetime equal to the threshold counts as persistent")
    matching.add_argument("--match-mode", choices=("registrable", "exact"),
                          default="registrable", help="tracker matching mode")

    p_audit = sub.add_parser("audit", parents=[matching],
                             help="audit one site's captures")
    p_audit.add_argument("har", nargs="+", help="capture files for the visits")
    p_audit.add_argument("--site-url", required=True, help="URL the visits targeted")
    p_audit.add_argument("--site-id", default="", help="identifier used in reports")
    p_audit.add_argument("--output", type=Path, default=None, help="write JSON here instead of stdout")
    p_audit.set_defaults(func=cmd_audit)

    p_campaign = sub.add_parser("campaign", help="run a full campaign from a config file")
    p_campaign.add_argument("--config", type=Path, required=True)
    p_campaign.set_defaults(func=cmd_campaign)

    p_report = sub.add_parser("report", help="render matrix, ranking and CDF from verdicts")
    p_report.add_argument("--config", type=Path, required=True)
    p_report.set_defaults(func=cmd_report)

    p_diff = sub.add_parser("diff-consent", parents=[matching],
                            help="compare pre-consent and post-consent captures")
    p_diff.add_argument("--before-dir", type=Path, required=True)
    p_diff.add_argument("--after-dir", type=Path, required=True)
    p_diff.add_argument("--site-list", type=Path, required=True)
    p_diff.add_argument("--annotations", type=Path, default=None,
                        help="CSV sidecar: site_id,banner_present,refresh_on_consent")
    p_diff.add_argument("--visits-per-site", type=int, default=5)
    p_diff.add_argument("--output", type=Path, default=None)
    p_diff.set_defaults(func=cmd_diff_consent)

    p_cdf = sub.add_parser("cdf", help="lifetime CDF over audited cookies")
    p_cdf.add_argument("--verdicts-dir", type=Path, required=True)
    p_cdf.add_argument("--party", choices=("third", "first", "all"), default="third")
    p_cdf.add_argument("--output", type=Path, default=None)
    p_cdf.set_defaults(func=cmd_cdf)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (ConfigError, UnknownLabel, AnnotationError, EmptyTrackerList, BareSuffix) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except AllVisitsFailed as exc:
        log.error("%s", exc)
        return EXIT_FAILED_VISITS
    except CookieAuditError as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
