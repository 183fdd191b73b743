"""Command line entry point: harvest captures for a list of sites."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import BrowserUnavailable, HarvestError, JobError, NavigationError, ProfileMissing
from .jobs import HarvestJob, read_site_lines
from .runner import HarvestLog, harvest_many, harvest_with_consent

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_EMPTY = 3

log = logging.getLogger("harharvest")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harvest",
        description="Visit each listed site repeatedly and write one capture per visit.",
    )
    parser.add_argument("--list", dest="site_list", type=Path, required=True,
                        help="site list: `site_id url` per line, # comments")
    parser.add_argument("--out", type=Path, required=True, help="output directory")
    parser.add_argument("--repeats", type=int, default=5, help="visits per site (default: %(default)s)")
    parser.add_argument("--timeout", type=float, default=90.0,
                        help="per-visit time budget in seconds (default: %(default)s)")
    parser.add_argument("--device", default="desktop",
                        help="device profile: desktop, nexus-phone, iphone (default: %(default)s)")
    parser.add_argument("--workers", type=int, default=2, help="parallel sites (default: %(default)s)")
    parser.add_argument("--profile", type=Path, default=None,
                        help="saved consent profile; one after-consent capture per site")
    parser.add_argument("--exit-label", default=None, help="annotation for proxy/exit routing")
    parser.add_argument("--engine", default="http",
                        help="load engine (only `http` ships in this build)")
    parser.add_argument("--name-pattern", default="{site_id}__{n}.har",
                        help="capture file name pattern (default: %(default)s)")
    parser.add_argument("-v", "--verbose", action="store_true", help="chatty progress on stderr")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        sites = read_site_lines(args.site_list)
        args.out.mkdir(parents=True, exist_ok=True)
        if args.profile is not None:
            harvest_log = HarvestLog()
            produced = 0
            for site_id, url in sites:
                try:
                    harvest_with_consent(
                        url, args.profile, args.out, site_id=site_id,
                        device=args.device, timeout_seconds=args.timeout,
                        engine=args.engine,
                    )
                    harvest_log.add(site_id, 1, "ok")
                    produced += 1
                except NavigationError as exc:
                    harvest_log.add(site_id, 1, "error", exc.reason)
        else:
            jobs = [
                HarvestJob(
                    url=url,
                    site_id=site_id,
                    repeats=args.repeats,
                    timeout_seconds=args.timeout,
                    device_profile=args.device,
                    exit_label=args.exit_label,
                    name_pattern=args.name_pattern,
                )
                for site_id, url in sites
            ]
            results, harvest_log = harvest_many(
                jobs, args.out, workers=args.workers, engine=args.engine
            )
            produced = sum(len(paths) for paths in results.values())
        harvest_log.write(args.out / "harvest_log.csv")
    except (JobError, ProfileMissing, BrowserUnavailable) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except HarvestError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    log.info("%d captures written to %s", produced, args.out)
    if produced == 0:
        log.error("no captures produced; see harvest_log.csv")
        return EXIT_EMPTY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
