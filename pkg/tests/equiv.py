"""Shared harness: run one synthesized case through the package and the
naive oracle, and report every disagreement as a human-readable string."""

from __future__ import annotations

import io

import oracle
import synth
from cookieaudit.domains import load_tracker_list
from cookieaudit.har import SiteRef, parse_har
from cookieaudit.verdicts import VisitVerdict, audit_visit

_PERSISTENCE = {"session": "session", "short-lived": "short", "persistent": "persistent"}


def audit_case(case: synth.VisitCase) -> VisitVerdict:
    """Run one synthesized capture through the real pipeline."""
    trackers = load_tracker_list(
        io.StringIO("\n".join(case.world.tracker_lines)), source_label="synthetic"
    )
    assert trackers.entries == frozenset(case.world.tracker_entries)
    archive = parse_har(case.har_text, visit_id=f"v{case.visit_n}")
    return audit_visit(archive, SiteRef(url=case.world.site_url), trackers)


def compare_case(case: synth.VisitCase) -> list[str]:
    """Mismatches between package, oracle and constructed ground truth."""
    verdict = audit_case(case)
    expected = oracle.audit_visit(
        case.har_text, case.world.site_url, case.world.tracker_entries
    )
    problems: list[str] = []

    if verdict.violation != expected["violation"]:
        problems.append(f"violation {verdict.violation} != oracle {expected['violation']}")
    if expected["violation"] != case.expected_violation:
        problems.append("oracle disagrees with constructed ground truth")

    got_ids = {d.identity for d in verdict.decisions if d.is_profiling}
    if got_ids != expected["profiling"]:
        problems.append(f"profiling {got_ids} != oracle {expected['profiling']}")
    if expected["profiling"] != case.expected_profiling:
        problems.append("oracle profiling set disagrees with construction")

    if len(verdict.decisions) != expected["cookies"]:
        problems.append(
            f"{len(verdict.decisions)} decisions != oracle {expected['cookies']} cookies"
        )
    got_unparseable = verdict.warnings.get("unparseable_cookies", 0)
    if got_unparseable != expected["unparseable"]:
        problems.append(
            f"unparseable {got_unparseable} != oracle {expected['unparseable']}"
        )
    if expected["unparseable"] != case.unparseable:
        problems.append("oracle unparseable count disagrees with construction")

    for i, (decision, row) in enumerate(zip(verdict.decisions, expected["rows"])):
        pairs = [
            ("name", decision.cookie.name, row["name"]),
            ("domain", decision.cookie.domain, row["domain"]),
            ("path", decision.cookie.path, row["path"]),
            ("lifetime", decision.cookie.lifetime, row["lifetime"]),
            ("party", decision.party.value.split("-")[0], row["party"]),
            ("persistence", _PERSISTENCE[decision.persistence.value], row["persistence"]),
            ("tracker", decision.tracker_matched, row["tracker"]),
            ("profiling", decision.is_profiling, row["profiling"]),
        ]
        if decision.tracker_matched:
            pairs.append(("tracker_domain", decision.tracker_domain, row["registrable"]))
        for field_name, got, want in pairs:
            if got != want:
                problems.append(f"row {i} {field_name}: {got!r} != {want!r}")
    return problems
