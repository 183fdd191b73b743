"""Compliance auditing for first-visit web captures.

The pipeline: parse HAR captures into transactions, recover every
Set-Cookie event, decide per cookie whether it is third-party, persistent
and tracker-listed, then fold visit verdicts into site verdicts and
campaign reports.
"""

from .analytics import (
    MatrixCell,
    PervasivenessEntry,
    ScenarioSummary,
    ViolationMatrix,
    build_matrix,
    quantile,
    rank_trackers,
    summarize_scenario,
)
from .config import CampaignConfig, load_config, read_site_list
from .cookies import (
    MONTH_SECONDS,
    Cookie,
    Persistence,
    canonical_serialization,
    classify_persistence,
    lifetime_cdf,
    parse_set_cookie,
)
from .domains import (
    Party,
    PublicSuffixList,
    TrackerList,
    classify_party,
    default_suffix_list,
    default_tracker_list,
    is_tracker,
    load_tracker_list,
    registrable_domain,
)
from .errors import (
    AllVisitsFailed,
    AnnotationError,
    BareSuffix,
    ConfigError,
    CookieAuditError,
    EmptyArchive,
    EmptyScenario,
    EmptyTrackerList,
    FailedVisit,
    MalformedHar,
    UnknownLabel,
    UnparseableCookie,
)
from .har import (
    HarArchive,
    SetCookieEvent,
    SiteRef,
    Transaction,
    extract_set_cookie_events,
    load_har,
    parse_har,
)
from .verdicts import (
    ConsentDiff,
    ProfilingDecision,
    SiteVerdict,
    VisitVerdict,
    audit_site,
    audit_visit,
    diff_consent,
    site_verdict_from_dict,
    site_verdict_to_dict,
    visit_verdict_from_dict,
    visit_verdict_to_dict,
)

__version__ = "0.1.0"
