"""Exception types shared across the audit pipeline."""


class CookieAuditError(Exception):
    """Base class for all typed errors raised by this package."""


class MalformedHar(CookieAuditError):
    """Input is not JSON or lacks the log.entries structure."""


class EmptyArchive(CookieAuditError):
    """HAR parsed fine but contains zero entries (a failed visit)."""


class UnparseableCookie(CookieAuditError):
    """Set-Cookie header with no name=value in its first token."""


class BareSuffix(CookieAuditError):
    """Host is itself a public suffix (or not a usable DNS name); it has
    no registrable domain and cannot be matched against site or list."""


class EmptyTrackerList(CookieAuditError):
    """A tracker list with zero entries would trivially produce zero
    violations; audits refuse to run with one."""


class FailedVisit(CookieAuditError):
    """A visit produced no usable evidence (empty or unreadable archive)."""


class AllVisitsFailed(CookieAuditError):
    """Every repeat visit of a site failed; the site is excluded from
    aggregate denominators."""


class UnknownLabel(CookieAuditError):
    """A verdict carries a country/category label outside the campaign
    vocabulary."""


class EmptyScenario(CookieAuditError):
    """Scenario summary requested over zero per-site counts."""


class ConfigError(CookieAuditError):
    """Bad campaign configuration: missing paths, malformed values."""


class AnnotationError(CookieAuditError):
    """Malformed row in the operator annotations sidecar; message names
    the offending line."""
