"""Set-Cookie parsing, lifetime computation and persistence classes.

Parsing follows the field rules browsers apply: the first token names the
cookie, attributes are split on semicolons, Max-Age takes precedence over
Expires, the cookie domain defaults to the request host, and unknown or
malformed attributes are ignored rather than fatal.
"""

from __future__ import annotations

import email.utils
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from urllib.parse import urlsplit

from .errors import UnparseableCookie

MONTH_SECONDS = 30 * 86400  # default persistence threshold, 2592000

_MAX_AGE_RE = re.compile(r"^-?\d+$")

_HTTP_DATE_FORMATS = (
    "%a, %d-%b-%Y %H:%M:%S GMT",  # legacy Netscape form with dashes
    "%a, %d-%b-%y %H:%M:%S GMT",
    "%A, %d-%b-%y %H:%M:%S GMT",  # RFC 850
    "%a %b %d %H:%M:%S %Y",      # asctime
)


def to_utc(dt: datetime) -> datetime:
    """Force a datetime to be timezone-aware, assuming UTC when naive."""
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def parse_http_date(value: str) -> datetime | None:
    """Parse an HTTP date in any of its wire forms; None when hopeless."""
    value = value.strip()
    if not value:
        return None
    try:
        parsed = email.utils.parsedate_to_datetime(value)
    except (TypeError, ValueError):
        parsed = None
    if parsed is None:
        for fmt in _HTTP_DATE_FORMATS:
            try:
                parsed = datetime.strptime(value, fmt)
                break
            except ValueError:
                continue
    if parsed is None:
        return None
    return to_utc(parsed)


@dataclass
class Cookie:
    """One parsed Set-Cookie line, with its derived lifetime in seconds.

    lifetime is Max-Age when given, otherwise Expires minus the reference
    time, otherwise None for a session cookie. expiry_malformed records
    that an Expires attribute was present but unreadable; it is excluded
    from equality so round-tripped cookies still compare equal.
    """

    name: str
    value: str
    domain: str
    path: str
    expiry: datetime | None
    max_age: int | None
    set_from_url: str
    reference_time: datetime
    lifetime: float | None
    expiry_malformed: bool = field(default=False, compare=False)


def parse_set_cookie(header_value: str, request_url: str, reference_time: datetime) -> Cookie:
    """Parse one Set-Cookie header value observed on a response.

    Raises UnparseableCookie when no name=value pair can be recovered or
    the request URL carries no host to default the domain from.
    """
    reference_time = to_utc(reference_time)
    parts = header_value.split(";")
    first = parts[0].strip()
    if "=" not in first:
        raise UnparseableCookie(f"no name=value pair in {first!r}")
    name, value = first.split("=", 1)
    name = name.strip()
    value = value.strip()
    if not name:
        raise UnparseableCookie("empty cookie name")

    try:
        request_host = urlsplit(request_url).hostname
    except ValueError:
        request_host = None
    if not request_host:
        raise UnparseableCookie(f"request URL has no host: {request_url!r}")

    domain = request_host.lower()
    path = "/"
    max_age: int | None = None
    expires_raw: str | None = None
    for part in parts[1:]:
        key, _, val = part.partition("=")
        key = key.strip().lower()
        val = val.strip()
        if key == "domain" and val:
            domain = val.lstrip(".").lower().rstrip(".")
        elif key == "path":
            path = val if val.startswith("/") else "/"
        elif key == "max-age":
            if _MAX_AGE_RE.match(val):
                max_age = int(val)
        elif key == "expires":
            expires_raw = val  # last occurrence wins, parsed below

    expiry: datetime | None = None
    expiry_malformed = False
    if expires_raw is not None:
        expiry = parse_http_date(expires_raw)
        expiry_malformed = expiry is None

    if max_age is not None:
        lifetime: float | None = float(max_age)
    elif expiry is not None:
        lifetime = (expiry - reference_time).total_seconds()
    else:
        lifetime = None

    return Cookie(
        name=name,
        value=value,
        domain=domain,
        path=path,
        expiry=expiry,
        max_age=max_age,
        set_from_url=request_url,
        reference_time=reference_time,
        lifetime=lifetime,
        expiry_malformed=expiry_malformed,
    )


def canonical_serialization(cookie: Cookie) -> str:
    """Stable one-line form; reparsing it yields an equal Cookie."""
    out = [f"{cookie.name}={cookie.value}", f"Domain={cookie.domain}", f"Path={cookie.path}"]
    if cookie.max_age is not None:
        out.append(f"Max-Age={cookie.max_age}")
    if cookie.expiry is not None:
        stamp = email.utils.format_datetime(to_utc(cookie.expiry), usegmt=True)
        out.append(f"Expires={stamp}")
    return "; ".join(out)


class Persistence(Enum):
    SESSION = "session"
    SHORT_LIVED = "short-lived"
    PERSISTENT = "persistent"


def classify_persistence(
    cookie: Cookie,
    threshold: float = MONTH_SECONDS,
    inclusive: bool = True,
) -> Persistence:
    """Bucket a cookie by lifetime.

    No lifetime, or one that is zero or negative (a deletion), is a
    session cookie. At or above the threshold is persistent when
    inclusive, strictly above otherwise; between the two, short-lived.
    """
    lifetime = cookie.lifetime
    if lifetime is None or lifetime <= 0:
        return Persistence.SESSION
    if inclusive:
        return Persistence.PERSISTENT if lifetime >= threshold else Persistence.SHORT_LIVED
    return Persistence.PERSISTENT if lifetime > threshold else Persistence.SHORT_LIVED


def lifetime_cdf(cookies: list[Cookie]) -> list[tuple[float, float]]:
    """Empirical CDF over positive cookie lifetimes, in seconds.

    Session cookies (no lifetime, or non-positive) are excluded. Returns
    (lifetime, cumulative fraction) at each distinct lifetime, ascending;
    the final fraction is 1.0. Empty when no cookie qualifies.
    """
    lifetimes = sorted(c.lifetime for c in cookies if c.lifetime is not None and c.lifetime > 0)
    if not lifetimes:
        return []
    total = len(lifetimes)
    points: list[tuple[float, float]] = []
    for i, value in enumerate(lifetimes, start=1):
        if i == total or lifetimes[i] != value:
            points.append((value, i / total))
    return points
