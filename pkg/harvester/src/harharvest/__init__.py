"""HTTP-level page-visit harvester that emits HAR captures.

Feeds cookie-audit pipelines: visit a site N times with a fresh or
saved browsing profile, record every request/response exchange, and
write one HAR file per visit plus a CSV harvest log.
"""

from .devices import DEVICE_PROFILES, DeviceProfile, device_profile
from .errors import (
    BrowserUnavailable,
    HarvestError,
    JobError,
    NavigationError,
    OutputCollision,
    ProfileMissing,
)
from .fixtures import FixtureCluster
from .harfile import build_har, write_har
from .jobs import HarvestJob, read_site_lines
from .runner import (
    HarvestLog,
    capture_consent_profile,
    harvest,
    harvest_many,
    harvest_with_consent,
    load_profile,
    visit,
)
from .subresources import extract_subresources

__all__ = [
    "DEVICE_PROFILES",
    "DeviceProfile",
    "device_profile",
    "BrowserUnavailable",
    "HarvestError",
    "JobError",
    "NavigationError",
    "OutputCollision",
    "ProfileMissing",
    "FixtureCluster",
    "build_har",
    "write_har",
    "HarvestJob",
    "read_site_lines",
    "HarvestLog",
    "capture_consent_profile",
    "harvest",
    "harvest_many",
    "harvest_with_consent",
    "load_profile",
    "visit",
    "extract_subresources",
]
