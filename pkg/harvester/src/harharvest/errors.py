"""Typed errors for the harvester."""

from __future__ import annotations


class HarvestError(Exception):
    """Base class for harvester errors."""


class BrowserUnavailable(HarvestError):
    """The requested load engine has no runtime in this build."""


class ProfileMissing(HarvestError):
    """A saved-profile path does not point at a readable profile."""


class NavigationError(HarvestError):
    """The main document could not be fetched at all."""

    def __init__(self, url: str, reason: str):
        super().__init__(f"{url}: {reason}")
        self.url = url
        self.reason = reason


class OutputCollision(HarvestError):
    """Two jobs tried to claim the same output file in one run."""


class JobError(HarvestError):
    """A job definition is invalid."""
