"""Device emulation profiles.

At the HTTP level emulation means the User-Agent header; the screen
size travels as capture metadata so downstream tooling can group runs
by device.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import JobError


@dataclass(frozen=True)
class DeviceProfile:
    name: str
    user_agent: str
    screen_width: int
    screen_height: int
    mobile: bool

    @property
    def screen(self) -> str:
        return f"{self.screen_width}x{self.screen_height}"


DEVICE_PROFILES: dict[str, DeviceProfile] = {
    "desktop": DeviceProfile(
        name="desktop",
        user_agent=(
            "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 "
            "(KHTML, like Gecko) Chrome/119.0.0.0 Safari/537.36"
        ),
        screen_width=1920,
        screen_height=1080,
        mobile=False,
    ),
    "nexus-phone": DeviceProfile(
        name="nexus-phone",
        user_agent=(
            "Mozilla/5.0 (Linux; Android 11; Nexus 5) AppleWebKit/537.36 "
            "(KHTML, like Gecko) Chrome/119.0.0.0 Mobile Safari/537.36"
        ),
        screen_width=412,
        screen_height=732,
        mobile=True,
    ),
    "iphone": DeviceProfile(
        name="iphone",
        user_agent=(
            "Mozilla/5.0 (iPhone; CPU iPhone OS 16_6 like Mac OS X) "
            "AppleWebKit/605.1.15 (KHTML, like Gecko) Version/16.6 "
            "Mobile/15E148 Safari/604.1"
        ),
        screen_width=375,
        screen_height=812,
        mobile=True,
    ),
}


def device_profile(name: str) -> DeviceProfile:
    try:
        return DEVICE_PROFILES[name]
    except KeyError:
        known = ", ".join(sorted(DEVICE_PROFILES))
        raise JobError(f"unknown device profile {name!r} (known: {known})") from None
