"""Unit-tagged scalar parsing.

Internally everything is meters and days. Configuration values may carry an
explicit unit suffix (``"2 km/day"``, ``"3000 /km^2"``, ``"5 m"``); this module
converts them to the internal system on ingestion so the rest of the code never
sees mixed units.
"""

from __future__ import annotations

import re

# conversion factor to the internal unit of each dimension
_LENGTH = {"m": 1.0, "km": 1000.0}
_TIME = {"day": 1.0, "days": 1.0, "d": 1.0, "h": 1.0 / 24.0, "hour": 1.0 / 24.0}

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


class UnitError(ValueError):
    """Raised when a value string has a missing, unknown, or mismatched unit."""


def _split(text: str) -> tuple[float, str]:
    text = text.strip().strip('"').strip("'")
    m = re.fullmatch(rf"({_NUMBER})\s*(.*)", text)
    if m is None:
        raise UnitError(f"cannot parse numeric value from {text!r}")
    return float(m.group(1)), m.group(2).strip()


def parse_length(text: str | float, default_unit: str = "m") -> float:
    """Parse a length, returning meters."""
    if isinstance(text, (int, float)):
        return float(text) * _LENGTH[default_unit]
    value, unit = _split(text)
    unit = unit or default_unit
    if unit not in _LENGTH:
        raise UnitError(f"unknown length unit {unit!r} in {text!r}")
    return value * _LENGTH[unit]


def parse_speed(text: str | float, default_unit: str = "m/day") -> float:
    """Parse a speed, returning meters per day."""
    if isinstance(text, (int, float)):
        return parse_speed(f"{text} {default_unit}")
    value, unit = _split(text)
    unit = unit or default_unit
    m = re.fullmatch(r"(\w+)\s*/\s*(\w+)", unit)
    if m is None or m.group(1) not in _LENGTH or m.group(2) not in _TIME:
        raise UnitError(f"unknown speed unit {unit!r} in {text!r}")
    return value * _LENGTH[m.group(1)] / _TIME[m.group(2)]


def parse_density(text: str | float, default_unit: str = "/m^2") -> float:
    """Parse an areal density, returning agents per square meter."""
    if isinstance(text, (int, float)):
        return parse_density(f"{text} {default_unit}")
    value, unit = _split(text)
    unit = unit or default_unit
    m = re.fullmatch(r"/\s*(\w+)\s*(?:\^2|²|2)", unit)
    if m is None or m.group(1) not in _LENGTH:
        raise UnitError(f"unknown density unit {unit!r} in {text!r}")
    return value / _LENGTH[m.group(1)] ** 2


def parse_rate(text: str | float, default_unit: str = "/day") -> float:
    """Parse a rate, returning per-day."""
    if isinstance(text, (int, float)):
        return parse_rate(f"{text} {default_unit}")
    value, unit = _split(text)
    unit = unit or default_unit
    m = re.fullmatch(r"/\s*(\w+)", unit)
    if m is None or m.group(1) not in _TIME:
        raise UnitError(f"unknown rate unit {unit!r} in {text!r}")
    return value / _TIME[m.group(1)]


def parse_time(text: str | float, default_unit: str = "day") -> float:
    """Parse a duration, returning days."""
    if isinstance(text, (int, float)):
        return float(text) * _TIME[default_unit]
    value, unit = _split(text)
    unit = unit or default_unit
    if unit not in _TIME:
        raise UnitError(f"unknown time unit {unit!r} in {text!r}")
    return value * _TIME[unit]


def parse_dimensionless(text: str | float) -> float:
    if isinstance(text, (int, float)):
        return float(text)
    value, unit = _split(text)
    if unit:
        raise UnitError(f"unexpected unit {unit!r} on dimensionless value {text!r}")
    return value
