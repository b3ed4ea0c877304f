from __future__ import annotations

import math
import re
from typing import Optional

import numpy as np

from sectorbound.errors import DomainError


_ANGLE_TERM = re.compile(r"^(?:(?P<number>[0-9.eE+-]+)|pi(?:/(?P<divisor>[0-9.eE+-]+))?)$")


def parse_float(value: str) -> float:
    if not value or not value.strip():
        raise ValueError("number is empty")
    normalized = value.strip().lower()
    if normalized in {"inf", "infinity"}:
        return math.inf
    number = float(normalized)
    if math.isnan(number):
        raise ValueError("NaN is not allowed")
    return number


def parse_p_list(value: str) -> list[float]:
    """Comma-separated exponents in (1, inf]; "inf" is accepted as the excluded limit."""
    if not value or not value.strip():
        return []
    p_values = [parse_float(token) for token in value.replace(" ", "").split(",") if token]
    for p in p_values:
        if p <= 1.0:
            raise ValueError(f"p must lie in (1, inf), got {p}")
    return p_values


def parse_radii(value: str) -> list[float]:
    """MIN:MAX:COUNT, log-spaced and inclusive of both ends."""
    parts = value.strip().split(":")
    if len(parts) != 3:
        raise ValueError("radii must look like MIN:MAX:COUNT")
    low, high = float(parts[0]), float(parts[1])
    count = int(parts[2])
    if not (0 < low <= high and math.isfinite(high)):
        raise ValueError(f"radii need 0 < MIN <= MAX < inf, got {low}:{high}")
    if count < 1:
        raise ValueError(f"radii COUNT must be >= 1, got {count}")
    if count == 1:
        return [low]
    return [float(r) for r in np.logspace(math.log10(low), math.log10(high), count)]


def _parse_angle_term(term: str) -> float:
    match = _ANGLE_TERM.match(term)
    if match is None:
        raise DomainError(f"cannot parse angle term {term!r}")
    try:
        if match.group("number") is not None:
            return float(match.group("number"))
        divisor = match.group("divisor")
        return math.pi / float(divisor) if divisor else math.pi
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse angle term {term!r}") from exc


def parse_angle(value: str, kappa: Optional[float] = None) -> float:
    """Angle in radians: "1.2", "pi/2", "kappa", "kappa+0.3" or "kappa-0.01"."""
    text = value.strip().lower().replace(" ", "")
    if not text:
        raise DomainError("angle is empty")
    if not text.startswith("kappa"):
        return _parse_angle_term(text)
    if kappa is None:
        raise DomainError(f"angle {value!r} refers to kappa, which is not known here")
    rest = text[len("kappa"):]
    if not rest:
        return kappa
    if rest[0] not in "+-":
        raise DomainError(f"cannot parse angle {value!r}")
    offset = _parse_angle_term(rest[1:])
    return kappa + offset if rest[0] == "+" else kappa - offset
