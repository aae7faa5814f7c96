"""
Face angles on the command line: decimals ("0.5") or rational multiples of
pi ("pi/6", "2pi/7", "3*pi/10", "pi").
"""

import math
import re
from fractions import Fraction

from tetrageo.exceptions import DomainError

_PI_MULTIPLE = re.compile(
    r"^\s*(?:(?P<num>\d+)\s*\*?\s*)?pi\s*(?:/\s*(?P<den>\d+))?\s*$", re.IGNORECASE
)


def parse_pi_fraction(text: str) -> Fraction | None:
    """The rational multiple of pi written in `text`, or None for a plain number."""
    match = _PI_MULTIPLE.match(text)
    if not match:
        return None
    numerator = int(match.group("num") or 1)
    denominator = int(match.group("den") or 1)
    if denominator == 0:
        raise DomainError(f"zero denominator in angle {text!r}")
    return Fraction(numerator, denominator)


def parse_angle(text: str) -> float:
    multiple = parse_pi_fraction(text)
    if multiple is not None:
        return multiple.numerator * math.pi / multiple.denominator
    try:
        value = float(text)
    except ValueError:
        raise DomainError(f"Unsupported angle: {text}")
    if not math.isfinite(value):
        raise DomainError(f"Unsupported angle: {text}")
    return value
