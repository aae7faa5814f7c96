import math

import numpy as np

from tetrageo.exceptions import DomainError


def parse_geom(text: str) -> list[float]:
    """START:STOP:COUNT, geometrically spaced and inclusive of both ends."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"geometric grid {text!r} must read START:STOP:COUNT")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"geometric grid {text!r} must read START:STOP:COUNT")
    if not (0 < start <= stop) or count < 1:
        raise DomainError(f"geometric grid {text!r} needs 0 < START <= STOP and COUNT >= 1")
    return [float(value) for value in np.geomspace(start, stop, count)]


def parse_lengths(text: str | None = None, *, geom: str | None = None) -> list[float]:
    lengths: list[float] = []
    if text:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                value = float(part)
            except ValueError:
                raise DomainError(f"Unsupported length: {part}")
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"length {part} must be positive")
            lengths.append(value)
    if geom:
        lengths.extend(parse_geom(geom))
    if not lengths:
        raise DomainError("no lengths given")
    return lengths
