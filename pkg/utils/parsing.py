"""
Parsing of command-line grids.

"2,3,5"      explicit list
"2..10"      integers 2 through 10
"0.01..5:50" 50 evenly spaced points from 0.01 to 5
"0.01..5"    DEFAULT_RANGE_POINTS evenly spaced points (real grids only)
"""
from typing import List
import logging

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_RANGE_POINTS = 100


def parse_int(text: str) -> int:
    """Integer that may be written in float notation ("1e6")."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"Not an integer: '{text}'") from None
    if not value.is_integer():
        raise ValueError(f"Not an integer: '{text}'")
    return int(value)


def _split_range(text: str):
    lo, _, rest = text.partition('..')
    hi, _, count = rest.partition(':')
    return lo, hi, count


def parse_int_grid(text: str) -> List[int]:
    """
    Parse an integer grid: comma list, "lo..hi", or a mix ("2..10,100,1e4").

    Raises:
        ValueError: On malformed entries or an empty grid
    """
    values: List[int] = []
    for part in text.split(','):
        part = part.strip()
        if not part:
            continue
        if '..' in part:
            lo, hi, count = _split_range(part)
            if count:
                raise ValueError(f"Integer ranges take no point count: '{part}'")
            lo, hi = parse_int(lo), parse_int(hi)
            if hi < lo:
                raise ValueError(f"Empty range '{part}'")
            values.extend(range(lo, hi + 1))
        else:
            values.append(parse_int(part))
    if not values:
        raise ValueError(f"Empty grid '{text}'")
    return values


def parse_float_grid(text: str) -> List[float]:
    """
    Parse a real grid: comma list, "lo..hi:k" (k linear points) or "lo..hi"
    (DEFAULT_RANGE_POINTS linear points).
    """
    values: List[float] = []
    for part in text.split(','):
        part = part.strip()
        if not part:
            continue
        if '..' not in part:
            try:
                values.append(float(part))
            except ValueError:
                raise ValueError(f"Not a number: '{part}'") from None
            continue
        lo, hi, count = _split_range(part)
        try:
            lo, hi = float(lo), float(hi)
        except ValueError:
            raise ValueError(f"Malformed range '{part}'") from None
        if hi < lo:
            raise ValueError(f"Empty range '{part}'")
        k = parse_int(count) if count else DEFAULT_RANGE_POINTS
        if k < 1:
            raise ValueError(f"Point count must be positive in '{part}'")
        values.extend(np.linspace(lo, hi, k).tolist())
    if not values:
        raise ValueError(f"Empty grid '{text}'")
    return values
