# conway_circles/utils/numbers.py
"""
Parsing of numeric command-line values and fixed-precision number formatting.
"""

import math
import re
from typing import List, Tuple

_SEPARATOR = re.compile(r'[,\s]+')
_POINT_SEPARATOR = re.compile(r'\s*;\s*')

DEFAULT_DIGITS = 9


def parse_floats(raw: str) -> List[float]:
    """
    Parse "3,4,5" (commas and/or whitespace) into floats.
    Raises ValueError on empty input or non-finite values.
    """
    tokens = [tok for tok in _SEPARATOR.split((raw or '').strip()) if tok]
    if not tokens:
        raise ValueError('expected a comma-separated list of numbers')
    values = [float(tok) for tok in tokens]
    if any(not math.isfinite(v) for v in values):
        raise ValueError('numbers must be finite')
    return values


def parse_points(raw: str) -> List[Tuple[float, float]]:
    """Parse "0,0; 4,0; 0,3" into (x, y) pairs."""
    points = []
    for chunk in _POINT_SEPARATOR.split((raw or '').strip()):
        if not chunk:
            continue
        values = parse_floats(chunk)
        if len(values) != 2:
            raise ValueError(f"point '{chunk}' must have exactly two coordinates")
        points.append((values[0], values[1]))
    if not points:
        raise ValueError('expected points as "x,y; x,y; ..."')
    return points


def fmt(value: float, digits: int = DEFAULT_DIGITS) -> str:
    """Fixed significant-digit formatting; never emits '-0'."""
    text = f'{value:.{digits}g}'
    if text in ('-0', '-0.0'):
        return '0'
    return text
