"""Grid geometry helpers: 8-direction codes, angle arithmetic, Bresenham lines.

Coordinate conventions used across the package:

* pixel coordinates are (x, y) with x = column and y = row (y grows downward),
* angles are in degrees, measured mathematically (x right, y up), so the
  image-space step for an angle a is (cos a, -sin a).
"""
from __future__ import annotations

import math

# Unit steps in image coordinates for the 8 direction codes.
# Code 0 = east, codes increase counterclockwise (1 = NE, 2 = N, ... 7 = SE).
DIR8 = ((1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1))

# Walk length of one move, indexed by code (diagonals weigh sqrt(2)).
STEP_LENGTH = tuple(math.hypot(dx, dy) for dx, dy in DIR8)


def code_of_step(dx: int, dy: int) -> int:
    """Direction code for a unit step in image coordinates."""
    for code, step in enumerate(DIR8):
        if step == (dx, dy):
            return code
    raise ValueError(f"not an 8-neighbour step: ({dx}, {dy})")


def angle_of_step(dx: float, dy: float) -> float:
    """Math-convention angle in [0, 360) of an image-space vector."""
    a = math.degrees(math.atan2(-dy, dx))
    return a % 360.0


def nearest_code(angle_deg: float) -> int:
    """Direction code whose axis is closest to the given angle."""
    return int(round(angle_deg / 45.0)) % 8


def angle_diff(a: float, b: float) -> float:
    """Unsigned angular difference in [0, 180]."""
    d = abs(a - b) % 360.0
    return 360.0 - d if d > 180.0 else d


def bresenham_line(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    """Pixels of the discrete segment from (x0, y0) to (x1, y1), inclusive."""
    points = []
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx - dy
    x, y = x0, y0
    while True:
        points.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy
    return points


def thickening_offset(x0: int, y0: int, x1: int, y1: int) -> tuple[int, int]:
    """Pixel offset that widens a segment to 2 px perpendicular to its axis.

    Horizontal-ish segments are widened vertically and vice versa, which is
    enough to break 8-connectivity across the drawn line.
    """
    if abs(x1 - x0) >= abs(y1 - y0):
        return (0, 1)
    return (1, 0)
