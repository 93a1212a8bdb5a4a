import math
from dataclasses import dataclass

import numpy as np

from app.errors import ConfigurationError

# Squared-distance slack under which two segments count as equally near.
_TIE_EPS = 1e-12


@dataclass(frozen=True, slots=True)
class FrenetCoord:
    s: float
    d: float
    tangent_heading: float


class Track:
    """Centerline polyline with a constant half-width.

    Positive lateral offsets lie left of the direction of travel. A closed
    track connects its last point back to the first.
    """

    def __init__(self, centerline, half_width: float, closed: bool = False):
        points = np.asarray(centerline, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != 2 or len(points) < 2:
            raise ConfigurationError("track needs at least 2 centerline points of (x, y)")
        if not half_width > 0:
            raise ConfigurationError(f"track half_width must be positive, got {half_width}")

        ends = np.roll(points, -1, axis=0) if closed else points[1:]
        starts = points if closed else points[:-1]
        seg = ends - starts
        lengths = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(lengths == 0.0):
            raise ConfigurationError("consecutive centerline points must be distinct")

        self.points = points
        self.half_width = float(half_width)
        self.closed = bool(closed)
        self._starts = starts
        self._seg = seg
        self._seg_len = lengths
        self._seg_len2 = lengths * lengths
        self._cum = np.concatenate([[0.0], np.cumsum(lengths)])
        self._headings = np.arctan2(seg[:, 1], seg[:, 0])
        self.length = float(self._cum[-1])

    @property
    def n_segments(self) -> int:
        return len(self._seg)

    def project(self, point) -> FrenetCoord:
        px, py = float(point[0]), float(point[1])
        rel_x = px - self._starts[:, 0]
        rel_y = py - self._starts[:, 1]
        t = (rel_x * self._seg[:, 0] + rel_y * self._seg[:, 1]) / self._seg_len2
        t = np.clip(t, 0.0, 1.0)
        off_x = rel_x - t * self._seg[:, 0]
        off_y = rel_y - t * self._seg[:, 1]
        dist2 = off_x * off_x + off_y * off_y

        i = int(np.flatnonzero(dist2 <= dist2.min() + _TIE_EPS)[0])
        cross = self._seg[i, 0] * rel_y[i] - self._seg[i, 1] * rel_x[i]
        d = math.copysign(math.sqrt(dist2[i]), cross) if cross != 0.0 else 0.0

        s = float(self._cum[i] + t[i] * self._seg_len[i])
        if self.closed:
            s = math.fmod(s, self.length)
        return FrenetCoord(s=s, d=d, tangent_heading=float(self._headings[i]))

    def pose_at(self, s: float, d: float = 0.0) -> tuple[np.ndarray, float]:
        """Point at arclength ``s`` shifted ``d`` to the left, and the tangent heading there."""
        if self.closed:
            s = s % self.length
        i = int(np.searchsorted(self._cum, s, side="right")) - 1
        i = min(max(i, 0), self.n_segments - 1)
        t = (s - self._cum[i]) / self._seg_len[i]
        heading = float(self._headings[i])
        base = self._starts[i] + t * self._seg[i]
        normal = np.array([-math.sin(heading), math.cos(heading)])
        return base + d * normal, heading


def project_to_centerline(track: Track, point) -> FrenetCoord:
    return track.project(point)


def is_off_track(frenet: FrenetCoord, track: Track) -> bool:
    return abs(frenet.d) > track.half_width


def straight_track(length: float, half_width: float) -> Track:
    return Track([[0.0, 0.0], [length, 0.0]], half_width, closed=False)


def oval_track(
    straight_length: float = 100.0,
    radius: float = 30.0,
    half_width: float = 6.0,
    spacing: float = 2.0,
) -> Track:
    """Counter-clockwise stadium: lower straight along +x, then the right bend."""
    n_arc = max(2, math.ceil(math.pi * radius / spacing))
    n_straight = max(1, math.ceil(straight_length / spacing))

    lower = [(straight_length * k / n_straight, -radius) for k in range(n_straight)]
    right = [
        (straight_length + radius * math.cos(a), radius * math.sin(a))
        for a in np.linspace(-math.pi / 2, math.pi / 2, n_arc, endpoint=False)
    ]
    upper = [(straight_length - straight_length * k / n_straight, radius) for k in range(n_straight)]
    left = [
        (radius * math.cos(a), radius * math.sin(a))
        for a in np.linspace(math.pi / 2, 3 * math.pi / 2, n_arc, endpoint=False)
    ]
    return Track(lower + right + upper + left, half_width, closed=True)
