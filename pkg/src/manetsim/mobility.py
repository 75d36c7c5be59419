"""Random-waypoint motion inside a rectangular region.

Positions are computed lazily from the current leg (no per-tick updates),
so trajectories are exact linear interpolations and a pure function of
(seed, node id): each node draws waypoints from its own RNG stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import RngStream


@dataclass(frozen=True)
class Region:
    width: float = 1500.0
    height: float = 1500.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("region dimensions must be positive")

    def contains(self, p: tuple[float, float]) -> bool:
        return 0.0 <= p[0] <= self.width and 0.0 <= p[1] <= self.height


@dataclass(frozen=True)
class WaypointLeg:
    origin: tuple[float, float]
    target: tuple[float, float]
    speed: float
    depart_at: float

    @property
    def length(self) -> float:
        return distance(self.origin, self.target)

    @property
    def arrival_at(self) -> float:
        return self.depart_at + self.length / self.speed


def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def next_leg(
    current: tuple[float, float],
    rng: RngStream,
    region: Region,
    speed: float,
    now: float,
) -> WaypointLeg:
    """Draw the next waypoint uniformly over the region and head there."""
    if not region.contains(current):
        raise ValueError(f"current position {current} outside region")
    if speed <= 0:
        raise ValueError("speed must be positive")
    while True:
        target = (rng.uniform(0.0, region.width), rng.uniform(0.0, region.height))
        if target != current:  # degenerate draw: resample
            return WaypointLeg(origin=current, target=target, speed=speed, depart_at=now)


def position_at(leg: WaypointLeg, t: float) -> tuple[float, float]:
    """Position on the leg at time t; t must lie within the leg's interval."""
    arrival = leg.arrival_at
    if t < leg.depart_at or t > arrival:
        raise ValueError(
            f"t={t} outside leg interval [{leg.depart_at}, {arrival}]"
        )
    length = leg.length
    if length == 0.0:
        return leg.origin
    frac = (t - leg.depart_at) * leg.speed / length
    return (
        leg.origin[0] + frac * (leg.target[0] - leg.origin[0]),
        leg.origin[1] + frac * (leg.target[1] - leg.origin[1]),
    )


class RandomWaypoint:
    """Per-node waypoint walker; pause_s = 0 means turn instantly at waypoints.

    speed = 0 freezes the node at its start position (used for static
    topologies in tests).
    """

    def __init__(
        self,
        rng: RngStream,
        region: Region,
        speed: float,
        pause_s: float = 0.0,
        start: tuple[float, float] | None = None,
    ):
        self._rng = rng
        self.region = region
        self.speed = speed
        self.pause_s = pause_s
        if start is None:
            start = (rng.uniform(0.0, region.width), rng.uniform(0.0, region.height))
        if not region.contains(start):
            raise ValueError(f"start position {start} outside region")
        self._pos = start
        self._leg: WaypointLeg | None = None
        self._pause_until = 0.0
        self.legs_started = 0  # leg counter, tags shadow-fading samples
        self.history: list[WaypointLeg] = []  # every leg taken, for trace checks

    def position(self, t: float) -> tuple[float, float]:
        if self.speed == 0.0:
            return self._pos
        while True:
            if self._leg is None:
                if t < self._pause_until:
                    return self._pos
                self._leg = next_leg(self._pos, self._rng, self.region, self.speed, self._pause_until)
                self.legs_started += 1
                self.history.append(self._leg)
            arrival = self._leg.arrival_at
            if t <= arrival:
                return position_at(self._leg, max(t, self._leg.depart_at))
            self._pos = self._leg.target
            self._pause_until = arrival + self.pause_s
            self._leg = None

    @property
    def current_leg(self) -> WaypointLeg | None:
        return self._leg
