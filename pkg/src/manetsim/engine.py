"""Deterministic discrete-event core: clock, event queue, seeded RNG streams.

Time is continuous (float seconds, no tick). Events fire in (fire_at, seq)
order where seq is the insertion counter, so equal-time events run in the
order they were scheduled. Every random draw comes from a named stream
derived from (master seed, stream id); streams never share state, which
keeps e.g. the mobility trajectory identical when only the channel model
changes.
"""

from __future__ import annotations

import heapq
import math
import random
from typing import Callable


class SchedulingError(ValueError):
    """Raised when an event is scheduled before the current time."""


class RngStream:
    """One named random stream, reproducible per (seed, stream_id, draw index)."""

    def __init__(self, master_seed: int, stream_id: str):
        self.stream_id = stream_id
        # Seeding with a string hashes it (sha512) into the generator state,
        # so distinct stream ids give independent, platform-stable streams.
        self._rng = random.Random(f"{master_seed}/{stream_id}")

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform draw in [lo, hi); lo == hi returns lo."""
        if lo > hi:
            raise ValueError(f"uniform bounds reversed: lo={lo} > hi={hi}")
        if lo == hi:
            return lo
        v = lo + (hi - lo) * self._rng.random()
        # float rounding can land exactly on hi; keep the interval half-open
        return v if v < hi else math.nextafter(hi, lo)

    def random(self) -> float:
        return self._rng.random()

    def gauss(self, mu: float, sigma: float) -> float:
        return self._rng.gauss(mu, sigma)

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def sample(self, population, k: int):
        return self._rng.sample(population, k)

    def shuffle(self, seq) -> None:
        self._rng.shuffle(seq)


def derived_normal(master_seed: int, tag: str, sigma: float) -> float:
    """Normal(0, sigma) value that is a pure function of (seed, tag).

    Used for shadow fading held per (link, waypoint-leg): the value must not
    depend on the order links happen to be queried in, so it cannot come
    from a shared sequential stream.
    """
    if sigma <= 0.0:
        return 0.0
    return random.Random(f"{master_seed}/shadow/{tag}").gauss(0.0, sigma)


class Simulator:
    """Single-threaded event loop owning the simulation clock.

    Events are (fire_at, seq, action) with action a zero-argument callable;
    (fire_at, seq) is a strict total order over all scheduled events.
    """

    def __init__(self, seed: int = 0, trace: bool = False):
        self.seed = seed
        self._now = 0.0
        self._seq = 0
        self._queue: list[tuple[float, int, Callable[[], None]]] = []
        self._streams: dict[str, RngStream] = {}
        self.trace: list[tuple[float, int, str]] | None = [] if trace else None

    def now(self) -> float:
        return self._now

    def stream(self, stream_id: str) -> RngStream:
        s = self._streams.get(stream_id)
        if s is None:
            s = self._streams[stream_id] = RngStream(self.seed, stream_id)
        return s

    def schedule(self, fire_at: float, action: Callable[[], None], label: str = "") -> None:
        if fire_at < self._now:
            raise SchedulingError(
                f"cannot schedule at t={fire_at} before now={self._now}"
            )
        heapq.heappush(self._queue, (fire_at, self._seq, action))
        if self.trace is not None and label:
            self.trace.append((fire_at, self._seq, "sched " + label))
        self._seq += 1

    def schedule_in(self, delay: float, action: Callable[[], None], label: str = "") -> None:
        self.schedule(self._now + delay, action, label)

    def run_until(self, t_end: float) -> int:
        """Execute all events with fire_at <= t_end; leaves now() == t_end."""
        executed = 0
        while self._queue and self._queue[0][0] <= t_end:
            fire_at, seq, action = heapq.heappop(self._queue)
            self._now = fire_at
            if self.trace is not None:
                self.trace.append((fire_at, seq, "fire"))
            action()
            executed += 1
        self._now = t_end
        return executed

    def run_all(self) -> int:
        executed = 0
        while self._queue:
            fire_at, _, action = heapq.heappop(self._queue)
            self._now = fire_at
            action()
            executed += 1
        return executed

    @property
    def pending(self) -> int:
        return len(self._queue)
