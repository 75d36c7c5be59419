"""Proactive destination-sequenced distance-vector routing.

Every node periodically broadcasts its full table. Sequence numbers
originate at the destination and are even; a route marked broken carries
the next (odd) number, so freshness always dominates and ties break on
metric. The periodic full dumps double as neighbor beacons.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import RoutingProtocol
from .messages import DsdvUpdate

INF_METRIC = None  # advertised metric for broken routes


@dataclass(frozen=True)
class DsdvParams:
    update_interval_s: float = 15.0
    neighbor_loss_intervals: float = 2.0
    jitter_frac: float = 0.05
    forward_jitter_s: float = 0.01  # desynchronizes triggered updates
    # None staggers nodes randomly (collision avoidance on a real medium);
    # a fixed value aligns all update rounds, which removes the transient
    # fresher-but-longer routes that asynchronous rounds produce
    initial_phase_s: float | None = None


@dataclass
class _Entry:
    next_hop: int
    metric: int | None  # None = broken
    seq: int


class Dsdv(RoutingProtocol):
    name = "dsdv"

    def __init__(self, host, params: DsdvParams = DsdvParams()):
        super().__init__(host)
        self.p = params
        self.own_seq = 0
        self.table: dict[int, _Entry] = {
            host.node_id: _Entry(host.node_id, 0, 0)
        }
        self.neighbors: dict[int, float] = {}

    def start(self) -> None:
        phase = self.p.initial_phase_s
        if phase is None:
            phase = self.host.rng.uniform(0.0, self.p.update_interval_s)
        self.host.schedule_in(phase, self._update_tick)

    # -- periodic full dump -------------------------------------------------

    def _update_tick(self) -> None:
        self._purge_neighbors()
        self.own_seq += 2
        me = self.host.node_id
        self.table[me].seq = self.own_seq
        self._broadcast_table()
        jitter = self.host.rng.uniform(-self.p.jitter_frac, self.p.jitter_frac)
        self.host.schedule_in(
            self.p.update_interval_s * (1.0 + jitter), self._update_tick
        )

    def _broadcast_table(self, only: list[int] | None = None) -> None:
        dests = sorted(self.table) if only is None else sorted(only)
        entries = tuple((d, self.table[d].seq, self.table[d].metric) for d in dests)
        self.host.broadcast_control(DsdvUpdate(self.host.node_id, entries))
        self._count("update_tx")

    def _purge_neighbors(self) -> None:
        now = self.host.now()
        horizon = now - self.p.neighbor_loss_intervals * self.p.update_interval_s
        lost = [nb for nb, heard in self.neighbors.items() if heard < horizon]
        broken: list[int] = []
        for nb in lost:
            del self.neighbors[nb]
            for dest, entry in self.table.items():
                if entry.metric is not None and entry.next_hop == nb and dest != self.host.node_id:
                    entry.metric = INF_METRIC
                    entry.seq += 1  # odd: marked broken by a non-destination
                    broken.append(dest)
        if broken:
            if self.p.forward_jitter_s > 0:
                self.host.schedule_in(
                    self.host.rng.uniform(0.0, self.p.forward_jitter_s),
                    lambda: self._broadcast_table(only=[d for d in broken if d in self.table]),
                )
            else:
                self._broadcast_table(only=broken)  # triggered update

    # -- merge rule ----------------------------------------------------------

    def on_neighbor_heard(self, sender: int) -> None:
        self.neighbors[sender] = self.host.now()

    def on_control(self, msg, sender: int) -> None:
        if not isinstance(msg, DsdvUpdate):
            return
        me = self.host.node_id
        for dest, seq, metric in msg.entries:
            if dest == me:
                continue  # own entry is authoritative
            new_metric = None if metric is None else metric + 1
            entry = self.table.get(dest)
            if entry is None:
                self.table[dest] = _Entry(sender, new_metric, seq)
                continue
            if seq > entry.seq:
                entry.next_hop, entry.metric, entry.seq = sender, new_metric, seq
            elif seq == entry.seq and new_metric is not None:
                if entry.metric is None or new_metric < entry.metric:
                    entry.next_hop, entry.metric = sender, new_metric

    # -- lookups ---------------------------------------------------------------

    def route_lookup(self, dest: int, now: float) -> int | None:
        me = self.host.node_id
        if dest == me:
            return me
        entry = self.table.get(dest)
        if entry is not None and entry.metric is not None:
            return entry.next_hop
        return None

    def table_snapshot(self) -> dict[int, tuple[int, int | None, int]]:
        return {d: (e.next_hop, e.metric, e.seq) for d, e in self.table.items()}
