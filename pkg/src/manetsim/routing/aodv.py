"""Reactive on-demand distance-vector routing.

Route discovery floods a route request with duplicate suppression on
(origin, rreq id); reverse routes are installed along the flood and the
destination (or an intermediate node with a fresh-enough route) unicasts
a reply back, installing the forward route. Destination sequence numbers
only ever grow, and a route is replaced only by a fresher sequence number
or an equal one with fewer hops, which is what keeps routing loop-free.

Omitted relative to the defining document: gratuitous replies, local
repair, expanding-ring search (full-TTL flood with dedup instead).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import RouteEntry, RoutingProtocol
from .messages import AodvHello, Rerr, Rrep, Rreq


@dataclass(frozen=True)
class AodvParams:
    hello_interval_s: float = 1.0
    allowed_hello_loss: int = 2
    active_route_timeout_s: float = 3.0
    rreq_retries: int = 2
    net_traversal_time_s: float = 2.8
    path_discovery_time_s: float = 5.6
    buffer_packets: int = 16
    max_backoff_s: float = 11.2
    jitter_frac: float = 0.1
    # flood/reply forwarding is desynchronized by a small random delay so
    # the slotless medium does not collide every forwarder at once; the
    # window must be wide enough that a reply can thread through the
    # rebroadcast storm of a dense neighborhood
    forward_jitter_s: float = 0.05


@dataclass
class _Pending:
    retries_left: int
    buffer: deque
    attempt: int = 0


class Aodv(RoutingProtocol):
    name = "aodv"

    def __init__(self, host, params: AodvParams = AodvParams()):
        super().__init__(host)
        self.p = params
        self.seq = 0
        self.rreq_id = 0
        self.routes: dict[int, RouteEntry] = {}
        self.neighbors: dict[int, float] = {}  # id -> last heard
        self.seen_rreqs: dict[tuple[int, int], float] = {}  # (origin, id) -> expiry
        self.pending: dict[int, _Pending] = {}  # dest -> discovery in progress
        self.backoff_until: dict[int, float] = {}

    # -- timers ---------------------------------------------------------

    def start(self) -> None:
        self.host.schedule_in(
            self.host.rng.uniform(0.0, self.p.hello_interval_s), self._hello_tick
        )

    def _hello_tick(self) -> None:
        self._purge_neighbors()
        self.host.broadcast_control(AodvHello(self.host.node_id))
        self._count("hello_tx")
        jitter = self.host.rng.uniform(-self.p.jitter_frac, self.p.jitter_frac)
        self.host.schedule_in(self.p.hello_interval_s * (1.0 + jitter), self._hello_tick)

    def _purge_neighbors(self) -> None:
        now = self.host.now()
        horizon = now - self.p.allowed_hello_loss * self.p.hello_interval_s
        lost = [nb for nb, heard in self.neighbors.items() if heard < horizon]
        for nb in lost:
            del self.neighbors[nb]
            self._link_break(nb)

    # -- link sensing ----------------------------------------------------

    def on_neighbor_heard(self, sender: int) -> None:
        self.neighbors[sender] = self.host.now()

    def _jittered(self, send) -> None:
        if self.p.forward_jitter_s > 0:
            self.host.schedule_in(self.host.rng.uniform(0.0, self.p.forward_jitter_s), send)
        else:
            send()

    def _link_break(self, lost: int) -> None:
        unreachable = []
        for entry in self.routes.values():
            if entry.valid and entry.next_hop == lost:
                entry.valid = False
                entry.seq += 1
                unreachable.append((entry.dest, entry.seq))
        if unreachable:
            msg = Rerr(tuple(unreachable))
            self._jittered(lambda: self.host.broadcast_control(msg))
            self._count("rerr_tx")

    # -- message handling --------------------------------------------------

    def on_control(self, msg, sender: int) -> None:
        if isinstance(msg, Rreq):
            self._on_rreq(msg, sender)
        elif isinstance(msg, Rrep):
            self._on_rrep(msg, sender)
        elif isinstance(msg, Rerr):
            self._on_rerr(msg, sender)
        # hellos carry no state beyond the link sensing done for every frame

    def _on_rreq(self, msg: Rreq, sender: int) -> None:
        now = self.host.now()
        key = (msg.origin, msg.rreq_id)
        expiry = self.seen_rreqs.get(key)
        if expiry is not None and expiry > now:
            return  # duplicate flood copy
        self.seen_rreqs[key] = now + self.p.path_discovery_time_s
        if len(self.seen_rreqs) > 4096:
            self.seen_rreqs = {k: v for k, v in self.seen_rreqs.items() if v > now}
        me = self.host.node_id
        if msg.origin == me:
            return
        hops = msg.hop_count + 1
        self._maybe_update_route(msg.origin, sender, hops, msg.origin_seq)
        if msg.dest == me:
            want = msg.dest_seq_known or 0
            self.seq = max(self.seq + 1, want)
            reply = Rrep(me, self.seq, 0, msg.origin)
            self._jittered(lambda: self.host.unicast_control(reply, sender))
            self._count("rrep_tx")
            return
        entry = self.routes.get(msg.dest)
        if (
            entry is not None
            and entry.valid
            and entry.expires_at > now
            and (msg.dest_seq_known is None or entry.seq >= msg.dest_seq_known)
        ):
            # fresh-enough intermediate route: answer on the destination's behalf
            entry.precursors.add(sender)
            reply = Rrep(msg.dest, entry.seq, entry.metric, msg.origin)
            self._jittered(lambda: self.host.unicast_control(reply, sender))
            self._count("rrep_tx")
            return
        fwd = Rreq(msg.origin, msg.origin_seq, msg.rreq_id, msg.dest, msg.dest_seq_known, hops)
        self._jittered(lambda: self.host.broadcast_control(fwd))
        self._count("rreq_tx")

    def _on_rrep(self, msg: Rrep, sender: int) -> None:
        hops = msg.hop_count + 1
        installed = self._maybe_update_route(msg.dest, sender, hops, msg.dest_seq)
        me = self.host.node_id
        if msg.origin == me:
            pend = self.pending.pop(msg.dest, None)
            self.backoff_until.pop(msg.dest, None)
            if pend is not None:
                for packet in pend.buffer:
                    self.host.forward_data(packet)
            return
        reverse = self.routes.get(msg.origin)
        if reverse is None or not reverse.valid:
            return  # reply path evaporated; origin will retry
        if installed:
            self.routes[msg.dest].precursors.add(reverse.next_hop)
        fwd = Rrep(msg.dest, msg.dest_seq, hops, msg.origin)
        next_hop = reverse.next_hop
        self._jittered(lambda: self.host.unicast_control(fwd, next_hop))
        self._count("rrep_tx")

    def _on_rerr(self, msg: Rerr, sender: int) -> None:
        propagate = []
        for dest, seq in msg.unreachable:
            entry = self.routes.get(dest)
            if entry is not None and entry.valid and entry.next_hop == sender:
                entry.valid = False
                entry.seq = max(entry.seq, seq)
                propagate.append((dest, entry.seq))
        if propagate:
            fwd = Rerr(tuple(propagate))
            self._jittered(lambda: self.host.broadcast_control(fwd))
            self._count("rerr_tx")

    # -- routing table ----------------------------------------------------

    def _maybe_update_route(self, dest: int, next_hop: int, hops: int, seq: int) -> bool:
        entry = self.routes.get(dest)
        if entry is not None:
            if seq < entry.seq:
                return False
            if seq == entry.seq and entry.valid and hops >= entry.metric:
                return False
        expires = self.host.now() + self.p.active_route_timeout_s
        if entry is None:
            self.routes[dest] = RouteEntry(dest, next_hop, hops, seq, expires)
        else:
            entry.next_hop = next_hop
            entry.metric = hops
            entry.seq = seq
            entry.expires_at = expires
            entry.valid = True
        return True

    def route_lookup(self, dest: int, now: float) -> int | None:
        me = self.host.node_id
        if dest == me:
            return me
        entry = self.routes.get(dest)
        if entry is not None and entry.valid and entry.expires_at > now:
            return entry.next_hop
        return None

    def route_metric_tag(self, dest: int) -> tuple[int, int] | None:
        entry = self.routes.get(dest)
        if entry is not None and entry.valid:
            return (entry.seq, entry.metric)
        return None

    def on_data_forwarded(self, dest: int) -> None:
        now = self.host.now()
        entry = self.routes.get(dest)
        if entry is not None and entry.valid:
            entry.expires_at = max(entry.expires_at, now + self.p.active_route_timeout_s)
            hop = self.routes.get(entry.next_hop)
            if hop is not None and hop.valid:
                hop.expires_at = max(hop.expires_at, now + self.p.active_route_timeout_s)

    # -- discovery ---------------------------------------------------------

    def handle_no_route(self, packet) -> bool:
        dest = packet.dst
        now = self.host.now()
        pend = self.pending.get(dest)
        if pend is not None:
            if len(pend.buffer) >= self.p.buffer_packets:
                self.host.drop_data(packet, "buffer_overflow")
            else:
                pend.buffer.append(packet)
            return True
        if self.backoff_until.get(dest, 0.0) > now:
            self.host.drop_data(packet, "no_route")
            return True
        pend = _Pending(retries_left=self.p.rreq_retries, buffer=deque([packet]))
        self.pending[dest] = pend
        self._send_rreq(dest, pend)
        return True

    def _send_rreq(self, dest: int, pend: _Pending) -> None:
        self.seq += 1
        self.rreq_id += 1
        entry = self.routes.get(dest)
        known = entry.seq if entry is not None else None
        me = self.host.node_id
        self.seen_rreqs[(me, self.rreq_id)] = self.host.now() + self.p.path_discovery_time_s
        self.host.broadcast_control(Rreq(me, self.seq, self.rreq_id, dest, known, 0))
        self._count("rreq_tx")
        pend.attempt += 1
        self.host.schedule_in(self.p.net_traversal_time_s, lambda: self._rreq_timeout(dest))

    def _rreq_timeout(self, dest: int) -> None:
        pend = self.pending.get(dest)
        if pend is None:
            return  # answered in time
        if self.route_lookup(dest, self.host.now()) is not None:
            self.pending.pop(dest)
            for packet in pend.buffer:
                self.host.forward_data(packet)
            return
        if pend.retries_left > 0:
            pend.retries_left -= 1
            self._send_rreq(dest, pend)
            return
        self.pending.pop(dest)
        backoff = min(
            self.p.net_traversal_time_s * (2 ** (pend.attempt - 1)), self.p.max_backoff_s
        )
        self.backoff_until[dest] = self.host.now() + backoff
        for packet in pend.buffer:
            self.host.drop_data(packet, "discovery_timeout")
