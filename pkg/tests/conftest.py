"""Shared test fixtures: an ideal-medium harness for the routing protocols
plus independent graph oracles (BFS distances, exhaustive set cover).

The harness drives real protocol instances over a lossless connectivity
graph with a constant per-hop delay, so protocol logic is isolated from
radio effects and hop counts are exactly comparable to a BFS oracle.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

import pytest

from manetsim.engine import Simulator
from manetsim.routing import create_protocol
from manetsim.traffic import DataPacket


def bfs_distances(adj: dict[int, set[int]], src: int) -> dict[int, int]:
    """Independent shortest-hop oracle."""
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_connected(adj: dict[int, set[int]]) -> bool:
    return len(bfs_distances(adj, next(iter(adj)))) == len(adj)


def random_geometric_graph(rng: random.Random, n: int) -> dict[int, set[int]]:
    """Connected geometric graph on the unit square (radius grows until connected)."""
    pts = [(rng.random(), rng.random()) for _ in range(n)]
    radius = 0.3
    while True:
        adj = {i: set() for i in range(n)}
        r2 = radius * radius
        for i in range(n):
            for j in range(i + 1, n):
                dx, dy = pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]
                if dx * dx + dy * dy <= r2:
                    adj[i].add(j)
                    adj[j].add(i)
        if is_connected(adj):
            return adj
        radius *= 1.3


def minimum_cover_size(one_hop: set[int], covers: dict[int, set[int]], targets: set[int]) -> int:
    """Exhaustive smallest subset of one_hop covering all targets."""
    if not targets:
        return 0
    for k in range(1, len(one_hop) + 1):
        for combo in itertools.combinations(sorted(one_hop), k):
            union = set()
            for nb in combo:
                union |= covers.get(nb, set())
            if targets <= union:
                return k
    raise AssertionError("targets not coverable")


class IdealNode:
    """Protocol host over a lossless graph medium with constant hop delay."""

    def __init__(self, node_id: int, net: "IdealNetwork"):
        self.node_id = node_id
        self.net = net
        self.rng = net.sim.stream(f"protocol/{node_id}")
        self.protocol = None
        self.delivered: list[DataPacket] = []
        self.dropped: list[tuple[DataPacket, str]] = []

    def now(self) -> float:
        return self.net.sim.now()

    def schedule_in(self, delay: float, fn) -> None:
        self.net.sim.schedule_in(delay, fn)

    def broadcast_control(self, msg) -> None:
        self.net.tx_count[type(msg).__name__] = self.net.tx_count.get(type(msg).__name__, 0) + 1
        for nb in sorted(self.net.adj[self.node_id]):
            self.net.deliver_control(msg, self.node_id, nb)

    def unicast_control(self, msg, next_hop: int) -> None:
        self.net.tx_count[type(msg).__name__] = self.net.tx_count.get(type(msg).__name__, 0) + 1
        if next_hop in self.net.adj[self.node_id]:
            self.net.deliver_control(msg, self.node_id, next_hop)

    def forward_data(self, packet: DataPacket) -> None:
        me = self.node_id
        if packet.dst == me:
            self.delivered.append(packet)
            return
        nh = self.protocol.route_lookup(packet.dst, self.now())
        if nh is None:
            if not self.protocol.handle_no_route(packet):
                self.dropped.append((packet, "no_route"))
            return
        if packet.ttl <= 0:
            self.dropped.append((packet, "ttl"))
            return
        packet.ttl -= 1
        self.protocol.on_data_forwarded(packet.dst)
        if nh in self.net.adj[me]:
            target = self.net.nodes[nh]
            self.net.sim.schedule_in(self.net.hop_delay, lambda: target.forward_data(packet))
        else:
            self.dropped.append((packet, "dead_link"))

    def drop_data(self, packet: DataPacket, reason: str) -> None:
        self.dropped.append((packet, reason))


class IdealNetwork:
    def __init__(self, adj: dict[int, set[int]], protocol: str, seed: int = 0, hop_delay: float = 1e-3, **params):
        self.sim = Simulator(seed)
        self.adj = adj
        self.hop_delay = hop_delay
        self.tx_count: dict[str, int] = {}
        self.nodes: dict[int, IdealNode] = {}
        for i in sorted(adj):
            host = IdealNode(i, self)
            host.protocol = create_protocol(protocol, host, **params)
            self.nodes[i] = host

    def deliver_control(self, msg, sender: int, receiver: int) -> None:
        node = self.nodes[receiver]
        self.sim.schedule_in(
            self.hop_delay,
            lambda: (node.protocol.on_neighbor_heard(sender), node.protocol.on_control(msg, sender)),
        )

    def start(self) -> None:
        for node in self.nodes.values():
            node.protocol.start()

    def run_until(self, t: float) -> None:
        self.sim.run_until(t)

    def send_data(self, src: int, dst: int, flow_id: int = 0, seq: int = 0) -> DataPacket:
        packet = DataPacket(flow_id, seq, src, dst, 64, self.sim.now(), ttl=len(self.nodes))
        self.nodes[src].forward_data(packet)
        return packet


# protocol parameter sets that shorten convergence for the static oracles;
# DSDV rounds are phase-aligned so its table metrics are free of the
# transient fresher-but-longer entries asynchronous rounds produce
FAST_OLSR = dict(hello_interval_s=0.5, tc_interval_s=1.25, neighbor_hold_s=1.5,
                 topology_hold_s=3.75, forward_jitter_s=0.0)
FAST_DSDV = dict(update_interval_s=1.0, forward_jitter_s=0.0, jitter_frac=0.0,
                 initial_phase_s=0.5)
QUIET_AODV = dict(hello_interval_s=1000.0, forward_jitter_s=0.0)


@pytest.fixture
def line5() -> dict[int, set[int]]:
    return {0: {1}, 1: {0, 2}, 2: {1, 3}, 3: {2, 4}, 4: {3}}
