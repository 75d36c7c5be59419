"""Constant-bit-rate source/sink flows.

Each flow sends fixed-size packets at a fixed rate from a random start
inside the start window until the end of the run. Packets carry
(flow id, seq, origin timestamp) so sinks can suppress duplicates and
account latency; there is no payload content.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import RngStream


@dataclass(frozen=True)
class FlowSpec:
    flow_id: int
    src: int
    dst: int
    pkt_bytes: int = 64
    pkts_per_s: float = 4.0
    start_at: float = 50.0
    stop_at: float = 200.0

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("flow endpoints must differ")
        if self.pkt_bytes <= 0 or self.pkts_per_s <= 0:
            raise ValueError("packet size and rate must be positive")

    @property
    def rate_bps(self) -> float:
        return 8.0 * self.pkt_bytes * self.pkts_per_s

    def send_times(self) -> list[float]:
        times = []
        k = 0
        while True:
            t = self.start_at + k / self.pkts_per_s
            if t >= self.stop_at:
                return times
            times.append(t)
            k += 1


@dataclass
class DataPacket:
    flow_id: int
    seq: int
    src: int
    dst: int
    size_bytes: int
    sent_at: float
    ttl: int
    # (seq, hops) of the last route entry this packet was forwarded on,
    # for the loop-freedom audit
    route_tag: tuple[int, int] | None = None


def build_flows(
    n_pairs: int,
    n_nodes: int,
    rng: RngStream,
    pkt_bytes: int = 64,
    pkts_per_s: float = 4.0,
    start_window: tuple[float, float] = (50.0, 51.0),
    stop_at: float = 200.0,
) -> list[FlowSpec]:
    """Draw n_pairs disjoint (src, dst) pairs and i.i.d. uniform start times."""
    if n_pairs < 0:
        raise ValueError("n_pairs must be non-negative")
    if 2 * n_pairs > n_nodes:
        raise ValueError(
            f"need 2*{n_pairs} distinct endpoints but only {n_nodes} nodes"
        )
    endpoints = rng.sample(range(n_nodes), 2 * n_pairs)
    flows = []
    for i in range(n_pairs):
        flows.append(
            FlowSpec(
                flow_id=i,
                src=endpoints[2 * i],
                dst=endpoints[2 * i + 1],
                pkt_bytes=pkt_bytes,
                pkts_per_s=pkts_per_s,
                start_at=rng.uniform(start_window[0], start_window[1]),
                stop_at=stop_at,
            )
        )
    return flows
