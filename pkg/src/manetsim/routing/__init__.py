"""Three MANET routing protocols behind one uniform interface.

A protocol instance lives on one node and talks to the world through its
host object (the network layer, or a test harness), which provides:

    node_id                     -> int
    now()                       -> float
    schedule_in(delay, fn)      -> schedule a protocol timer
    rng                         -> RngStream for timer jitter
    broadcast_control(msg)      -> one-hop broadcast of a control message
    unicast_control(msg, nh)    -> one-hop unicast
    forward_data(packet)        -> (re)inject a buffered data packet
    drop_data(packet, reason)   -> account a dropped data packet

The engine delivers every received frame via on_control / on_neighbor_heard;
the data plane asks route_lookup for a next hop and falls back to
handle_no_route.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import messages
from .messages import ControlMsg

PROTOCOLS = ("aodv", "dsdv", "olsr")


@dataclass
class RouteEntry:
    dest: int
    next_hop: int
    metric: int  # hop count; self entry has metric 0
    seq: int = 0
    expires_at: float = float("inf")
    valid: bool = True
    precursors: set[int] = field(default_factory=set)


class RoutingProtocol:
    """Common surface; concrete protocols override everything interesting."""

    name = "base"

    def __init__(self, host):
        self.host = host
        self.stats: dict[str, int] = {}

    def _count(self, key: str, n: int = 1) -> None:
        self.stats[key] = self.stats.get(key, 0) + n

    def start(self) -> None:
        raise NotImplementedError

    def on_control(self, msg: ControlMsg, sender: int) -> None:
        raise NotImplementedError

    def on_neighbor_heard(self, sender: int) -> None:
        """Any frame heard from a one-hop neighbor (link sensing)."""

    def route_lookup(self, dest: int, now: float) -> int | None:
        raise NotImplementedError

    def handle_no_route(self, packet) -> bool:
        """Return True if the protocol took ownership of the packet."""
        return False

    def on_data_forwarded(self, dest: int) -> None:
        """Hook for protocols that refresh routes on use."""

    def route_metric_tag(self, dest: int) -> tuple[int, int] | None:
        """(seq, hops) of the active route, for loop-freedom auditing."""
        return None


def create_protocol(name: str, host, **params) -> RoutingProtocol:
    from .aodv import Aodv, AodvParams
    from .dsdv import Dsdv, DsdvParams
    from .olsr import Olsr, OlsrParams

    if name == "aodv":
        return Aodv(host, AodvParams(**params))
    if name == "dsdv":
        return Dsdv(host, DsdvParams(**params))
    if name == "olsr":
        return Olsr(host, OlsrParams(**params))
    raise ValueError(f"unknown routing protocol: {name!r}")


__all__ = [
    "PROTOCOLS",
    "RouteEntry",
    "RoutingProtocol",
    "create_protocol",
    "messages",
]
