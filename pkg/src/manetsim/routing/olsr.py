"""Proactive link-state routing with multipoint relays.

HELLOs establish symmetric links (a link is symmetric once each side has
seen itself listed by the other) and advertise the sender's neighborhood,
which gives every node its two-hop set. Each node picks a multipoint
relay (MPR) set covering all strict two-hop neighbors; topology-control
messages advertise the MPR-selector set and are flooded by MPR nodes
only. Routes are hop-count shortest paths over the advertised topology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import RoutingProtocol
from .messages import LINK_ASYM, LINK_MPR, LINK_SYM, OlsrHello, OlsrTc


@dataclass(frozen=True)
class OlsrParams:
    hello_interval_s: float = 2.0
    tc_interval_s: float = 5.0
    neighbor_hold_s: float = 6.0
    topology_hold_s: float = 15.0
    duplicate_hold_s: float = 30.0
    jitter_frac: float = 0.1
    # TC relaying is desynchronized so MPRs do not all retransmit at once
    forward_jitter_s: float = 0.01


@dataclass
class _Link:
    heard_until: float = 0.0
    sym_until: float = 0.0

    def is_sym(self, now: float) -> bool:
        return self.sym_until > now and self.heard_until > now


@dataclass
class _TopologyTuple:
    selectors: set[int] = field(default_factory=set)
    ansn: int = -1
    until: float = 0.0


def select_mprs(
    one_hop: set[int],
    two_hop_map: dict[int, set[int]],
    self_id: int,
) -> set[int]:
    """Greedy MPR selection covering all strict two-hop neighbors.

    First take neighbors that are the only cover of some two-hop node,
    then repeatedly add the neighbor covering the most still-uncovered
    nodes, ties broken by lower id.
    """
    strict_two: set[int] = set()
    for nb in one_hop:
        strict_two |= two_hop_map.get(nb, set())
    strict_two -= one_hop
    strict_two.discard(self_id)

    covers: dict[int, set[int]] = {
        nb: (two_hop_map.get(nb, set()) & strict_two) for nb in one_hop
    }
    mpr: set[int] = set()
    for node in strict_two:
        sole = [nb for nb in one_hop if node in covers[nb]]
        if len(sole) == 1:
            mpr.add(sole[0])
    uncovered = set(strict_two)
    for nb in mpr:
        uncovered -= covers[nb]
    while uncovered:
        best = min(one_hop - mpr, key=lambda nb: (-len(covers[nb] & uncovered), nb))
        gain = covers[best] & uncovered
        if not gain:
            break  # remaining two-hops unreachable via any neighbor
        mpr.add(best)
        uncovered -= gain
    return mpr


class Olsr(RoutingProtocol):
    name = "olsr"

    def __init__(self, host, params: OlsrParams = OlsrParams()):
        super().__init__(host)
        self.p = params
        self.links: dict[int, _Link] = {}
        self.two_hop: dict[int, tuple[set[int], float]] = {}  # nb -> (its sym nbrs, until)
        self.mpr_set: set[int] = set()
        self.mpr_selectors: dict[int, float] = {}  # nb -> until
        self.topology: dict[int, _TopologyTuple] = {}  # originator -> tuple
        self.forwarded: dict[tuple[int, int], float] = {}
        self.ansn = 0
        self._routes: dict[int, tuple[int, int]] = {}  # dest -> (next_hop, hops)
        self._dirty = True
        self.mpr_recomputations = 0

    def start(self) -> None:
        self.host.schedule_in(
            self.host.rng.uniform(0.0, self.p.hello_interval_s), self._hello_tick
        )
        self.host.schedule_in(
            self.host.rng.uniform(self.p.hello_interval_s, self.p.tc_interval_s),
            self._tc_tick,
        )

    # -- neighbor sensing -----------------------------------------------------

    def _sym_neighbors(self, now: float) -> set[int]:
        return {nb for nb, link in self.links.items() if link.is_sym(now)}

    def _expire(self, now: float) -> None:
        stale = [nb for nb, link in self.links.items() if link.heard_until <= now]
        for nb in stale:
            del self.links[nb]
            self.two_hop.pop(nb, None)
            self._dirty = True
        for nb in [n for n, (_, until) in self.two_hop.items() if until <= now]:
            del self.two_hop[nb]
            self._dirty = True
        for nb in [n for n, until in self.mpr_selectors.items() if until <= now]:
            del self.mpr_selectors[nb]
        for orig in [o for o, t in self.topology.items() if t.until <= now]:
            del self.topology[orig]
            self._dirty = True
        self._recompute_mprs(now)

    def _recompute_mprs(self, now: float) -> None:
        one_hop = self._sym_neighbors(now)
        # select_mprs never mutates the advertised sets and excludes self
        # itself, so the stored sets are passed without copying
        two_map = {
            nb: nbrs
            for nb, (nbrs, until) in self.two_hop.items()
            if nb in one_hop and until > now
        }
        new = select_mprs(one_hop, two_map, self.host.node_id)
        if new != self.mpr_set:
            self.mpr_set = new
        self.mpr_recomputations += 1

    def _hello_tick(self) -> None:
        now = self.host.now()
        self._expire(now)
        links = []
        for nb in sorted(self.links):
            link = self.links[nb]
            if link.heard_until <= now:
                continue
            if link.is_sym(now):
                status = LINK_MPR if nb in self.mpr_set else LINK_SYM
            else:
                status = LINK_ASYM
            links.append((nb, status))
        self.host.broadcast_control(OlsrHello(self.host.node_id, tuple(links)))
        self._count("hello_tx")
        jitter = self.host.rng.uniform(-self.p.jitter_frac, self.p.jitter_frac)
        self.host.schedule_in(self.p.hello_interval_s * (1.0 + jitter), self._hello_tick)

    def _tc_tick(self) -> None:
        now = self.host.now()
        self._expire(now)
        selectors = sorted(nb for nb, until in self.mpr_selectors.items() if until > now)
        if selectors:
            self.ansn += 1
            self.host.broadcast_control(
                OlsrTc(self.host.node_id, self.ansn, tuple(selectors))
            )
            self._count("tc_tx")
        jitter = self.host.rng.uniform(-self.p.jitter_frac, self.p.jitter_frac)
        self.host.schedule_in(self.p.tc_interval_s * (1.0 + jitter), self._tc_tick)

    # -- message handling --------------------------------------------------------

    def on_control(self, msg, sender: int) -> None:
        if isinstance(msg, OlsrHello):
            self._on_hello(msg, sender)
        elif isinstance(msg, OlsrTc):
            self._on_tc(msg, sender)

    def _on_hello(self, msg: OlsrHello, sender: int) -> None:
        now = self.host.now()
        me = self.host.node_id
        link = self.links.setdefault(sender, _Link())
        was_sym = link.is_sym(now)
        link.heard_until = now + self.p.neighbor_hold_s
        listed = {nb: status for nb, status in msg.links}
        if me in listed:
            link.sym_until = now + self.p.neighbor_hold_s
            if listed[me] == LINK_MPR:
                self.mpr_selectors[sender] = now + self.p.neighbor_hold_s
            else:
                self.mpr_selectors.pop(sender, None)
        sender_sym = {
            nb for nb, status in msg.links if status in (LINK_SYM, LINK_MPR) and nb != me
        }
        prev = self.two_hop.get(sender)
        self.two_hop[sender] = (sender_sym, now + self.p.neighbor_hold_s)
        # pure refreshes are common and change nothing downstream
        if was_sym != link.is_sym(now) or prev is None or prev[0] != sender_sym:
            self._recompute_mprs(now)
            self._dirty = True

    def _on_tc(self, msg: OlsrTc, sender: int) -> None:
        now = self.host.now()
        link = self.links.get(sender)
        if link is None or not link.is_sym(now):
            return  # only accept TCs over symmetric links
        tup = self.topology.setdefault(msg.originator, _TopologyTuple())
        if msg.ansn < tup.ansn:
            return  # stale topology information
        if msg.ansn > tup.ansn or set(msg.selectors) != tup.selectors:
            tup.selectors = set(msg.selectors)
            tup.ansn = msg.ansn
            self._dirty = True
        tup.until = now + self.p.topology_hold_s
        key = (msg.originator, msg.ansn)
        if key not in self.forwarded and self.mpr_selectors.get(sender, 0.0) > now:
            self.forwarded[key] = now + self.p.duplicate_hold_s
            if len(self.forwarded) > 4096:
                self.forwarded = {k: v for k, v in self.forwarded.items() if v > now}
            if self.p.forward_jitter_s > 0:
                self.host.schedule_in(
                    self.host.rng.uniform(0.0, self.p.forward_jitter_s),
                    lambda: self.host.broadcast_control(msg),
                )
            else:
                self.host.broadcast_control(msg)
            self._count("tc_fwd")

    # -- route calculation ----------------------------------------------------------

    def _compute_routes(self) -> None:
        now = self.host.now()
        me = self.host.node_id
        routes: dict[int, tuple[int, int]] = {}
        one_hop = sorted(self._sym_neighbors(now))
        for nb in one_hop:
            routes[nb] = (nb, 1)
        # strict two-hop shortcuts through the lowest-id covering neighbor
        for nb in one_hop:
            nbrs, until = self.two_hop.get(nb, (set(), 0.0))
            if until <= now:
                continue
            for t in sorted(nbrs):
                if t != me and t not in routes:
                    routes[t] = (nb, 2)
        # expand along advertised (originator -> selector) edges, level by level
        adjacency: dict[int, set[int]] = {}
        for orig, tup in self.topology.items():
            if tup.until > now:
                adjacency.setdefault(orig, set()).update(tup.selectors)
                for sel in tup.selectors:
                    adjacency.setdefault(sel, set()).add(orig)
        levels: dict[int, list[int]] = {}
        for node, (_, hops) in routes.items():
            levels.setdefault(hops, []).append(node)
        level = 1
        while level in levels:
            for node in sorted(levels[level]):
                next_hop = routes[node][0]
                for nb in sorted(adjacency.get(node, ())):
                    if nb != me and nb not in routes:
                        routes[nb] = (next_hop, level + 1)
                        levels.setdefault(level + 1, []).append(nb)
            level += 1
        self._routes = routes
        self._dirty = False

    def route_lookup(self, dest: int, now: float) -> int | None:
        me = self.host.node_id
        if dest == me:
            return me
        if self._dirty:
            self._compute_routes()
        hit = self._routes.get(dest)
        return hit[0] if hit is not None else None

    def route_hops(self, dest: int) -> int | None:
        if self._dirty:
            self._compute_routes()
        hit = self._routes.get(dest)
        return hit[1] if hit is not None else None
