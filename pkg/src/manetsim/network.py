"""Nodes, the shared radio medium, and the single-run simulation assembly.

The medium realizes the idealized MAC: a transmitting node serializes its
own frames (half-duplex), every frame is evaluated at its end time against
all time-overlapping frames as interference, and reception is a closed
SINR-threshold test. Directional transmitters are ideally steered at the
addressed next hop; broadcasts reach every receiver at mainlobe gain but
are charged one airtime of energy per sweep sector. Node separations that
momentarily drop below the 1 m model floor are clamped to 1 m here (the
model functions themselves reject sub-meter input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import Simulator, derived_normal
from .metrics import MetricsCollector
from .mobility import RandomWaypoint
from .propagation import ChannelModel
from .radio import (
    LOST_BELOW_THRESHOLD,
    Directional,
    RadioConfig,
    ReceptionResult,
    TransmissionAttempt,
    airtime_s,
    antenna_gain_dbi,
    sweep_sectors,
    try_receive,
    tx_energy_mj,
)
from .routing.messages import (
    AodvHello,
    DsdvUpdate,
    OlsrHello,
    OlsrTc,
    Rerr,
    Rrep,
    Rreq,
)
from .traffic import DataPacket


@dataclass(frozen=True)
class MsgSizes:
    """Simulator-internal control message sizes in bytes (headers included)."""

    rreq: int = 52
    rrep: int = 48
    rerr_base: int = 32
    rerr_per_dest: int = 8
    aodv_hello: int = 48
    dsdv_base: int = 28
    dsdv_per_entry: int = 12
    olsr_hello_base: int = 44
    olsr_hello_per_link: int = 8
    olsr_tc_base: int = 44
    olsr_tc_per_selector: int = 4


def control_bytes(msg, sizes: MsgSizes) -> int:
    if isinstance(msg, Rreq):
        return sizes.rreq
    if isinstance(msg, Rrep):
        return sizes.rrep
    if isinstance(msg, Rerr):
        return sizes.rerr_base + sizes.rerr_per_dest * len(msg.unreachable)
    if isinstance(msg, AodvHello):
        return sizes.aodv_hello
    if isinstance(msg, DsdvUpdate):
        return sizes.dsdv_base + sizes.dsdv_per_entry * len(msg.entries)
    if isinstance(msg, OlsrHello):
        return sizes.olsr_hello_base + sizes.olsr_hello_per_link * len(msg.links)
    if isinstance(msg, OlsrTc):
        return sizes.olsr_tc_base + sizes.olsr_tc_per_selector * len(msg.selectors)
    raise TypeError(f"no size rule for {type(msg).__name__}")


@dataclass
class Frame:
    sender: int
    dest: int | None  # None = broadcast
    kind: str  # "control" | "data"
    payload: object
    size_bytes: int
    start: float
    end: float
    tx_pos: tuple[float, float]
    raw_dbm: list[float]  # per receiver id: tx power + tx gain - path loss
    retries_left: int = 0


def _linearized(model: ChannelModel, freq_hz: float) -> tuple[float, float, float]:
    """(C0, C1, C2) with loss = C0 + C1*log10(d) + C2*d, shadow excluded."""
    from . import propagation as pp

    if model.kind == "friis":
        return (20.0 * math.log10(freq_hz) + pp._FRIIS_CONST_DB, 20.0, 0.0)
    if model.kind == "friis_dir":
        c0 = 20.0 * math.log10(freq_hz) + pp._FRIIS_CONST_DB - model.gt_dbi - model.gr_dbi
        return (c0, 20.0, 0.0)
    if model.kind == "rma":
        h172 = model.h_m ** 1.72
        c0 = 20.0 * math.log10(40.0 * math.pi * (freq_hz / 1e9) / 3.0) - min(
            0.044 * h172, 14.77
        )
        return (c0, 20.0 + min(0.03 * h172, 10.0), 0.002 * math.log10(model.h_m))
    if model.kind == "ci":
        return (pp.fspl_1m_db(freq_hz), 10.0 * model.ple_n, 0.0)
    if model.kind == "uma":
        c = model.uma_coeffs
        return (c["a"] + c["e"] * math.log10(freq_hz / 1e9), c["b"], 0.0)
    raise ValueError(f"unknown channel model kind: {model.kind!r}")


class Node:
    """One station: mobility walker, radio, protocol instance, energy ledger.

    Doubles as the protocol host object (see routing package docstring).
    """

    def __init__(self, node_id: int, sim: Simulator, medium: "Medium",
                 walker: RandomWaypoint, cfg: RadioConfig):
        self.node_id = node_id
        self.sim = sim
        self.medium = medium
        self.walker = walker
        self.radio = cfg
        self.rng = sim.stream(f"protocol/{node_id}")
        self.protocol = None  # set after construction
        self.energy_mj = 0.0
        self.next_free = 0.0
        self.busy: list[tuple[float, float]] = []

    # -- protocol host surface ------------------------------------------

    def now(self) -> float:
        return self.sim.now()

    def schedule_in(self, delay: float, fn) -> None:
        self.sim.schedule_in(delay, fn)

    def broadcast_control(self, msg) -> None:
        self.medium.transmit(self, msg, "control", None)

    def unicast_control(self, msg, next_hop: int) -> None:
        self.medium.transmit(self, msg, "control", next_hop)

    def forward_data(self, packet: DataPacket) -> None:
        me = self.node_id
        metrics = self.medium.metrics
        if packet.dst == me:
            metrics.on_received(packet.flow_id, packet.seq, self.sim.now())
            return
        next_hop = self.protocol.route_lookup(packet.dst, self.sim.now())
        if next_hop is None:
            if not self.protocol.handle_no_route(packet):
                metrics.on_lost("no_route")
            return
        if packet.ttl <= 0:
            metrics.on_lost("ttl")
            return
        packet.ttl -= 1
        tag = self.protocol.route_metric_tag(packet.dst)
        if tag is not None and packet.route_tag is not None:
            prev_seq, prev_hops = packet.route_tag
            if tag[0] < prev_seq or (tag[0] == prev_seq and tag[1] >= prev_hops):
                metrics.loop_violations += 1
        if tag is not None:
            packet.route_tag = tag
        self.protocol.on_data_forwarded(packet.dst)
        self.medium.transmit(self, packet, "data", next_hop)

    def drop_data(self, packet: DataPacket, reason: str) -> None:
        self.medium.metrics.on_lost(reason)

    # -- data plane -------------------------------------------------------

    def on_data_frame(self, packet: DataPacket) -> None:
        self.forward_data(packet)


class Medium:
    """Shared broadcast channel with SINR capture and per-node energy ledger."""

    def __init__(
        self,
        sim: Simulator,
        channel: ChannelModel,
        freq_hz: float,
        metrics: MetricsCollector,
        sizes: MsgSizes = MsgSizes(),
        shadow_mode: str = "per_leg",
        audit_energy: bool = False,
    ):
        self.sim = sim
        self.channel = channel
        self.freq_hz = freq_hz
        self.metrics = metrics
        self.sizes = sizes
        self.shadow_mode = shadow_mode
        self.nodes: list[Node] = []
        self.active: list[Frame] = []
        self._pos_cache: tuple[float, list[tuple[float, float]]] | None = None
        self._c0, self._c1, self._c2 = _linearized(channel, freq_hz)
        self.energy_audit: list[float] | None = [] if audit_energy else None
        self.control_tx = 0
        self.data_tx = 0

    def add_node(self, node: Node) -> None:
        self.nodes.append(node)

    def positions(self) -> list[tuple[float, float]]:
        now = self.sim.now()
        if self._pos_cache is not None and self._pos_cache[0] == now:
            return self._pos_cache[1]
        pos = [n.walker.position(now) for n in self.nodes]
        self._pos_cache = (now, pos)
        return pos

    def _loss_db(self, d: float) -> float:
        if d < 1.0:
            d = 1.0  # sub-meter encounters clamp to the model floor
        return self._c0 + self._c1 * math.log10(d) + self._c2 * d

    def _shadow_db(self, a: int, b: int) -> float:
        sigma = self.channel.sigma_db
        if self.channel.kind != "ci" or sigma <= 0.0:
            return 0.0
        i, j = (a, b) if a < b else (b, a)
        if self.shadow_mode == "per_packet":
            return self.sim.stream("channel").gauss(0.0, sigma)
        # held per link and per waypoint leg of either endpoint
        tag = f"{i}-{j}-{self.nodes[i].walker.legs_started}-{self.nodes[j].walker.legs_started}"
        return derived_normal(self.sim.seed, tag, sigma)

    # -- transmission ------------------------------------------------------

    def transmit(
        self, node: Node, payload, kind: str, dest: int | None,
        retries_left: int | None = None,
    ) -> None:
        cfg = node.radio
        if kind == "control":
            size = control_bytes(payload, self.sizes)
            self.control_tx += 1
        else:
            size = payload.size_bytes
            self.data_tx += 1
        duration = airtime_s(size, cfg.bitrate_bps)
        now = self.sim.now()
        start = max(now, node.next_free)
        end = start + duration
        node.next_free = end
        node.busy.append((start, end))
        if len(node.busy) > 32:
            node.busy = [iv for iv in node.busy if iv[1] > now - 1.0]

        sectors = sweep_sectors(cfg.pattern) if dest is None else 1
        energy = tx_energy_mj(cfg.tx_power_dbm, duration) * sectors
        node.energy_mj += energy
        if self.energy_audit is not None:
            self.energy_audit.append(energy)

        pos = self.positions()
        me = node.node_id
        my_pos = pos[me]
        raw = [float("-inf")] * len(self.nodes)
        pattern = cfg.pattern
        directional = isinstance(pattern, Directional)
        if directional and dest is not None:
            dpos = pos[dest]
            boresight = math.degrees(math.atan2(dpos[1] - my_pos[1], dpos[0] - my_pos[0]))
        else:
            boresight = 0.0
        for v in range(len(self.nodes)):
            if v == me:
                continue
            vpos = pos[v]
            d = math.hypot(vpos[0] - my_pos[0], vpos[1] - my_pos[1])
            pl = self._loss_db(d) + self._shadow_db(me, v)
            if not directional:
                gain = pattern.gain_dbi
            elif dest is None:
                gain = pattern.mainlobe_dbi  # broadcast sweep: mainlobe everywhere
            else:
                angle = math.degrees(math.atan2(vpos[1] - my_pos[1], vpos[0] - my_pos[0]))
                gain = antenna_gain_dbi(pattern, angle - boresight)
            raw[v] = cfg.tx_power_dbm + gain - pl

        frame = Frame(me, dest, kind, payload, size, start, end, my_pos, raw)
        if kind == "data" and dest is not None:
            frame.retries_left = cfg.mac_retries if retries_left is None else retries_left
        self.active.append(frame)
        self.sim.schedule(end, lambda: self._frame_end(frame))

    # -- reception ----------------------------------------------------------

    def _frame_end(self, frame: Frame) -> None:
        now = self.sim.now()
        self.active = [f for f in self.active if f.end > now - 0.1 or f is frame]
        overlapping = [
            g
            for g in self.active
            if g is not frame and g.start < frame.end and g.end > frame.start
        ]
        receivers = (
            range(len(self.nodes)) if frame.dest is None else (frame.dest,)
        )
        pos = self.positions()
        for v in receivers:
            if v == frame.sender:
                continue
            result = self._receive_at(v, frame, overlapping, pos)
            vnode = self.nodes[v]
            if result.delivered:
                vnode.protocol.on_neighbor_heard(frame.sender)
                if frame.kind == "control":
                    vnode.protocol.on_control(frame.payload, frame.sender)
                else:
                    vnode.on_data_frame(frame.payload)
            elif frame.kind == "data" and frame.dest == v:
                if frame.retries_left > 0:
                    # random backoff so phase-locked losers desynchronize
                    window = 16.0 * (frame.end - frame.start)
                    delay = self.sim.stream("mac").uniform(0.0, window)
                    sender = self.nodes[frame.sender]
                    payload, retries = frame.payload, frame.retries_left - 1
                    self.sim.schedule_in(
                        delay,
                        lambda s=sender, p=payload, d=v, r=retries: self.transmit(
                            s, p, "data", d, r
                        ),
                    )
                else:
                    self.metrics.on_lost(result.reason)

    def _receive_at(
        self, v: int, frame: Frame, overlapping: list[Frame], pos
    ) -> ReceptionResult:
        vnode = self.nodes[v]
        raw = frame.raw_dbm[v]
        if raw == float("-inf"):
            return ReceptionResult(False, LOST_BELOW_THRESHOLD)
        busy = any(s < frame.end and e > frame.start for s, e in vnode.busy)
        pattern = vnode.radio.pattern
        vpos = pos[v]
        if isinstance(pattern, Directional):
            # ideal steering: boresight at this frame's sender
            look = math.atan2(frame.tx_pos[1] - vpos[1], frame.tx_pos[0] - vpos[0])
            rx_gain = pattern.mainlobe_dbi
            interferers = []
            for g in overlapping:
                if g.sender == v or g.raw_dbm[v] == float("-inf"):
                    continue
                ang = math.atan2(g.tx_pos[1] - vpos[1], g.tx_pos[0] - vpos[0])
                off = math.degrees(ang - look)
                interferers.append(g.raw_dbm[v] + antenna_gain_dbi(pattern, off))
        else:
            rx_gain = pattern.gain_dbi
            interferers = [
                g.raw_dbm[v] + rx_gain
                for g in overlapping
                if g.sender != v and g.raw_dbm[v] != float("-inf")
            ]
        attempt = TransmissionAttempt(
            tx_node=frame.sender,
            rx_node=v,
            frame_bytes=frame.size_bytes,
            start=frame.start,
            rx_power_dbm=raw + rx_gain,
            concurrent_dbm=tuple(interferers),
        )
        return try_receive(attempt, vnode.radio, vnode.radio.noise_floor_dbm, rx_busy=busy)

    def total_energy_mj(self) -> float:
        return sum(n.energy_mj for n in self.nodes)
