"""One deterministic simulation run for a single grid cell."""

from __future__ import annotations

from .config import RunConfig
from .engine import Simulator
from .metrics import MetricsCollector, PerSecondRecord, RunSummary
from .mobility import RandomWaypoint
from .network import Medium, Node
from .radio import RadioConfig
from .routing import create_protocol
from .traffic import DataPacket, build_flows


class ManetSimulation:
    def __init__(self, cfg: RunConfig, audit_energy: bool = False, trace: bool = False):
        self.cfg = cfg
        self.sim = Simulator(cfg.seed, trace=trace)
        self.metrics = MetricsCollector(cfg.duration_s, cfg.warmup_s)
        ch = cfg.channel
        radio_cfg = RadioConfig(
            freq_hz=ch.freq_hz,
            tx_power_dbm=cfg.tx_power_dbm,
            bitrate_bps=ch.bitrate_bps,
            bandwidth_hz=ch.bandwidth_hz,
            noise_figure_db=cfg.noise_figure_db,
            snr_threshold_db=cfg.snr_threshold_db,
            pattern=ch.pattern,
            mac_retries=cfg.mac_retries,
        )
        self.medium = Medium(
            self.sim,
            ch.model,
            ch.freq_hz,
            self.metrics,
            cfg.msg_sizes,
            ch.shadow_mode,
            audit_energy,
        )
        overrides = cfg.routing_params.get(cfg.protocol, {})
        for i in range(cfg.n_nodes):
            start = cfg.positions[i] if cfg.positions is not None else None
            walker = RandomWaypoint(
                self.sim.stream(f"mobility/{i}"),
                cfg.region,
                cfg.speed_mps,
                cfg.pause_s,
                start=start,
            )
            node = Node(i, self.sim, self.medium, walker, radio_cfg)
            node.protocol = create_protocol(cfg.protocol, node, **overrides)
            self.medium.add_node(node)
        self.flows = build_flows(
            cfg.n_pairs,
            cfg.n_nodes,
            self.sim.stream("traffic"),
            cfg.pkt_bytes,
            cfg.pkts_per_s,
            cfg.start_window,
            stop_at=cfg.duration_s,
        )
        self._finalized: tuple[list[PerSecondRecord], RunSummary] | None = None

    def _schedule_flows(self) -> None:
        n = self.cfg.n_nodes
        for flow in self.flows:
            src_node = self.medium.nodes[flow.src]
            for seq, t in enumerate(flow.send_times()):
                self.sim.schedule(t, self._make_send(flow, seq, src_node, n))

    def _make_send(self, flow, seq: int, src_node: Node, ttl: int):
        def send():
            now = self.sim.now()
            self.metrics.on_sent(flow.flow_id, now)
            packet = DataPacket(
                flow_id=flow.flow_id,
                seq=seq,
                src=flow.src,
                dst=flow.dst,
                size_bytes=flow.pkt_bytes,
                sent_at=now,
                ttl=ttl,
            )
            src_node.forward_data(packet)

        return send

    def run(self) -> tuple[list[PerSecondRecord], RunSummary]:
        if self._finalized is not None:
            return self._finalized
        for node in self.medium.nodes:
            node.protocol.start()
        self._schedule_flows()
        self.sim.run_until(self.cfg.duration_s)
        records, summary = self.metrics.finalize(
            protocol=self.cfg.protocol,
            channel=self.cfg.channel.name,
            tx_power_dbm=self.cfg.tx_power_dbm,
            pkt_bytes=self.cfg.pkt_bytes,
            seed=self.cfg.seed,
            energy_ledger_mj=self.medium.total_energy_mj(),
        )
        self._finalized = (records, summary)
        return self._finalized

    def mobility_trace(self) -> list[tuple[int, float, float, float, float, float]]:
        """(node, depart_at, ox, oy, tx, ty) for every waypoint leg taken.

        Walkers are aligned to the run horizon first so the trace does not
        depend on when the last radio event happened to query a position.
        """
        out = []
        for i, node in enumerate(self.medium.nodes):
            node.walker.position(max(self.sim.now(), self.cfg.duration_s))
            for leg in node.walker.history:
                out.append((i, leg.depart_at, *leg.origin, *leg.target))
        return out
