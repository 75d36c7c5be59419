"""Per-second delivery accounting and run summaries.

Sends are bucketed by floor(send time), deliveries by floor(delivery
time), so a packet sent late in second t and delivered in t+1 counts as
received in t+1. Per-second PDR uses that second's sends as denominator
and is capped at 1 so a boundary-crossing delivery cannot push the ratio
above one. Seconds with zero sends have no PDR and are excluded from the
run average, which covers only the measurement window (t >= warmup).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

CSV_HEADER = ["time_s", "protocol", "channel", "tx_power_dbm", "sent", "received", "pdr"]


def pdr(sent: int, received: int) -> float:
    """Delivery ratio for one interval; undefined (error) when nothing was sent."""
    if sent <= 0:
        raise ValueError("pdr undefined for sent == 0")
    return received / sent


@dataclass(frozen=True)
class PerSecondRecord:
    t: int
    sent: int
    received: int
    pdr: float | None  # None when sent == 0


@dataclass(frozen=True)
class RunSummary:
    protocol: str
    channel: str
    tx_power_dbm: float
    pkt_bytes: int
    seed: int
    avg_delivery_ratio: float | None
    total_sent: int
    total_received: int
    total_tx_energy_mj: float
    per_flow: dict[int, tuple[int, int]]  # flow id -> (sent, received)
    pdr_std: float | None = None
    loss_reasons: dict[str, int] = field(default_factory=dict)


class MetricsCollector:
    """Accumulators owned by the engine; finalize() is pure."""

    def __init__(self, duration_s: float, warmup_s: float):
        self.duration_s = duration_s
        self.warmup_s = warmup_s
        self.sent_per_s: dict[int, int] = {}
        self.received_per_s: dict[int, int] = {}
        self.flow_sent: dict[int, int] = {}
        self.flow_received: dict[int, int] = {}
        self.loss_reasons: dict[str, int] = {}
        self._seen: set[tuple[int, int]] = set()
        self.loop_violations = 0
        self.total_tx_energy_mj = 0.0  # copied from the radio ledger at finalize

    def on_sent(self, flow_id: int, t: float) -> None:
        bucket = int(t)
        self.sent_per_s[bucket] = self.sent_per_s.get(bucket, 0) + 1
        self.flow_sent[flow_id] = self.flow_sent.get(flow_id, 0) + 1

    def on_received(self, flow_id: int, seq: int, t: float) -> bool:
        """Count a delivery once per (flow, seq); returns False for duplicates."""
        key = (flow_id, seq)
        if key in self._seen:
            return False
        self._seen.add(key)
        bucket = int(t)
        self.received_per_s[bucket] = self.received_per_s.get(bucket, 0) + 1
        self.flow_received[flow_id] = self.flow_received.get(flow_id, 0) + 1
        return True

    def on_lost(self, reason: str) -> None:
        self.loss_reasons[reason] = self.loss_reasons.get(reason, 0) + 1

    def finalize(
        self,
        protocol: str = "",
        channel: str = "",
        tx_power_dbm: float = 0.0,
        pkt_bytes: int = 0,
        seed: int = 0,
        energy_ledger_mj: float = 0.0,
    ) -> tuple[list[PerSecondRecord], RunSummary]:
        self.total_tx_energy_mj = energy_ledger_mj
        records = []
        for t in range(int(math.ceil(self.duration_s))):
            sent = self.sent_per_s.get(t, 0)
            received = self.received_per_s.get(t, 0)
            ratio = min(1.0, received / sent) if sent > 0 else None
            records.append(PerSecondRecord(t, sent, received, ratio))
        window = [
            r.pdr for r in records if r.t >= self.warmup_s and r.pdr is not None
        ]
        avg = sum(window) / len(window) if window else None
        std = None
        if len(window) > 1:
            mean = avg
            std = math.sqrt(sum((x - mean) ** 2 for x in window) / len(window))
        per_flow = {
            fid: (self.flow_sent.get(fid, 0), self.flow_received.get(fid, 0))
            for fid in sorted(set(self.flow_sent) | set(self.flow_received))
        }
        summary = RunSummary(
            protocol=protocol,
            channel=channel,
            tx_power_dbm=tx_power_dbm,
            pkt_bytes=pkt_bytes,
            seed=seed,
            avg_delivery_ratio=avg,
            total_sent=sum(self.sent_per_s.values()),
            total_received=sum(self.received_per_s.values()),
            total_tx_energy_mj=energy_ledger_mj,
            per_flow=per_flow,
            pdr_std=std,
            loss_reasons=dict(sorted(self.loss_reasons.items())),
        )
        return records, summary


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def write_per_second_csv(
    path: Path, records: list[PerSecondRecord], summary: RunSummary
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.t,
                    summary.protocol,
                    summary.channel,
                    _fmt(summary.tx_power_dbm),
                    r.sent,
                    r.received,
                    "" if r.pdr is None else _fmt(r.pdr),
                ]
            )


def summary_to_dict(summary: RunSummary) -> dict:
    doc = {
        "protocol": summary.protocol,
        "channel": summary.channel,
        "tx_power_dbm": summary.tx_power_dbm,
        "pkt_bytes": summary.pkt_bytes,
        "seed": summary.seed,
        "avg_delivery_ratio": summary.avg_delivery_ratio,
        "total_sent": summary.total_sent,
        "total_received": summary.total_received,
        "total_tx_energy_mj": summary.total_tx_energy_mj,
    }
    return doc


def write_summary_json(path: Path, summary: RunSummary) -> None:
    with open(path, "w") as fh:
        json.dump(summary_to_dict(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")
