import csv

import pytest

from manetsim.metrics import (
    CSV_HEADER,
    MetricsCollector,
    pdr,
    summary_to_dict,
    write_per_second_csv,
)


def test_pdr_arithmetic():
    assert pdr(40, 30) == 0.75
    assert pdr(10, 10) == 1.0
    assert pdr(7, 0) == 0.0


def test_pdr_undefined_for_zero_sent():
    with pytest.raises(ValueError):
        pdr(0, 0)


def _collector_with_traffic():
    m = MetricsCollector(duration_s=100.0, warmup_s=50.0)
    for t in (55.2, 55.4, 55.6, 56.1):
        m.on_sent(0, t)
    m.on_received(0, 0, 55.25)
    m.on_received(0, 1, 55.45)
    m.on_received(0, 3, 56.2)
    return m


def test_finalize_per_second_buckets():
    records, summary = _collector_with_traffic().finalize()
    by_t = {r.t: r for r in records}
    assert by_t[55].sent == 3 and by_t[55].received == 2
    assert by_t[56].sent == 1 and by_t[56].received == 1
    assert by_t[55].pdr == pytest.approx(2 / 3)
    assert by_t[54].sent == 0 and by_t[54].pdr is None
    assert len(records) == 100


def test_duplicate_deliveries_counted_once():
    m = MetricsCollector(100.0, 50.0)
    m.on_sent(0, 60.0)
    assert m.on_received(0, 0, 60.1)
    assert not m.on_received(0, 0, 60.2)  # duplicate (flow, seq)
    records, summary = m.finalize()
    assert summary.total_received == 1


def test_delivery_time_bucketing_is_capped_at_one():
    m = MetricsCollector(100.0, 50.0)
    m.on_sent(0, 60.999)  # sent late in second 60
    m.on_sent(0, 61.2)
    m.on_received(0, 0, 61.001)  # lands in second 61
    m.on_received(0, 1, 61.3)
    records, _ = m.finalize()
    by_t = {r.t: r for r in records}
    assert by_t[60].received == 0
    assert by_t[61].received == 2
    assert by_t[61].pdr == 1.0  # 2 deliveries over 1 send, capped


def test_average_excludes_warmup_and_zero_send_seconds():
    m = MetricsCollector(100.0, 50.0)
    m.on_sent(0, 10.0)  # warmup traffic must not count
    m.on_received(0, 99, 10.1)
    m.on_sent(0, 60.0)
    m.on_received(0, 0, 60.1)
    m.on_sent(0, 70.0)  # not delivered
    _, summary = m.finalize()
    assert summary.avg_delivery_ratio == pytest.approx(0.5)  # mean of {1.0, 0.0}


def test_zero_traffic_average_is_null():
    m = MetricsCollector(100.0, 50.0)
    records, summary = m.finalize()
    assert summary.avg_delivery_ratio is None
    assert all(r.pdr is None for r in records)


def test_conservation_received_never_exceeds_cumulative_sent():
    records, _ = _collector_with_traffic().finalize()
    cumulative = 0
    for r in records:
        cumulative += r.sent
        assert r.received <= cumulative


def test_per_flow_accounting():
    m = MetricsCollector(100.0, 50.0)
    m.on_sent(1, 60.0)
    m.on_sent(1, 60.25)
    m.on_sent(2, 60.5)
    m.on_received(1, 0, 60.1)
    _, summary = m.finalize()
    assert summary.per_flow == {1: (2, 1), 2: (1, 0)}


def test_csv_schema_exact(tmp_path):
    m = _collector_with_traffic()
    records, summary = m.finalize(
        protocol="aodv", channel="wifi", tx_power_dbm=20.0, pkt_bytes=64, seed=1,
        energy_ledger_mj=12.5,
    )
    path = tmp_path / "per.csv"
    write_per_second_csv(path, records, summary)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER
    assert rows[0] == ["time_s", "protocol", "channel", "tx_power_dbm", "sent", "received", "pdr"]
    assert len(rows) == 101
    row55 = rows[56]
    assert row55[0] == "55" and row55[1] == "aodv" and row55[2] == "wifi"
    assert row55[4] == "3" and row55[5] == "2"
    assert rows[1][6] == ""  # no sends in second 0: pdr column empty


def test_summary_document_keys():
    m = _collector_with_traffic()
    _, summary = m.finalize(
        protocol="olsr", channel="mmwave", tx_power_dbm=20.0, pkt_bytes=64, seed=3,
        energy_ledger_mj=1.25,
    )
    doc = summary_to_dict(summary)
    assert set(doc) == {
        "protocol", "channel", "tx_power_dbm", "pkt_bytes", "seed",
        "avg_delivery_ratio", "total_sent", "total_received", "total_tx_energy_mj",
    }
    assert doc["total_tx_energy_mj"] == 1.25
