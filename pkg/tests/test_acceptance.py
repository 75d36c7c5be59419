"""Acceptance suite: one test per criterion, one PASS line per criterion.

Emergent-behavior criteria run the desk-scale preset (table1-fast: 25
nodes, 100 s) across the full Tx power sweep with 5 seeds and evaluate
delivery, stability, energy, loop-freedom, determinism and conservation
from the same cached result set.
"""

import csv
import math
import random
import time
from dataclasses import replace

import pytest

import conftest as ct
from manetsim import cli
from manetsim.config import load_scenario, preset_path
from manetsim.metrics import write_per_second_csv, write_summary_json
from manetsim.propagation import (
    ci_db,
    friis_db,
    friis_directional_db,
    fspl_1m_db,
    rma_los_db,
)
from manetsim.routing import olsr as olsr_mod
from manetsim.simulation import ManetSimulation

POWERS = (7.5, 10.0, 20.0, 40.0)
SEEDS = (1, 2, 3, 4, 5)
PROTOCOLS = ("aodv", "dsdv", "olsr")
CHANNELS = ("wifi", "mmwave")


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def sweep():
    """All table1-fast cells over the full power sweep, keyed results."""
    scenario = load_scenario(preset_path("table1-fast"))
    base_cells = {
        (c.protocol, c.channel.name, c.seed): c
        for c in scenario.cells()
        if c.seed in SEEDS
    }
    out = {}
    for power in POWERS:
        for (proto, chan, seed), cell in sorted(base_cells.items()):
            sim = ManetSimulation(replace(cell, tx_power_dbm=power))
            records, summary = sim.run()
            trace = sim.mobility_trace() if power == 20.0 else None
            out[(proto, chan, power, seed)] = {
                "records": records,
                "summary": summary,
                "loops": sim.metrics.loop_violations,
                "trace": trace,
                "ledger": sim.medium.total_energy_mj(),
            }
    return out


def _adr(sweep, proto, chan, power):
    vals = [
        sweep[(proto, chan, power, s)]["summary"].avg_delivery_ratio for s in SEEDS
    ]
    assert all(v is not None for v in vals)
    return sum(vals) / len(vals)


def _std(sweep, proto, chan, power):
    vals = [sweep[(proto, chan, power, s)]["summary"].pdr_std for s in SEEDS]
    assert all(v is not None for v in vals)
    return sum(vals) / len(vals)


def test_criterion_01_pathloss_golden_values():
    t0 = time.monotonic()
    checks = [
        (friis_db(2.4e9, 100.0), 80.04),
        (friis_db(28e9, 100.0), 101.38),
        (friis_directional_db(28e9, 100.0, 17.0, 17.0), 67.38),
        (fspl_1m_db(28e9), 61.39),
        (rma_los_db(28e9, 100.0, 5.0), 101.78),
        (rma_los_db(28e9, 100.0, 35.0), 106.92),
    ]
    worst = max(abs(got - want) for got, want in checks)
    elapsed = time.monotonic() - t0
    report("1", worst <= 0.02 and elapsed < 1.0,
           f"max |error| {worst:.4f} dB over 6 golden values in {elapsed:.3f}s")


def test_criterion_02_ci_friis_identity():
    worst = max(
        abs(ci_db(f, d, 2.0, 0.0) - friis_db(f, d))
        for f in (2.4e9, 28e9, 60e9)
        for d in (1.0, 10.0, 100.0, 1000.0)
    )
    report("2", worst < 1e-9, f"max |ci(n=2) - friis| = {worst:.2e} dB")


def test_criterion_03_pathloss_subcommand_curve_shapes(tmp_path):
    t0 = time.monotonic()
    out = tmp_path / "pl.csv"
    rc = cli.main([
        "pathloss", "--freqs", "2.4e9,28e9", "--dists", "10:1000:30", "--out", str(out)
    ])
    assert rc == 0
    curves: dict[tuple[str, float], list[tuple[float, float]]] = {}
    with open(out) as fh:
        for row in csv.DictReader(fh):
            curves.setdefault((row["model"], float(row["freq_hz"])), []).append(
                (float(row["d_m"]), float(row["pl_db"]))
            )
    monotone = all(
        all(a < b for (_, a), (_, b) in zip(pts, pts[1:]))
        for pts in (sorted(c) for c in curves.values())
    )
    omni24 = dict(sorted(curves[("friis", 2.4e9)]))
    omni28 = dict(sorted(curves[("friis", 28e9)]))
    dir28 = dict(sorted(curves[("friis_dir", 28e9)]))
    band_order = all(omni28[d] > omni24[d] for d in omni24)
    reversal = all(dir28[d] < omni24[d] for d in omni24)
    elapsed = time.monotonic() - t0
    report(
        "3",
        monotone and band_order and reversal and elapsed < 1.0,
        f"monotone={monotone} 28>2.4 omni={band_order} "
        f"17+17 dBi reversal={reversal} in {elapsed:.3f}s",
    )


def test_criterion_04_routing_oracles():
    t0 = time.monotonic()
    coverage_failures = []
    real_select = olsr_mod.select_mprs

    def checked_select(one_hop, two_hop_map, self_id):
        mpr = real_select(one_hop, two_hop_map, self_id)
        strict = set().union(*two_hop_map.values()) if two_hop_map else set()
        strict -= one_hop
        strict.discard(self_id)
        covered = set()
        for nb in mpr:
            covered |= two_hop_map.get(nb, set())
        if not strict <= covered:
            coverage_failures.append((one_hop, two_hop_map, mpr))
        return mpr

    olsr_mod.select_mprs = checked_select
    try:
        rng = random.Random(40)
        graphs = [ct.random_geometric_graph(rng, rng.randint(5, 12)) for _ in range(100)]
        mismatches = 0
        tc_excess = 0
        for gi, adj in enumerate(graphs):
            n = len(adj)
            dsdv = ct.IdealNetwork(adj, "dsdv", seed=gi, **ct.FAST_DSDV)
            dsdv.start()
            dsdv.run_until(12.0)
            olsr = ct.IdealNetwork(adj, "olsr", seed=gi, **ct.FAST_OLSR)
            olsr.start()
            olsr.run_until(10.0)
            for src in adj:
                oracle = ct.bfs_distances(adj, src)
                for dst in adj:
                    if dsdv.nodes[src].protocol.table[dst].metric != oracle[dst]:
                        mismatches += 1
                    if src != dst and olsr.nodes[src].protocol.route_hops(dst) != oracle[dst]:
                        mismatches += 1
            aodv = ct.IdealNetwork(adj, "aodv", seed=gi, **ct.QUIET_AODV)
            aodv.start()
            src, dst = 0, n - 1
            aodv.send_data(src, dst)
            aodv.run_until(aodv.sim.now() + 4.0)
            entry = aodv.nodes[src].protocol.routes.get(dst)
            if entry is None or entry.metric != ct.bfs_distances(adj, src)[dst]:
                mismatches += 1
            # MPR flooding may never beat plain flooding's transmission count
            originations = sum(
                node.protocol.stats.get("tc_tx", 0) for node in olsr.nodes.values()
            )
            total_tc = olsr.tx_count.get("OlsrTc", 0)
            if total_tc > originations * n:
                tc_excess += 1
    finally:
        olsr_mod.select_mprs = real_select

    chain = ct.IdealNetwork(
        {0: {1}, 1: {0, 2}, 2: {1, 3}, 3: {2, 4}, 4: {3}}, "aodv", **ct.QUIET_AODV
    )
    chain.start()
    chain.send_data(0, 4)
    chain.run_until(2.0)
    rreq_count = chain.tx_count.get("Rreq", 0)
    hop4 = chain.nodes[0].protocol.routes[4].metric

    elapsed = time.monotonic() - t0
    ok = (
        mismatches == 0
        and not coverage_failures
        and tc_excess == 0
        and rreq_count <= 5
        and hop4 == 4
        and elapsed < 10.0
    )
    report(
        "4",
        ok,
        f"100 graphs: {mismatches} hop mismatches, {len(coverage_failures)} MPR "
        f"coverage breaks, {tc_excess} TC floods above full-flood bound, "
        f"5-chain RREQ tx={rreq_count} hops={hop4}, in {elapsed:.1f}s",
    )


def test_criterion_05_aodv_loop_freedom(sweep):
    violations = sum(
        res["loops"]
        for key, res in sweep.items()
        if key[0] == "aodv"
    )
    runs = sum(1 for key in sweep if key[0] == "aodv")
    report("5", violations == 0,
           f"{violations} (dest_seq, -hops) monotonicity violations over {runs} runs")


def test_criterion_06_mmwave_beats_wifi_per_protocol(sweep):
    lines = []
    ok = True
    for proto in PROTOCOLS:
        wifi, mmwave = _adr(sweep, proto, "wifi", 20.0), _adr(sweep, proto, "mmwave", 20.0)
        wifi_std, mm_std = _std(sweep, proto, "wifi", 20.0), _std(sweep, proto, "mmwave", 20.0)
        ok = ok and (mmwave > wifi) and (mm_std < wifi_std)
        lines.append(
            f"{proto}: adr {mmwave:.4f}>{wifi:.4f}, std {mm_std:.4f}<{wifi_std:.4f}"
        )
    report("6", ok, "; ".join(lines))


def test_criterion_07_power_sweep_shapes(sweep):
    # pooled across the three protocols, seed-averaged per (channel, power)
    wifi = {p: sum(_adr(sweep, pr, "wifi", p) for pr in PROTOCOLS) / 3 for p in POWERS}
    mmw = {p: sum(_adr(sweep, pr, "mmwave", p) for pr in PROTOCOLS) / 3 for p in POWERS}
    nondecreasing = all(
        wifi[b] >= wifi[a] - 0.02 for a, b in zip(POWERS, POWERS[1:])
    )
    spread = max(mmw.values()) - min(mmw.values())
    dominance = all(mmw[p] >= wifi[p] for p in POWERS)
    ok = nondecreasing and spread <= 0.10 and dominance
    report(
        "7",
        ok,
        "wifi " + " ".join(f"{wifi[p]:.3f}" for p in POWERS)
        + " nondecr=" + str(nondecreasing)
        + "; mmwave " + " ".join(f"{mmw[p]:.3f}" for p in POWERS)
        + f" spread={spread:.3f}; mmwave>=wifi at all powers={dominance}",
    )


def test_criterion_08_energy_per_delivered_packet(sweep):
    lines = []
    ok = True
    for proto in PROTOCOLS:
        per_pkt = {}
        for chan in CHANNELS:
            energy = sum(
                sweep[(proto, chan, 20.0, s)]["summary"].total_tx_energy_mj for s in SEEDS
            )
            delivered = sum(
                sweep[(proto, chan, 20.0, s)]["summary"].total_received for s in SEEDS
            )
            per_pkt[chan] = energy / delivered
        ok = ok and per_pkt["mmwave"] < per_pkt["wifi"]
        lines.append(f"{proto}: {per_pkt['mmwave']:.4f} < {per_pkt['wifi']:.4f} mJ/pkt")
    report("8", ok, "; ".join(lines))


def test_criterion_09_determinism(sweep, tmp_path):
    scenario = load_scenario(preset_path("table1-fast"))
    cell = next(
        c for c in scenario.cells()
        if c.protocol == "aodv" and c.channel.name == "wifi" and c.seed == 1
    )
    blobs = []
    for d in ("x", "y"):
        records, summary = ManetSimulation(cell).run()
        per = tmp_path / f"per_{d}.csv"
        summ = tmp_path / f"sum_{d}.json"
        write_per_second_csv(per, records, summary)
        write_summary_json(summ, summary)
        blobs.append((per.read_bytes(), summ.read_bytes()))
    identical = blobs[0] == blobs[1]

    traces_match = all(
        sweep[(proto, "wifi", 20.0, s)]["trace"] == sweep[(proto, "mmwave", 20.0, s)]["trace"]
        for proto in PROTOCOLS
        for s in SEEDS
    )
    report(
        "9",
        identical and traces_match,
        f"rerun files byte-identical={identical}; mobility trace invariant "
        f"to channel model={traces_match}",
    )


def test_criterion_10_conservation_and_ledgers(sweep):
    bad_conservation = bad_pdr = bad_ledger = 0
    for key, res in sweep.items():
        cumulative = 0
        total_recv = 0
        for r in res["records"]:
            cumulative += r.sent
            total_recv += r.received
            if r.received > cumulative:
                bad_conservation += 1
            if r.pdr is not None and not (0.0 <= r.pdr <= 1.0):
                bad_pdr += 1
        s = res["summary"]
        if total_recv > s.total_sent:
            bad_conservation += 1
        if s.avg_delivery_ratio is not None and not (0.0 <= s.avg_delivery_ratio <= 1.0):
            bad_pdr += 1
        if s.total_tx_energy_mj != res["ledger"]:
            bad_ledger += 1
    ok = bad_conservation == 0 and bad_pdr == 0 and bad_ledger == 0
    report(
        "10",
        ok,
        f"{len(sweep)} runs: {bad_conservation} conservation breaks, "
        f"{bad_pdr} PDR range breaks, {bad_ledger} ledger mismatches",
    )
