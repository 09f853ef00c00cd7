import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epus_sky.baselines import MethodKind
from epus_sky.errors import ConfigError
from epus_sky.harness import (CSV_COLUMNS, MetricsRecord, SimConfig, Simulation,
                              StreamGenerator, export_csv, latency_of, read_csv,
                              run_simulation, summarize)
from epus_sky.skyline import brute_force_skyline


def test_defaults():
    c = SimConfig()
    assert (c.m, c.d, c.n, c.r, c.window_k, c.object_kb, c.rate_mbps) == (6, 2, 5, 5.0, 300,
                                                                          3.0, 1.0)
    assert c.method is MethodKind.EPUS
    assert SimConfig(method="pbf").method is MethodKind.PBF


@pytest.mark.parametrize("kw", [
    {"m": 0}, {"d": 1}, {"n": 0}, {"window_k": 0}, {"steps": -1}, {"batch": 0},
    {"batch": 400}, {"rate_mbps": 0}, {"object_kb": 0}, {"comp_power_edge": 0},
    {"comp_power_server": -1}, {"r": -1}, {"fanout": 1}, {"obsolete_kb": -1},
])
def test_invalid_configs(kw):
    with pytest.raises(ConfigError):
        SimConfig(**kw)


def test_generated_objects_stay_in_radius():
    worst, sums = 0.0, []
    for ecn in range(1, 5):
        gen = StreamGenerator(3, ecn, d=3, n=5, r=7.5)
        for o in gen.take(2500):
            pts = np.array([i.attrs for i in o.instances])
            # the center is not stored; the instances must fit a radius-r ball,
            # so no two of them may be further apart than 2r
            spread = max(np.linalg.norm(a - b) for a in pts for b in pts)
            worst = max(worst, spread)
            sums.append(o.total_prob)
    assert worst <= 2 * 7.5
    assert max(abs(s - 1.0) for s in sums) <= 1e-9


def test_generator_radius_against_center():
    gen = StreamGenerator(1, 1, d=4, n=6, r=5.0)
    state = gen.rng.bit_generator.state
    o = gen.generate_object()
    gen.rng.bit_generator.state = state
    center = gen.rng.uniform(0.0, 1000.0, 4)
    for inst in o.instances:
        assert np.linalg.norm(np.array(inst.attrs) - center) <= 5.0 + 1e-9


def test_generator_is_deterministic_and_streams_disjoint():
    a = [o for o in StreamGenerator(9, 1, 2, 3, 5).take(50)]
    b = [o for o in StreamGenerator(9, 1, 2, 3, 5).take(50)]
    c = [o for o in StreamGenerator(9, 2, 2, 3, 5).take(50)]
    assert a == b
    assert not {o.id for o in a} & {o.id for o in c}
    assert [o.seq for o in a] == list(range(1, 51))


def test_latency_unit_check():
    cfg = SimConfig()
    l_edge, l_comm, l_srv, total = latency_of([0] * 6, 1, 0, cfg)
    assert l_comm == 0.024576
    assert (l_edge, l_srv, total) == (0.0, 0.0, 0.024576)
    assert latency_of([0] * 6, 0, 0, cfg) == (0.0, 0.0, 0.0, 0.0)


def test_latency_scales_with_power():
    cfg = SimConfig()
    slow = latency_of([100, 200, 300], 0, 50, cfg)
    fast = latency_of([100, 200, 300], 0, 50, SimConfig(comp_power_edge=2e7))
    assert fast[0] == slow[0] / 2
    assert slow[0] == pytest.approx((100 + 200 + 300) / 3 / 1e7)
    assert slow[2] == 50 / 1e7


def test_latency_rejects_zero_rates():
    cfg = SimConfig()
    cfg.rate_mbps = 0
    with pytest.raises(ConfigError):
        latency_of([1], 1, 1, cfg)
    cfg = SimConfig()
    cfg.comp_power_server = 0
    with pytest.raises(ConfigError):
        latency_of([1], 1, 1, cfg)


def test_zero_steps_gives_bootstrap_only():
    recs = run_simulation(SimConfig(m=2, window_k=10, steps=0))
    assert [r.step for r in recs] == [0]
    assert recs[0].objects_tx > 0


def test_records_add_up():
    recs = run_simulation(SimConfig(m=3, window_k=20, steps=30, seed=2))
    for r in recs:
        assert r.l_system_s == pytest.approx(
            r.l_comp_edge_s + r.l_comm_s + r.l_comp_server_s, abs=1e-12)
        assert r.bytes_tx == 3072 * r.objects_tx
        assert len(r.comparisons_edge) == 3
    s = summarize(recs)
    assert s["avg_objects_tx"] == sum(r.objects_tx for r in recs) / len(recs)
    assert s["ticks"] == 31


def test_cheaper_retractions():
    base = run_simulation(SimConfig(m=2, window_k=20, steps=30, seed=3))
    cheap = run_simulation(SimConfig(m=2, window_k=20, steps=30, seed=3, obsolete_kb=0.0))
    assert sum(r.bytes_tx for r in cheap) < sum(r.bytes_tx for r in base)
    assert sum(r.objects_tx for r in cheap) == sum(r.objects_tx for r in base)
    for r in cheap:
        assert r.l_comm_s == pytest.approx(r.bytes_tx * 8 / 1e6)


def test_single_edge_collapse():
    sim = Simulation(SimConfig(m=1, window_k=20, steps=50, seed=8))
    for _ in sim.run():
        assert sim.server_sk1 == set(sim.edges[0].state.sk1)


def test_batched_arrivals():
    sim = Simulation(SimConfig(m=2, n=3, window_k=12, steps=40, seed=1, batch=4))
    for _ in sim.run():
        assert sim.server_sk1 == brute_force_skyline(sim.edge_union())


def test_csv_round_trip(tmp_path):
    recs = run_simulation(SimConfig(m=2, window_k=10, steps=5, seed=1))
    path = tmp_path / "out.csv"
    export_csv(recs, path)
    rows = read_csv(path)
    assert len(rows) == len(recs)
    for row, rec in zip(rows, recs):
        assert row["step"] == rec.step and row["method"] == "epus"
        assert row["comparisons_edge_total"] == rec.comparisons_edge_total
        assert row["bytes_tx"] == rec.bytes_tx
        assert row["l_system_s"] == pytest.approx(rec.l_system_s, rel=1e-8)


def test_empty_csv_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    export_csv([], path)
    assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"
    assert read_csv(path) == []


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        export_csv([], tmp_path / "missing" / "x.csv")


def test_identical_configs_identical_bytes(tmp_path):
    for i in (1, 2):
        export_csv(run_simulation(SimConfig(m=2, window_k=15, steps=40, seed=5)),
                   tmp_path / f"{i}.csv")
    assert (tmp_path / "1.csv").read_bytes() == (tmp_path / "2.csv").read_bytes()


@settings(max_examples=20)
@given(st.lists(st.integers(0, 10 ** 7), min_size=1, max_size=8), st.integers(0, 50),
       st.integers(0, 10 ** 7))
def test_latency_decomposes(edge, objects, server):
    parts = latency_of(edge, objects, server, SimConfig())
    assert math.isclose(parts[3], sum(parts[:3]), rel_tol=0, abs_tol=1e-12)
