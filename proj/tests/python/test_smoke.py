import json
import math

import pytest

import mpmd


def test_lower_bound_k2_golden():
    inst = mpmd.gen_lower_bound(2, 1.0)
    run = mpmd.simulate(inst, "hemisphere", 1.0)
    assert run.pairs == [(1, 2), (0, 3)]
    assert run.online_cost == pytest.approx(9.0, rel=1e-5)
    assert run.offline_weight == pytest.approx(3.0, rel=1e-5)
    assert mpmd.opt_general(inst).weight == pytest.approx(2.0)


def test_ratio_report():
    inst = mpmd.gen_lower_bound(2, 1.0)
    r = mpmd.ratio(inst, "hemisphere", 1.0)
    assert r["ratio_offline"] == pytest.approx(1.5, rel=1e-5)
    assert r["ratio_online"] == pytest.approx(4.5, rel=1e-5)
    assert r["within_bound"] is True


def test_eval_f_and_bound():
    assert mpmd.eval_f(8, 4.0) == [1.0, 0.5, 0.375, 0.25]
    assert mpmd.theoretical_bound(8, 1.0) == 8.0
    with pytest.raises(ValueError):
        mpmd.eval_f(8, 2.0)


def test_oracles_agree():
    for seed in range(20):
        inst = mpmd.gen_random(8, seed, metric="euclidean:2")
        assert mpmd.opt_general(inst).weight == mpmd.brute_force_opt(inst).weight
        b = mpmd.gen_random(8, seed, metric="finite:4", bipartite=True)
        assert mpmd.opt_bipartite(b).weight == pytest.approx(mpmd.brute_force_opt(b).weight, rel=1e-12)


def test_json_round_trip(tmp_path):
    inst = mpmd.gen_appendix_b(16, 1 / 16)
    path = tmp_path / "b16.json"
    mpmd.save_instance(inst, str(path))
    assert mpmd.load_instance(str(path)) == inst
    assert mpmd.Instance.from_json(inst.to_json()) == inst
    doc = json.loads(path.read_text())
    assert doc["metric"]["kind"] == "finite"


def test_errors_surface_as_value_error():
    inst = mpmd.gen_lower_bound(2, 1.0)
    with pytest.raises(mpmd.MpmdError, match="bipartite"):
        mpmd.simulate(inst, "hemisphere-b", 1.0)
    with pytest.raises(ValueError):
        mpmd.simulate(inst, "greedy", 1.0)


def test_event_time_infinite_for_same_class():
    inst = mpmd.Instance.from_json(
        '{"metric":{"kind":"line"},"bipartite":true,"requests":['
        '{"id":0,"t":0,"loc":0,"color":0},{"id":1,"t":0,"loc":1,"color":0},'
        '{"id":2,"t":1,"loc":0,"color":1},{"id":3,"t":1,"loc":1,"color":1}]}'
    )
    assert math.isinf(mpmd.event_time(inst, "hemisphere-b", 1.0, 0, 1))
    assert mpmd.event_time(inst, "hemisphere-b", 1.0, 0, 2) == 2.0


def test_sweep_and_verify():
    s = mpmd.sweep_appendix_b([16, 32])
    assert [row["online_cost"] for row in s["rows"]] == [8.0, 16.0]
    report = mpmd.verify(count=10, max_m=6)
    assert all(failed == 0 for _, failed, _ in report.values())
