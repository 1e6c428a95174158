import json

import pytest

from chainsched.cli import main
from chainsched.model import Solution


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_schedule_fixture_json(capsys):
    code, out, _ = run(capsys, "schedule", "--strategy", "herad", "--chain", "orangepi5plus", "--platform", "2,2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["period"] - 7027.0) <= 0.5
    assert doc["throughput_mbps"] == pytest.approx(doc["bits_per_stream"] / doc["period"])
    sol = Solution.from_dict(doc["solution"])
    assert float(sol.period) == doc["period"]


def test_schedule_from_files_is_byte_identical(tmp_path, capsys):
    chain = tmp_path / "orangepi.json"
    plat = tmp_path / "b2l2.json"
    run(capsys, "schedule", "--strategy", "herad", "--chain", "orangepi5plus", "--platform", "2,2", "--json")
    from chainsched.fixtures import load_fixture

    chain.write_text(json.dumps(load_fixture("orangepi5plus").chain.to_dict()))
    plat.write_text(json.dumps({"big": 2, "little": 2}))
    first = run(capsys, "schedule", "--strategy", "herad", "--chain", str(chain), "--platform", str(plat), "--json")
    second = run(capsys, "schedule", "--strategy", "herad", "--chain", str(chain), "--platform", str(plat), "--json")
    assert first[0] == 0 and first[1] == second[1]
    assert abs(json.loads(first[1])["period"] - 7027.0) <= 0.5


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "gen", "--n", "20", "--sr", "0.5", "--seed", "7", "--out", str(a))[0] == 0
    assert run(capsys, "gen", "--n", "20", "--sr", "0.5", "--seed", "7", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert sum(t["rep"] for t in doc["tasks"]) == 10


def test_gen_corpus_manifest(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--n", "5", "--sr", "0.4", "--seed", "1", "--count", "3", "--out-dir", str(tmp_path), "--json")
    assert code == 0 and json.loads(out)["written"] == 3
    assert len(json.loads((tmp_path / "manifest.json").read_text())["chains"]) == 3


def test_buffers(capsys):
    code, out, _ = run(capsys, "buffers", "--replicas", "3,1,2", "--json")
    assert code == 0 and json.loads(out)["links"] == [3, 2]


def test_oracle_simulate_pin(tmp_path, capsys):
    chain = tmp_path / "c1.json"
    chain.write_text(json.dumps({"tasks": [
        {"id": 1, "wb": 4, "wl": 8, "rep": True},
        {"id": 2, "wb": 2, "wl": 4, "rep": False},
        {"id": 3, "wb": 6, "wl": 12, "rep": True},
        {"id": 4, "wb": 2, "wl": 4, "rep": True},
    ]}))
    code, out, _ = run(capsys, "oracle", "--chain", str(chain), "--platform", "1,2", "--json")
    assert code == 0 and json.loads(out)["min_period"] == 8
    sol = tmp_path / "sol.json"
    assert run(capsys, "schedule", "--strategy", "herad", "--chain", str(chain), "--platform", "1x2", "--out", str(sol))[0] == 0
    code, out, _ = run(capsys, "simulate", "--chain", str(chain), "--solution", str(sol), "--streams", "200", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["completion_order_is_identity"]
    assert abs(doc["measured_period"] - 8) <= 0.08
    topo = tmp_path / "topo.json"
    topo.write_text(json.dumps({"clusters": [{"type": "B", "cores": [1, 2]}, {"type": "L", "cores": [3, 4]}]}))
    code, out, _ = run(capsys, "pin", "--solution", str(sol), "--platform", str(topo), "--policy", "packed", "--json")
    assert code == 0 and json.loads(out)["policy"] == "packed"


def test_fixtures_listing(capsys):
    code, out, _ = run(capsys, "fixtures", "--json")
    keys = {f["key"] for f in json.loads(out)["fixtures"]}
    assert code == 0 and {"orangepi5plus", "macstudio", "ai370", "x7ti"} <= keys


def test_small_sweep_and_bench(tmp_path, capsys):
    csv_path = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "sweep", "--chains", "3", "--n", "6", "--sr", "0.5", "--platforms", "2x2",
                       "--strategies", "fertac,herad", "--csv", str(csv_path), "--json")
    assert code == 0 and len(json.loads(out)["cells"]) == 2
    assert csv_path.read_text().startswith("chain_id,seed,n,sr,b,l,strategy,period,slowdown")
    code, out, _ = run(capsys, "bench", "--sizes", "6:2:2:0.5 12:2:2:0.5", "--strategies", "fertac", "--reps", "2", "--json")
    assert code == 0 and "fertac" in json.loads(out)["loglog_slope_vs_n"]


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["schedule", "--strategy", "herad"],
    ["schedule", "--strategy", "nope", "--chain", "x7ti", "--platform", "1,1"],
    ["schedule", "--strategy", "herad", "--chain", "/no/such/file.json", "--platform", "1,1"],
    ["schedule", "--strategy", "herad", "--chain", "x7ti", "--platform", "0,0"],
    ["buffers"],
    [],
])
def test_input_errors_exit_1(capsys, argv):
    assert main(argv) == 1


def test_budget_exit_2(capsys):
    code, _, err = run(capsys, "schedule", "--strategy", "twocatac", "--chain", "orangepi5plus", "--platform", "4,4", "--budget", "2")
    assert code == 2 and "error" in err


def test_pin_capacity_exit_2(tmp_path, capsys):
    sol = tmp_path / "sol.json"
    sol.write_text(json.dumps({"stages": [{"first": 1, "last": 1, "r": 3, "v": "B"}], "period": 1}))
    topo = tmp_path / "topo.json"
    topo.write_text(json.dumps({"clusters": [{"type": "B", "cores": [1, 2]}]}))
    assert main(["pin", "--solution", str(sol), "--platform", str(topo), "--policy", "packed"]) == 2
