import io
import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from passinet import cli, netfile
from passinet import digraph as dg
from passinet.passify import double_integrator_agent
from passinet.simkit import NetworkSpec

DI = double_integrator_agent()


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


def write_net(tmp_path, data, name="net.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def di_block():
    return DI.to_dict()


# network files

def test_parse_minimal_file():
    nf = netfile.parse_network_file(json.dumps({"agent": di_block(), "graph": {"n": 3, "arcs": [[1, 2], [2, 3], [3, 1]]}}))
    assert nf.graph == dg.make_cycle(3)
    assert nf.gains is None and nf.x0 is None
    np.testing.assert_array_equal(nf.resolve_gains(2.0), [2.0, 2.0, 2.0])


def test_parse_reports_json_position():
    with pytest.raises(netfile.ParseError, match="line 2 column"):
        netfile.parse_network_file('{"agent":\n  oops}')


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda d: d["agent"].pop("B"), "'B'"),
        (lambda d: d["agent"].__setitem__("A", [[0, "x"], [1, 0]]), "agent.A"),
        (lambda d: d.__setitem__("gains", [1.0, 1.0]), "gains"),
        (lambda d: d.__setitem__("x0", [1.0]), "x0"),
        (lambda d: d.__setitem__("sim", {"steps": 4}), "sim.steps"),
        (lambda d: d["graph"].__setitem__("arcs", [[1, 1, 1.0]]), "graph"),
    ],
)
def test_parse_field_diagnostics(mutate, field):
    data = {"agent": di_block(), "graph": {"n": 3, "arcs": [[1, 2, 1.0], [2, 3, 1.0], [3, 1, 1.0]]}}
    mutate(data)
    with pytest.raises(netfile.ParseError, match=field.replace(".", r"\.")):
        netfile.network_file_from_dict(data)


def test_round_trip_is_exact():
    rng = np.random.default_rng(61)
    g = dg.WeightedDigraph(4, ((1, 2, 1 / 3), (2, 3, 0.1), (3, 4, 2.0), (4, 1, math.pi)))
    spec = NetworkSpec(DI, g, rng.uniform(0.1, 3.0, 4), rng.uniform(-5, 5, 8))
    text = netfile.dump_network_file(netfile.NetworkFile.from_spec(spec, {"t_end": 3.0}))
    back = netfile.parse_network_file(text)
    assert back.to_spec() == spec
    assert back.sim == {"t_end": 3.0}


def test_seed_environment_variable(monkeypatch):
    nf = netfile.cycle(4, k=1.0)
    monkeypatch.delenv("PASSINET_SEED", raising=False)
    a = nf.to_spec().x0
    monkeypatch.setenv("PASSINET_SEED", "42")
    np.testing.assert_array_equal(nf.to_spec().x0, a)
    monkeypatch.setenv("PASSINET_SEED", "7")
    b = nf.to_spec().x0
    assert not np.array_equal(a, b)
    assert np.all(np.abs(b) <= 5)
    monkeypatch.setenv("PASSINET_SEED", "seven")
    with pytest.raises(netfile.ParseError):
        nf.to_spec()


def test_presets():
    nf = netfile.preset("three_node", case=1)
    np.testing.assert_allclose(nf.gains, [0.0, 0.527 * 1.5, 0.527 * 1.5])
    np.testing.assert_array_equal(nf.x0, [2, -2, -7, 3, 1, -3])
    nf = netfile.preset("dodeca", nu=4.0, mu=4.0)
    np.testing.assert_array_equal(nf.gains, np.full(20, 4.0))
    with pytest.raises(netfile.ParseError):
        netfile.preset("nope")


# analyze

def test_analyze_three_node_json():
    code, text = run("analyze", "--preset", "three_node", "--json")
    assert code == 0
    res = json.loads(text)
    assert res["agent"]["kappa0"] == pytest.approx(1.0, abs=1e-6)
    assert res["thresholds"]["sufficient_identical"] == pytest.approx(1.0)
    assert res["thresholds"]["exact_identical_closed_form"] == 0.0
    assert res["thresholds"]["exact_identical_bisection"] < 1e-6
    assert res["graph"]["leading_set"] == [1]
    assert res["verdict"]["achieved"] is True


def test_analyze_cycle_ten():
    code, text = run("analyze", "--preset", "cycle", "--n", "10", "--json")
    assert code == 0
    th = json.loads(text)["thresholds"]
    assert th["exact_identical_bisection"] == pytest.approx(4.7361, abs=1e-3)
    assert th["exact_identical_closed_form"] == pytest.approx(0.5 / math.tan(math.pi / 10) ** 2, rel=1e-12)


def test_analyze_text_output():
    code, text = run("analyze", "--preset", "cycle", "--n", "3", "--k", "0.15")
    assert code == 0
    assert "kappa0: 1" in text and "consensus=False" in text


def test_analyze_without_spanning_tree(tmp_path):
    path = write_net(tmp_path, {"agent": di_block(), "graph": {"n": 3, "arcs": [[2, 1, 1.0]]}})
    code, text = run("analyze", path)
    assert code == 2
    assert "A2 violated" in text


def test_analyze_non_hmp_agent(tmp_path):
    agent = {"A": [[0, 0], [1, 0]], "B": [[1], [0]], "C": [[0], [1]], "g": [1]}
    path = write_net(tmp_path, {"agent": agent, "graph": {"n": 2, "arcs": [[2, 1, 1.0]]}})
    code, text = run("analyze", path, "--json")
    assert code == 2
    assert any("A1 violated" in v for v in json.loads(text)["violations"])
    code, _ = run("passify", path)
    assert code == 2


def test_region_without_spanning_tree_exit_code(tmp_path, capsys):
    path = write_net(tmp_path, {"agent": di_block(), "graph": {"n": 3, "arcs": [[2, 1, 1.0]]}})
    code, _ = run("region", path)
    assert code == 2
    assert capsys.readouterr().err.count("A2 violated") == 1


def test_usage_errors(tmp_path, capsys):
    assert run("analyze")[0] == 1
    assert run("analyze", "--preset", "cycle", "--n", "1")[0] == 1
    assert run("analyze", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("analyze", str(bad))[0] == 1
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == 1
    assert run("scaling", "--n-max", "2")[0] == 1
    capsys.readouterr()


# simulate

def test_simulate_three_node_both_cases(tmp_path):
    out = tmp_path / "trace.csv"
    svg = tmp_path / "e.svg"
    code, text = run(
        "simulate", "--preset", "three_node", "--case", "both", "--out", str(out), "--svg", str(svg), "--json"
    )
    assert code == 0
    res = json.loads(text)
    assert [r["converged"] for r in res] == [True, True]
    assert all(r["agrees"] for r in res)
    for tag in ("case1", "case2"):
        csv_path = tmp_path / f"trace_{tag}.csv"
        header = csv_path.read_text().splitlines()[0].split(",")
        assert header == ["t", "x_1_1", "x_1_2", "x_2_1", "x_2_2", "x_3_1", "x_3_2", "e", "c_1", "c_2"]
        last = [float(v) for v in csv_path.read_text().splitlines()[-1].split(",")]
        assert last[0] == pytest.approx(25.0)
        assert last[-2:] == pytest.approx([2.0, 48.0])
        assert (tmp_path / f"e_phase_{tag}.svg").exists()
    doc = svg.read_text()
    assert doc.startswith("<svg") and doc.count("<polyline") == 2


def test_simulate_csv_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run("simulate", "--preset", "cycle", "--n", "5", "--k", "2", "--t-end", "3", "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_divergence_exit(tmp_path):
    agent = {"A": [[1.0]], "B": [[1.0]], "C": [[1.0]], "g": [1.0]}
    path = write_net(
        tmp_path,
        {"agent": agent, "graph": {"n": 2, "arcs": [[2, 1, 1.0]]}, "gains": [1.0, 1.0], "x0": [1.0, 2.0],
         "sim": {"t_end": 60, "dt": 0.01}},
    )
    code, text = run("simulate", path)
    assert code == 3
    assert "first exceed at t=" in text


def test_simulate_text_summary():
    code, text = run("simulate", "--preset", "cycle", "--n", "3", "--k", "0.15", "--t-end", "50", "--dt", "0.01")
    assert code == 0
    assert "converged=False" in text and "agrees=True" in text


# region and scaling

def test_region_three_node(tmp_path):
    out = tmp_path / "b.csv"
    svg = tmp_path / "b.svg"
    code, text = run("region", "--preset", "three_node", "--out", str(out), "--svg", str(svg), "--json")
    assert code == 0
    res = json.loads(text)
    assert res["min"]["delta"] == pytest.approx(2 / 3, abs=1e-6)
    assert res["min"]["ratio"] == pytest.approx(2.0, rel=1e-5)
    assert res["min"]["h_rho"] == pytest.approx(math.sqrt(5) / 2, rel=1e-8)
    header = out.read_text().splitlines()[0]
    assert header == "kp_1,kp_2,kp_3,radius,p_1,p_2,p_3,gamma,rho"
    assert svg.read_text().startswith("<svg")


def test_region_sample_doubling_and_eps():
    a = json.loads(run("region", "--preset", "three_node", "--samples", "50", "--json")[1])
    b = json.loads(run("region", "--preset", "three_node", "--samples", "100", "--json")[1])
    coarse_step = (math.acos(0.05) - math.asin(0.05)) / 49
    assert abs(a["min"]["gamma"] - b["min"]["gamma"]) < coarse_step
    c = json.loads(run("region", "--preset", "three_node", "--eps", "0.2", "--json")[1])
    assert 0.2 < c["min"]["k_prime"][2] and 0.2 < c["min"]["k_prime"][1]
    assert c["min"]["delta"] == pytest.approx(2 / 3, abs=1e-6)


def test_scaling_table(tmp_path):
    out = tmp_path / "s.csv"
    code, _ = run("scaling", "--out", str(out))
    assert code == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    assert rows[0][0] == "3" and rows[-1][0] == "200"
    row4 = next(r for r in rows if r[0] == "4")
    assert float(row4[1]) == pytest.approx(0.5)
    ratios = [float(r[3]) for r in rows]
    assert 0.98 <= ratios[-1] <= 1.0
    assert all(x < y for x, y in zip(ratios, ratios[1:]))


def test_scaling_to_stdout():
    code, text = run("scaling", "--n-max", "5")
    assert code == 0
    assert text.splitlines()[0] == "N,cycle_threshold,asymptote,ratio"
    assert len(text.splitlines()) == 4


def test_passify_json():
    code, text = run("passify", "--preset", "cycle", "--json")
    assert code == 0
    res = json.loads(text)
    assert res["is_hmp"] and res["kappa0"] == pytest.approx(1.0, abs=1e-6)


@pytest.mark.skipif(shutil.which("passinet") is None, reason="console script not installed")
def test_console_script_exit_code(tmp_path):
    path = write_net(tmp_path, {"agent": di_block(), "graph": {"n": 3, "arcs": [[2, 1, 1.0]]}})
    proc = subprocess.run(["passinet", "analyze", path], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "passinet.cli", "scaling", "--n-max", "4"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("N,")
