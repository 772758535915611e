import json
import os

import pytest

from lurkergame.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from lurkergame.config import load_file, parse_config
from lurkergame.errors import SpecificationError
from lurkergame.game import MemoryMode
from lurkergame.netgen import NetworkModel, read_edgelist


def cli(*argv):
    return main([str(a) for a in argv])


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def data_lines(path):
    return [l for l in read(path).decode().splitlines() if not l.startswith("#")]


class TestParseConfig:
    def test_simulate_defaults(self):
        cfg = parse_config("simulate", None, {"game": {"nu": 0.5}})
        assert cfg.network.model is NetworkModel.WS
        assert (cfg.network.n, cfg.network.mean_degree, cfg.network.beta) == (5000, 4, 0.0)
        g = cfg.game
        assert (g.r, g.K, g.vc, g.prize_period_k) == (2.0, 0.5, 1.0, None)
        assert g.memory_mode is MemoryMode.MEMORYLESS
        ex = cfg.execution
        assert (ex.init_rho_c, ex.max_steps, ex.runs, ex.master_seed) == (0.5, 10**7, 1, 0)

    def test_nu_required_for_simulate(self):
        with pytest.raises(SpecificationError, match="game.nu"):
            parse_config("simulate", {}, {})

    def test_nu_out_of_range(self):
        with pytest.raises(SpecificationError, match=r"\(0,1\]"):
            parse_config("simulate", {"game": {"nu": 1.5}})

    def test_flag_beats_file(self):
        cfg = parse_config("simulate", {"game": {"nu": 0.3}, "network": {"n": 100}},
                           {"game": {"nu": 0.7}})
        assert cfg.game.nu == 0.7 and cfg.network.n == 100

    @pytest.mark.parametrize("values,key", [
        ({"game": {"nuu": 0.5}}, "game.nuu"),
        ({"gamez": {}}, "gamez"),
        ({"network": {"n": "many"}}, "network.n"),
        ({"execution": {"init_rho_c": 2}}, "execution.init_rho_c"),
        ({"network": {"model": "ER"}}, "ER"),
        ({"network": {"model": "BA", "mean_degree": 4}}, "network.m"),
        ({"game": {"memory_mode": "sometimes"}}, "sometimes"),
    ])
    def test_errors_name_the_key(self, values, key):
        values.setdefault("game", {}).setdefault("nu", 0.5)
        with pytest.raises(SpecificationError, match=key):
            parse_config("simulate", values)

    def test_ba_default_m(self):
        cfg = parse_config("metrics", {"network": {"model": "BA"}})
        assert cfg.network.m == 2

    def test_sweep_defaults(self):
        cfg = parse_config("sweep")
        assert cfg.execution.runs == 30
        assert cfg.sweep["k_values"] == [1, 3, 5]
        assert cfg.sweep["nu_grid"][0] == 0.1 and cfg.sweep["nu_grid"][-1] == 1.0

    def test_echo_round_trip(self, tmp_path):
        cfg = parse_config("simulate", {"game": {"nu": 0.4, "prize_period_k": 2}},
                           {"network": {"n": 50}})
        path = tmp_path / "a.csv"
        path.write_text(f"# config={cfg.echo()}\nstep,rho_c\n")
        again = parse_config("simulate", load_file(path))
        assert again.echo() == cfg.echo()

    def test_yaml_file(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("network:\n  model: BA\n  n: 300\ngame:\n  nu: 0.25\n")
        cfg = parse_config("simulate", load_file(path))
        assert cfg.network.model is NetworkModel.BA and cfg.game.nu == 0.25


class TestSubcommands:
    def test_generate_network(self, tmp_path):
        assert cli("generate-network", "--model", "BA", "--n", 200, "--output", tmp_path) == EXIT_OK
        path = tmp_path / "network.edgelist"
        with open(path) as fh:
            g = read_edgelist(fh)
        assert g.node_count == 200 and g.n_edges == 3 + 2 * 197
        assert read(path).decode().splitlines()[1].startswith("# config=")

    def test_metrics_table_row(self, tmp_path):
        assert cli("metrics", "--beta", 0, "--output", tmp_path) == EXIT_OK
        header, row = data_lines(tmp_path / "metrics.csv")
        assert header == "model,beta_or_m,n,seed,avg_path_length,diameter,clustering,transitivity"
        f = row.split(",")
        assert f[:4] == ["WS", "0", "5000", "0"]
        assert abs(float(f[4]) - 625.38) <= 0.01
        assert int(f[5]) == 1250 and float(f[6]) == 0.5

    def test_metrics_mean_row(self, tmp_path):
        assert cli("metrics", "--beta", 0.5, "--n", 300, "--runs", 3, "--output", tmp_path) == 0
        rows = data_lines(tmp_path / "metrics.csv")
        assert [r.split(",")[3] for r in rows[1:]] == ["0", "1", "2", "mean"]

    def test_simulate(self, tmp_path):
        rc = cli("simulate", "--nu", 0.9, "--prize-k", 2, "--n", 200, "--beta", 0.5,
                 "--max-steps", 10**6, "--seed", 4, "--output", tmp_path)
        assert rc == EXIT_OK
        rows = data_lines(tmp_path / "series.csv")
        assert rows[0] == "step,rho_c" and rows[1] == "0,0.5"
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["phase"] == "AllCooperate" and summary["ordering"] == "ferromagnetic"
        assert summary["seed"] == 4 and summary["config"]["game"]["nu"] == 0.9
        assert int(rows[-1].split(",")[0]) == summary["steps_executed"]

    def test_simulate_many_runs(self, tmp_path):
        assert cli("simulate", "--nu", 0.2, "--n", 100, "--runs", 3, "--max-steps", 10**5,
                   "--output", tmp_path) == EXIT_OK
        names = sorted(os.listdir(tmp_path))
        assert names == ["series_000.csv", "series_001.csv", "series_002.csv", "summary.json"]
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert len({r["seed"] for r in summary["runs"]}) == 3

    def test_simulate_on_given_graph(self, tmp_path):
        cli("generate-network", "--n", 80, "--beta", 0.3, "--output", tmp_path / "net")
        graph = tmp_path / "net" / "network.edgelist"
        assert cli("simulate", "--nu", 0.6, "--prize-k", 1, "--graph", graph, "--max-steps", 10**5,
                   "--output", tmp_path / "a") == EXIT_OK
        series = tmp_path / "a" / "series.csv"
        assert f'"graph_path":"{graph}"' in read(series).decode()
        # the artifact carries the graph path, so rerunning it uses the same network
        assert cli("simulate", "--config", series, "--output", tmp_path / "b") == EXIT_OK
        assert read(series) == read(tmp_path / "b" / "series.csv")

    def test_meanfield_extinction(self, tmp_path):
        assert cli("meanfield", "--output", tmp_path) == EXIT_OK
        text = read(tmp_path / "trajectory.csv").decode()
        assert "# p_c=0.119202922022 p_d=0.880797077978" in text
        rows = data_lines(tmp_path / "trajectory.csv")
        assert rows[0] == "t,rho_c,rho_d" and rows[1] == "0,0.5,0.5"
        t, rho_c, rho_d = map(float, rows[-1].split(","))
        assert t == 50 and rho_c < 1e-10 and rho_d == 1.0

    def test_sweep(self, tmp_path):
        rc = cli("sweep", "--n", 60, "--beta", 0.5, "--nu-grid", 0.1, 0.9, "--k-values", 2,
                 "--runs", 3, "--max-steps", 10**5, "--no-refine", "--workers", 1,
                 "--output", tmp_path)
        assert rc == EXIT_OK
        rows = data_lines(tmp_path / "sweep.csv")
        assert rows[0] == "model,beta_or_m,memory,nu,k,frac_coop,frac_defect,frac_coexist"
        assert len(rows) == 3
        crit = data_lines(tmp_path / "critical.csv")
        assert crit[0] == "model,beta_or_m,memory,k,critical_nu"
        assert crit[1].startswith("WS,0.5,memoryless,2,")


ALL_SUBCOMMANDS = {
    "generate-network": ["--n", 150, "--beta", 0.3],
    "metrics": ["--n", 150, "--model", "BA", "--runs", 2],
    "simulate": ["--n", 150, "--nu", 0.4, "--prize-k", 3, "--max-steps", 10**5, "--runs", 2],
    "meanfield": ["--t-end", 5],
    "sweep": ["--n", 50, "--nu-grid", 0.2, 0.6, 1.0, "--k-values", 1, 3, "--runs", 2,
              "--max-steps", 10**4, "--fine-step", 0.2],
}


@pytest.mark.parametrize("sub", sorted(ALL_SUBCOMMANDS))
def test_rerun_is_byte_identical(tmp_path, sub):
    args = ALL_SUBCOMMANDS[sub]
    assert cli(sub, *args, "--output", tmp_path / "a") == EXIT_OK
    assert cli(sub, *args, "--output", tmp_path / "b", "--workers", 2) == EXIT_OK
    names = sorted(os.listdir(tmp_path / "a"))
    assert names == sorted(os.listdir(tmp_path / "b"))
    for name in names:
        assert read(tmp_path / "a" / name) == read(tmp_path / "b" / name)
    # the embedded configuration alone regenerates every artifact
    first = next(n for n in names if not n.endswith(".json"))
    assert cli(sub, "--config", tmp_path / "a" / first, "--output", tmp_path / "c") == EXIT_OK
    for name in names:
        assert read(tmp_path / "a" / name) == read(tmp_path / "c" / name)


class TestExitCodes:
    def test_config_errors(self, tmp_path, capsys):
        assert cli("simulate", "--nu", 1.5, "--output", tmp_path) == EXIT_CONFIG
        err = capsys.readouterr().err.strip()
        assert "(0,1]" in err and len(err.splitlines()) == 1
        assert cli("simulate", "--output", tmp_path) == EXIT_CONFIG
        assert cli("metrics", "--config", tmp_path / "missing.yaml") == EXIT_CONFIG
        assert os.listdir(tmp_path) == []

    def test_runtime_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.edgelist"
        bad.write_text("0 1\n")
        assert cli("simulate", "--nu", 0.5, "--graph", bad, "--output", tmp_path) == EXIT_RUNTIME
        assert "nodes=" in capsys.readouterr().err

    def test_workers_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LURKERGAME_WORKERS", "0")
        assert cli("meanfield", "--t-end", 1, "--output", tmp_path) == EXIT_CONFIG
        monkeypatch.setenv("LURKERGAME_WORKERS", "2")
        assert cli("meanfield", "--t-end", 1, "--output", tmp_path) == EXIT_OK
