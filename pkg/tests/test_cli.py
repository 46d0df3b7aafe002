import json

import numpy as np
import pandas as pd
import pytest

from qghdist.cli import cmd_verify, main, run_suites
from qghdist.cli.config import VERIFY_BRIDGE_SAMPLES, VerifyLevel
from qghdist.cli.suites import algebra_suite, ghdist_suite

SCALAR = {"algebra": {"type": "standard", "block_dims": [1], "omega": [1.0]}, "norm": {"kind": "kernel"}}

FREEFIELD = {
    "momenta": [0.5, 1.0],
    "cutoff": 2,
    "generators": [[0.6, 0.3]],
    "masses": [0.0, 0.25, 0.5],
    "net_count": 16,
}


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def run_dist(tmp_path, capsys, config):
    code = main(["dist", "--config", write_config(tmp_path, config)])
    return code, capsys.readouterr()


class TestVerify:
    def test_quick(self, capsys):
        assert main(["verify"]) == 0
        assert "freefield" in capsys.readouterr().out

    def test_injected_fault(self, capsys):
        assert main(["verify", "--inject", "bridge", "--seed", "5"]) == 1
        assert "bridge" in capsys.readouterr().err

    def test_deterministic(self):
        a = run_suites(7, progress=False)
        b = run_suites(7, progress=False)
        pd.testing.assert_frame_equal(a, b)
        assert list(a["suite"]) == ["algebra", "lipnorm", "nets", "bridge", "ghdist", "freefield"]
        assert (a["passed"] == a["total"]).all()

    def test_cmd_verify_default_seed(self):
        df = cmd_verify(progress=False)
        assert (df["passed"] == df["total"]).all()

    def test_single_suite(self):
        df = run_suites(7, "quick", "bridge", suites=["bridge"], progress=False)
        assert df.loc[0, "failures"] == "axioms_injected"

    def test_algebra_suite(self):
        checks = dict(algebra_suite(np.random.default_rng(0), VerifyLevel.quick))
        assert checks["canonical_decomposition"]
        assert all(checks.values())

    @pytest.mark.parametrize("level", list(VerifyLevel))
    def test_ghdist_suite(self, level):
        checks = dict(ghdist_suite(np.random.default_rng(3), level))
        assert checks["net_triangle"]
        assert checks["uniqueness_at_zero"]
        assert all(checks.values())

    def test_bridge_restriction_samples(self):
        assert min(VERIFY_BRIDGE_SAMPLES.values()) >= 100


class TestDist:
    def test_identical(self, tmp_path, capsys):
        config = {"M": SCALAR, "N": SCALAR, "bridges": [{"kind": "iso"}], "nets": {"count": 32}}
        code, captured = run_dist(tmp_path, capsys, config)
        assert code == 0
        report = json.loads(captured.out)
        assert report["lower"] == 0.0
        assert report["bridge"] == "iso"
        assert report["upper"] <= report["slack"]["M"] + report["slack"]["N"] + 1e-12

    def test_scaled_norm(self, tmp_path, capsys):
        N = {"algebra": SCALAR["algebra"], "norm": {"kind": "kernel", "T": 2.0}}
        config = {
            "M": SCALAR,
            "N": N,
            "bridges": [{"kind": "sum"}, {"kind": "kernel", "name": "scaled"}],
            "nets": {"count": 32},
        }
        code, captured = run_dist(tmp_path, capsys, config)
        assert code == 0
        report = json.loads(captured.out)
        assert report["lower"] == pytest.approx(1.0)
        assert report["upper"] == pytest.approx(1.0)
        assert report["bridge"] == "scaled"
        assert report["certified"] is True
        assert report["radii"] == pytest.approx([1.0, 2.0])

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "config.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["dist", "--config", str(path)]) == 2

    def test_missing_file(self, tmp_path):
        assert main(["dist", "--config", str(tmp_path / "missing.json")]) == 2

    def test_unknown_key(self, tmp_path, capsys):
        config = {"M": SCALAR, "N": SCALAR, "bridges": [{"kind": "sum"}], "colour": "blue"}
        code, captured = run_dist(tmp_path, capsys, config)
        assert code == 2
        assert "colour" in captured.err

    def test_omega_shape_mismatch(self, tmp_path, capsys):
        M = {
            "algebra": {"type": "diagonal", "n": 2, "omega": {"re": [1, 0], "im": [0]}},
            "norm": {"kind": "kernel"},
        }
        code, captured = run_dist(tmp_path, capsys, {"M": M, "N": M, "bridges": [{"kind": "sum"}]})
        assert code == 2
        assert "build_algebra" in captured.err

    def test_bad_coupler_shape(self, tmp_path, capsys):
        config = {
            "M": SCALAR,
            "N": SCALAR,
            "bridges": [{"kind": "coupler", "U": [1, 0, 0]}],
            "nets": {"count": 8},
        }
        code, captured = run_dist(tmp_path, capsys, config)
        assert code == 3
        assert "跳过候选桥" in captured.err

    def test_no_valid_bridge(self, tmp_path, capsys):
        config = {
            "M": SCALAR,
            "N": SCALAR,
            "bridges": [{"kind": "coupler", "U": [[0.5]]}],
            "nets": {"count": 8},
        }
        code, _ = run_dist(tmp_path, capsys, config)
        assert code == 3

    def test_not_separating(self, tmp_path, capsys):
        M = {
            "algebra": {"type": "full_matrix", "n": 2, "omega": [1.0, 0.0]},
            "norm": {"kind": "kernel"},
        }
        code, _ = run_dist(tmp_path, capsys, {"M": M, "N": M, "bridges": [{"kind": "sum"}]})
        assert code == 4


class TestFreefield:
    def test_outputs(self, tmp_path, capsys):
        config = write_config(tmp_path, FREEFIELD)
        code = main(["freefield", "--config", config, "--out", str(tmp_path), "--threads", "2"])
        assert code == 0
        header = (tmp_path / "sweep.csv").read_text().splitlines()[0]
        assert header == "m_prime,certified_bound,net_sup,qgh_upper"
        report = json.loads((tmp_path / "sweep.json").read_text())
        assert set(report) == {"base_mass", "beta", "rows"}
        assert len(report["rows"]) == 3
        assert capsys.readouterr().out.strip().startswith("max_bound=")

    def test_not_separating(self, tmp_path):
        config = dict(FREEFIELD, cutoff=1, reduce_to_separating=False)
        code = main(["freefield", "--config", write_config(tmp_path, config), "--out", str(tmp_path)])
        assert code == 4
        assert not (tmp_path / "sweep.csv").exists()

    def test_bad_generator(self, tmp_path):
        config = dict(FREEFIELD, generators=[[0.6, 0.3, 0.1]])
        code = main(["freefield", "--config", write_config(tmp_path, config), "--out", str(tmp_path)])
        assert code == 2


class TestNet:
    CONFIG = {
        "algebra": {"type": "standard", "block_dims": [1]},
        "target": "unit_ball",
        "count": 2,
        "probes": 4,
    }

    def test_writes_net(self, tmp_path, capsys):
        config = write_config(tmp_path, self.CONFIG)
        assert main(["net", "--config", config, "--out", str(tmp_path)]) == 0
        data = json.loads((tmp_path / "net.json").read_text())
        assert data["target"] == "unit_ball"
        assert data["blocks"] == [[[[0.0, 0.0]]], [[[1.0, 0.0]]]]
        assert data["covering_estimate"]["method"] == "empirical"
        assert capsys.readouterr().out.strip().endswith("net.json")

    def test_reproducible(self, tmp_path):
        config = write_config(tmp_path, dict(self.CONFIG, target="unit_sphere", count=16))
        a, b = tmp_path / "a", tmp_path / "b"
        a.mkdir()
        b.mkdir()
        assert main(["--seed", "3", "net", "--config", config, "--out", str(a)]) == 0
        assert main(["net", "--config", config, "--out", str(b), "--seed", "3"]) == 0
        assert (a / "net.json").read_bytes() == (b / "net.json").read_bytes()
        assert json.loads((a / "net.json").read_text())["seed"] == 3

    def test_missing_target(self, tmp_path):
        config = write_config(tmp_path, {"algebra": {"block_dims": [1]}})
        assert main(["net", "--config", config, "--out", str(tmp_path)]) == 2


class TestUsage:
    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == 2

    def test_no_subcommand(self):
        assert main([]) == 2

    def test_bad_level(self):
        assert main(["verify", "--level", "slow"]) == 2
