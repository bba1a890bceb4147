"""CLI: subcommand wiring, determinism, exit codes, config handling."""

import json

import pytest

from vortexbound import cli


def run(argv):
    return cli.main(argv)


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestExitCodes:
    def test_no_arguments_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run([])
        assert exc.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            run(["spectrum", "--bogus", "1"])
        assert exc.value.code == 2

    def test_validation_error_is_two(self, tmp_path):
        out = tmp_path / "x.csv"
        code = run(["spectrum", "--gamma2", "-3", "--out", str(out)])
        assert code == 2

    def test_success_is_zero(self, tmp_path):
        out = tmp_path / "x.csv"
        code = run(["specfun-check", "--n", "3", "--out", str(out)])
        assert code == 0


class TestDeterminism:
    def _twice(self, argv_base, tmp_path, name):
        paths = []
        for tag in ("a", "b"):
            out = tmp_path / f"{name}_{tag}"
            assert run(argv_base + ["--out", str(out)]) == 0
            paths.append(out)
        assert _read(paths[0]) == _read(paths[1])
        return paths[0]

    def test_spectrum(self, tmp_path):
        out = self._twice(["spectrum", "--gamma2", "6", "--lmax", "1",
                           "--pmax", "2", "--method", "closed"], tmp_path, "spec")
        header = out.read_text().splitlines()[0]
        assert header == ("gamma2,ell,p,class,eps,q,"
                          "E_over_n0g12,E_over_hbar_omega,physical")

    def test_spectrum_sweep(self, tmp_path):
        self._twice(["spectrum", "--sweep", "--gmin", "1.0", "--gmax", "2.0",
                     "--gn", "3", "--lmax", "1", "--pmax", "1",
                     "--method", "closed"], tmp_path, "sweep")

    def test_profile(self, tmp_path):
        self._twice(["profile", "--gamma2", "6", "--rmax", "6", "--n", "20"],
                    tmp_path, "prof")

    def test_compare(self, tmp_path):
        self._twice(["compare", "--gamma2", "6", "--lmax", "0", "--radius", "200",
                     "--ngrid", "20000"], tmp_path, "cmp")

    def test_onset_table(self, tmp_path):
        out = self._twice(["onset-table", "--lmax", "1", "--pmax", "1",
                           "--npts", "10"], tmp_path, "onset")
        assert out.read_text().splitlines()[0] == "ell,p,c,ln_inv_r,residual"

    def test_regime_diagram(self, tmp_path):
        out = self._twice(["regime-diagram", "--rmin", "500", "--rmax", "1500",
                           "--gmin", "0.5", "--gmax", "3.0", "--nx", "3",
                           "--ny", "3"], tmp_path, "regime")
        assert out.read_text().splitlines()[0] == "r_over_xi,gamma2,n_states"

    def test_specfun_check(self, tmp_path):
        out = self._twice(["specfun-check", "--lmin", "1", "--lmax", "3", "--n", "5"],
                          tmp_path, "sf")
        assert out.read_text().splitlines()[0] == "lambda,K,Kprime,K1,K1_asym"

    def test_presets(self, tmp_path):
        self._twice(["presets"], tmp_path, "presets")

    def test_scales(self, tmp_path):
        cfg = tmp_path / "sys.json"
        cfg.write_text(json.dumps({"m1": 1.2e-26, "m2": 3.0e-25, "g11": 2e-38,
                                   "g12": 3e-38, "n0": 5e12}))
        self._twice(["scales", str(cfg)], tmp_path, "scales")


class TestConfigFile:
    def test_json_config_applies(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"gamma2": 6.0, "lmax": 1, "pmax": 1,
                                   "method": "closed"}))
        out = tmp_path / "out.csv"
        assert run(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
        body = out.read_text()
        assert body.startswith("gamma2,") and ",1," in body

    def test_toml_config_applies(self, tmp_path):
        cfg = tmp_path / "cfg.toml"
        cfg.write_text('gamma2 = 6.0\nlmax = 1\npmax = 1\nmethod = "closed"\n')
        out = tmp_path / "out.csv"
        assert run(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"gamma2": 6.0, "nonsense": True}))
        assert run(["spectrum", "--config", str(cfg)]) == 2


class TestScales:
    def test_fixed_keys(self, tmp_path, capsys):
        cfg = tmp_path / "sys.json"
        cfg.write_text(json.dumps({"m1": 1.2e-26, "m2": 3.0e-25, "g11": 2e-38,
                                   "g12": 3e-38, "n0": 5e12}))
        out = tmp_path / "scales.json"
        assert run(["scales", str(cfg), "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert set(data) == {"xi", "mu", "gamma2", "kappa2", "zeta", "xi_hat", "omega"}
        err = capsys.readouterr().err
        assert "n0*g12/k_B" in err

    def test_dimensionless_config_rejected(self, tmp_path):
        cfg = tmp_path / "p.json"
        cfg.write_text(json.dumps({"gamma2": 6.0}))
        assert run(["scales", str(cfg)]) == 2


class TestThreadsAndPlots:
    def test_sweep_threads_deterministic(self, tmp_path):
        base = ["spectrum", "--sweep", "--gmin", "1.0", "--gmax", "2.0", "--gn", "4",
                "--lmax", "1", "--pmax", "1", "--method", "closed"]
        one = tmp_path / "t1.csv"
        four = tmp_path / "t4.csv"
        assert run(base + ["--threads", "1", "--out", str(one)]) == 0
        assert run(base + ["--threads", "4", "--out", str(four)]) == 0
        assert _read(one) == _read(four)

    def test_plot_rendered(self, tmp_path):
        out = tmp_path / "prof.csv"
        png = tmp_path / "prof.png"
        assert run(["profile", "--gamma2", "6", "--rmax", "6", "--n", "20",
                    "--out", str(out), "--plot", str(png)]) == 0
        assert png.stat().st_size > 1000
