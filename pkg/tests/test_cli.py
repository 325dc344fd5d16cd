"""
Tests de la configuration JSON et de la ligne de commande
"""

import json

import numpy as np
import pandas as pd
import pytest

from parafis.cli.commands import main
from parafis.cli.config import ExperimentConfig, ModelConfig, load_config, slugify
from parafis.utils.constants import STATUS_MESSAGES
from parafis.utils.errors import ConfigurationError

SYNTHETIC = {
    "dataset": {"synthetic": {"length": 300, "drift_at": 150}},
    "models": [{"name": "ParaFIS"}, "GEFS*"],
    "record_model": "ParaFIS",
    "repeats": 2,
    "seed": 7,
    "output_dir": "out"
}


def _write_config(tmp_path, data, name="experiment.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding='utf-8')
    return str(path)


def _curve(S, tau, s_min, n):
    t = np.arange(n, dtype=float)
    return S * (1.0 - np.exp(-t / tau)) + s_min


class TestConfig:

    def test_model_presets(self):
        gefs = ModelConfig.from_dict("GEFS*", dataset_key='letters')
        assert gefs.hyperparams.kappa == 1.6
        assert not gefs.hyperparams.uses_anticipation
        para2 = ModelConfig.from_dict("Para2")
        assert para2.hyperparams.alpha2 == 0.95

    def test_error_names_field(self):
        data = dict(SYNTHETIC, models=[{"name": "ok"}, {"name": "bad", "alpha1": 0.9, "alpha2": 0.95}])
        with pytest.raises(ConfigurationError) as excinfo:
            ExperimentConfig.from_dict(data)
        assert excinfo.value.field == "models[1].alpha2"

    def test_seed_is_mandatory(self):
        data = {key: value for key, value in SYNTHETIC.items() if key != 'seed'}
        with pytest.raises(ConfigurationError) as excinfo:
            ExperimentConfig.from_dict(data)
        assert excinfo.value.field == 'seed'

    def test_protocol_required_for_files(self, tmp_path):
        data = {"dataset": {"path": "x.tra", "layout": "pendigits"}, "models": ["Para1"], "seed": 1}
        with pytest.raises(ConfigurationError) as excinfo:
            ExperimentConfig.from_dict(data, str(tmp_path))
        assert excinfo.value.field == 'protocol'

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError) as excinfo:
            ExperimentConfig.from_dict(dict(SYNTHETIC, repeat=3))
        assert excinfo.value.field == 'repeat'

    def test_duplicate_names(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig.from_dict(dict(SYNTHETIC, models=["I2", "I2"]))

    def test_relative_paths_follow_config_file(self, tmp_path):
        config = load_config(_write_config(tmp_path, SYNTHETIC))
        assert config.output_dir == str(tmp_path / "out")
        assert list(config.hyperparams) == ['ParaFIS', 'GEFS*']

    def test_data_dir_fallback(self, tmp_path, monkeypatch, toy_dataset_file):
        monkeypatch.setenv('PARAFIS_DATA_DIR', str(toy_dataset_file.parent))
        other = tmp_path / "configs"
        other.mkdir()
        data = {"dataset": {"path": "toy.tra", "layout": "pendigits"}, "protocol": "pendigits",
                "models": ["Para1"], "seed": 1}
        config = load_config(_write_config(other, data))
        assert config.dataset.paths == [str(toy_dataset_file)]

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding='utf-8')
        with pytest.raises(ConfigurationError):
            load_config(str(path))

    def test_slugify(self):
        assert slugify("GEFS*") == "GEFS_"
        assert slugify("Para1") == "Para1"


class TestRunCommand:

    def test_run_writes_all_outputs(self, tmp_path):
        config = _write_config(tmp_path, SYNTHETIC)
        assert main(['run', '--config', config]) == 0

        out = tmp_path / "out"
        for relative in ("records/ParaFIS_rep0.csv", "records/ParaFIS_rep1.csv", "records/GEFS__rep0.csv",
                         "records/ParaFIS_mean.csv", "traces/ParaFIS_rep0.trace", "traces/GEFS__rep1.trace",
                         "plots/ParaFIS.csv", "fits.csv", "accuracy.csv", "summary.csv"):
            assert (out / relative).exists(), relative

        summary = pd.read_csv(out / "summary.csv")
        assert summary['config'].tolist() == ['ParaFIS', 'GEFS*']
        assert summary['mean_acc'].between(0.0, 1.0).all()
        fits = pd.read_csv(out / "fits.csv")
        assert fits['phase'].tolist() == ['A', 'B', 'A', 'B']

    def test_run_is_deterministic(self, tmp_path):
        config = _write_config(tmp_path, SYNTHETIC)
        assert main(['run', '--config', config, '--out', str(tmp_path / "a")]) == 0
        assert main(['run', '--config', config, '--out', str(tmp_path / "b")]) == 0
        for relative in ("summary.csv", "fits.csv", "records/ParaFIS_rep1.csv", "traces/ParaFIS_rep1.trace"):
            assert (tmp_path / "a" / relative).read_bytes() == (tmp_path / "b" / relative).read_bytes()

    def test_replay_reproduces_recorded_run(self, tmp_path):
        config = _write_config(tmp_path, SYNTHETIC)
        assert main(['run', '--config', config]) == 0
        trace = str(tmp_path / "out" / "traces" / "ParaFIS_rep1.trace")
        assert main(['replay', '--config', config, '--trace', trace, '--repeat-index', '1',
                     '--out', str(tmp_path / "replay")]) == 0

        recorded = (tmp_path / "out" / "records" / "ParaFIS_rep1.csv").read_bytes()
        replayed = (tmp_path / "replay" / "records" / "ParaFIS_rep1.csv").read_bytes()
        assert replayed == recorded

    def test_replay_defaults_to_subdirectory(self, tmp_path):
        config = _write_config(tmp_path, SYNTHETIC)
        assert main(['run', '--config', config]) == 0
        out = tmp_path / "out"
        before = {relative: (out / relative).read_bytes()
                  for relative in ("summary.csv", "fits.csv", "records/GEFS__rep0.csv", "traces/GEFS__rep0.trace")}

        trace = str(out / "traces" / "ParaFIS_rep0.trace")
        assert main(['replay', '--config', config, '--trace', trace]) == 0

        for relative, content in before.items():
            assert (out / relative).read_bytes() == content, relative
        assert (out / "replay" / "summary.csv").exists()
        assert (out / "replay" / "records" / "GEFS__rep0.csv").exists()

    def test_dataset_run_with_excel_report(self, tmp_path, toy_dataset_file):
        data = {
            "dataset": {"path": str(toy_dataset_file), "layout": "pendigits"},
            "protocol": {"t1": 60, "t2": 120, "t3": 180, "n1": 2, "n2": 1, "n3": 1},
            "models": ["Para1", "I2", "GEFS*"],
            "record_model": "Para1",
            "seed": 3,
            "excel_report": True
        }
        config = _write_config(tmp_path, data)
        assert main(['run', '--config', config, '--out', str(tmp_path / "res")]) == 0
        assert (tmp_path / "res" / "summary.xlsx").exists()
        assert len(pd.read_csv(tmp_path / "res" / "summary.csv")) == 3

    def test_missing_dataset(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv('PARAFIS_DATA_DIR', raising=False)
        data = {"dataset": {"path": "absent.tra", "layout": "pendigits"}, "protocol": "pendigits",
                "models": ["Para1"], "seed": 1}
        assert main(['run', '--config', _write_config(tmp_path, data)]) == 2
        assert "absent.tra" in capsys.readouterr().err

    def test_invalid_hyperparameters(self, tmp_path, capsys):
        data = dict(SYNTHETIC, models=[{"name": "bad", "alpha1": 0.9, "alpha2": 0.95}], record_model=None)
        assert main(['run', '--config', _write_config(tmp_path, data)]) == 2
        assert "models[0].alpha2" in capsys.readouterr().err

    def test_truncated_trace(self, tmp_path, capsys):
        config = _write_config(tmp_path, SYNTHETIC)
        trace = tmp_path / "bad.trace"
        trace.write_text("0,0,NewClass\n12,0\n", encoding='utf-8')
        assert main(['replay', '--config', config, '--trace', str(trace)]) == 2
        err = capsys.readouterr().err
        assert "ligne 2" in err
        assert f"❌ {STATUS_MESSAGES['error']}: " in err

    def test_usage_error(self):
        assert main([]) == 2
        assert main(['run']) == 2


class TestFitCommand:

    def test_fit_single_curve(self, tmp_path):
        path = tmp_path / "curve.csv"
        curve = _curve(0.2, 50.0, 0.7, 500)
        pd.DataFrame({'step': np.arange(500), 'smoothed_score': curve}).to_csv(path, index=False)

        assert main(['fit', str(path)]) == 0
        fits = pd.read_csv(tmp_path / "curve_fits.csv")
        assert fits.loc[0, 'S_plus_smin'] == pytest.approx(0.9, rel=1e-4)
        assert fits.loc[0, 'tau'] == pytest.approx(50.0, rel=1e-4)

    def test_fit_with_boundaries(self, tmp_path):
        path = tmp_path / "curve.csv"
        curve = np.concatenate([_curve(0.2, 50.0, 0.7, 300), _curve(0.3, 40.0, 0.6, 300)])
        pd.DataFrame({'step': np.arange(600), 'smoothed_score': curve}).to_csv(path, index=False)

        out = tmp_path / "fits.csv"
        assert main(['fit', str(path), '--boundaries', '300', '--out', str(out)]) == 0
        fits = pd.read_csv(out)
        assert fits['phase'].tolist() == ['A', 'B']
        assert fits.loc[1, 'tau'] == pytest.approx(40.0, rel=1e-4)

    def test_fit_with_end_boundary(self, tmp_path):
        path = tmp_path / "curve.csv"
        curve = np.concatenate([_curve(0.2, 50.0, 0.7, 300), _curve(0.3, 40.0, 0.6, 300)])
        pd.DataFrame({'step': np.arange(600), 'smoothed_score': curve}).to_csv(path, index=False)

        out = tmp_path / "fits.csv"
        assert main(['fit', str(path), '--boundaries', '300,600', '--out', str(out)]) == 0
        assert pd.read_csv(out)['phase'].tolist() == ['A', 'B']

    def test_fit_short_phase(self, tmp_path):
        path = tmp_path / "curve.csv"
        pd.DataFrame({'step': np.arange(100), 'smoothed_score': np.linspace(0.5, 0.9, 100)}).to_csv(path, index=False)
        assert main(['fit', str(path), '--boundaries', '95']) == 2

    def test_fit_malformed_csv(self, tmp_path):
        path = tmp_path / "curve.csv"
        path.write_text("step,value\n0,1\n", encoding='utf-8')
        assert main(['fit', str(path)]) == 2
