"""Unit tests for the hds-fallcast command-line interface."""

import json
from pathlib import Path

import pytest

from hds_fallcast import __version__
from hds_fallcast.cli import parse_arguments, run_cli

SMALL_SYNTH = "synth: {n_fall: 20, n_nofall: 100, min_length: 4, max_length: 8}\n"


@pytest.fixture(autouse=True)
def _no_seed_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("HDS_FALLCAST_SEED", raising=False)


@pytest.fixture
def small_config(tmp_path: Path) -> Path:
    target = tmp_path / "small.yaml"
    target.write_text(SMALL_SYNTH, encoding="utf-8")
    return target


@pytest.fixture
def data_csv(tmp_path: Path, small_config: Path) -> Path:
    assert run_cli(["synth", "--config", str(small_config), "--out", str(tmp_path / "data"), "--seed", "5"]) == 0
    return tmp_path / "data" / "encounters.csv"


class TestParseArguments:
    """Argument parsing."""

    def test_repeatable_models(self) -> None:
        args = parse_arguments(["cv", "-m", "threshold:theta=7", "-m", "gru", "--folds", "5"])
        assert args.command == "cv"
        assert args.models == ["threshold:theta=7", "gru"]
        assert args.k_folds == 5

    def test_command_required(self) -> None:
        with pytest.raises(SystemExit):
            parse_arguments([])

    def test_version(self, capsys: pytest.CaptureFixture[str]) -> None:
        with pytest.raises(SystemExit) as info:
            parse_arguments(["--version"])
        assert info.value.code == 0
        assert __version__ in capsys.readouterr().out


class TestSynth:
    """The synth subcommand."""

    def test_writes_dataset_and_settings(self, data_csv: Path) -> None:
        out = data_csv.parent
        assert sorted(p.name for p in out.iterdir()) == ["encounters.csv", "encounters.meta.json", "synth_config.json"]
        settings = json.loads((out / "synth_config.json").read_text(encoding="utf-8"))
        assert settings["seed"] == 5 and settings["n_fall"] == 20

    def test_same_seed_identical_files(self, tmp_path: Path, small_config: Path) -> None:
        for name in ("one", "two"):
            assert run_cli(["synth", "-c", str(small_config), "-o", str(tmp_path / name), "--seed", "9"]) == 0
        for filename in ("encounters.csv", "encounters.meta.json", "synth_config.json"):
            assert (tmp_path / "one" / filename).read_bytes() == (tmp_path / "two" / filename).read_bytes()


class TestCv:
    """The cv and roc subcommands."""

    def test_report(self, tmp_path: Path, data_csv: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = run_cli(
            ["cv", "-d", str(data_csv), "-o", str(tmp_path / "cv"), "-m", "threshold:theta=20", "-m", "knn:k=3", "--folds", "5"]
        )
        assert code == 0
        report = json.loads((tmp_path / "cv" / "cv_report.json").read_text(encoding="utf-8"))
        assert report["k_folds"] == 5
        assert [r["model"] for r in report["reports"]] == ["threshold:theta=20", "knn:k=3"]
        aggregate = report["reports"][0]["aggregate"]
        assert set(aggregate) == {"accuracy", "f1", "specificity", "sensitivity", "ppv", "auc"}
        assert all(set(value) == {"mean", "std"} for value in aggregate.values())
        assert capsys.readouterr().out.startswith("model | accuracy")

    def test_roc_files(self, tmp_path: Path, data_csv: Path) -> None:
        code = run_cli(["roc", "-d", str(data_csv), "-o", str(tmp_path / "roc"), "-m", "threshold:theta=20", "--folds", "5"])
        assert code == 0
        lines = (tmp_path / "roc" / "roc_threshold_theta=20.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "threshold,fpr,tpr"
        assert lines[1] == "inf,0.0,0.0"
        assert lines[-1].endswith(",1.0,1.0")


class TestTrainAndTune:
    """Model artifacts."""

    def test_train_writes_models(self, tmp_path: Path, data_csv: Path) -> None:
        out = tmp_path / "models"
        code = run_cli(
            ["train", "-d", str(data_csv), "-o", str(out), "-m", "threshold", "-m", "gru:hidden_size=4,max_epochs=2"]
        )
        assert code == 0
        threshold = json.loads((out / "threshold.model.json").read_text(encoding="utf-8"))
        assert threshold["kind"] == "threshold"
        history = json.loads((out / "gru_hidden_size=4_max_epochs=2.history.json").read_text(encoding="utf-8"))
        assert len(history["history"]) == 2
        assert (out / "gru_hidden_size=4_max_epochs=2.model.json").exists()

    def test_tune(self, tmp_path: Path, data_csv: Path) -> None:
        code = run_cli(["tune", "-d", str(data_csv), "-o", str(tmp_path / "t"), "-m", "knn", "--trials", "3"])
        assert code == 0
        document = json.loads((tmp_path / "t" / "tuning.json").read_text(encoding="utf-8"))
        assert document["results"][0]["model"] == "knn"
        assert len(document["results"][0]["trials"]) == 3


class TestGradcheck:
    """Exit codes for the gradient check."""

    def test_passes(self, tmp_path: Path) -> None:
        assert run_cli(["gradcheck", "-o", str(tmp_path)]) == 0
        result = json.loads((tmp_path / "gradcheck.json").read_text(encoding="utf-8"))
        assert result["passed"] is True
        assert set(result["errors"]) == {"rnn", "lstm", "gru"}

    def test_impossible_tolerance_is_numeric_failure(self, tmp_path: Path) -> None:
        config = tmp_path / "strict.yaml"
        config.write_text("gradcheck_tolerance: 1.0e-300\n", encoding="utf-8")
        assert run_cli(["gradcheck", "-c", str(config), "-o", str(tmp_path)]) == 3


class TestExitCodes:
    """Errors map onto exit codes."""

    def test_missing_data_is_config_error(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert run_cli(["cv", "-o", str(tmp_path)]) == 1
        assert "--data" in capsys.readouterr().err

    def test_unknown_model_is_config_error(self, tmp_path: Path, data_csv: Path) -> None:
        assert run_cli(["cv", "-d", str(data_csv), "-o", str(tmp_path), "-m", "svm"]) == 1

    def test_invalid_data_is_data_error(self, tmp_path: Path) -> None:
        bad = tmp_path / "bad.csv"
        bad.write_text("encounter_id,seq_index,hds,outcome,origin\na,1,99,0,1\n", encoding="utf-8")
        assert run_cli(["cv", "-d", str(bad), "-o", str(tmp_path)]) == 2

    def test_bad_metadata_sidecar_is_data_error(self, tmp_path: Path, data_csv: Path) -> None:
        data_csv.with_suffix(".meta.json").write_text(
            '{"delta_t_hours": 8.0, "s_max": 30, "s_min": 1.5}', encoding="utf-8"
        )
        assert run_cli(["cv", "-d", str(data_csv), "-o", str(tmp_path / "cv"), "-m", "threshold:theta=20"]) == 2

    def test_absent_data_file_is_data_error(self, tmp_path: Path) -> None:
        assert run_cli(["cv", "-d", str(tmp_path / "absent.csv"), "-o", str(tmp_path)]) == 2

    def test_missing_config_file(self, tmp_path: Path) -> None:
        assert run_cli(["gradcheck", "-c", str(tmp_path / "absent.yaml")]) == 1
