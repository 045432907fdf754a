"""End-to-end tests of the command-line harness."""

import json

import numpy as np
import pytest

from antdistill import tinynet
from antdistill.cli import main
from antdistill.config import load_config
from antdistill.errors import ConfigParseError


def write(path, text):
    path.write_text(text)
    return path


def read_rows(path):
    lines = path.read_text().strip().split("\n")
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


class TestConfigParsing:
    def test_unknown_key_named_in_error(self, tmp_path):
        cfg = write(tmp_path / "c.ini", "[data]\nsamples = 100\nbogus_key = 3\n")
        with pytest.raises(ConfigParseError, match="bogus_key"):
            load_config(cfg)

    def test_unknown_section_rejected(self, tmp_path):
        cfg = write(tmp_path / "c.ini", "[mystery]\nx = 1\n")
        with pytest.raises(ConfigParseError, match="mystery"):
            load_config(cfg)

    def test_policy_keys_gated_by_variant(self, tmp_path):
        cfg = write(tmp_path / "c.ini", "[policy]\nvariant = constant\nscale = 2.0\n")
        with pytest.raises(ConfigParseError, match="scale"):
            load_config(cfg)

    def test_bad_value_reported(self, tmp_path):
        cfg = write(tmp_path / "c.ini", "[data]\nsamples = many\n")
        with pytest.raises(ConfigParseError, match="samples"):
            load_config(cfg)


DATA_SECTION = """\
[data]
samples = 120
classes = 3
dim = 4
complexity = 0.0
noise_kind = gaussian
noise_level = 0.5
seed = 7
"""


class TestGenData:
    def test_writes_roundtrippable_file(self, tmp_path, capsys):
        cfg = write(tmp_path / "c.ini", DATA_SECTION)
        assert main(["gen-data", "--config", str(cfg), "--out", str(tmp_path / "run")]) == 0
        ds = tinynet.load_dataset(tmp_path / "run" / "dataset.csv")
        assert ds.n_samples == 120 and ds.n_classes == 3
        assert "mean_noise=0.5" in capsys.readouterr().out

    def test_identical_across_runs(self, tmp_path):
        cfg = write(tmp_path / "c.ini", DATA_SECTION)
        main(["gen-data", "--config", str(cfg), "--out", str(tmp_path / "a")])
        main(["gen-data", "--config", str(cfg), "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "dataset.csv").read_bytes() == (
            tmp_path / "b" / "dataset.csv"
        ).read_bytes()


def worked_example_pool(tmp_path):
    return write(
        tmp_path / "pool.json",
        json.dumps(
            {"candidates": [{"name": f"model-{i}", "stub_score": s}
                            for i, s in enumerate([0.9, 0.8, 0.7])]}
        ),
    )


class TestSelect:
    def test_aco_worked_example_first_iteration_probabilities(self, tmp_path):
        worked_example_pool(tmp_path)
        cfg = write(
            tmp_path / "c.ini",
            "[aco]\npool = pool.json\nq0 = 0\nseed = 0\n"
            "init_pheromone = 2,1,4\ninit_heuristic = 3,5,2\n",
        )
        out = tmp_path / "run"
        assert main(["select", "--config", str(cfg), "--strategy", "aco",
                     "--out", str(out)]) == 0
        report = json.loads((out / "report.json").read_text())
        first = np.array(report["history"][0]["probabilities"])
        np.testing.assert_allclose(first, [0.305, 0.424, 0.271], atol=1e-3)

    def test_grid_pair_mode_240_evaluations(self, tmp_path):
        scores = np.round(np.linspace(0.2, 0.9, 16), 3)
        write(
            tmp_path / "pool.json",
            json.dumps({"candidates": [{"name": f"m{i}", "stub_score": float(s)}
                                       for i, s in enumerate(scores)]}),
        )
        cfg = write(tmp_path / "c.ini", "[grid]\npool = pool.json\npair_mode = true\n")
        out = tmp_path / "run"
        assert main(["select", "--config", str(cfg), "--strategy", "grid",
                     "--out", str(out)]) == 0
        header, rows = read_rows(out / "report.csv")
        assert header == ["strategy", "seed", "best_score", "unique_evaluations",
                          "total_selections"]
        assert rows[0][3] == "240"

    def test_random_identical_csv_across_invocations(self, tmp_path):
        worked_example_pool(tmp_path)
        cfg = write(tmp_path / "c.ini", "[random]\npool = pool.json\nn_picks = 2\nseed = 5\n")
        main(["select", "--config", str(cfg), "--strategy", "random", "--out", str(tmp_path / "a")])
        main(["select", "--config", str(cfg), "--strategy", "random", "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "report.csv").read_bytes() == (
            tmp_path / "b" / "report.csv"
        ).read_bytes()

    def test_pso_runs(self, tmp_path):
        worked_example_pool(tmp_path)
        cfg = write(tmp_path / "c.ini",
                    "[pso]\npool = pool.json\nn_particles = 4\nn_iterations = 5\nseed = 1\n")
        assert main(["select", "--config", str(cfg), "--strategy", "pso",
                     "--out", str(tmp_path / "run")]) == 0


DISTILL_CONFIG = """\
[data]
samples = 240
classes = 3
dim = 6
complexity = 0.0
seed = 3

[policy]
variant = rule_based

[kd]
t_base = 0.5
epochs = 20
batch_size = 32
learning_rate = 0.05
seed = 3
teacher_hidden = 24,24
student_hidden = 16,16
"""


class TestDistill:
    def test_plain_run_outputs(self, tmp_path):
        cfg = write(tmp_path / "c.ini", DISTILL_CONFIG)
        out = tmp_path / "run"
        assert main(["distill", "--config", str(cfg), "--out", str(out)]) == 0
        assert (out / "distill_report.json").exists()
        assert (out / "metrics.csv").exists()
        summary = (out / "summary.csv").read_text()
        assert "auc_micro" in summary

    def test_table10_four_rows_accuracies(self, tmp_path):
        cfg = write(tmp_path / "c.ini", DISTILL_CONFIG)
        out = tmp_path / "run"
        assert main(["distill", "--config", str(cfg), "--ablation", "table10",
                     "--out", str(out)]) == 0
        header, rows = read_rows(out / "ablation.csv")
        assert header[0] == "approach"
        assert [r[0] for r in rows] == [
            "teacher", "student_supervised", "student_constant_temp", "student_context_aware",
        ]
        assert all(float(r[1]) >= 0.90 for r in rows)

    def test_table11_row_tags(self, tmp_path):
        cfg = write(tmp_path / "c.ini", DISTILL_CONFIG.replace(
            "seed = 3\n\n[policy]", "seed = 3\nnoise_level = 0.5\n\n[policy]"
        ))
        out = tmp_path / "run"
        assert main(["distill", "--config", str(cfg), "--ablation", "table11",
                     "--out", str(out)]) == 0
        _, rows = read_rows(out / "ablation.csv")
        assert [r[0] for r in rows] == ["gaussian", "salt_pepper", "uniform", "clean"]

    def test_weight_zero_constant_matches_supervised_bit_for_bit(self, tmp_path):
        # with t_base = 0 the constant-temperature distilled row must equal
        # the supervised row exactly
        cfg_text = DISTILL_CONFIG.replace("t_base = 0.5", "t_base = 0.0").replace(
            "variant = rule_based", "variant = constant\ntemperature = 1.0"
        )
        cfg = write(tmp_path / "c.ini", cfg_text)
        out = tmp_path / "run"
        assert main(["distill", "--config", str(cfg), "--ablation", "table10",
                     "--out", str(out)]) == 0
        _, rows = read_rows(out / "ablation.csv")
        assert rows[1][1:] == rows[2][1:]


class TestEvaluate:
    def test_perfect_predictions(self, tmp_path):
        write(tmp_path / "preds.csv", "pred\n0\n1\n2\n")
        write(tmp_path / "labels.csv", "label\n0\n1\n2\n")
        out = tmp_path / "run"
        assert main(["evaluate", "--predictions", str(tmp_path / "preds.csv"),
                     "--labels", str(tmp_path / "labels.csv"), "--out", str(out)]) == 0
        assert "accuracy,1.0" in (out / "summary.csv").read_text()

    def test_hand_case_accuracy(self, tmp_path):
        write(tmp_path / "preds.csv", "pred\n0\n1\n1\n1\n")
        write(tmp_path / "labels.csv", "label\n0\n0\n1\n1\n")
        out = tmp_path / "run"
        main(["evaluate", "--predictions", str(tmp_path / "preds.csv"),
              "--labels", str(tmp_path / "labels.csv"), "--out", str(out)])
        assert "accuracy,0.75" in (out / "summary.csv").read_text()

    def test_missing_probs_warns_and_skips_auc(self, tmp_path, capsys):
        write(tmp_path / "preds.csv", "pred\n0\n1\n")
        write(tmp_path / "labels.csv", "label\n0\n1\n")
        out = tmp_path / "run"
        main(["evaluate", "--predictions", str(tmp_path / "preds.csv"),
              "--labels", str(tmp_path / "labels.csv"), "--out", str(out)])
        assert "warning" in capsys.readouterr().out
        assert "auc_micro" not in (out / "summary.csv").read_text()

    def test_probs_give_auc(self, tmp_path):
        write(tmp_path / "preds.csv", "pred,p0,p1\n0,0.9,0.1\n1,0.2,0.8\n")
        write(tmp_path / "labels.csv", "label\n0\n1\n")
        out = tmp_path / "run"
        main(["evaluate", "--predictions", str(tmp_path / "preds.csv"),
              "--labels", str(tmp_path / "labels.csv"), "--out", str(out)])
        text = (out / "summary.csv").read_text()
        assert "auc_micro,1.0" in text and "ap_micro,1.0" in text

    def test_length_mismatch_is_nonzero_exit(self, tmp_path, capsys):
        write(tmp_path / "preds.csv", "pred\n0\n1\n")
        write(tmp_path / "labels.csv", "label\n0\n")
        assert main(["evaluate", "--predictions", str(tmp_path / "preds.csv"),
                     "--labels", str(tmp_path / "labels.csv"),
                     "--out", str(tmp_path / "run")]) != 0


class TestReproExamples:
    def test_all_checks_pass(self, tmp_path, capsys):
        assert main(["repro-examples", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "7/7 checks passed" in out
        assert (tmp_path / "repro_examples.txt").exists()

    def test_tampered_constant_fails(self, capsys):
        assert main(["repro-examples", "--tamper"]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_output_stable_across_runs(self, tmp_path):
        main(["repro-examples", "--out", str(tmp_path / "a")])
        main(["repro-examples", "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "repro_examples.txt").read_bytes() == (
            tmp_path / "b" / "repro_examples.txt"
        ).read_bytes()


class TestErrorPaths:
    def test_missing_config_is_nonzero(self, capsys):
        assert main(["gen-data", "--config", "/nonexistent.ini", "--out", "/tmp/x"]) == 2

    def test_unknown_key_is_nonzero(self, tmp_path, capsys):
        cfg = write(tmp_path / "c.ini", "[data]\nwhat = 1\n")
        assert main(["gen-data", "--config", str(cfg), "--out", str(tmp_path / "r")]) == 2
        assert "what" in capsys.readouterr().err
