"""Command-line interface tests: config handling, commands, benchmark."""

import json
import re

import numpy as np
import pytest

from mvle.baselines import elm_predict, elm_train
from mvle.cli import main, merge_config, run_benchmark
from mvle.dataset import (
    MultiViewDataset,
    SyntheticSpec,
    View,
    gen_synthetic,
    split,
    zscore_apply,
    zscore_fit,
)
from mvle.embedding import fit, objective
from mvle.errors import ConfigError, UnknownMethodError
from mvle.metrics import REPORT_HEADER, accuracy


SMALL_GEN = [
    "--class-count", "4", "--samples-per-class", "12",
    "--view-dims", "8,6", "--seed", "3",
]


def gen_small(tmp_path, sub="data", seed="3"):
    out = tmp_path / sub
    args = ["gen"] + SMALL_GEN + ["--out-dir", str(out)]
    args[args.index("--seed") + 1] = seed
    assert main(args) == 0
    return out


def view_flags(data_dir, count=2):
    flags = []
    for i in range(1, count + 1):
        flags += [
            "--features", str(data_dir / f"view{i}_features.csv"),
            "--labels", str(data_dir / f"view{i}_labels.csv"),
        ]
    return flags


class TestConfig:
    def test_defaults_fill_in(self):
        cfg = merge_config("benchmark", {}, {})
        assert cfg["k"] == 10
        assert cfg["dims"] == [2, 4, 8, 16]
        assert cfg["repeats"] == 5
        assert cfg["seed"] == 7
        assert abs(cfg["train_fraction"] - 2.0 / 3.0) < 1e-15
        assert "mvda-vc" not in cfg["methods"]

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError) as err:
            merge_config("gen", {"bananas": 1}, {})
        assert "bananas" in str(err.value)

    def test_flags_beat_config_file(self):
        cfg = merge_config("embed", {"k": 5, "dim": 2}, {"k": 9})
        assert cfg["k"] == 9
        assert cfg["dim"] == 2

    def test_value_validation(self):
        with pytest.raises(ConfigError):
            merge_config("benchmark", {"repeats": 0}, {})
        with pytest.raises(ConfigError):
            merge_config("benchmark", {"train_fraction": 1.5}, {})
        with pytest.raises(ConfigError):
            merge_config("embed", {"k": -3}, {})


class TestGen:
    def test_writes_views(self, tmp_path, capsys):
        out = gen_small(tmp_path)
        capsys.readouterr()
        for i in (1, 2):
            rows = (out / f"view{i}_features.csv").read_text().strip().split("\n")
            assert len(rows) == 48
            labels = (out / f"view{i}_labels.csv").read_text().strip().split("\n")
            assert len(labels) == 48
        widths = [
            len((out / f"view{i}_features.csv").read_text().split("\n")[0].split(","))
            for i in (1, 2)
        ]
        assert widths == [8, 6]

    def test_default_spec_row_count(self, tmp_path, capsys):
        out = tmp_path / "full"
        assert main(["gen", "--out-dir", str(out)]) == 0
        capsys.readouterr()
        rows = (out / "view1_features.csv").read_text().strip().split("\n")
        assert len(rows) == 240

    def test_same_seed_byte_identical(self, tmp_path, capsys):
        a = gen_small(tmp_path, "a")
        b = gen_small(tmp_path, "b")
        capsys.readouterr()
        for name in ("view1_features.csv", "view1_labels.csv", "view2_features.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_unknown_config_key_exits_nonzero(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"bananas": 2}))
        rc = main(["gen", "--config", str(cfg_path)])
        captured = capsys.readouterr()
        assert rc == 1
        assert "bananas" in captured.err
        assert captured.err.count("\n") == 1
        assert captured.err.startswith("error: ConfigError:")


class TestEmbed:
    def test_outputs_and_objective_line(self, tmp_path, capsys):
        data = gen_small(tmp_path)
        out = tmp_path / "emb"
        rc = main(
            ["embed"] + view_flags(data)
            + ["--k", "6", "--dim", "3", "--out-dir", str(out)]
        )
        captured = capsys.readouterr()
        assert rc == 0
        match = re.search(r"objective=([0-9.]+)", captured.out)
        assert match is not None
        printed_xi = float(match.group(1))

        meta = json.loads((out / "embedding_meta.json").read_text())
        assert meta["eigenvalues"] == sorted(meta["eigenvalues"])
        assert meta["k"] == 6
        assert meta["dim"] == 3

        # recompute the objective from the same inputs
        from mvle.dataset import load_view_csv

        views = tuple(
            load_view_csv(
                data / f"view{i}_features.csv", data / f"view{i}_labels.csv"
            )
            for i in (1, 2)
        )
        ds = MultiViewDataset(views=views, class_count=4)
        emb, art = fit(ds, 6, 3)
        assert printed_xi == pytest.approx(objective(emb.y, art.graph), abs=1e-6)

    def test_deterministic_outputs(self, tmp_path, capsys):
        data = gen_small(tmp_path)
        outs = []
        for sub in ("e1", "e2"):
            out = tmp_path / sub
            assert main(
                ["embed"] + view_flags(data)
                + ["--k", "6", "--dim", "2", "--out-dir", str(out)]
            ) == 0
            outs.append(out)
        capsys.readouterr()
        for name in ("embedding_view1.csv", "embedding_view2.csv", "embedding_meta.json"):
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()

    def test_dump_graph(self, tmp_path, capsys):
        data = gen_small(tmp_path)
        out = tmp_path / "embg"
        assert main(
            ["embed"] + view_flags(data)
            + ["--k", "6", "--dim", "2", "--out-dir", str(out), "--dump-graph"]
        ) == 0
        capsys.readouterr()
        rows = (out / "graph_w.csv").read_text().strip().split("\n")
        assert len(rows) == 96
        w = np.array([[float(v) for v in row.split(",")] for row in rows])
        assert np.array_equal(w, w.T)

    def test_missing_views_is_config_error(self, tmp_path, capsys):
        rc = main(["embed", "--k", "4"])
        captured = capsys.readouterr()
        assert rc == 1
        assert captured.err.startswith("error: ConfigError:")


class TestTrainMhonAndEval:
    def test_per_view_models_and_eval(self, tmp_path, capsys):
        data = gen_small(tmp_path)
        out = tmp_path / "models"
        rc = main(
            ["train-mhon"] + view_flags(data)
            + ["--k", "6", "--dim", "3", "--out-dir", str(out)]
        )
        captured = capsys.readouterr()
        assert rc == 0
        assert (out / "mhon_view1.json").exists()
        assert (out / "mhon_view2.json").exists()
        assert "train_accuracy=" in captured.out

        report = tmp_path / "eval.csv"
        rc = main(
            [
                "eval",
                "--model", str(out / "mhon_view1.json"),
                "--model", str(out / "mhon_view2.json"),
            ]
            + view_flags(data)
            + ["--out", str(report)]
        )
        captured = capsys.readouterr()
        assert rc == 0
        lines = report.read_text().strip().split("\n")
        assert lines[0] == "view,n,accuracy"
        assert len(lines) == 3
        for line in lines[1:]:
            view_id, n, acc = line.split(",")
            assert int(n) == 48
            assert 0.0 <= float(acc) <= 1.0
        assert captured.out.count("accuracy=") == 2

    def test_concat_mode(self, tmp_path, capsys):
        data = gen_small(tmp_path)
        out = tmp_path / "concat"
        rc = main(
            ["train-mhon"] + view_flags(data)
            + ["--k", "6", "--dim", "3", "--mhon-mode", "concat",
               "--out-dir", str(out)]
        )
        capsys.readouterr()
        assert rc == 0
        assert (out / "mhon_concat.json").exists()
        assert not (out / "mhon_view1.json").exists()

    def test_model_view_count_mismatch(self, tmp_path, capsys):
        data = gen_small(tmp_path)
        out = tmp_path / "m"
        assert main(
            ["train-mhon"] + view_flags(data)
            + ["--k", "6", "--dim", "2", "--out-dir", str(out)]
        ) == 0
        rc = main(
            ["eval", "--model", str(out / "mhon_view1.json")] + view_flags(data)
        )
        captured = capsys.readouterr()
        assert rc == 1
        assert captured.err.startswith("error: ConfigError:")


BENCH_SMALL = [
    "--class-count", "4", "--samples-per-class", "12", "--view-dims", "8,6",
    "--k", "6", "--dims", "2", "--repeats", "1", "--seed", "3",
]


class TestBenchmark:
    def test_raw_pass_through_matches_direct_elm(self, tmp_path, capsys):
        out = tmp_path / "bench"
        rc = main(
            ["benchmark"] + BENCH_SMALL
            + ["--methods", "raw", "--out-dir", str(out)]
        )
        capsys.readouterr()
        assert rc == 0
        lines = (out / "report.csv").read_text().strip().split("\n")
        assert lines[0] == REPORT_HEADER
        cells = {}
        for line in lines[1:]:
            method, view, dim, mean, _std, repeats = line.split(",")
            assert method == "raw"
            assert dim == "0"
            assert repeats == "1"
            cells[int(view)] = float(mean)

        ds = gen_synthetic(
            SyntheticSpec(
                class_count=4, samples_per_class=12, view_dims=(8, 6), seed=3
            )
        )
        train, test = split(ds, 2.0 / 3.0, 3)
        for i in (0, 1):
            stats = zscore_fit(train.views[i].features)
            clf = elm_train(
                zscore_apply(train.views[i].features, stats),
                train.views[i].labels,
                4,
                seed=3,
            )
            pred = elm_predict(clf, zscore_apply(test.views[i].features, stats))
            direct = accuracy(pred, test.views[i].labels)
            assert cells[i + 1] == pytest.approx(direct, abs=1e-6)

    def test_repeats_reproducible(self, tmp_path, capsys):
        reports = []
        for sub in ("b1", "b2"):
            out = tmp_path / sub
            rc = main(
                ["benchmark"] + BENCH_SMALL
                + ["--methods", "raw,mvda", "--repeats", "3", "--out-dir", str(out)]
            )
            assert rc == 0
            reports.append((out / "report.csv").read_bytes())
        capsys.readouterr()
        assert reports[0] == reports[1]

    def test_rows_sorted_and_seeds_recorded(self, tmp_path, capsys):
        out = tmp_path / "sorted"
        rc = main(
            ["benchmark"] + BENCH_SMALL
            + ["--methods", "raw,mvle,pls", "--dims", "3,2",
               "--repeats", "2", "--out-dir", str(out)]
        )
        capsys.readouterr()
        assert rc == 0
        lines = (out / "report.csv").read_text().strip().split("\n")[1:]
        keys = []
        for line in lines:
            method, view, dim = line.split(",")[:3]
            keys.append((method, int(view), int(dim)))
        assert keys == sorted(keys)

        doc = json.loads((out / "report_runs.json").read_text())
        seeds = sorted({run["seed"] for run in doc["runs"]})
        assert seeds == [3, 4]
        assert doc["config"]["seed"] == 3
        assert doc["config"]["repeats"] == 2

    def test_unknown_method(self, tmp_path, capsys):
        rc = main(
            ["benchmark"] + BENCH_SMALL
            + ["--methods", "raw,banana", "--out-dir", str(tmp_path / "x")]
        )
        captured = capsys.readouterr()
        assert rc == 1
        assert captured.err.startswith("error: UnknownMethodError:")
        assert "banana" in captured.err

    def test_config_file_plus_flag_override(self, tmp_path, capsys):
        cfg_path = tmp_path / "bench.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "class_count": 4,
                    "samples_per_class": 12,
                    "view_dims": [8, 6],
                    "methods": ["raw"],
                    "dims": [2],
                    "repeats": 2,
                    "seed": 11,
                    "k": 6,
                }
            )
        )
        out = tmp_path / "cfgd"
        rc = main(
            ["benchmark", "--config", str(cfg_path), "--seed", "3",
             "--repeats", "1", "--out-dir", str(out)]
        )
        capsys.readouterr()
        assert rc == 0
        doc = json.loads((out / "report_runs.json").read_text())
        assert doc["config"]["seed"] == 3
        assert doc["config"]["repeats"] == 1
        assert doc["config"]["class_count"] == 4

    def test_run_benchmark_rejects_unknown_method_directly(self):
        ds = gen_synthetic(
            SyntheticSpec(class_count=4, samples_per_class=12, view_dims=(8, 6), seed=3)
        )
        cfg = merge_config("benchmark", {"methods": ["raw"]}, {})
        cfg["methods"] = ["nope"]
        with pytest.raises(UnknownMethodError):
            run_benchmark(ds, cfg)

    def test_mvle_reports_both_views(self, tmp_path, capsys):
        out = tmp_path / "mv"
        rc = main(
            ["benchmark"] + BENCH_SMALL
            + ["--methods", "mvle", "--out-dir", str(out)]
        )
        capsys.readouterr()
        assert rc == 0
        lines = (out / "report.csv").read_text().strip().split("\n")[1:]
        views = sorted(int(line.split(",")[1]) for line in lines)
        assert views == [1, 2]
