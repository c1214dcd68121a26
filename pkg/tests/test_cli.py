import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from spiralsentinel.cli import main
from spiralsentinel.ingest import Dataset, ScenarioKind, generate_scenario, write_csv


@pytest.fixture
def workdir(tmp_path):
    return tmp_path


def run(args):
    return main([str(a) for a in args])


def make_scenario_csv(path, kind=ScenarioKind.ABNORMAL_VALUES, n=1500, period=50, seed=1):
    series, label = generate_scenario(kind, n, period, 0.05, seed, sensor_id="S1")
    write_csv(Dataset(sensors=[series]), path)
    return label


class TestGenerate:
    def test_writes_csv_and_labels(self, workdir, capsys):
        out = workdir / "scen.csv"
        assert run(["generate", "--kind", "abnormalValues", "--n", 1000, "--period", 50,
                    "--noise", 0.05, "--seed", 9, "--out", out]) == 0
        assert out.exists()
        labels = json.loads((workdir / "scen.csv.labels.json").read_text())
        assert labels["kind"] == "abnormalValues"
        assert labels["window"]["end"] - labels["window"]["start"] == 50

    def test_idempotent_bytes(self, workdir):
        a, b = workdir / "a.csv", workdir / "b.csv"
        args = ["generate", "--kind", "phaseShift", "--n", 800, "--period", 40,
                "--noise", 0.1, "--seed", 3]
        assert run(args + ["--out", a]) == 0
        assert run(args + ["--out", b]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_kind_is_usage_error(self, workdir, capsys):
        assert run(["generate", "--kind", "nope", "--n", 800, "--period", 40,
                    "--out", workdir / "x.csv"]) == 1


class TestIngest:
    def test_ingest_summary(self, workdir, capsys):
        csv_path = workdir / "in.csv"
        make_scenario_csv(csv_path)
        data = workdir / "data"
        assert run(["ingest", "--csv", csv_path, "--baseline", 400, "--data", data]) == 0
        out = capsys.readouterr().out
        assert "1 sensors, 1500 samples" in out
        assert (data / "dataset.csv").exists()
        assert json.loads((data / "meta.json").read_text())["baselineLen"] == 400

    def test_bad_row_exit_code(self, workdir, capsys):
        bad = workdir / "bad.csv"
        bad.write_text("timestamp,a\n0,1\n1,zzz\n")
        assert run(["ingest", "--csv", bad, "--baseline", 0, "--data", workdir / "d"]) == 1
        assert "line 3" in capsys.readouterr().err

    def test_resample_warning(self, workdir, capsys):
        gappy = workdir / "gap.csv"
        gappy.write_text("timestamp,a\n0,1\n1,2\n3,3\n4,4\n")
        assert run(["ingest", "--csv", gappy, "--baseline", 0, "--resample",
                    "--data", workdir / "d"]) == 0
        assert "forward-filled" in capsys.readouterr().out


class TestDetectCalibrateRender:
    @pytest.fixture
    def ingested(self, workdir):
        csv_path = workdir / "in.csv"
        label = make_scenario_csv(csv_path)
        data = workdir / "data"
        assert run(["ingest", "--csv", csv_path, "--baseline", 400, "--data", data]) == 0
        return data, label

    def test_detect_outputs(self, ingested, capsys):
        data, label = ingested
        assert run(["detect", "--data", data]) == 0
        out = capsys.readouterr().out
        assert "S1" in out and "regions" in out
        profile = (data / "profiles" / "S1.csv").read_text().splitlines()
        assert profile[0] == "index,nnDist,closeCount,score"
        assert len(profile) == 1500 - 50 + 1 + 1  # n - m + 1 rows plus header
        assert (data / "thresholds.conf").exists()
        assert (data / "timestep_scores.npz").exists()

    def test_detect_finds_injected_region(self, ingested, capsys):
        data, label = ingested
        assert run(["detect", "--data", data]) == 0
        out = capsys.readouterr().out
        assert "total overview regions: 0" not in out

    def test_calibrate_table(self, ingested, capsys):
        data, _ = ingested
        assert run(["calibrate", "--buffer", 1.5, "--data", data]) == 0
        out = capsys.readouterr().out
        assert "thetaII" in out
        text = (data / "thresholds.conf").read_text()
        assert "S1.thetaII=" in text and "S1.thetaIII=" in text
        ii = float(text.splitlines()[0].split("=")[1])
        iii = float(text.splitlines()[1].split("=")[1])
        assert iii == pytest.approx(1.5 * ii)

    def test_render_svg(self, ingested, workdir, capsys):
        data, label = ingested
        assert run(["detect", "--data", data]) == 0
        out_svg = workdir / "spiral.svg"
        assert run(["render", "--sensor", "S1", "--from", 800, "--to", 1300,
                    "--map", "jet", "--range", "local", "--out", out_svg, "--data", data]) == 0
        svg = out_svg.read_text()
        ET.fromstring(svg)
        assert "<path" in svg

    def test_render_without_detect_fails(self, ingested, workdir, capsys):
        data, _ = ingested
        assert run(["render", "--sensor", "S1", "--from", 0, "--to", 100,
                    "--out", workdir / "x.svg", "--data", data]) == 1
        assert "detect" in capsys.readouterr().err

    def test_render_frame_cap(self, ingested, workdir, capsys):
        data, _ = ingested
        assert run(["detect", "--data", data]) == 0
        assert run(["render", "--sensor", "S1", "--from", 0, "--to", 14_401,
                    "--out", workdir / "x.svg", "--data", data]) == 1

    def test_render_unknown_sensor(self, ingested, workdir):
        data, _ = ingested
        assert run(["detect", "--data", data]) == 0
        assert run(["render", "--sensor", "ZZ", "--from", 0, "--to", 100,
                    "--out", workdir / "x.svg", "--data", data]) == 1

    def test_detect_idempotent(self, ingested, capsys):
        data, _ = ingested
        assert run(["detect", "--data", data]) == 0
        first = (data / "profiles" / "S1.csv").read_bytes()
        assert run(["detect", "--data", data]) == 0
        assert (data / "profiles" / "S1.csv").read_bytes() == first


def test_missing_dataset_message(tmp_path, capsys):
    assert main(["detect", "--data", str(tmp_path / "empty")]) == 1
    assert "ingest" in capsys.readouterr().err
