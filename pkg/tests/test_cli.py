"""End-to-end command line behavior and exit codes."""

import json

import numpy as np
import pytest

from thermocount.cli import main, read_estimates_csv
from thermocount.metrics import aggregate
from thermocount.pgm import read_pgm
from thermocount.synth import PersonSpec, Scene, save_scene


@pytest.fixture(scope="module")
def scene_file(tmp_path_factory):
    scene = Scene(
        width=80, height=50, duration_s=24.0, fps=1.0, interval_s=2.0,
        background=0.2, noise_sigma=0.006, rng_seed=77,
        persons=[PersonSpec(radius=6.0, peak=0.88, step=3.0, start=(40.0, 25.0))],
    )
    path = tmp_path_factory.mktemp("scene") / "scene.json"
    save_scene(path, scene)
    return path


@pytest.fixture(scope="module")
def rendered(scene_file, tmp_path_factory):
    out = tmp_path_factory.mktemp("rendered")
    assert main(["synth", "--scene", str(scene_file), "--out-dir", str(out)]) == 0
    return out / "manifest.json"


def _params_file(tmp_path, **overrides):
    payload = dict(mask_update_frequency=5, lighting_threshold=0.5, noise_low=5,
                   noise_high=2000, memory_size=3, k=2, blur_sigma=1.0, connectivity=8)
    payload.update(overrides)
    path = tmp_path / "params.json"
    path.write_text(json.dumps(payload))
    return path


def test_estimate_writes_csv_metrics_and_frames(rendered, tmp_path, capsys):
    params = _params_file(tmp_path)
    out = tmp_path / "out"
    assert main(["estimate", "--manifest", str(rendered), "--params", str(params),
                 "--out-dir", str(out)]) == 0
    capsys.readouterr()

    records = read_estimates_csv(out / "estimates.csv")
    assert len(records) == 12  # 24 source frames, every other one sampled
    assert (out / "estimates.csv").read_text().splitlines()[0] == \
        "frame_index,raw_count,final_count,ground_truth,confidence"

    annotated = sorted(out.glob("annotated_*.pgm"))
    assert len(annotated) == 12
    samples, _ = read_pgm(annotated[0])
    assert samples.shape == (100, 160)  # double the 50x80 source

    metrics = json.loads((out / "metrics.json").read_text())
    assert metrics == aggregate(records)


def test_eval_round_trips_estimate_output(rendered, tmp_path, capsys):
    params = _params_file(tmp_path)
    out = tmp_path / "out"
    main(["estimate", "--manifest", str(rendered), "--params", str(params),
          "--out-dir", str(out)])
    capsys.readouterr()
    assert main(["eval", "--csv", str(out / "estimates.csv")]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed == json.loads((out / "metrics.json").read_text())


def test_calibrate_writes_params_and_report(rendered, tmp_path, capsys):
    space = tmp_path / "space.json"
    space.write_text(json.dumps({"axes": {
        "lighting_threshold": {"min": 0.4, "max": 0.7},
        "noise_low": {"min": 1, "max": 20, "integer": True},
        "noise_high": {"min": 20, "max": 800, "integer": True},
        "mask_update_frequency": {"min": 2, "max": 8, "integer": True},
        "memory_size": {"min": 1, "max": 5, "integer": True},
    }}))
    best = tmp_path / "best.json"
    report = tmp_path / "report.json"
    assert main(["calibrate", "--manifest", str(rendered), "--out", str(best),
                 "--space", str(space), "--report", str(report)]) == 0
    assert "best accuracy" in capsys.readouterr().out
    payload = json.loads(best.read_text())
    assert 0.4 <= payload["lighting_threshold"] <= 0.7
    trace = json.loads(report.read_text())["trace"]
    assert trace  # non-empty evaluation history


def test_exit_codes(tmp_path, capsys):
    params = _params_file(tmp_path)
    # usage: unknown flags and missing files exit 1
    assert main(["estimate", "--bogus"]) == 1
    assert main(["estimate", "--manifest", str(tmp_path / "gone.json"),
                 "--params", str(params), "--out-dir", str(tmp_path / "o")]) == 1
    # data: malformed manifest exits 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["estimate", "--manifest", str(bad), "--params", str(params),
                 "--out-dir", str(tmp_path / "o")]) == 2
    # data: bad parameter values exit 2
    bad_params = tmp_path / "badp.json"
    bad_params.write_text(json.dumps({"mask_update_frequency": 0, "lighting_threshold": 0.5,
                                      "noise_low": 1, "noise_high": 10, "memory_size": 1}))
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({"frames": [], "fps": 1.0}))
    assert main(["estimate", "--manifest", str(manifest), "--params", str(bad_params),
                 "--out-dir", str(tmp_path / "o")]) == 2
    capsys.readouterr()


def test_eval_rejects_csv_without_truth(tmp_path, capsys):
    csv_path = tmp_path / "e.csv"
    csv_path.write_text("frame_index,raw_count,final_count,ground_truth,confidence\n0,1,1,,\n")
    assert main(["eval", "--csv", str(csv_path)]) == 2
    csv_path.write_text("wrong,header\n")
    assert main(["eval", "--csv", str(csv_path)]) == 2
    capsys.readouterr()


def test_missing_subcommand_is_usage_error(capsys):
    assert main([]) == 1
    capsys.readouterr()
