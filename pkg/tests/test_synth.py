"""Synthetic scene generator: schema, schedules, determinism."""

import json
import math

import numpy as np
import pytest

from thermocount.errors import FormatError, ParameterError
from thermocount.frames import load_sequence, read_frame
from thermocount.synth import (
    LightingEvent,
    PersonSpec,
    Scene,
    StaticObject,
    load_scene,
    render,
    render_frame,
    save_scene,
)


def _tiny_scene(**overrides):
    base = dict(
        width=60, height=40, duration_s=12.0, fps=1.0, interval_s=2.0,
        background=0.2, noise_sigma=0.005, rng_seed=5,
        persons=[PersonSpec(radius=6.0, peak=0.9, step=3.0, start=(30.0, 20.0))],
    )
    base.update(overrides)
    return Scene(**base)


def test_scene_json_round_trip(tmp_path):
    scene = _tiny_scene(
        persons=[
            PersonSpec(radius=6.0, peak=0.9, step=3.0),
            PersonSpec(radius=5.0, peak=0.8, step=2.0, entry_s=4.0, exit_s=10.0, start=(10.0, 10.0)),
        ],
        static_objects=[StaticObject(shape="disc", x=12, y=8, intensity=0.5, r=3.0)],
        lighting_events=[LightingEvent(kind="global", start_s=2.0, duration_s=3.0, delta=0.05)],
    )
    path = tmp_path / "scene.json"
    save_scene(path, scene)
    back = load_scene(path)
    assert back.to_dict() == scene.to_dict()
    # open-ended presence serializes as null
    raw = json.loads(path.read_text())
    assert raw["persons"][0]["exit_s"] is None


def test_scene_validation():
    with pytest.raises(ParameterError):
        _tiny_scene(background=1.5)
    with pytest.raises(ParameterError):
        _tiny_scene(persons=[PersonSpec(radius=6.0, peak=0.1, step=3.0)])  # colder than room
    with pytest.raises(ParameterError):
        _tiny_scene(duration_s=0.0)


def test_occupancy_schedule():
    scene = _tiny_scene(persons=[
        PersonSpec(radius=6.0, peak=0.9, step=3.0),
        PersonSpec(radius=6.0, peak=0.9, step=3.0, entry_s=4.0, exit_s=8.0),
    ])
    assert scene.occupancy_at(0.0) == 1
    assert scene.occupancy_at(4.0) == 2
    assert scene.occupancy_at(8.0) == 1  # exit bound is exclusive


def test_load_scene_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(FormatError):
        load_scene(path)


def test_render_produces_manifest_with_truth_at_sampled_frames(tmp_path):
    scene = _tiny_scene()
    manifest_path = render(scene, tmp_path / "out")
    man = load_sequence(manifest_path)
    assert len(man.frame_paths) == scene.n_frames
    assert set(man.ground_truth) == set(man.sampled)
    assert all(v == 1 for v in man.ground_truth.values())


def test_render_is_deterministic(tmp_path):
    scene = _tiny_scene()
    p1 = render(scene, tmp_path / "a")
    p2 = render(scene, tmp_path / "b")
    m1, m2 = json.loads(open(p1).read()), json.loads(open(p2).read())
    assert m1 == m2
    for rel in m1["frames"]:
        b1 = (tmp_path / "a" / rel).read_bytes()
        b2 = (tmp_path / "b" / rel).read_bytes()
        assert b1 == b2


def test_person_pixels_appear_only_while_active(tmp_path):
    scene = _tiny_scene(
        noise_sigma=0.0,
        persons=[PersonSpec(radius=6.0, peak=0.9, step=0.0, entry_s=4.0, start=(30.0, 20.0))],
    )
    manifest_path = render(scene, tmp_path / "p")
    man = load_sequence(manifest_path)
    before = read_frame(man.frame_path(0))
    after = read_frame(man.frame_path(6))
    assert before.pixels.max() == pytest.approx(scene.background, abs=1e-3)
    assert after.pixels.max() == pytest.approx(0.9, abs=1e-3)


def test_walkers_stay_inside_walls(tmp_path):
    scene = _tiny_scene(duration_s=60.0, persons=[
        PersonSpec(radius=6.0, peak=0.9, step=8.0, start=(5.0, 5.0)),
    ])
    manifest_path = render(scene, tmp_path / "w")
    man = load_sequence(manifest_path)
    # hottest pixel of each frame sits at the walker's center: always in bounds
    for i in man.sampled:
        frame = read_frame(man.frame_path(i))
        r, c = np.unravel_index(frame.pixels.argmax(), frame.pixels.shape)
        assert 0 <= r < scene.height and 0 <= c < scene.width


def test_static_objects_and_lighting_events_compose(tmp_path):
    scene = _tiny_scene(
        noise_sigma=0.0,
        persons=[],
        static_objects=[StaticObject(shape="rect", x=5, y=5, intensity=0.6, w=6, h=4)],
        lighting_events=[LightingEvent(kind="global", start_s=4.0, duration_s=4.0, delta=0.1)],
    )
    frame0 = render_frame(scene, 0, [], None)
    frame5 = render_frame(scene, 5, [], None)
    assert frame0.pixels[7, 7] == pytest.approx(0.6)
    assert frame0.pixels[30, 30] == pytest.approx(0.2)
    assert frame5.pixels[30, 30] == pytest.approx(0.3)  # event active
    assert math.isclose(frame5.pixels[7, 7], 0.7, abs_tol=1e-12)
