"""Synthetic overhead thermal scenes with exact ground-truth occupancy.

People are warm discs doing a persistent random walk over a cool
background; scenes can add static hot objects (computers and the like),
global or local lighting swings, and per-pixel Gaussian noise. Rendering
is fully determined by the scene's rng_seed, so the same scene file always
produces byte-identical frames.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ParameterError
from .frames import SequenceManifest, ThermalFrame, load_sequence, sample_indices, write_frame


@dataclass
class PersonSpec:
    radius: float
    peak: float
    step: float  # px per source frame
    entry_s: float = 0.0
    exit_s: float = math.inf
    start: tuple[float, float] | None = None  # default: seeded random position

    def active_at(self, t: float) -> bool:
        return self.entry_s <= t < self.exit_s


@dataclass
class StaticObject:
    shape: str  # "rect" or "disc"
    x: float
    y: float
    intensity: float
    w: float = 0.0
    h: float = 0.0
    r: float = 0.0


@dataclass
class LightingEvent:
    kind: str  # "global" or "local"
    start_s: float
    duration_s: float
    delta: float
    x: float = 0.0
    y: float = 0.0
    w: float = 0.0
    h: float = 0.0

    def active_at(self, t: float) -> bool:
        return self.start_s <= t < self.start_s + self.duration_s


@dataclass
class Scene:
    width: int = 200
    height: int = 100
    duration_s: float = 120.0
    fps: float = 1.0
    interval_s: float = 2.0
    background: float = 0.2
    noise_sigma: float = 0.0
    rng_seed: int = 0
    persons: list[PersonSpec] = field(default_factory=list)
    static_objects: list[StaticObject] = field(default_factory=list)
    lighting_events: list[LightingEvent] = field(default_factory=list)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ParameterError("scene dimensions must be positive")
        if self.duration_s <= 0 or self.fps <= 0 or self.interval_s <= 0:
            raise ParameterError("duration_s, fps and interval_s must be positive")
        if not 0.0 <= self.background <= 1.0:
            raise ParameterError("background must be in [0,1]")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma must be >= 0")
        for p in self.persons:
            if p.radius <= 0 or p.step < 0:
                raise ParameterError("person radius must be positive, step >= 0")
            if p.peak <= self.background:
                raise ParameterError("person peak intensity must exceed the background")

    @property
    def n_frames(self) -> int:
        return max(1, int(round(self.duration_s * self.fps)))

    def occupancy_at(self, t: float) -> int:
        return sum(1 for p in self.persons if p.active_at(t))

    def to_dict(self) -> dict:
        def _num(v):
            return None if math.isinf(v) else v

        return {
            "width": self.width,
            "height": self.height,
            "duration_s": self.duration_s,
            "fps": self.fps,
            "interval_s": self.interval_s,
            "background": self.background,
            "noise_sigma": self.noise_sigma,
            "rng_seed": self.rng_seed,
            "persons": [
                {
                    "radius": p.radius,
                    "peak": p.peak,
                    "step": p.step,
                    "entry_s": p.entry_s,
                    "exit_s": _num(p.exit_s),
                    "start": list(p.start) if p.start is not None else None,
                }
                for p in self.persons
            ],
            "static_objects": [
                {"shape": o.shape, "x": o.x, "y": o.y, "intensity": o.intensity,
                 "w": o.w, "h": o.h, "r": o.r}
                for o in self.static_objects
            ],
            "lighting_events": [
                {"kind": e.kind, "start_s": e.start_s, "duration_s": e.duration_s,
                 "delta": e.delta, "x": e.x, "y": e.y, "w": e.w, "h": e.h}
                for e in self.lighting_events
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scene":
        try:
            persons = [
                PersonSpec(
                    radius=float(p["radius"]),
                    peak=float(p["peak"]),
                    step=float(p["step"]),
                    entry_s=float(p.get("entry_s", 0.0)),
                    exit_s=math.inf if p.get("exit_s") is None else float(p["exit_s"]),
                    start=tuple(p["start"]) if p.get("start") is not None else None,
                )
                for p in d.get("persons", [])
            ]
            objects = [
                StaticObject(
                    shape=str(o["shape"]),
                    x=float(o["x"]),
                    y=float(o["y"]),
                    intensity=float(o["intensity"]),
                    w=float(o.get("w", 0.0)),
                    h=float(o.get("h", 0.0)),
                    r=float(o.get("r", 0.0)),
                )
                for o in d.get("static_objects", [])
            ]
            events = [
                LightingEvent(
                    kind=str(e["kind"]),
                    start_s=float(e["start_s"]),
                    duration_s=float(e["duration_s"]),
                    delta=float(e["delta"]),
                    x=float(e.get("x", 0.0)),
                    y=float(e.get("y", 0.0)),
                    w=float(e.get("w", 0.0)),
                    h=float(e.get("h", 0.0)),
                )
                for e in d.get("lighting_events", [])
            ]
            return cls(
                width=int(d.get("width", 200)),
                height=int(d.get("height", 100)),
                duration_s=float(d.get("duration_s", 120.0)),
                fps=float(d.get("fps", 1.0)),
                interval_s=float(d.get("interval_s", 2.0)),
                background=float(d.get("background", 0.2)),
                noise_sigma=float(d.get("noise_sigma", 0.0)),
                rng_seed=int(d.get("rng_seed", 0)),
                persons=persons,
                static_objects=objects,
                lighting_events=events,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad scene description: {exc}") from exc


def load_scene(path) -> Scene:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed scene file: {exc}") from exc
    return Scene.from_dict(raw)


def save_scene(path, scene: Scene) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _walk_tracks(scene: Scene, rng: np.random.Generator) -> list[np.ndarray]:
    """Per-person position tracks for every source frame.

    Persistent random walk: the heading drifts a little each frame and
    reflects off the walls, so displacement between sampled frames stays
    close to step * frames_elapsed.
    """
    tracks = []
    n = scene.n_frames
    for person in scene.persons:
        margin = min(person.radius, scene.width / 2 - 1, scene.height / 2 - 1)
        lo_x, hi_x = margin, scene.width - 1 - margin
        lo_y, hi_y = margin, scene.height - 1 - margin
        if person.start is not None:
            x, y = float(person.start[0]), float(person.start[1])
        else:
            x = rng.uniform(lo_x, hi_x)
            y = rng.uniform(lo_y, hi_y)
        heading = rng.uniform(0.0, 2.0 * math.pi)
        track = np.zeros((n, 2))
        for i in range(n):
            track[i] = (x, y)
            heading += rng.uniform(-0.6, 0.6)
            x += person.step * math.cos(heading)
            y += person.step * math.sin(heading)
            if x < lo_x or x > hi_x:
                x = min(max(x, lo_x), hi_x)
                heading = math.pi - heading
            if y < lo_y or y > hi_y:
                y = min(max(y, lo_y), hi_y)
                heading = -heading
        tracks.append(track)
    return tracks


def _person_profile(xs: np.ndarray, ys: np.ndarray, cx: float, cy: float, radius: float) -> np.ndarray:
    """Flat-core disc with a linear falloff between 0.8r and r.

    The narrow rim keeps the segmented footprint close to the nominal
    radius, the way a torso reads on an overhead sensor.
    """
    dist = np.sqrt((xs - cx) ** 2 + (ys - cy) ** 2)
    core = 0.8 * radius
    ramp = (radius - dist) / (radius - core)
    return np.clip(ramp, 0.0, 1.0)


def render_frame(scene: Scene, frame_index: int, tracks: list[np.ndarray], noise: np.ndarray | None) -> ThermalFrame:
    """Compose one source frame (before quantization)."""
    t = frame_index / scene.fps
    ys, xs = np.mgrid[0 : scene.height, 0 : scene.width].astype(np.float64)
    canvas = np.full((scene.height, scene.width), scene.background)

    for obj in scene.static_objects:
        if obj.shape == "rect":
            x0, y0 = int(round(obj.x)), int(round(obj.y))
            x1, y1 = int(round(obj.x + obj.w)), int(round(obj.y + obj.h))
            region = np.zeros_like(canvas, dtype=bool)
            region[max(0, y0) : max(0, y1), max(0, x0) : max(0, x1)] = True
            canvas[region] = np.maximum(canvas[region], obj.intensity)
        elif obj.shape == "disc":
            inside = (xs - obj.x) ** 2 + (ys - obj.y) ** 2 <= obj.r**2
            canvas[inside] = np.maximum(canvas[inside], obj.intensity)
        else:
            raise FormatError(f"unknown static object shape {obj.shape!r}")

    for event in scene.lighting_events:
        if not event.active_at(t):
            continue
        if event.kind == "global":
            canvas += event.delta
        elif event.kind == "local":
            x0, y0 = int(round(event.x)), int(round(event.y))
            x1, y1 = int(round(event.x + event.w)), int(round(event.y + event.h))
            canvas[max(0, y0) : max(0, y1), max(0, x0) : max(0, x1)] += event.delta
        else:
            raise FormatError(f"unknown lighting event kind {event.kind!r}")

    for person, track in zip(scene.persons, tracks):
        if not person.active_at(t):
            continue
        cx, cy = track[frame_index]
        body = person.peak * _person_profile(xs, ys, cx, cy, person.radius)
        np.maximum(canvas, body, out=canvas)

    if noise is not None:
        canvas = canvas + noise
    np.clip(canvas, 0.0, 1.0, out=canvas)
    return ThermalFrame(pixels=canvas, timestamp_s=t)


def render(scene: Scene, out_dir) -> str:
    """Render a scene to PGM frames plus a manifest with ground truth.

    Returns the manifest path. Ground-truth occupancy is recorded at every
    sampled frame index straight from the entry/exit schedule.
    """
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(scene.rng_seed)
    tracks = _walk_tracks(scene, rng)

    n = scene.n_frames
    frame_names = []
    for i in range(n):
        noise = None
        if scene.noise_sigma > 0:
            noise = rng.normal(0.0, scene.noise_sigma, size=(scene.height, scene.width))
        frame = render_frame(scene, i, tracks, noise)
        name = f"frame_{i:04d}.pgm"
        write_frame(os.path.join(out_dir, name), frame, bit_depth=16)
        frame_names.append(name)

    sampled = sample_indices(n, scene.fps, scene.interval_s)
    ground_truth = {str(idx): scene.occupancy_at(idx / scene.fps) for idx in sampled}
    manifest = {
        "frames": frame_names,
        "fps": scene.fps,
        "interval_s": scene.interval_s,
        "ground_truth": ground_truth,
    }
    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path


def render_manifest(scene: Scene, out_dir) -> SequenceManifest:
    """Render and immediately load the resulting manifest."""
    return load_sequence(render(scene, out_dir))
