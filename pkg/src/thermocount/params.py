"""Estimation parameters: the five calibrated tunables plus fixed constants."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .errors import FormatError, ParameterError


@dataclass
class Params:
    """Knobs for a full estimation session.

    The first five fields are found by calibration; k, blur_sigma and
    connectivity are fixed algorithm constants.
    """

    mask_update_frequency: int
    lighting_threshold: float
    noise_low: float
    noise_high: float
    memory_size: int
    k: int = 2
    blur_sigma: float = 1.0
    connectivity: int = 8

    def __post_init__(self):
        if self.mask_update_frequency < 1:
            raise ParameterError("mask_update_frequency must be >= 1")
        if not 0.0 <= self.lighting_threshold <= 1.0:
            raise ParameterError("lighting_threshold must be in [0,1]")
        if self.noise_low < 0:
            raise ParameterError("noise_low must be >= 0")
        if self.noise_low > self.noise_high:
            raise ParameterError("noise_low must not exceed noise_high")
        if self.memory_size < 1:
            raise ParameterError("memory_size must be >= 1")
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        if self.blur_sigma <= 0:
            raise ParameterError("blur_sigma must be positive")
        if self.connectivity not in (4, 8):
            raise ParameterError("connectivity must be 4 or 8")

    def to_dict(self) -> dict:
        d = asdict(self)
        if math.isinf(d["noise_high"]):
            d["noise_high"] = None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Params":
        try:
            return cls(
                mask_update_frequency=int(d["mask_update_frequency"]),
                lighting_threshold=float(d["lighting_threshold"]),
                noise_low=float(d["noise_low"]),
                noise_high=math.inf if d.get("noise_high") is None else float(d["noise_high"]),
                memory_size=int(d["memory_size"]),
                k=int(d.get("k", 2)),
                blur_sigma=float(d.get("blur_sigma", 1.0)),
                connectivity=int(d.get("connectivity", 8)),
            )
        except KeyError as exc:
            raise FormatError(f"params missing field {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise FormatError(f"bad params value: {exc}") from exc


def load_params(path) -> Params:
    """Read a Params JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed params file: {exc}") from exc
    if not isinstance(raw, dict):
        raise FormatError(f"{path}: params file must hold a JSON object")
    return Params.from_dict(raw)


def save_params(path, params: Params) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(params.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
