"""Flat run configuration: every knob of the extraction and projection
pipeline, loadable from ``key=value`` text files and packable to the
fixed-width binary block stored in model files."""

from __future__ import annotations

import dataclasses
import hashlib
import math
import struct
from dataclasses import dataclass

from .errors import ConfigError
from .gabor import GaborParams
from .preprocess import PreprocessParams

MODE_GRID = "grid"
MODE_KEYPOINT = "keypoint"

# directions, scales, sigma_pi, k_max_pi, spacing, window_len,
# gamma, dog_sigma_inner, dog_sigma_outer, contrast_alpha, contrast_tau,
# mode, block_size, keypoint_count, ridge_scale  -- then k_requested
_FEATURE_STRUCT = struct.Struct("<IIdddIdddddBIId")
_K_STRUCT = struct.Struct("<I")
CONFIG_BLOCK_SIZE = _FEATURE_STRUCT.size + _K_STRUCT.size


@dataclass(frozen=True)
class RunConfig:
    directions: int = 8
    scales: int = 4
    sigma_pi: float = 1.0          # sigma as a multiple of pi
    k_max_pi: float = 0.5          # k_max as a multiple of pi
    spacing: float = math.sqrt(2.0)
    window_len: int = 9
    gamma: float = 0.2
    dog_sigma_inner: float = 1.0
    dog_sigma_outer: float = 2.0
    contrast_alpha: float = 0.1
    contrast_tau: float = 10.0
    mode: str = MODE_GRID
    block_size: int = 15
    keypoint_count: int = 21
    ridge_scale: float = 1e-4
    k_requested: int = 1196

    def __post_init__(self):
        if self.mode not in (MODE_GRID, MODE_KEYPOINT):
            raise ConfigError(f"mode must be '{MODE_GRID}' or '{MODE_KEYPOINT}'")
        if self.block_size < 1:
            raise ConfigError("block_size must be positive")
        if self.keypoint_count < 1:
            raise ConfigError("keypoint_count must be positive")
        if self.ridge_scale < 0.0:
            raise ConfigError("ridge_scale must be nonnegative")
        if self.k_requested < 1:
            raise ConfigError("k_requested must be positive")
        # constructing the stage params validates their fields
        self.gabor_params()
        self.preprocess_params()

    def gabor_params(self) -> GaborParams:
        return GaborParams(
            directions=self.directions,
            scales=self.scales,
            sigma=self.sigma_pi * math.pi,
            k_max=self.k_max_pi * math.pi,
            spacing=self.spacing,
            window_len=self.window_len,
        )

    def preprocess_params(self) -> PreprocessParams:
        return PreprocessParams(
            gamma=self.gamma,
            dog_sigma_inner=self.dog_sigma_inner,
            dog_sigma_outer=self.dog_sigma_outer,
            contrast_alpha=self.contrast_alpha,
            contrast_tau=self.contrast_tau,
        )

    def pack_features(self) -> bytes:
        """Fixed-width little-endian block of every feature-relevant field."""
        return _FEATURE_STRUCT.pack(
            self.directions,
            self.scales,
            self.sigma_pi,
            self.k_max_pi,
            self.spacing,
            self.window_len,
            self.gamma,
            self.dog_sigma_inner,
            self.dog_sigma_outer,
            self.contrast_alpha,
            self.contrast_tau,
            0 if self.mode == MODE_GRID else 1,
            self.block_size,
            self.keypoint_count,
            self.ridge_scale,
        )

    def pack(self) -> bytes:
        return self.pack_features() + _K_STRUCT.pack(self.k_requested)

    @classmethod
    def unpack(cls, blob: bytes) -> "RunConfig":
        if len(blob) != CONFIG_BLOCK_SIZE:
            raise ConfigError(f"config block has {len(blob)} bytes, expected {CONFIG_BLOCK_SIZE}")
        f = _FEATURE_STRUCT.unpack(blob[: _FEATURE_STRUCT.size])
        (k_requested,) = _K_STRUCT.unpack(blob[_FEATURE_STRUCT.size :])
        return cls(
            directions=f[0],
            scales=f[1],
            sigma_pi=f[2],
            k_max_pi=f[3],
            spacing=f[4],
            window_len=f[5],
            gamma=f[6],
            dog_sigma_inner=f[7],
            dog_sigma_outer=f[8],
            contrast_alpha=f[9],
            contrast_tau=f[10],
            mode=MODE_GRID if f[11] == 0 else MODE_KEYPOINT,
            block_size=f[12],
            keypoint_count=f[13],
            ridge_scale=f[14],
            k_requested=k_requested,
        )

    def feature_fingerprint(self) -> str:
        """Hash of the extraction-relevant fields (k_requested excluded)."""
        return hashlib.sha256(self.pack_features()).hexdigest()

    def num_subbands(self) -> int:
        return self.directions * self.scales

    def local_feature_length(self) -> int:
        d = self.num_subbands()
        return (d + 1) * (d + 2) // 2


_INT_FIELDS = {"directions", "scales", "window_len", "block_size", "keypoint_count", "k_requested"}
_STR_FIELDS = {"mode"}
_FIELD_NAMES = {f.name for f in dataclasses.fields(RunConfig)}


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse ``key=value`` lines (``#`` comments, blank lines allowed)."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _FIELD_NAMES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = coerce_value(key, value)
    if base is not None:
        return dataclasses.replace(base, **values)
    return RunConfig(**values)


def coerce_value(key: str, value: str) -> object:
    if key in _STR_FIELDS:
        return value
    try:
        if key in _INT_FIELDS:
            return int(value)
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


def load_config(path: str, base: RunConfig | None = None) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), base=base)
