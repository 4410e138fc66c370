"""Complex Gabor kernel bank and magnitude subband decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .errors import ConfigError, ImageTooSmall, InvalidIndex


@dataclass(frozen=True)
class GaborParams:
    """Parameters shared by every kernel in a bank.

    ``sigma`` is the Gaussian envelope width in radians (e.g. 1.2*pi);
    ``k_max`` the maximum spatial frequency; ``spacing`` the frequency
    spacing factor between scales; ``window_len`` the odd spatial support
    in pixels.
    """

    directions: int = 8
    scales: int = 4
    sigma: float = math.pi
    k_max: float = math.pi / 2.0
    spacing: float = math.sqrt(2.0)
    window_len: int = 9

    def __post_init__(self):
        if self.directions < 1 or self.scales < 1:
            raise ConfigError("directions and scales must be >= 1")
        if self.sigma <= 0.0 or self.k_max <= 0.0:
            raise ConfigError("sigma and k_max must be positive")
        if self.spacing <= 1.0:
            raise ConfigError("spacing factor must exceed 1")
        if self.window_len < 3 or self.window_len % 2 == 0:
            raise ConfigError("window_len must be odd and >= 3")

    @property
    def num_subbands(self) -> int:
        return self.directions * self.scales


@dataclass(frozen=True)
class GaborKernel:
    u: int
    v: int
    real: np.ndarray = field(repr=False)
    imag: np.ndarray = field(repr=False)


def wave_number(params: GaborParams, v: int) -> float:
    """Spatial frequency of scale v: k_max / spacing^v."""
    return params.k_max / params.spacing**v


def orientation(params: GaborParams, u: int) -> float:
    """Orientation of direction u: pi * (u - 1) / U."""
    return math.pi * (u - 1) / params.directions


def build_kernel(params: GaborParams, u: int, v: int) -> GaborKernel:
    """Build the direction-u, scale-v kernel on an integer grid centred at 0.

    The DC term of the real part is removed with the discretely computed
    envelope mean rather than the continuous exp(-sigma^2/2) constant, so the
    sampled kernel is exactly zero-sum regardless of window truncation.
    """
    if not (1 <= u <= params.directions):
        raise InvalidIndex(f"direction index {u} outside 1..{params.directions}")
    if not (1 <= v <= params.scales):
        raise InvalidIndex(f"scale index {v} outside 1..{params.scales}")
    r = (params.window_len - 1) // 2
    coords = np.arange(-r, r + 1, dtype=np.float64)
    x, y = np.meshgrid(coords, coords, indexing="xy")

    k_v = wave_number(params, v)
    phi = orientation(params, u)
    k2 = k_v * k_v
    sigma2 = params.sigma**2
    envelope = (k2 / sigma2) * np.exp(-k2 * (x * x + y * y) / (2.0 * sigma2))
    phase = k_v * (math.cos(phi) * x + math.sin(phi) * y)
    cos_part = envelope * np.cos(phase)
    dc = cos_part.sum() / envelope.sum()
    return GaborKernel(u=u, v=v, real=cos_part - dc * envelope, imag=envelope * np.sin(phase))


def build_bank(params: GaborParams) -> list[GaborKernel]:
    """All U*V kernels in deterministic order: index p = (v-1)*U + u."""
    return [
        build_kernel(params, u, v)
        for v in range(1, params.scales + 1)
        for u in range(1, params.directions + 1)
    ]


def _pad_reflect(image: np.ndarray, r: int) -> np.ndarray:
    return np.pad(image, r, mode="symmetric")


def _conv_direct(padded: np.ndarray, kernel: np.ndarray, out_shape: tuple[int, int]) -> np.ndarray:
    h, w = out_shape
    out = np.zeros(out_shape)
    for a in range(kernel.shape[0]):
        for b in range(kernel.shape[1]):
            out += kernel[a, b] * padded[a : a + h, b : b + w]
    return out


def _conv_fft(padded: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    return fftconvolve(padded, kernel[::-1, ::-1], mode="valid")


def decompose(image: np.ndarray, bank: list[GaborKernel], method: str = "fft") -> np.ndarray:
    """Magnitude subbands of an image: shape (len(bank), H, W).

    Filtering is same-size with reflect padding. ``method`` selects the FFT
    path (default) or the direct spatial path used as its oracle.
    """
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise ImageTooSmall(f"expected a 2-D image, got shape {image.shape}")
    wl = bank[0].real.shape[0]
    if min(image.shape) < wl:
        raise ImageTooSmall(f"image {image.shape} smaller than kernel support {wl}")
    if method not in ("fft", "direct"):
        raise ConfigError(f"unknown convolution method {method!r}")

    r = (wl - 1) // 2
    padded = _pad_reflect(image, r)
    planes = np.empty((len(bank), *image.shape))
    for p, kernel in enumerate(bank):
        if method == "fft":
            re = _conv_fft(padded, kernel.real)
            im = _conv_fft(padded, kernel.imag)
        else:
            re = _conv_direct(padded, kernel.real, image.shape)
            im = _conv_direct(padded, kernel.imag, image.shape)
        planes[p] = np.hypot(re, im)
    return planes
