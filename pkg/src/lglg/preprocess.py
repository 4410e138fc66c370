"""Illumination normalization: gamma correction, DoG filtering, contrast
equalization, applied in that order before feature extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInput, OutOfRange

_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class PreprocessParams:
    gamma: float = 0.2
    dog_sigma_inner: float = 1.0
    dog_sigma_outer: float = 2.0
    contrast_alpha: float = 0.1
    contrast_tau: float = 10.0

    def __post_init__(self):
        if not (0.0 < self.gamma <= 1.0):
            raise ConfigError("gamma must be in (0, 1]")
        if self.dog_sigma_inner <= 0.0 or self.dog_sigma_inner >= self.dog_sigma_outer:
            raise ConfigError("require 0 < dog_sigma_inner < dog_sigma_outer")
        if not (0.0 < self.contrast_alpha < 1.0):
            raise ConfigError("contrast_alpha must be in (0, 1)")
        if self.contrast_tau <= 0.0:
            raise ConfigError("contrast_tau must be positive")


def gamma_correct(image: np.ndarray, gamma: float) -> np.ndarray:
    image = np.asarray(image, dtype=np.float64)
    if image.min() < 0.0 or image.max() > 1.0:
        raise OutOfRange("gamma correction expects pixel values in [0, 1]")
    return image**gamma


def gaussian_kernel_1d(sigma: float) -> np.ndarray:
    """Sampled, normalized Gaussian with support radius ceil(4*sigma)."""
    radius = int(math.ceil(4.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def _blur_axis(image: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    r = len(kernel) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (r, r)
    padded = np.pad(image, pad, mode="symmetric")
    out = np.zeros_like(image)
    for i, w in enumerate(kernel):
        if axis == 0:
            out += w * padded[i : i + image.shape[0], :]
        else:
            out += w * padded[:, i : i + image.shape[1]]
    return out


def gaussian_blur(image: np.ndarray, sigma: float) -> np.ndarray:
    k = gaussian_kernel_1d(sigma)
    return _blur_axis(_blur_axis(image, k, 0), k, 1)


def dog_filter(image: np.ndarray, sigma_inner: float, sigma_outer: float) -> np.ndarray:
    """Difference of Gaussians with reflect padding."""
    if sigma_inner >= sigma_outer:
        raise ConfigError("sigma_inner must be smaller than sigma_outer")
    image = np.asarray(image, dtype=np.float64)
    return gaussian_blur(image, sigma_inner) - gaussian_blur(image, sigma_outer)


def contrast_equalize(image: np.ndarray, alpha: float, tau: float) -> np.ndarray:
    """Two-stage robust contrast renormalization followed by a tanh squashing
    that bounds the output in (-tau, tau). Exactly invariant to positive
    rescaling of the input."""
    image = np.asarray(image, dtype=np.float64)
    if np.max(np.abs(image)) < _ZERO_TOL:
        raise DegenerateInput("contrast equalization of a (near-)zero image")
    out = image / np.mean(np.abs(image) ** alpha) ** (1.0 / alpha)
    out = out / np.mean(np.minimum(np.abs(out), tau) ** alpha) ** (1.0 / alpha)
    return tau * np.tanh(out / tau)


def preprocess_chain(image: np.ndarray, params: PreprocessParams) -> np.ndarray:
    """gamma -> DoG -> contrast equalization; expects input in [0, 1]."""
    out = gamma_correct(image, params.gamma)
    out = dog_filter(out, params.dog_sigma_inner, params.dog_sigma_outer)
    return contrast_equalize(out, params.contrast_alpha, params.contrast_tau)
