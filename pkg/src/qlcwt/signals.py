"""Test-signal generators shared by the CLI and the verification suites."""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .quaternion import Grid2D, QSignal2D, from_i, from_real
from .wavelets import make_dog_wavelet

KINDS = ("gaussian", "chirped-gaussian", "exponential", "dog")


def gaussian(grid: Grid2D, sigma: float = 1.0, center=(0.0, 0.0)) -> QSignal2D:
    """Real Gaussian ``exp(-|x - center|^2 / (2 sigma^2))``."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    c1, c2 = float(center[0]), float(center[1])
    return QSignal2D.from_function(
        grid, lambda x1, x2: from_real(np.exp(-((x1 - c1) ** 2 + (x2 - c2) ** 2) / (2 * sigma**2)))
    )


def chirped_gaussian(grid: Grid2D, sigma: float = 1.0, c: float = 1.0) -> QSignal2D:
    """Gaussian times the i-complex chirp ``exp(i c x1^2)``."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")

    def fn(x1, x2):
        return from_i(np.exp(-(x1**2 + x2**2) / (2 * sigma**2)) * np.exp(1j * c * x1**2))

    return QSignal2D.from_function(grid, fn)


def exponential(grid: Grid2D, alpha1: float = 1.0, alpha2: float = 1.0) -> QSignal2D:
    """``exp(-alpha1 x1 - alpha2 x2)`` truncated by the sampling window."""
    return QSignal2D.from_function(grid, lambda x1, x2: from_real(np.exp(-alpha1 * x1 - alpha2 * x2)))


def dog(grid: Grid2D, lam: float = 0.5) -> QSignal2D:
    """The difference-of-Gaussian mother wavelet as a signal (same samples)."""
    return make_dog_wavelet(lam, grid).signal


def synthesize(kind: str, grid: Grid2D, *params: float) -> QSignal2D:
    """Dispatch on ``kind``; parameters follow the generator signatures."""
    try:
        if kind == "gaussian":
            return gaussian(grid, *params[:1])
        if kind == "chirped-gaussian":
            return chirped_gaussian(grid, *params[:2])
        if kind == "exponential":
            return exponential(grid, *params[:2])
        if kind == "dog":
            return dog(grid, *params[:1])
    except TypeError as exc:  # pragma: no cover - argparse guards the arity
        raise DomainError(str(exc)) from exc
    raise DomainError(f"unknown signal kind {kind!r}; choose from {KINDS}")


def parse_signal_spec(text: str, grid: Grid2D) -> tuple[str, QSignal2D]:
    """``kind[:p1,p2]`` such as ``gaussian:1`` or ``chirped-gaussian:1,2``."""
    kind, _, args = text.strip().partition(":")
    try:
        params = [float(v) for v in args.split(",")] if args else []
    except ValueError as exc:
        raise DomainError(f"bad signal parameters in {text!r}") from exc
    return text, synthesize(kind, grid, *params)


def standard_suite(grid: Grid2D, lam: float = 0.5) -> dict[str, QSignal2D]:
    """Gaussian, chirped Gaussians (c = 1, 2), a shifted Gaussian and a unit-norm DOG."""
    d = dog(grid, lam)
    return {
        "gaussian": gaussian(grid),
        "chirped-gaussian:c=1": chirped_gaussian(grid, 1.0, 1.0),
        "chirped-gaussian:c=2": chirped_gaussian(grid, 1.0, 2.0),
        "shifted-gaussian": gaussian(grid, 1.0, (1.0, -0.5)),
        "dog-normalized": d.scale(1.0 / np.sqrt((d.data**2).sum() * grid.cell)),
    }
