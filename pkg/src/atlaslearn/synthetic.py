"""Seeded benchmark manifolds with ground-truth parameters.

Every sampler draws its parameters from ``numpy.random.default_rng``
in a fixed order, so a given (n, seed) always reproduces the same
cloud bit for bit.  The returned LabeledCloud keeps the per-point
parameters so downstream exports can color embeddings by them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

__all__ = [
    "LabeledCloud",
    "sample_sphere",
    "sample_torus",
    "sample_klein",
    "sample_so3",
    "sample_cylinder",
    "add_gaussian_noise",
    "GENERATORS",
]


@dataclass(frozen=True)
class LabeledCloud:
    """A sampled cloud plus the parameters that generated each point."""

    cloud: np.ndarray
    params: np.ndarray
    param_names: tuple[str, ...]
    generator: str
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.params.shape[0] != self.cloud.shape[0]:
            raise ParameterError("params row count must match cloud row count")
        if self.params.shape[1] != len(self.param_names):
            raise ParameterError("param_names must label every params column")


def _check_n(n: int) -> None:
    if n < 1:
        raise ParameterError(f"sample count must be >= 1, got {n}")


def sample_sphere(n: int, seed: int) -> LabeledCloud:
    """Area-uniform unit sphere: (cos t sin p, sin t sin p, cos p).

    Draw order: theta ~ U[0, 2pi), then cos(phi) ~ U(-1, 1); taking
    arccos of a uniform cosine makes the surface density uniform.
    """
    _check_n(n)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    phi = np.arccos(rng.uniform(-1.0, 1.0, n))
    pts = np.column_stack(
        [np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)]
    )
    return LabeledCloud(
        pts,
        np.column_stack([theta, phi]),
        ("theta", "phi"),
        "sphere",
        meta={"surface": "unit sphere, area-uniform"},
    )


def sample_torus(n: int, seed: int) -> LabeledCloud:
    """Torus of revolution, major radius 6, minor radius 4.

    Points are ((6 + 4 cos t) cos p, (6 + 4 cos t) sin p, 4 sin t) with
    both angles uniform on [0, 2pi) — parameter-uniform, not
    area-uniform.  Draw order: theta then phi.
    """
    _check_n(n)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    ring = 6.0 + 4.0 * np.cos(theta)
    pts = np.column_stack([ring * np.cos(phi), ring * np.sin(phi), 4.0 * np.sin(theta)])
    return LabeledCloud(
        pts,
        np.column_stack([theta, phi]),
        ("theta", "phi"),
        "torus",
        meta={"surface": "torus of revolution R=6 r=4, parameter-uniform"},
    )


def sample_klein(n: int, seed: int) -> LabeledCloud:
    """Klein bottle in the flat 4-d embedding.

    ((2 + cos t) cos p, (2 + cos t) sin p, sin t cos(p/2), sin t sin(p/2)),
    angles uniform on [0, 2pi); draw order theta then phi.
    """
    _check_n(n)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    ring = 2.0 + np.cos(theta)
    pts = np.column_stack(
        [
            ring * np.cos(phi),
            ring * np.sin(phi),
            np.sin(theta) * np.cos(phi / 2.0),
            np.sin(theta) * np.sin(phi / 2.0),
        ]
    )
    return LabeledCloud(
        pts,
        np.column_stack([theta, phi]),
        ("theta", "phi"),
        "klein",
        meta={"surface": "Klein bottle, flat 4-d embedding, parameter-uniform"},
    )


def sample_so3(n: int, seed: int) -> LabeledCloud:
    """Uniform random rotations as row-major 3x3 matrices in R^9.

    Draws an (n, 4) standard Gaussian block, normalizes each row to a
    unit quaternion (Haar-uniform on SO(3)), and converts to rotation
    matrices.  Params are the quaternions (w, x, y, z).
    """
    _check_n(n)
    rng = np.random.default_rng(seed)
    q = rng.normal(size=(n, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    w, x, y, z = q.T
    rows = np.column_stack(
        [
            1 - 2 * (y * y + z * z),
            2 * (x * y - z * w),
            2 * (x * z + y * w),
            2 * (x * y + z * w),
            1 - 2 * (x * x + z * z),
            2 * (y * z - x * w),
            2 * (x * z - y * w),
            2 * (y * z + x * w),
            1 - 2 * (x * x + y * y),
        ]
    )
    return LabeledCloud(
        rows,
        q.copy(),
        ("qw", "qx", "qy", "qz"),
        "so3",
        meta={"surface": "SO(3) rotation matrices, row-major, quaternion-uniform"},
    )


def sample_cylinder(n: int, seed: int) -> LabeledCloud:
    """Open cylinder (cos t, sin t, h), t ~ U[0, 2pi), h ~ U[0, 2]."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    h = rng.uniform(0.0, 2.0, n)
    pts = np.column_stack([np.cos(theta), np.sin(theta), h])
    return LabeledCloud(
        pts,
        np.column_stack([theta, h]),
        ("theta", "height"),
        "cylinder",
        meta={"surface": "unit-radius cylinder, height [0, 2], parameter-uniform"},
    )


GENERATORS = {
    "sphere": sample_sphere,
    "torus": sample_torus,
    "klein": sample_klein,
    "so3": sample_so3,
    "cylinder": sample_cylinder,
}


def add_gaussian_noise(cloud: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    """Add isotropic Gaussian noise with standard deviation sigma."""
    if sigma < 0:
        raise ParameterError(f"noise sigma must be >= 0, got {sigma}")
    cloud = np.asarray(cloud, dtype=np.float64)
    if sigma == 0:
        return cloud.copy()
    rng = np.random.default_rng(seed)
    return cloud + rng.normal(0.0, sigma, size=cloud.shape)
