"""Seeded generators for the synthetic benchmark distributions.

Each generator is a pure function of its parameters and seed.  Where a
closed-form reference exists (the embedded Gaussian), the population
covariance is returned alongside the samples so oracles never have to be
re-derived by callers.

Spiral conventions: the angle is uniform on ``[0, theta_max]`` (default two
turns, ``4 pi``) and the radius grows linearly from 0.5 to 4.0 over that
range, so the curve is a fixed Archimedean spiral; the ambient embedding
appends independent ``N(0, lambda_res^2)`` coordinates.  Note the intensity
conventions differ deliberately: ``lambda_res`` is a standard deviation for
the spiral noise block but a variance for the residual axes of the embedded
Gaussian.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig
from .mi import JointDataset
from .pca import SampleMatrix
from .rng import substream

__all__ = [
    "SPIRAL_KINDS",
    "GeneratorSpec",
    "gen_embedded_gaussian",
    "gen_spiral",
    "gen_common_signal_pair",
]

SPIRAL_KINDS = ("spiral2d", "conical", "cylindrical")
GENERATOR_KINDS = ("gaussian",) + SPIRAL_KINDS + ("pair",)

_R_MIN = 0.5
_R_MAX = 4.0
_THETA_MAX_DEFAULT = 4.0 * math.pi
_Z_MAX = 4.0


@dataclass(frozen=True)
class GeneratorSpec:
    """A named generator plus its parameters, for manifests and sweep cells."""

    kind: str
    params: dict
    seed: int

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise InvalidConfig(f"kind must be one of {GENERATOR_KINDS}, got {self.kind!r}")


def gen_embedded_gaussian(
    intrinsic_dim: int,
    ambient_dim: int,
    lambda_res: float,
    n: int,
    seed: int,
) -> tuple[SampleMatrix, np.ndarray]:
    """Draw ``N(0, diag(1 x d, lambda_res x (D-d)))`` samples.

    Returns the samples and the population covariance (for closed-form
    references).  ``lambda_res`` is the variance of each residual axis.
    """
    if not (1 <= intrinsic_dim <= ambient_dim):
        raise InvalidConfig(
            f"need 1 <= intrinsic_dim <= ambient_dim, got {intrinsic_dim}, {ambient_dim}"
        )
    if lambda_res <= 0:
        raise InvalidConfig(f"lambda_res must be positive, got {lambda_res}")
    variances = np.concatenate(
        [np.ones(intrinsic_dim), np.full(ambient_dim - intrinsic_dim, lambda_res)]
    )
    draws = substream(seed).standard_normal((ambient_dim, n))
    draws *= np.sqrt(variances)[:, None]
    return SampleMatrix(draws), np.diag(variances)


def spiral_intrinsic_dim(kind: str) -> int:
    if kind == "spiral2d":
        return 2
    if kind in ("conical", "cylindrical"):
        return 3
    raise InvalidConfig(f"unknown spiral kind {kind!r}")


def gen_spiral(
    kind: str,
    lambda_res: float,
    ambient_dim: int,
    n: int,
    seed: int,
    theta_max: float = _THETA_MAX_DEFAULT,
) -> SampleMatrix:
    """Spiral manifold samples embedded in ``ambient_dim`` dimensions.

    ``spiral2d`` -> (r cos t, r sin t); ``conical`` -> (r cos t, r sin t, r);
    ``cylindrical`` -> (r cos t, r sin t, z) with z ~ Unif[0, 4].  The
    remaining ``ambient_dim - intrinsic`` coordinates are independent
    ``N(0, lambda_res^2)``.  ``theta_max = 0`` degenerates to a point mass.
    """
    intrinsic = spiral_intrinsic_dim(kind)
    if ambient_dim < intrinsic:
        raise InvalidConfig(f"{kind} needs ambient_dim >= {intrinsic}, got {ambient_dim}")
    if lambda_res <= 0 or theta_max < 0:
        raise InvalidConfig("need lambda_res > 0 and theta_max >= 0")
    rng = substream(seed)
    theta = rng.uniform(0.0, theta_max, size=n) if theta_max > 0 else np.zeros(n)
    frac = theta / _THETA_MAX_DEFAULT
    r = _R_MIN + (_R_MAX - _R_MIN) * frac
    if kind == "spiral2d":
        core = np.vstack([r * np.cos(theta), r * np.sin(theta)])
    elif kind == "conical":
        core = np.vstack([r * np.cos(theta), r * np.sin(theta), r])
    else:
        z = rng.uniform(0.0, _Z_MAX, size=n)
        core = np.vstack([r * np.cos(theta), r * np.sin(theta), z])
    if ambient_dim > intrinsic:
        tail = rng.standard_normal((ambient_dim - intrinsic, n)) * lambda_res
        core = np.vstack([core, tail])
    return SampleMatrix(core)


def gen_common_signal_pair(
    intrinsic_dim: int,
    ambient_dim: int,
    n: int,
    noise_std: float,
    seed: int,
    dependent: bool = True,
) -> tuple[JointDataset, bool]:
    """Paired vectors sharing (or not) a rank-``d`` common signal.

    ``X = P_x W + N_x`` and ``Y = P_y W' + N_y`` with ``P_x, P_y`` drawn once
    per dataset as ``D x d`` standard-normal matrices and per-sample
    ``W ~ N(0, I_d)``.  Dependent pairs share ``W' = W``; null pairs use a
    fresh ``W'`` for Y.  Returns the dataset and the dependence flag.

    The draw order from ``substream(seed)`` is fixed and part of the
    contract: ``P_x, P_y, W, N_x, N_y`` and then, for null pairs only,
    ``W'``.  A dependent and a null dataset with the same seed therefore
    share ``X`` (and everything except the signal of ``Y``), which makes
    paired comparisons possible.
    """
    if not (1 <= intrinsic_dim <= ambient_dim):
        raise InvalidConfig(
            f"need 1 <= intrinsic_dim <= ambient_dim, got {intrinsic_dim}, {ambient_dim}"
        )
    if noise_std <= 0:
        raise InvalidConfig(f"noise_std must be positive, got {noise_std}")
    rng = substream(seed)
    p_x = rng.standard_normal((ambient_dim, intrinsic_dim))
    p_y = rng.standard_normal((ambient_dim, intrinsic_dim))
    w = rng.standard_normal((intrinsic_dim, n))
    n_x = rng.standard_normal((ambient_dim, n)) * noise_std
    n_y = rng.standard_normal((ambient_dim, n)) * noise_std
    w_y = w if dependent else rng.standard_normal((intrinsic_dim, n))
    x = SampleMatrix(p_x @ w + n_x)
    y = SampleMatrix(p_y @ w_y + n_y)
    return JointDataset(x=x, y=y), dependent
