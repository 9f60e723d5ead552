"""Mutual-information estimation from smoothed entropies.

Two sampling regimes are supported:

* conditional sampling -- ``I(X; Y+Z) = h(Y+Z) - mean_i h(Y+Z | X=x_i)``
  from per-condition sample sets (``conditional_mi``), the regime produced
  by recording noisy-network activations per input;
* joint sampling -- ``I(X+Z1; Y+Z2) = h(X+Z1) + h(Y+Z2) - h([X;Y]+Z)``
  from paired samples (``joint_mi``), where the stacked term lives in twice
  the ambient dimension and is reduced to twice the target dimension.

Every entropy term runs the projection estimator with its own seed derived
from ``config.seed``, keyed by term role and condition index, so adding a
condition never perturbs the other terms' draws.  An ``MiEstimate`` keeps
its constituent entropy results; ``value`` is always recomputed from them,
so the reported number and its components cannot drift apart.
"""

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import InvalidData
from .estimator import EstimatorConfig, config_with_seed, pca_smoothed_entropy
from .pca import SampleMatrix
from .rng import substream

__all__ = [
    "ConditionalDataset",
    "JointDataset",
    "MiEstimate",
    "conditional_mi",
    "joint_mi",
    "ingest_activation_dump",
]

# Term tags for per-term seed derivation (appended to config.seed's path).
_TAG_MARGINAL = 10
_TAG_CONDITION = 11
_TAG_X = 12
_TAG_Y = 13
_TAG_JOINT = 14
_TAG_POOL = 15


@dataclass(frozen=True)
class ConditionalDataset:
    """Samples of Y drawn separately under each condition X = x_i."""

    conditions: tuple
    samples: tuple[SampleMatrix, ...]

    def __post_init__(self):
        if len(self.conditions) < 1 or len(self.conditions) != len(self.samples):
            raise InvalidData("need one sample matrix per condition, at least one condition")
        dims = {s.dim for s in self.samples}
        if len(dims) != 1:
            raise InvalidData(f"per-condition sample dims differ: {sorted(dims)}")
        object.__setattr__(self, "conditions", tuple(self.conditions))
        object.__setattr__(self, "samples", tuple(self.samples))

    @property
    def n_conditions(self) -> int:
        return len(self.conditions)

    @property
    def dim(self) -> int:
        return self.samples[0].dim


@dataclass(frozen=True)
class JointDataset:
    """Column-paired samples of (X, Y); column j of x and y form one pair."""

    x: SampleMatrix
    y: SampleMatrix

    def __post_init__(self):
        if self.x.count != self.y.count:
            raise InvalidData(
                f"x and y must be column-paired, got {self.x.count} vs {self.y.count} samples"
            )

    @property
    def count(self) -> int:
        return self.x.count


@dataclass(frozen=True)
class MiEstimate:
    """A mutual-information value with the entropy terms that produced it.

    ``kind`` is ``"conditional"`` (value = marginal - mean of conditionals)
    or ``"joint"`` (value = x + y - joint).  ``value`` and ``std_error`` are
    recomputed from the stored components on every access.
    """

    kind: str
    components: dict
    config: EstimatorConfig

    @property
    def value(self) -> float:
        if self.kind == "conditional":
            conditionals = self.components["conditionals"]
            total = 0.0
            for term in conditionals:
                total += term.value
            return self.components["marginal"].value - total / len(conditionals)
        return (
            self.components["x"].value
            + self.components["y"].value
            - self.components["joint"].value
        )

    @property
    def std_error(self) -> float:
        """Root-sum-square of the terms' Monte-Carlo standard errors."""
        if self.kind == "conditional":
            conditionals = self.components["conditionals"]
            m = len(conditionals)
            agg = sum((t.mc_std_error / m) ** 2 for t in conditionals)
            return float(np.sqrt(self.components["marginal"].mc_std_error ** 2 + agg))
        return float(
            np.sqrt(
                self.components["x"].mc_std_error ** 2
                + self.components["y"].mc_std_error ** 2
                + self.components["joint"].mc_std_error ** 2
            )
        )


def _pooled_marginal(data: ConditionalDataset, seed: int) -> SampleMatrix:
    """Equal-weight pool of the conditional samples.

    With balanced groups this is plain concatenation; ragged groups are
    subsampled (without replacement, seeded) to the smallest group size so
    every condition carries the same weight.
    """
    counts = [s.count for s in data.samples]
    smallest = min(counts)
    parts = []
    for idx, block in enumerate(data.samples):
        if block.count == smallest:
            parts.append(block.data)
        else:
            pick = substream(seed, _TAG_POOL, idx).choice(block.count, size=smallest, replace=False)
            pick.sort()
            parts.append(block.data[:, pick])
    return SampleMatrix(np.concatenate(parts, axis=1))


def conditional_mi(
    data: ConditionalDataset,
    config: EstimatorConfig,
    marginal: SampleMatrix | None = None,
) -> MiEstimate:
    """Estimate ``I(X; Y+Z)`` from per-condition samples of Y.

    ``marginal`` defaults to an equal-weight pool of the conditional
    samples.  The conditional entropy is the mean (not the sum) of the
    per-condition smoothed-entropy estimates.
    """
    if marginal is None:
        marginal = _pooled_marginal(data, config.seed)
    if marginal.dim != data.dim:
        raise InvalidData(
            f"marginal dim {marginal.dim} != conditional dim {data.dim}"
        )
    marginal_term = pca_smoothed_entropy(marginal, config_with_seed(config, _TAG_MARGINAL))
    conditional_terms = [
        pca_smoothed_entropy(block, config_with_seed(config, _TAG_CONDITION, idx))
        for idx, block in enumerate(data.samples)
    ]
    return MiEstimate(
        kind="conditional",
        components={"marginal": marginal_term, "conditionals": tuple(conditional_terms)},
        config=config,
    )


def joint_mi(
    data: JointDataset,
    config: EstimatorConfig,
    target_dim_x: int | None = None,
    target_dim_y: int | None = None,
    target_dim_joint: int | None = None,
) -> MiEstimate:
    """Estimate ``I(X+Z1; Y+Z2)`` from paired samples.

    The joint term stacks x on top of y (always in that order, so results
    are reproducible) and defaults to target dimension
    ``target_dim_x + target_dim_y``.
    """
    d_x = config.target_dim if target_dim_x is None else target_dim_x
    d_y = config.target_dim if target_dim_y is None else target_dim_y
    d_joint = d_x + d_y if target_dim_joint is None else target_dim_joint

    x_term = pca_smoothed_entropy(
        data.x, replace(config_with_seed(config, _TAG_X), target_dim=d_x)
    )
    y_term = pca_smoothed_entropy(
        data.y, replace(config_with_seed(config, _TAG_Y), target_dim=d_y)
    )
    stacked = SampleMatrix(np.concatenate([data.x.data, data.y.data], axis=0))
    joint_term = pca_smoothed_entropy(
        stacked, replace(config_with_seed(config, _TAG_JOINT), target_dim=d_joint)
    )
    return MiEstimate(
        kind="joint",
        components={"x": x_term, "y": y_term, "joint": joint_term},
        config=config,
    )


def ingest_activation_dump(path) -> tuple[ConditionalDataset, SampleMatrix]:
    """Parse an activation-dump CSV into per-condition sample sets.

    The format is ``cond,f0,f1,...,f{D-1}``: an integer condition id
    followed by the D-dimensional sample, one row per sample.  Returns the
    grouped dataset plus the pooled marginal (all rows, in file order).
    Group sizes may be ragged; an unparseable file raises ``InvalidData``.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidData(f"{path}: empty file") from None
        if not header or header[0].strip() != "cond":
            raise InvalidData(f"{path}: first column must be 'cond'")
        width = len(header)
        if width < 2:
            raise InvalidData(f"{path}: no feature columns")
        groups: dict[int, list[list[float]]] = {}
        order: list[int] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise InvalidData(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
            try:
                cond = int(row[0])
                values = [float(v) for v in row[1:]]
            except ValueError as exc:
                raise InvalidData(f"{path}:{lineno}: {exc}") from None
            if cond not in groups:
                groups[cond] = []
                order.append(cond)
            groups[cond].append(values)
            rows.append(values)
    if not rows:
        raise InvalidData(f"{path}: no data rows")
    samples = tuple(SampleMatrix.from_rows(np.asarray(groups[c])) for c in order)
    dataset = ConditionalDataset(conditions=tuple(order), samples=samples)
    pooled = SampleMatrix.from_rows(np.asarray(rows))
    return dataset, pooled
