"""Information flow across layers from recorded activation dumps.

Activation dumps are CSV files (``cond,f0,...,f{D-1}``) holding noisy-network
layer outputs grouped by input condition; the conditional-MI estimator turns
a stack of them (one per layer per epoch) into MI trajectories.  Networks are
trained elsewhere; this script builds a synthetic stand-in Markov chain
X -> T1 -> T2 to show the pipeline and the expected data-processing ordering
MI(X;T1) >= MI(X;T2).
"""

import tempfile
from pathlib import Path

from smoothent import EstimatorConfig, SampleMatrix, run_activation_mi, substream
from smoothent.io import write_activation_dump

workdir = Path(tempfile.mkdtemp(prefix="smoothent_demo_"))
rng = substream(11)
centers = rng.standard_normal((3, 6)) * 2.0

entries = []
for epoch in range(3):
    drift = 0.9**epoch  # pretend training sharpens T1 over epochs
    t1_blocks, t2_blocks = [], []
    for i in range(6):
        t1 = centers[:, i][:, None] + 0.5 * drift * rng.standard_normal((3, 40))
        t2 = 0.6 * t1 + rng.standard_normal((3, 40))
        t1_blocks.append(SampleMatrix(t1))
        t2_blocks.append(SampleMatrix(t2))
    for layer, blocks in (("t1", t1_blocks), ("t2", t2_blocks)):
        path = workdir / f"{layer}_epoch{epoch}.csv"
        write_activation_dump(path, range(6), blocks)
        entries.append((layer, epoch, path))

config = EstimatorConfig(sigma=0.5, target_dim=3, n_mc=100, seed=12)
rows = run_activation_mi(entries, config)

print("layer  epoch  MI (nats)")
for row in rows:
    print(f"{row['layer']:>5}  {row['epoch']:>5}  {row['mi']:.3f}")
print(f"\ndumps written under {workdir}")
