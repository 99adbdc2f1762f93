"""Estimating labeler accuracies from an expertly labeled assessment set.

Simulated labelers answer a small set of items with known truth; each
labeler's accuracy estimate is simply their fraction correct, clamped away
from 0 and 1. The demo shows how estimate quality scales with assessment
size, and what the aggregation methods receive.
"""

import numpy as np

from gtx import SimLabeler, draw_assessment, oracle_estimates, run_assessment

rng = np.random.default_rng(7)

true_accs = [0.62, 0.75, 0.88, 0.97, 1.0]
labelers = [SimLabeler(j, a) for j, a in enumerate(true_accs)]

for size in (20, 100, 1000):
    assessment = draw_assessment(size, rng)
    estimates = run_assessment(labelers, assessment, rng)
    row = "  ".join(
        f"{true_accs[j]:.2f}->{estimates[j].accuracy:.3f}" for j in range(len(labelers))
    )
    print(f"assessment size {size:4d}: true->estimate  {row}")

print()
print("With 100 items the estimates are within a few points of truth, which")
print("is enough for the aggregators; the harness uses 100 by default.")
print()

# oracle mode skips the simulated assessment and hands back clamped truth
oracle = oracle_estimates(labelers)
print("oracle estimates (note the 1.0 labeler is clamped):")
print("  " + "  ".join(f"{oracle[j].accuracy:.2f}" for j in range(len(labelers))))

# estimate error shrinks like 1/sqrt(size); check the trend empirically
print()
print("mean |estimate - truth| over 200 simulated assessments:")
for size in (25, 100, 400):
    gaps = []
    for _ in range(200):
        assessment = draw_assessment(size, rng)
        est = run_assessment(labelers, assessment, rng)
        gaps.extend(abs(est[j].accuracy - min(a, 0.99)) for j, a in enumerate(true_accs))
    print(f"  size {size:3d}: {np.mean(gaps):.4f}")
