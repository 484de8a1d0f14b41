"""
KDE and inverse-density resampling
==================================

Competition bodyweights pile up under popular weight-class limits, so a
naive fit is dominated by the crowded middle of the distribution. The
fix: estimate the bodyweight density with a Gaussian KDE, weight every
entry by 1/density, and resample -- the resampled dataset is roughly
uniform across the observed range.

Run:  python demos/02_density_and_resampling.py
"""

import numpy as np

from liftcurve import ResamplePlan, compute_weights, fit_kde, flatten_resample
from liftcurve.ingest import LifterEntry, Sex


def entry(bw):
    total = 4.0 * bw  # placeholder totals; only bodyweight matters here
    third = round(total / 3, 2)
    return LifterEntry(Sex.MALE, float(bw), third, third, round(total - 2 * third, 2),
                       total, "Raw", "Open", "SBD")


def ascii_hist(sample, lo=55.0, hi=110.0, bins=22, width=50):
    counts, edges = np.histogram(sample, bins=bins, range=(lo, hi))
    peak = counts.max()
    for count, left in zip(counts, edges[:-1]):
        bar = "#" * int(round(width * count / peak))
        print(f"  {left:6.1f} kg | {bar}")


rng = np.random.Generator(np.random.Philox(key=12))
n = 20_000
# two crowded weight clusters at 70 and 95 kg
bodyweights = np.where(rng.random(n) < 0.5, 70.0, 95.0) + rng.normal(0, 4.0, n)
entries = [entry(b) for b in bodyweights]

kde = fit_kde(bodyweights)
print(f"fitted KDE: n={kde.n}, bandwidth={kde.bandwidth:.2f} kg (Scott's rule, spread-scaled)")

weights = compute_weights(entries, kde)
print("inverse-density weights by bodyweight decile:")
for q in (0.05, 0.25, 0.5, 0.75, 0.95):
    bw_q = float(np.quantile(bodyweights, q))
    idx = int(np.argmin(np.abs(bodyweights - bw_q)))
    print(f"  bw~{bw_q:6.1f} kg -> weight {weights[idx]:8.1f}")

plan = ResamplePlan(k=20_000, seed=7)  # jitter defaults to the KDE bandwidth
resampled, resolved = flatten_resample(entries, kde, plan)
print(f"\nresampled k={resolved.k} with jitter std {resolved.jitter_std_kg:.2f} kg")

print("\nbefore (bimodal):")
ascii_hist(bodyweights)
print("\nafter (flattened):")
ascii_hist(np.array([e.bodyweight_kg for e in resampled]))
