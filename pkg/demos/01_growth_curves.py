"""
Growth curves 101
=================

Two families describe how expected total strength grows with bodyweight:

* Von Bertalanffy -- diminishing returns everywhere, supremum L.
* Offset logistic -- increasing returns below the inflection x0,
  diminishing above it, and exactly zero at zero bodyweight.

Run:  python demos/01_growth_curves.py
"""

import numpy as np

from liftcurve import (
    GrowthParams,
    ModelFamily,
    asymptote,
    evaluate,
    first_derivative,
    inflection_point,
    second_derivative,
)

# Published-style coefficient scales: L in kg, k in 1/kg, x0 in kg.
vb = GrowthParams(ModelFamily.VON_BERTALANFFY, L=776.7, k=0.02045, x0=22.33)
logistic = GrowthParams(ModelFamily.LOGISTIC, L=722.3, k=0.05447, x0=53.40)

print("expected male total (kg) at a few bodyweights")
print(f"{'bw':>6} {'von bertalanffy':>16} {'logistic':>10}")
for bw in (45.0, 53.4, 66.0, 83.0, 93.0, 120.0, 180.0):
    print(f"{bw:6.1f} {evaluate(vb, bw):16.1f} {evaluate(logistic, bw):10.1f}")

# The logistic is built so that f(0) = 0 holds exactly.
print(f"\nlogistic f(0) = {evaluate(logistic, 0.0)}")

# Slopes: the logistic is steepest at its midpoint x0, where the slope
# equals L*k/4; the Von Bertalanffy slope only ever decays.
print(f"logistic slope at x0 = {first_derivative(logistic, logistic.x0):.3f}"
      f"  (L*k/4 = {logistic.L * logistic.k / 4:.3f})")

# Curvature flips sign at the logistic inflection; Von Bertalanffy has none.
print(f"logistic inflection at {inflection_point(logistic)} kg,"
      f" von bertalanffy: {inflection_point(vb)}")
print("curvature just below / above the inflection:",
      f"{second_derivative(logistic, 50.0):+.4f} / {second_derivative(logistic, 57.0):+.4f}")

# Asymptotes: the offset shifts the logistic supremum below L.
print(f"\nasymptotes: vb -> {asymptote(vb):.1f} kg, logistic -> {asymptote(logistic):.1f} kg")

# In the far tail the two families coincide once asymptote and tail slope
# are matched, which is why both fit heavy athletes equally well.
L_match = asymptote(logistic)
x0_match = logistic.x0 + np.log(logistic.L / L_match) / logistic.k
vb_match = GrowthParams(ModelFamily.VON_BERTALANFFY, L=L_match, k=logistic.k, x0=float(x0_match))
xs = np.linspace(logistic.x0 + 10 / logistic.k, logistic.x0 + 25 / logistic.k, 5)
print("\ntail agreement (logistic vs matched von bertalanffy):")
for x in xs:
    print(f"  x={x:6.1f}: {evaluate(logistic, float(x)):8.2f} vs {evaluate(vb_match, float(x)):8.2f}")
