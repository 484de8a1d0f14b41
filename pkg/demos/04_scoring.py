"""
Bodyweight-adjusted scores
==========================

Three scoring systems, all of the form score = constant * total / f(bw):

* Wilks / Wilks-2: f is a sex-specific 5th-order polynomial.
* IPF GL: f(x) = A - B*exp(-C*x), calibrated on elite lifters.
* Model score: f is any fitted growth curve; 100 means "exactly the
  expected total for that bodyweight".

Coefficients ship in a JSON config, never in code.

Run:  python demos/04_scoring.py
"""

from liftcurve import (
    GrowthParams,
    ModelFamily,
    Sex,
    default_registry,
    gl_score,
    model_score,
    wilks_score,
)

registry = default_registry()
print("registered (system, sex) pairs:", registry.systems())

athletes = [
    ("featherweight", Sex.MALE, 59.0, 510.0),
    ("middleweight", Sex.MALE, 93.0, 700.0),
    ("superheavy", Sex.MALE, 140.0, 850.0),
    ("lightweight", Sex.FEMALE, 57.0, 360.0),
    ("heavyweight", Sex.FEMALE, 84.0, 460.0),
]

print(f"\n{'athlete':>14} {'bw':>6} {'total':>6} {'wilks':>8} {'wilks2':>8} {'ipf_gl':>8}")
for name, sex, bw, total in athletes:
    wilks = wilks_score(bw, total, registry.resolve("wilks", sex))
    wilks2 = wilks_score(bw, total, registry.resolve("wilks2", sex))
    gl = gl_score(bw, total, registry.resolve("ipf_gl", sex))
    print(f"{name:>14} {bw:6.1f} {total:6.1f} {wilks:8.2f} {wilks2:8.2f} {gl:8.2f}")

# Model-based scoring against a fitted logistic curve: the score reads as
# "percent of the expected total for this bodyweight".
logistic = GrowthParams(ModelFamily.LOGISTIC, L=722.3, k=0.05447, x0=53.40)
print("\nmodel scores against the fitted male logistic curve:")
for name, sex, bw, total in athletes:
    if sex is Sex.MALE:
        print(f"  {name:>14}: {model_score(bw, total, logistic):7.2f}")

# The GL denominator IS a Von Bertalanffy curve: with A = L,
# B = L*exp(k*x0), C = k the two scores coincide.
vb = GrowthParams(ModelFamily.VON_BERTALANFFY, L=722.3, k=0.05447, x0=20.0)
import math

from liftcurve import GlCoefficients

matched = GlCoefficients(A=vb.L, B=vb.L * math.exp(vb.k * vb.x0), C=vb.k)
print("\nGL with matched coefficients vs von bertalanffy model score at 93 kg / 700 kg:")
print(f"  {gl_score(93.0, 700.0, matched):.10f} vs {model_score(93.0, 700.0, vb):.10f}")
