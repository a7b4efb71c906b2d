#!/usr/bin/env python3
"""
Theoretical order predictions across parameter regimes
======================================================

The guaranteed strong order of the Euler scheme for the prototype models
depends on how strongly the drift pushes away from the degeneracy set of
the diffusion.  For CIR that is the ratio mu0 = min_t kappa lam / theta^2
at the left boundary; Wright-Fisher has a second ratio mu1 at x = 1.
This script tabulates the prediction as the boundary drift weakens and
shows the generic rate 1/2 - s as a function of the compensation
exponent s.
"""

import numpy as np

from powersde import PrototypeParams, predict_rate, theorem_rate
from powersde.errors import HypothesisError
from powersde.params import SinusoidalParam

print("CIR, kappa = theta = 1, lambda sweeping down")
print(f"{'lam':>6} {'mu0':>6} {'s':>6} {'order':>6}")
for lam in (2.0, 1.0, 0.5, 0.25, 0.1):
    p = PrototypeParams(kind="cir", kappa=1.0, lam=lam, theta=1.0, x0=1.0)
    r = predict_rate(p)
    print(f"{lam:>6.2f} {r.mu0:>6.2f} {r.s_exponent:>6.2f} {r.lambda_sup:>6.2f}")

print("\nWright-Fisher, both boundaries matter")
for lam in (0.5, 0.75, 0.9):
    p = PrototypeParams(kind="wf", kappa=1.0, lam=lam, theta=1.0, x0=0.5)
    r = predict_rate(p)
    print(f"lam = {lam}: mu0 = {r.mu0:.2f}, mu1 = {r.mu1:.2f}, "
          f"order {r.lambda_sup:.2f}")

print("\nCKLS with gamma = 0.75 keeps order 1/2 whenever the drift ratio allows")
p = PrototypeParams(kind="ckls", kappa=1.0, lam=1.0, theta=1.0, x0=1.0, gamma=0.75)
r = predict_rate(p)
print(f"mu0 = {r.mu0:.2f}, order {r.lambda_sup:.2f} [{r.provenance}]")

print("\ntime-dependent theta(t) = 1 + 0.5 sin(2 pi t): the worst t decides")
p = PrototypeParams(
    kind="cir", kappa=1.0, lam=1.0,
    theta=SinusoidalParam(1.0, 0.5, 2.0 * np.pi), x0=1.0,
)
r = predict_rate(p)
print(f"mu0 = {r.mu0:.4f} (= 1 / sup theta^2 = 1/2.25), order {r.lambda_sup:.2f}")

print("\nvanishing boundary drift leaves the theory without a prediction")
try:
    predict_rate(PrototypeParams(kind="cir", kappa=1.0, lam=0.0, theta=1.0, x0=1.0))
except HypothesisError as exc:
    print(f"  HypothesisError: {exc}")

print("\ngeneric rate 1/2 - s against the compensation exponent")
for s in np.linspace(0.0, 0.4, 5):
    print(f"  s = {s:.1f} -> order {theorem_rate(0.5, s):.1f}")
