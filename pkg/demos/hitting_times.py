"""Survival of the hitting time of the origin, P_x(t < τ₀ < ∞).

Compares Brownian motion with its closed form and shows how a stable
process and a transient mixture approach their limits.
"""

from math import erf, sqrt

import numpy as np

from levy_spectral import BrownianPlusStable, Stable, hitting_prob_finite, hitting_tail


def main():
    ts = np.array([0.01, 0.1, 1.0, 10.0])
    brown = hitting_tail(Stable(2.0), ts, 1.0)
    print("Brownian, x = 1")
    for t, v in zip(ts, brown):
        print(f"  t = {t:6.2f}  tail = {v:.8f}  erf = {erf(1 / (2 * sqrt(t))):.8f}")

    print("Stable(1.5), x = 1")
    for t, v in zip(ts, hitting_tail(Stable(1.5), ts, 1.0)):
        print(f"  t = {t:6.2f}  tail = {v:.8f}")

    mix = BrownianPlusStable(0.5, 1.0)
    prob = hitting_prob_finite(mix, 1.0)
    print(f"Brownian + 0.5-stable, x = 1: P(τ₀ < ∞) = {prob:.6f}")
    for t, v in zip(ts, hitting_tail(mix, ts, 1.0)):
        print(f"  t = {t:6.2f}  tail = {v:.8f}")


if __name__ == "__main__":
    main()
