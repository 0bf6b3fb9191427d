"""Recover the erase-law constants from simulated measurements.

Samples the pulse response over a grid of amplitudes and conductances,
corrupts the drops with multiplicative noise, and fits the four constants
back out in log space.
"""

import math

import numpy as np

import memtransform as mt

TRUE = mt.MemristorParams()


def table(noise, rng):
    observations = []
    for x in np.linspace(1.3, 1.8, 6):
        for g in np.linspace(0.5, 20.0, 10):
            x, g = float(x), float(g)
            dg = mt.delta_g(TRUE, g, x) * (1.0 + noise * rng.standard_normal())
            observations.append(mt.EraseObservation(x=x, g_before=g, delta_g=dg))
    return observations


def main():
    rng = np.random.default_rng(0)
    print(f"{'noise':>6} {'a':>10} {'b':>10} {'p':>10} {'ln k':>10}")
    print(f"{'true':>6} {TRUE.a:10.4f} {TRUE.b:10.4f} {TRUE.p:10.4f} {math.log(TRUE.k):10.4f}")
    for noise in (0.0, 0.01, 0.05, 0.20):
        fitted = mt.fit_params(table(noise, rng))
        print(f"{noise:6.2f} {fitted.a:10.4f} {fitted.b:10.4f} "
              f"{fitted.p:10.4f} {math.log(fitted.k):10.4f}")


if __name__ == "__main__":
    main()
