"""Phase shifts and eigenfunction profiles for several exponents.

Prints ϑ_λ over a λ range for each family, then F_1, G_1 and the
shifted sine for the stable family with α = 1.5.
"""

import numpy as np

from levy_spectral import (BrownianPlusPoisson, BrownianPlusStable, Relativistic, Stable,
                           TruncatedStable, compute_eigendata, eigenfunction_values)

FAMILIES = [Stable(1.5), BrownianPlusStable(0.5, 1.0), Relativistic(1.5, 1.0),
            TruncatedStable(1.5, 1.0), BrownianPlusPoisson(9.0)]


def main():
    lam = np.geomspace(0.05, 20, 9)
    print("lambda  " + "  ".join(f"{str(e):>34}" for e in FAMILIES))
    for l in lam:
        thetas = [compute_eigendata(e, l).theta for e in FAMILIES]
        print(f"{l:7.3f} " + "  ".join(f"{t:34.6f}" for t in thetas))

    s = Stable(1.5)
    x = np.linspace(-6, 6, 13)
    f, g, _ = eigenfunction_values(s, 1.0, x)
    theta = compute_eigendata(s, 1.0).theta
    print("\n     x         F_1         G_1   sin(|x|+θ)")
    for xi, fi, gi in zip(x, f, g):
        print(f"{xi:6.2f} {fi:11.6f} {gi:11.6f} {np.sin(abs(xi) + theta):11.6f}")


if __name__ == "__main__":
    main()
