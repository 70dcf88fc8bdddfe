"""Killed and free transition densities of the 1.5-stable process at t = 1."""

import numpy as np

from levy_spectral import Stable, kernel_grid


def main():
    x = np.array([0.5, 1.0, 2.0])
    y = np.linspace(-3, 3, 13)
    kg = kernel_grid(Stable(1.5), 1.0, x, y)
    print("     y " + "".join(f"   killed x={xi:<4}" for xi in x) + "   free x=1")
    for j, yj in enumerate(y):
        row = "".join(f"{kg.values[i, j]:17.8f}" for i in range(x.size))
        print(f"{yj:6.2f} {row} {kg.free_values[1, j]:10.6f}")


if __name__ == "__main__":
    main()
