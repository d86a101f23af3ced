"""Ridge contrast max/median of the averaged QFI over t_bar, versus sigma.

Shows how the contrast drop between sigma = 1e-5 and 1e-1 depends on the
t_bar window and on L.

    python scripts/ridge_contrast.py
"""
import numpy as np

from lrkqfi import ModelParams
from lrkqfi.uncertain import uncertain_surface


def contrast(L, alpha, sigma, window, n=201):
    tbs = np.linspace(*window, n)
    f = uncertain_surface(1.0, tbs, [sigma], ModelParams(L=L, alpha=alpha)).column("f_bar")
    return f.max() / np.median(f)


def main():
    print("L    alpha  window         c(1e-5)   c(1e-1)  drop")
    for L in (50, 100, 200):
        for alpha in (1.3, 5.0):
            for window in ((0.8, 1.2), (0.9, 1.1), (0.5, 1.5), (0.0, 2.0)):
                a, b = contrast(L, alpha, 1e-5, window), contrast(L, alpha, 1e-1, window)
                print(f"{L:<4} {alpha:<5}  {str(window):<13}  {a:8.3f}  {b:8.3f}  x{a / b:.2f}")


if __name__ == "__main__":
    main()
