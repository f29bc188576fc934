"""alpha(y), incomplete gamma and finite-difference xi checks of the truncated expansions."""

from __future__ import annotations

import math

import numpy as np

from mockhurwitz.special import (NumericPoint, alpha, alpha_via_gamma, eval_G_expansion, eval_G_shadow,
                                 eval_theta, eval_zagier_H, xi_numeric)


def main() -> None:
    grid = np.logspace(-2, 2, 5)
    for y in grid:
        print(f"alpha({y:g}) = {alpha(y):.15f}   second quadrature {alpha_via_gamma(y):.15f}")
    pt = NumericPoint(0.1, 1.0)
    xi = xi_numeric(lambda p: eval_zagier_H(p, 80), pt, 1.5)
    print(f"xi_3/2 H = {xi:.12f}, -Theta/(16 pi) = {-eval_theta(pt, 80) / (16 * math.pi):.12f}")
    xi = xi_numeric(lambda p: eval_G_expansion(p, 5, 40), pt, 0.5)
    print(f"xi_1/2 G = {xi:.10f}, expected shadow = {eval_G_shadow(pt, 5, 40):.10f}")


if __name__ == "__main__":
    main()
