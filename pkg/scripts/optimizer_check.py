"""Compare the optimizer against brute-force grids on a few estimators.

Useful after changing OptConfig defaults: prints estimate, brute value and
their difference (the estimate should never be lower).
"""
import math

import numpy as np

from geolab import constants as C
from geolab.spaces import DEFAULT_CATALOG, format_space_spec, unit_vectors


def brute_czi(space, t, n=1500):
    th = np.linspace(0, 2 * math.pi, n, endpoint=False)
    A, B = np.meshgrid(th, th)
    u1 = unit_vectors(space, A.reshape(-1, 1))
    u2 = unit_vectors(space, B.reshape(-1, 1))
    return float(C._czi_ratio(space, u1, u2, t).max())


def main():
    for space in DEFAULT_CATALOG:
        if space.dim != 2:
            continue
        for t in (0.0, 0.25):
            est = C.czi(space, t).value
            ref = brute_czi(space, t)
            print(f"{format_space_spec(space)[:28]:28s} t={t:<5} est={est:.12f} "
                  f"brute={ref:.12f} diff={est - ref:+.2e}")


if __name__ == "__main__":
    main()
