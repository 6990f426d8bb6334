#!/usr/bin/env python3
"""Tip singularity coefficients versus arc curvature under biaxial stretching.

Arcs run through z = +1 and z = -1; curvature 1 is the unit semicircle.
One sweep per gamma1 in {0.5, 1.0, 2.0}.
"""

from pathlib import Path

import numpy as np

from curvecrack import FarFieldLoad, Material, sweep_curvature
from curvecrack.postprocess import write_sweep_curvature_csv

OUT = Path(__file__).resolve().parent.parent / "results" / "curvature_sweep"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    material = Material(mu=60.0, kappa=2.5)
    load = FarFieldLoad(sigma1=1.0, sigma2=1.0)
    grid = np.linspace(0.25, 1.0, 7)
    for gamma1 in (0.5, 1.0, 2.0):
        rows = sweep_curvature(material, load, gamma1, grid, N=20)
        path = OUT / f"sweep_curvature_g{gamma1}.csv"
        write_sweep_curvature_csv(path, rows)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
