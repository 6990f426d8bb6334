#!/usr/bin/env python3
"""Density-convergence study on the unit semicircle.

Solves the reference configuration (mu = 60, kappa = 2.5, gamma1 = 1,
horizontal stretching) for N = 16, 20, 30 and writes the reconstructed
density per N together with the sup-norm differences against the largest N.
"""

from pathlib import Path

import numpy as np

from curvecrack import FarFieldLoad, Material, convergence_study, make_semicircle
from curvecrack.postprocess import write_convergence_csv, write_g_prime_csv

OUT = Path(__file__).resolve().parent.parent / "results" / "convergence"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    curve = make_semicircle()
    material = Material(mu=60.0, kappa=2.5)
    load = FarFieldLoad(sigma1=1.0, sigma2=0.0)
    rows = convergence_study(curve, material, load, 1.0, [16, 20, 30])
    write_convergence_csv(OUT / "convergence.csv", rows)
    s = np.linspace(0.0, curve.length, 401)
    cols = {}
    for r in rows:
        gp = r.coeffs.gprime(s)
        cols[f"re_gprime_N{r.N}"] = np.real(gp)
        cols[f"im_gprime_N{r.N}"] = np.imag(gp)
    write_g_prime_csv(OUT / "g_prime.csv", s, cols)
    for r in rows:
        print(f"N={r.N}: sup-difference vs N=30 = {r.sup_diff:.6f}")
    print(f"wrote {OUT}/convergence.csv and g_prime.csv")


if __name__ == "__main__":
    main()
