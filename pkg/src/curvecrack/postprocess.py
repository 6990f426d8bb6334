"""Derived results: opening profiles, tip log-singularity fits, parameter sweeps.

The solved density is a polynomial, so the crack opening is obtained by
integrating g'(s) t'(s) with a Gauss rule that is exact to machine precision,
and close to the tips the face fields inherit a logarithmic term whose
coefficient is extracted by a least-squares fit of value ~ A ln s + c over a
window well inside the first quarter of the arc.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .densities import DensityCoefficients, traction_jump
from .fields import _FieldEvaluator
from .geometry import CrackCurve, make_circular_arc
from .quadrature import gauss_legendre
from .solver import AssemblyError, SolveError, solve_problem

FIELD_NAMES = ("sigma_n", "tau_n", "du1_ds", "du2_ds")


@dataclass
class OpeningProfile:
    """Displacement jump across the crack and its normal component."""

    s: np.ndarray
    jump: np.ndarray          # complex (u1 + i u2)^+ - (u1 + i u2)^-
    delta: np.ndarray         # signed normal opening, positive = faces separate
    max_opening: float
    min_opening: float


def opening_profile(coeffs: DensityCoefficients, curve: CrackCurve, material,
                    n_samples: int = 201) -> OpeningProfile:
    """Integrate the density into the crack-opening profile.

    jump(s) = (i / 2 mu) * int_0^s g'(x) t'(x) dx, which vanishes at s = 0 by
    construction and at s = l up to the single-valuedness residual.  The
    opening delta is the projection of the jump on the unit normal i t'(s).
    """
    s_grid = np.linspace(0.0, curve.length, n_samples)
    acc = np.zeros(n_samples, dtype=complex)
    for i in range(1, n_samples):
        x, w = gauss_legendre(16, s_grid[i - 1], s_grid[i])
        acc[i] = acc[i - 1] + np.sum(w * coeffs.gprime(x) * curve.tangent(x))
    jump = 0.5j * acc / material.mu
    delta = np.imag(np.conj(curve.tangent(s_grid)) * jump)
    return OpeningProfile(s=s_grid, jump=jump, delta=delta,
                          max_opening=float(np.max(delta)),
                          min_opening=float(np.min(delta)))


@dataclass
class LogFit:
    """Least-squares fit value ~ A * ln(s) + c near a crack tip."""

    A: float
    c: float
    window: tuple
    rms: float
    field_id: str = ""
    tip: float = 0.0


def fit_log_coefficient(samples, window=None, field_id: str = "",
                        tip: float = 0.0) -> LogFit:
    """Fit A ln s + c to (s, value) samples inside the window.

    samples is a sequence of (s, value) pairs (or a pair of arrays); s is the
    distance to the tip and must be positive.  At least 8 samples must fall
    inside the window.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 2 and arr.shape[0] == 2 and arr.shape[1] != 2:
        s, v = arr[0], arr[1]
    else:
        s, v = arr[:, 0], arr[:, 1]
    if np.any(s <= 0.0):
        raise ValueError("log fit requires strictly positive tip distances")
    if window is None:
        window = (float(np.min(s)), float(np.max(s)))
    mask = (s >= window[0]) & (s <= window[1])
    if np.count_nonzero(mask) < 8:
        raise ValueError(
            f"log fit needs at least 8 samples in window {window}, "
            f"got {np.count_nonzero(mask)}")
    ls = np.log(s[mask])
    vv = v[mask]
    slope, intercept = np.polyfit(ls, vv, 1)
    resid = vv - (slope * ls + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    return LogFit(A=float(slope), c=float(intercept), window=tuple(window),
                  rms=rms, field_id=field_id, tip=tip)


def default_fit_window(length: float) -> tuple:
    """Default tip window [l/200, l/20]: ln s spans ln 10 while the bounded
    part stays nearly flat."""
    return (length / 200.0, length / 20.0)


def collect_tip_samples(curve, material, load, coeffs, field: str,
                        tip: float = 0.0, side: str = "plus",
                        window=None, n: int = 32, n_quad: int = 400,
                        cauchy: str = "auto"):
    """Geometrically spaced face-field samples near a tip.

    Returns (distances, values) where distances are measured from the tip
    (tip = 0.0 or tip = curve.length).
    """
    if field not in FIELD_NAMES:
        raise ValueError(f"unknown field {field!r}; choose from {FIELD_NAMES}")
    if window is None:
        window = default_fit_window(curve.length)
    dist = np.geomspace(window[0], window[1], n)
    s_vals = dist if tip == 0.0 else curve.length - dist
    ev = _FieldEvaluator(curve, material, load, coeffs, n_quad=n_quad,
                         cauchy=cauchy)
    values = np.array([getattr(ev.sample(s0, side), field) for s0 in s_vals])
    return dist, values


def fit_tip_coefficients(curve, material, load, coeffs, tip: float = 0.0,
                         side: str = "plus", window=None, n: int = 32,
                         n_quad: int = 400):
    """LogFit for each of the four face fields at one tip."""
    out = {}
    for name in FIELD_NAMES:
        dist, vals = collect_tip_samples(curve, material, load, coeffs, name,
                                         tip=tip, side=side, window=window,
                                         n=n, n_quad=n_quad)
        out[name] = fit_log_coefficient(np.column_stack([dist, vals]),
                                        window=window, field_id=name, tip=tip)
    return out


def tip_log_coefficients(curve, material, coeffs):
    """Closed-form log coefficients at the tip s = 0 from the densities.

    Splitting the principal-value integrals at the tip shows each face field
    behaves like A ln s + O(1) with A set by the density values at the tip:

        traction:      A = -(g'(0) + i (kappa-1) q(0)) / (pi (kappa+1))
        displacement:  A = -t'(0) ((kappa-1) g'(0) - 4 i kappa q(0))
                           / (4 pi mu (kappa+1))

    Real and imaginary parts give sigma_n/tau_n and du1_ds/du2_ds.  Used as
    an independent cross-check of the fitted coefficients.
    """
    kappa = material.kappa
    gp0 = complex(coeffs.gprime(0.0))
    q0 = complex(traction_jump(curve, material, coeffs.gamma1, coeffs, 0.0))
    t1 = complex(curve.tangent(0.0))
    a_tr = -(gp0 + 1j * (kappa - 1.0) * q0) / (np.pi * (kappa + 1.0))
    a_du = -t1 * ((kappa - 1.0) * gp0 - 4j * kappa * q0) \
        / (4.0 * np.pi * material.mu * (kappa + 1.0))
    return {"sigma_n": a_tr.real, "tau_n": a_tr.imag,
            "du1_ds": a_du.real, "du2_ds": a_du.imag}


def max_face_traction(curve, material, load, coeffs, n_points: int = 101,
                      n_quad: int = 400) -> float:
    """sup over both faces of |sigma_n + i tau_n| on a midpoint grid."""
    j = np.arange(1, n_points + 1)
    grid = (2 * j - 1) * curve.length / (2 * n_points)
    ev = _FieldEvaluator(curve, material, load, coeffs, n_quad=n_quad)
    best = 0.0
    for side in ("plus", "minus"):
        for s0 in grid:
            best = max(best, abs(ev.traction(s0, side)))
    return best


@dataclass
class GammaSweepRow:
    gamma1: float
    A1: float = float("nan")
    A2: float = float("nan")
    max_opening: float = float("nan")
    min_opening: float = float("nan")
    max_traction: float = float("nan")
    error: str = ""


@dataclass
class CurvatureSweepRow:
    kappa0: float
    A1: float = float("nan")
    A2: float = float("nan")
    max_opening: float = float("nan")
    min_opening: float = float("nan")
    max_traction: float = float("nan")
    error: str = ""


def _solve_and_report(curve, material, load, gamma1, N, n_quad):
    coeffs = solve_problem(curve, material, load, gamma1, N=N)
    fits = fit_tip_coefficients(curve, material, load, coeffs, n_quad=n_quad)
    prof = opening_profile(coeffs, curve, material)
    mt = max_face_traction(curve, material, load, coeffs, n_quad=n_quad)
    return (fits["du1_ds"].A, fits["tau_n"].A, prof.max_opening,
            prof.min_opening, mt)


def sweep_gamma(curve, material, load, gamma_grid, N: int = 20,
                n_quad: int = 400, workers: int | None = None):
    """One solve per gamma1 value; failed rows carry the error message."""
    def one(g1):
        row = GammaSweepRow(gamma1=float(g1))
        try:
            (row.A1, row.A2, row.max_opening, row.min_opening,
             row.max_traction) = _solve_and_report(curve, material, load,
                                                   float(g1), N, n_quad)
        except (AssemblyError, SolveError, ValueError) as exc:
            row.error = str(exc)
        return row

    grid = list(gamma_grid)
    with ThreadPoolExecutor(max_workers=workers or min(8, max(1, len(grid)))) as ex:
        return list(ex.map(one, grid))


def sweep_curvature(material, load, gamma1, kappa0_grid, N: int = 20,
                    n_quad: int = 400, workers: int | None = None):
    """One solve per arc curvature in (0, 1]; arcs run through z = +1, -1."""
    def one(k0):
        row = CurvatureSweepRow(kappa0=float(k0))
        try:
            curve = make_circular_arc(float(k0))
            (row.A1, row.A2, row.max_opening, row.min_opening,
             row.max_traction) = _solve_and_report(curve, material, load,
                                                   gamma1, N, n_quad)
        except (AssemblyError, SolveError, ValueError) as exc:
            row.error = str(exc)
        return row

    grid = list(kappa0_grid)
    with ThreadPoolExecutor(max_workers=workers or min(8, max(1, len(grid)))) as ex:
        return list(ex.map(one, grid))


@dataclass
class ConvergenceRow:
    N: int
    sup_diff: float
    coeffs: DensityCoefficients = field(repr=False, default=None)


def convergence_study(curve, material, load, gamma1, n_list,
                      n_grid: int = 401):
    """Reconstructed g' for each N against the largest N on a common grid."""
    n_list = list(n_list)
    if len(n_list) < 2 or any(b < a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be ascending with at least two entries")
    grid = np.linspace(0.0, curve.length, n_grid)
    solved = [(n, solve_problem(curve, material, load, gamma1, N=n))
              for n in n_list]
    ref = solved[-1][1].gprime(grid)
    rows = []
    for n, coeffs in solved:
        diff = float(np.max(np.abs(coeffs.gprime(grid) - ref)))
        rows.append(ConvergenceRow(N=n, sup_diff=diff, coeffs=coeffs))
    return rows


def parity_residuals(values):
    """(even, odd) mismatch of samples on a grid symmetric about the center.

    A field sampled at points mirrored pairwise about l/2 is even when
    reversing the array changes nothing; residuals are normalized by the
    sup-norm of the field.
    """
    v = np.asarray(values, dtype=float)
    sup = float(np.max(np.abs(v)))
    if sup == 0.0:
        return 0.0, 0.0
    rev = v[::-1]
    even = float(np.max(np.abs(v - rev))) / (2.0 * sup)
    odd = float(np.max(np.abs(v + rev))) / (2.0 * sup)
    return even, odd


def extremum_coincidence_report(rows):
    """Soft diagnostic: do |A1|, |A2| and the openings peak at the same gamma1?

    Returns (indices, within_one_step); never raises.  Reported, not
    asserted: the coincidence is an observation about the model, not a
    solver invariant.
    """
    ok = [r for r in rows if not r.error]
    if len(ok) < 3:
        return {}, False
    idx = {
        "A1": max(range(len(ok)), key=lambda i: abs(ok[i].A1)),
        "A2": max(range(len(ok)), key=lambda i: abs(ok[i].A2)),
        "max_opening": max(range(len(ok)), key=lambda i: ok[i].max_opening),
    }
    vals = list(idx.values())
    return idx, (max(vals) - min(vals) <= 1)


# ---------------------------------------------------------------------------
# CSV persistence (header row mandatory, full-precision floats)

def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return repr(float(v))


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_g_prime_csv(path, s, columns: dict):
    header = ["s"] + list(columns)
    data = zip(s, *columns.values())
    write_csv(path, header, data)


def write_face_fields_csv(path, samples):
    header = ["s", "side", "sigma_n", "tau_n", "du1_ds", "du2_ds"]
    rows = [(f.s, f.side, f.sigma_n, f.tau_n, f.du1_ds, f.du2_ds)
            for f in samples]
    write_csv(path, header, rows)


def write_opening_csv(path, profile: OpeningProfile):
    header = ["s", "du1_jump", "du2_jump", "delta"]
    rows = zip(profile.s, np.real(profile.jump), np.imag(profile.jump),
               profile.delta)
    write_csv(path, header, rows)


def write_sweep_gamma_csv(path, rows):
    header = ["gamma1", "A1", "A2", "max_opening", "min_opening",
              "max_traction", "error"]
    write_csv(path, header,
              [(r.gamma1, r.A1, r.A2, r.max_opening, r.min_opening,
                r.max_traction, r.error) for r in rows])


def write_sweep_curvature_csv(path, rows):
    header = ["kappa0", "A1", "A2", "max_opening", "min_opening",
              "max_traction", "error"]
    write_csv(path, header,
              [(r.kappa0, r.A1, r.A2, r.max_opening, r.min_opening,
                r.max_traction, r.error) for r in rows])


def write_convergence_csv(path, rows):
    header = ["N", "sup_diff_vs_largest"]
    write_csv(path, header, [(r.N, r.sup_diff) for r in rows])
