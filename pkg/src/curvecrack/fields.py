"""Elastic constants, far-field loading, boundary forcing, and face fields.

Tractions are reported in the local frame of the crack: sigma_n is the
tensile and tau_n the shear component of the stress vector acting on the
tangent line, seen from the positive-normal side (the normal is i*t', which
points toward the "+" face).  Displacement derivatives du1/ds, du2/ds are
global Cartesian components differentiated along the arc.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densities import DensityCoefficients, q_polynomial, traction_jump
from .geometry import CrackCurve
from .kernels import KernelSet
from .quadrature import Discretization, pv_cauchy_sum, pv_polynomial


@dataclass(frozen=True)
class Material:
    """Isotropic elastic material in plane strain or plane stress.

    kappa is the Kolosov constant: 3 - 4 nu in plane strain,
    (3 - nu)/(1 + nu) in plane stress.
    """

    mu: float
    kappa: float
    mode: str = "plane_strain"
    nu: float | None = None

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError(f"shear modulus must be positive, got {self.mu}")
        if not 1.0 < self.kappa < 3.0:
            raise ValueError(
                f"Kolosov constant must lie in (1, 3), got {self.kappa}")
        if self.mode not in ("plane_strain", "plane_stress"):
            raise ValueError(f"unknown material mode {self.mode!r}")

    @classmethod
    def from_poisson(cls, mu: float, nu: float, mode: str = "plane_strain"):
        if not 0.0 < nu < 0.5:
            raise ValueError(f"Poisson ratio must lie in (0, 1/2), got {nu}")
        if mode == "plane_strain":
            kappa = 3.0 - 4.0 * nu
        elif mode == "plane_stress":
            kappa = (3.0 - nu) / (1.0 + nu)
        else:
            raise ValueError(f"unknown material mode {mode!r}")
        return cls(mu=mu, kappa=kappa, mode=mode, nu=nu)


def far_field_potentials(sigma1: float, sigma2: float, alpha: float = 0.0):
    """Constant values of the complex potentials induced by the remote load.

    sigma1 and sigma2 are the principal stresses at infinity acting along
    directions at angles alpha and alpha + pi/2 to the x-axis.
    """
    phi_inf = (sigma1 + sigma2) / 4.0
    psi_inf = 0.5 * (sigma2 - sigma1) * np.exp(-2j * alpha)
    return phi_inf, psi_inf


@dataclass(frozen=True)
class FarFieldLoad:
    """Remote principal stresses and the derived potential constants."""

    sigma1: float
    sigma2: float
    alpha: float = 0.0
    phi_inf: float = None  # type: ignore[assignment]
    psi_inf: complex = None  # type: ignore[assignment]

    def __post_init__(self):
        phi, psi = far_field_potentials(self.sigma1, self.sigma2, self.alpha)
        if self.phi_inf is None:
            object.__setattr__(self, "phi_inf", phi)
        if self.psi_inf is None:
            object.__setattr__(self, "psi_inf", psi)
        if abs(self.phi_inf - phi) > 1e-12 or abs(self.psi_inf - psi) > 1e-12:
            raise ValueError("potential constants inconsistent with the load")


@dataclass(frozen=True)
class SurfaceParams:
    """Surface-tension model parameter: gamma1 scales the curvature change."""

    gamma1: float

    def __post_init__(self):
        if self.gamma1 < 0:
            raise ValueError(f"gamma1 must be nonnegative, got {self.gamma1}")


def surface_tension_coefficients(curve: CrackCurve, gamma1: float, s):
    """Complex coefficients (m1, m2, m3, m4) of the traction boundary condition.

    They multiply the first and second arc-length derivatives of
    (u1 + i u2) and (u1 - i u2) in the linearized curvature-dependent
    surface-tension condition; all four scale with gamma1 and vanish on a
    straight crack.
    """
    s = np.asarray(s, dtype=float)
    _, t1, t2, t3, _ = curve.derivatives(s)
    k0 = curve.kappa0(s)
    k0p = curve.kappa0_prime(s)
    t1c, t2c, t3c = np.conj(t1), np.conj(t2), np.conj(t3)
    m1 = -0.5 * gamma1 * (t3c + 2j * t2c * k0 + 3j * t1c * k0p + 3.0 * t1c * k0**2)
    m2 = 0.5 * gamma1 * (t3 - 4j * t2 * k0 - 3j * t1 * k0p - 3.0 * t1 * k0**2)
    m3 = -2j * gamma1 * t1c * k0
    m4 = -1j * gamma1 * t1 * k0
    return m1, m2, m3, m4


def boundary_forcing(curve: CrackCurve, material: Material, load: FarFieldLoad,
                     gamma1: float, s0):
    """Load-dependent forcing f(s0) of the boundary condition.

    Collects the action of the surface-tension terms on the uniform far
    field plus the remote traction constants; every surface term scales
    with gamma1 (carried inside the m-coefficients), so for gamma1 = 0 only
    the far-field tail survives.  The 1/(2 mu) prefactor is fixed by the
    Young-Laplace form of the condition, sigma_n + i tau_n =
    gamma1 (kappa0 dk + i dk'), evaluated on the uniform far field.
    """
    s0 = np.asarray(s0, dtype=float)
    _, t1, t2, t3, _ = curve.derivatives(s0)
    m1, m2, m3, m4 = surface_tension_coefficients(curve, gamma1, s0)
    kappa = material.kappa
    phi = load.phi_inf
    psi = load.psi_inf
    c1 = kappa * phi - np.conj(phi)
    c2 = kappa * np.conj(phi) - phi
    psic = np.conj(psi)

    m_terms = (
        m1 * (c1 * t1 - psic * np.conj(t1))
        + m2 * (c2 * np.conj(t1) - psi * t1)
        + m3 * (c1 * t2 - psic * np.conj(t2))
        + m4 * (c2 * np.conj(t2) - psi * t2)
    )
    third = 2j * np.imag(np.conj(t1) * (c1 * t3 - psic * np.conj(t3)))
    return m_terms / (2.0 * material.mu) \
        + gamma1 * third / (4.0 * material.mu) \
        - 2.0 * np.real(phi) - psic * np.conj(t1) ** 2


def far_field_curvature_change(curve: CrackCurve, material: Material,
                               load: FarFieldLoad, s):
    """Linearized face-curvature change induced by the uniform far field.

    Returns (dk, dk') where dk(s) is the curvature perturbation produced by
    the displacement field of the uncracked plate under the remote load:
    dk = -Im(conj(t'') u') - 3 kappa0 Re(conj(t') u') + Im(conj(t') u'').
    The boundary forcing equals gamma1 (kappa0 dk + i dk') minus the
    far-field traction tail, and the surface tension carried by each face is
    gamma1 times the total curvature change.
    """
    s = np.asarray(s, dtype=float)
    _, t1, t2, t3, _ = curve.derivatives(s)
    k0 = curve.kappa0(s)
    k0p = curve.kappa0_prime(s)
    c1 = material.kappa * load.phi_inf - np.conj(load.phi_inf)
    psic = np.conj(load.psi_inf)
    two_mu = 2.0 * material.mu
    up = (c1 * t1 - psic * np.conj(t1)) / two_mu
    upp = (c1 * t2 - psic * np.conj(t2)) / two_mu
    uppp = (c1 * t3 - psic * np.conj(t3)) / two_mu
    t1c, t2c, t3c = np.conj(t1), np.conj(t2), np.conj(t3)
    dk = (-np.imag(t2c * up) - 3.0 * k0 * np.real(t1c * up)
          + np.imag(t1c * upp))
    dkp = (-np.imag(t3c * up + t2c * upp)
           - 3.0 * k0p * np.real(t1c * up)
           - 3.0 * k0 * np.real(t2c * up + t1c * upp)
           + np.imag(t2c * upp + t1c * uppp))
    return dk, dkp


@dataclass(frozen=True)
class FaceFieldSample:
    """Stresses and displacement derivatives at one point of one crack face."""

    s: float
    side: str
    sigma_n: float
    tau_n: float
    du1_ds: float
    du2_ds: float


_SIDE_SIGNS = {"plus": 1.0, "minus": -1.0}


class _FieldEvaluator:
    """Shared machinery for evaluating face fields at many points.

    The Cauchy principal-value blocks act on the polynomial densities and
    are either computed exactly in closed form (constant-curvature curves,
    the default) or through the discrete node sum of the collocation rule.
    The regular-kernel blocks always use the collocation quadrature at the
    requested resolution.
    """

    def __init__(self, curve, material, load, densities, n_quad=400,
                 cauchy="auto"):
        if cauchy not in ("auto", "exact", "discrete"):
            raise ValueError(f"unknown cauchy mode {cauchy!r}")
        if cauchy == "auto":
            cauchy = "exact" if curve.constant_curvature is not None else "discrete"
        if cauchy == "exact" and curve.constant_curvature is None:
            raise ValueError("exact principal values need constant curvature")
        self.curve = curve
        self.material = material
        self.load = load
        self.coeffs = densities
        self.cauchy = cauchy
        self.gamma1 = densities.gamma1
        self.disc = Discretization(n_quad, curve.length)
        self.kset = KernelSet(curve, material.kappa)
        nodes = self.disc.nodes
        self._nodes = nodes
        self._gp_nodes = densities.gprime(nodes)
        self._q_nodes = traction_jump(curve, material, self.gamma1,
                                      densities, nodes)
        if cauchy == "exact":
            self._gp_poly = densities.g1 + 1j * densities.g2
            self._q_poly = q_polynomial(curve, material, self.gamma1, densities)

    def _pv(self, s0):
        """Principal values (PV[g'], PV[q]) at s0."""
        if self.cauchy == "exact":
            return (pv_polynomial(self._gp_poly, self.curve.length, s0),
                    pv_polynomial(self._q_poly, self.curve.length, s0))
        w = self.disc.weight
        return (pv_cauchy_sum(self._gp_nodes, self._nodes, w, s0),
                pv_cauchy_sum(self._q_nodes, self._nodes, w, s0))

    def traction(self, s0, side):
        """sigma_n + i tau_n on the requested face."""
        sign = _SIDE_SIGNS[side]
        kappa = self.material.kappa
        w = self.disc.weight
        blk = self.kset.block(self._nodes, s0, derivatives=False)
        pv_g, pv_q = self._pv(s0)
        gp, q = self._gp_nodes, self._q_nodes
        reg = w * np.sum(blk["k1"] * gp + blk["k2"] * np.conj(gp)
                         - 2j * blk["k3"] * q + 2j * blk["k2"] * np.conj(q))
        sing = 2.0 * pv_g + 2j * (kappa - 1.0) * pv_q
        q_here = traction_jump(self.curve, self.material, self.gamma1,
                               self.coeffs, s0)
        t1 = self.curve.tangent(s0)
        far = 2.0 * np.real(self.load.phi_inf) \
            + np.conj(self.load.psi_inf) * np.conj(t1) ** 2
        return sign * q_here + (sing + reg) / (2.0 * np.pi * (kappa + 1.0)) + far

    def omega(self, s0, side):
        """The face function whose jump is i(kappa+1) g'(s0)."""
        sign = _SIDE_SIGNS[side]
        kappa = self.material.kappa
        w = self.disc.weight
        blk = self.kset.block(self._nodes, s0, derivatives=False)
        pv_g, pv_q = self._pv(s0)
        gp, q = self._gp_nodes, self._q_nodes
        reg = w * np.sum(blk["k4"] * gp - blk["k2"] * np.conj(gp)
                         - 2j * kappa * blk["k1"] * q
                         - 2j * blk["k2"] * np.conj(q))
        sing = (kappa - 1.0) * pv_g - 4j * kappa * pv_q
        gp_here = self.coeffs.gprime(s0)
        # jump coefficient i/2, not i(kappa+1)/2: the face limits of the
        # potentials fix it so that the displacement-jump derivative equals
        # i g' t'/(2 mu), consistent with the density definition (checked
        # against a direct bulk evaluation of the potentials).
        return sign * 0.5j * gp_here \
            + (sing + reg) / (2.0 * np.pi * (kappa + 1.0))

    def displacement_derivative(self, s0, side):
        """d(u1 + i u2)/ds on the requested face."""
        kappa = self.material.kappa
        phi = self.load.phi_inf
        t1 = self.curve.tangent(s0)
        om = self.omega(s0, side)
        val = t1 * om + (kappa * phi - np.conj(phi)) * t1 \
            - np.conj(self.load.psi_inf) * np.conj(t1)
        return val / (2.0 * self.material.mu)

    def sample(self, s0, side) -> FaceFieldSample:
        tr = self.traction(s0, side)
        du = self.displacement_derivative(s0, side)
        return FaceFieldSample(s=float(s0), side=side,
                               sigma_n=float(np.real(tr)),
                               tau_n=float(np.imag(tr)),
                               du1_ds=float(np.real(du)),
                               du2_ds=float(np.imag(du)))


def face_fields(curve: CrackCurve, material: Material, load: FarFieldLoad,
                densities: DensityCoefficients, side: str, s0: float,
                n_quad: int = 400, cauchy: str = "auto") -> FaceFieldSample:
    """Face stresses and displacement derivatives at one interior point.

    side is "plus" (left of increasing s) or "minus".  With the discrete
    Cauchy mode, s0 must not coincide with a quadrature node.
    """
    if side not in _SIDE_SIGNS:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    if not 0.0 < s0 < curve.length:
        raise ValueError(f"s0 must lie strictly inside (0, {curve.length})")
    ev = _FieldEvaluator(curve, material, load, densities, n_quad, cauchy)
    return ev.sample(s0, side)


def face_field_profile(curve, material, load, densities, s_values,
                       sides=("plus", "minus"), n_quad: int = 400,
                       cauchy: str = "auto"):
    """Evaluate face fields over a grid; returns a list of FaceFieldSample."""
    ev = _FieldEvaluator(curve, material, load, densities, n_quad, cauchy)
    out = []
    for side in sides:
        for s0 in np.asarray(s_values, dtype=float):
            out.append(ev.sample(s0, side))
    return out
