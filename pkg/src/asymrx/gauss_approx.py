"""Gaussian approximations of photocount statistics and quadrature mappings.

Two Gaussian surrogates for the exact photocount-difference law are provided,
both in the strong-local-oscillator regime:

- the *main* approximation with mean ``μ_G = (η₁S² − η₂C²)|α_L|² +
  CS(η₁+η₂)|α_L|⟨x̂_φ⟩`` and variance ``σ_G = (η₁S² + η₂C²)|α_L|²``, where
  ``⟨x̂_φ⟩ = 2Re(α e^{−iφ})`` is the mean signal quadrature along the LO phase;
- an *alternative* approximation obtained from the large-argument asymptotics
  of the Bessel factor, with mean ``μ̃_G = √(η₁η₂)[CS|α_L|² ln(η₁S²/(η₂C²)) +
  |α_L|⟨x̂_φ⟩]`` and variance ``σ̃_G = 2CS√(η₁η₂)|α_L|²``.

Each approximation induces a linear count-to-quadrature map ``x = μ/scale −
offset`` under which the distribution has mean ``⟨x̂_φ⟩`` and variance
``σ_x ≥ 1`` (main) or ``σ̃_x = 2CS/√(η₁η₂)`` (alternative, which may drop
below the vacuum limit — the ill-posed regime).

Because the Gaussian is evaluated on integers, its discrete normalization is
the Jacobi theta value ``N_G = ϑ₃(πμ_G, e^{−2π²σ_G})``; the pmfs below divide
by ``N_G``, which matters only when the count variance is below ~one count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from asymrx.errors import DomainError
from asymrx.photostat import CountDistribution, JointCountDistribution, count_window
from asymrx.receivers import DoubleHomodyneConfig, HomodyneConfig, detected_intensities

__all__ = [
    "GaussianApprox",
    "QuadratureMap",
    "AltGaussianApprox",
    "gauss_pdf",
    "gaussian_params",
    "quadrature_map",
    "min_sigma_x",
    "normalization_constant",
    "renorm_threshold",
    "bessel_gaussian_params",
    "gaussian_distribution",
    "bessel_gaussian_distribution",
    "mean_quadrature",
    "dh_gaussian_pmf",
    "dh_gaussian_distribution",
    "dh_quadrature_variances",
]


def gauss_pdf(x, variance: float):
    """Normal density ``G(x; σ) = exp(−x²/(2σ))/√(2πσ)`` with variance ``σ``."""
    if variance <= 0.0:
        raise DomainError(f"Gaussian variance must be positive, got {variance!r}")
    x = np.asarray(x, dtype=float)
    out = np.exp(-(x**2) / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)
    return float(out) if out.ndim == 0 else out


def mean_quadrature(alpha: complex, phi: float) -> float:
    """Mean signal quadrature ``⟨x̂_φ⟩ = 2 Re(α e^{−iφ})`` along the LO phase."""
    return 2.0 * (complex(alpha) * complex(math.cos(phi), -math.sin(phi))).real


def normalization_constant(mu_g: float, sigma_g: float) -> float:
    """Discrete normalization ``N_G = ϑ₃(πμ_G, e^{−2π²σ_G})`` of an integer-sampled Gaussian.

    The q-series ``1 + 2Σ_k q^{k²} cos(2πkμ_G)`` converges super-exponentially;
    terms are added until the increment drops below 1e-16 (at most 10 terms).
    """
    if sigma_g <= 0.0:
        raise DomainError(f"sigma_G must be positive, got {sigma_g!r}")
    log_q = -2.0 * math.pi**2 * sigma_g
    total = 1.0
    for k in range(1, 11):
        term = 2.0 * math.exp(log_q * k * k) * math.cos(2.0 * math.pi * k * mu_g)
        total += term
        if abs(term) < 1e-16:
            break
    return total


@dataclass(frozen=True)
class GaussianApprox:
    """Gaussian surrogate of the photocount-difference law (count domain)."""

    mu_G: float
    sigma_G: float
    norm_const: float

    def pmf(self, mu):
        """Approximate probability at integer counts ``mu`` (density / ``N_G``)."""
        return gauss_pdf(np.asarray(mu, dtype=float) - self.mu_G, self.sigma_G) / self.norm_const


@dataclass(frozen=True)
class AltGaussianApprox:
    """Bessel-asymptotic Gaussian surrogate and its quadrature-space noise.

    ``sigma_N_tilde = sigma_x_tilde − 1`` may be negative; ``well_posed`` is
    False exactly when ``2CS < √(η₁η₂)``, in which case the surrogate cannot be
    realized as a noisy measurement (negative excess noise).
    """

    mu_G_tilde: float
    sigma_G_tilde: float
    sigma_x_tilde: float
    sigma_N_tilde: float
    well_posed: bool
    norm_const: float

    def pmf(self, mu):
        """Approximate probability at integer counts ``mu`` (density / ``N_G``)."""
        return (
            gauss_pdf(np.asarray(mu, dtype=float) - self.mu_G_tilde, self.sigma_G_tilde)
            / self.norm_const
        )


@dataclass(frozen=True)
class QuadratureMap:
    """Linear count-to-quadrature map ``x(μ) = μ/scale − offset`` with variance ``σ_x``."""

    scale: float
    offset: float
    sigma_x: float

    def x_of(self, mu):
        """Quadrature value assigned to the photocount difference ``mu``."""
        return np.asarray(mu, dtype=float) / self.scale - self.offset


def gaussian_params(cfg: HomodyneConfig, alpha: complex) -> GaussianApprox:
    """Main Gaussian approximation parameters for a coherent signal."""
    c2 = cfg.bs.transmittance_sq
    s2 = 1.0 - c2
    cs = cfg.bs.cs
    e1, e2 = cfg.detectors.eta1, cfg.detectors.eta2
    al = cfg.lo_amp
    xbar = mean_quadrature(alpha, cfg.phi)
    mu_g = (e1 * s2 - e2 * c2) * al**2 + cs * (e1 + e2) * al * xbar
    sigma_g = (e1 * s2 + e2 * c2) * al**2
    return GaussianApprox(mu_g, sigma_g, normalization_constant(mu_g, sigma_g))


def quadrature_map(cfg: HomodyneConfig) -> QuadratureMap:
    """Count-to-quadrature mapping of the main Gaussian approximation.

    Under ``x = μ/scale − offset`` with ``scale = (η₁+η₂)CS|α_L|`` the
    approximate law acquires mean ``⟨x̂_φ⟩`` and variance
    ``σ_x = (η₁S²+η₂C²)/((η₁+η₂)CS)² ≥ 1``.
    """
    c2 = cfg.bs.transmittance_sq
    s2 = 1.0 - c2
    cs = cfg.bs.cs
    e1, e2 = cfg.detectors.eta1, cfg.detectors.eta2
    scale = (e1 + e2) * cs * cfg.lo_amp
    offset = (e1 * s2 - e2 * c2) * cfg.lo_amp / ((e1 + e2) * cs)
    sigma_x = (e1 * s2 + e2 * c2) / ((e1 + e2) * cs) ** 2
    return QuadratureMap(scale, offset, sigma_x)


def min_sigma_x(eta1: float, eta2: float) -> tuple[float, float]:
    """Minimum of ``σ_x`` over the beam-splitter transmittance, and its argmin.

    Returns ``(((√η₁+√η₂)/(η₁+η₂))², C²_opt)`` with
    ``C²_opt = √η₁/(√η₁+√η₂)``.
    """
    if not (0.0 < eta1 <= 1.0 and 0.0 < eta2 <= 1.0):
        raise DomainError("detector efficiencies must lie in (0, 1]")
    a, b = math.sqrt(eta1), math.sqrt(eta2)
    return ((a + b) / (eta1 + eta2)) ** 2, a / (a + b)


def renorm_threshold(cfg: HomodyneConfig) -> float:
    """LO amplitude ``α_N = 1/√(2(η₁S²+η₂C²))`` below which the discrete
    normalization correction becomes significant (i.e. ``2σ_G < 1``)."""
    c2 = cfg.bs.transmittance_sq
    s2 = 1.0 - c2
    e1, e2 = cfg.detectors.eta1, cfg.detectors.eta2
    return 1.0 / math.sqrt(2.0 * (e1 * s2 + e2 * c2))


def bessel_gaussian_params(cfg: HomodyneConfig, alpha: complex) -> AltGaussianApprox:
    """Alternative (Bessel-asymptotic) Gaussian approximation parameters.

    Ill-posedness of the induced measurement model (``σ̃_N < 0``, equivalently
    ``2CS < √(η₁η₂)``) is reported through ``well_posed``, not raised.
    """
    c2 = cfg.bs.transmittance_sq
    s2 = 1.0 - c2
    cs = cfg.bs.cs
    e1, e2 = cfg.detectors.eta1, cfg.detectors.eta2
    al = cfg.lo_amp
    root = math.sqrt(e1 * e2)
    xbar = mean_quadrature(alpha, cfg.phi)
    mu_g = root * (cs * al**2 * math.log(e1 * s2 / (e2 * c2)) + al * xbar)
    sigma_g = 2.0 * cs * root * al**2
    sigma_x = 2.0 * cs / root
    sigma_n = sigma_x - 1.0
    return AltGaussianApprox(
        mu_G_tilde=mu_g,
        sigma_G_tilde=sigma_g,
        sigma_x_tilde=sigma_x,
        sigma_N_tilde=sigma_n,
        # The primitive comparison, not the sign of sigma_n: the division in
        # sigma_x can round across 1.0 exactly at the boundary.
        well_posed=2.0 * cs >= root,
        norm_const=normalization_constant(mu_g, sigma_g),
    )


def _own_window(mu_g: float, sigma_g: float) -> tuple[int, int]:
    """Integer window covering a count-domain Gaussian to ±10σ (plus pad)."""
    half = int(math.ceil(10.0 * math.sqrt(sigma_g))) + 8
    mid = int(round(mu_g))
    return mid - half, mid + half


def gaussian_distribution(
    cfg: HomodyneConfig, alpha: complex, window: tuple[int, int] | None = None
) -> CountDistribution:
    """Main Gaussian approximation discretized on an integer window.

    By default the window is derived from the approximation's own mean and
    variance, so the stored mass is complete even when the approximation is
    displaced from the exact law.
    """
    g = gaussian_params(cfg, alpha)
    lo, hi = window if window is not None else _own_window(g.mu_G, g.sigma_G)
    mu = np.arange(lo, hi + 1)
    return CountDistribution(lo, hi, np.asarray(g.pmf(mu), dtype=float))


def bessel_gaussian_distribution(
    cfg: HomodyneConfig, alpha: complex, window: tuple[int, int] | None = None
) -> CountDistribution:
    """Alternative Gaussian approximation discretized on an integer window."""
    g = bessel_gaussian_params(cfg, alpha)
    lo, hi = window if window is not None else _own_window(g.mu_G_tilde, g.sigma_G_tilde)
    mu = np.arange(lo, hi + 1)
    return CountDistribution(lo, hi, np.asarray(g.pmf(mu), dtype=float))


def dh_quadrature_variances(cfg: DoubleHomodyneConfig) -> tuple[float, float]:
    """Quadrature variances ``(σ₁, σ₂) = (σ_x⁽¹⁾/(2C_S²), σ_x⁽²⁾/(2S_S²))``.

    ``σ_i/2`` is the actual variance of the signal-quadrature estimate
    ``(x₁, x₂)`` delivered by the double-homodyne receiver; ``σ_i = 1``
    corresponds to the ideal (vacuum-limited) case.
    """
    arm1, arm2 = cfg.arm_configs()
    sx1 = quadrature_map(arm1).sigma_x
    sx2 = quadrature_map(arm2).sigma_x
    cs2 = cfg.bs_signal.transmittance_sq
    ss2 = 1.0 - cs2
    return sx1 / (2.0 * cs2), sx2 / (2.0 * ss2)


def dh_gaussian_pmf(cfg: DoubleHomodyneConfig, alpha: complex, x1, x2):
    """Gaussian quadrature-space density of the double-homodyne outcome.

    The density factorizes as ``exp[−(x₁−ᾱ₁)²/σ₁ − (x₂−ᾱ₂)²/σ₂]/(π√(σ₁σ₂))``
    with means ``(ᾱ₁, ᾱ₂) = (Re(αe^{−iφ}), Im(αe^{−iφ}))``; the per-axis
    variances are ``σ_i/2``.  For an ideal balanced receiver (``σ₁=σ₂=1``)
    this is the coherent-state overlap kernel ``e^{−|x−ᾱ|²}/π``.
    """
    s1, s2 = dh_quadrature_variances(cfg)
    rot = complex(alpha) * complex(math.cos(cfg.phi), -math.sin(cfg.phi))
    m1, m2 = rot.real, rot.imag
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    out = np.exp(-((x1 - m1) ** 2) / s1 - ((x2 - m2) ** 2) / s2) / (
        math.pi * math.sqrt(s1 * s2)
    )
    return float(out) if out.ndim == 0 else out


def dh_gaussian_distribution(cfg: DoubleHomodyneConfig, alpha: complex) -> JointCountDistribution:
    """Count-domain Gaussian approximation of the joint double-homodyne law.

    Product of the two arms' main Gaussian approximations, discretized on the
    same per-arm windows used by the exact joint distribution.
    """
    (a1, l1), (a2, l2) = cfg.arm_inputs(alpha)
    arm1 = HomodyneConfig(cfg.bs1, cfg.detectors1, l1)
    arm2 = HomodyneConfig(cfg.bs2, cfg.detectors2, l2)
    d1 = gaussian_distribution(arm1, a1)
    d2 = gaussian_distribution(arm2, a2)
    return JointCountDistribution(
        d1.mu_min, d1.mu_max, d2.mu_min, d2.mu_max, np.outer(d1.probs, d2.probs)
    )
