"""Measurement POVM reconstruction for noisy homodyne and double-homodyne receivers.

In the Gaussian approximation an asymmetric homodyne receiver realizes a noisy
quadrature measurement: its POVM elements are quadrature projectors randomly
displaced by Gaussian noise of variance ``σ_N = σ_x − 1 ≥ 0``.  The
double-homodyne receiver realizes a noisy projection onto Gaussian states; its
excess-noise covariance admits a one-parameter family of decompositions into a
(generally squeezed) pure-state projector plus additive Gaussian noise,
parametrized by a squeezing parameter ``r`` confined to the interval
``[r₂, r₁] = [−½ ln δ₂, ½ ln δ₁]`` where ``δ_i = 2σ_i − 1``.

All covariances are expressed in shot-noise units (vacuum = identity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from asymrx.errors import DomainError, QuadratureError
from asymrx.gauss_approx import (
    dh_gaussian_pmf,
    dh_quadrature_variances,
    gauss_pdf,
    mean_quadrature,
    quadrature_map,
)
from asymrx.receivers import DoubleHomodyneConfig, HomodyneConfig

__all__ = [
    "rotation",
    "HomodynePovm",
    "DhPovmParams",
    "SqueezedRepresentation",
    "homodyne_povm",
    "q_symbol_consistency",
    "dh_povm_params",
    "coherent_rep_noise",
    "squeezing_interval",
    "squeezed_rep_noise",
    "squeezed_q_symbol",
]

_INTERVAL_TOL = 1e-12


def rotation(phi: float) -> np.ndarray:
    """2×2 rotation matrix ``R(φ)``."""
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class HomodynePovm:
    """Noisy-homodyne POVM: displaced quadrature projectors.

    ``sigma_N`` is the excess noise variance beyond the sharp projector,
    ``phi`` the measured quadrature phase, and ``scale`` the outcome-density
    prefactor ``1/((η₁+η₂)CS|α_L|)`` relating photocount differences to
    quadrature outcomes (kept for reconstruction tests; it cancels in all
    entropic quantities).
    """

    sigma_N: float
    phi: float
    scale: float

    def noise_matrix(self) -> np.ndarray:
        """Rank-≤1 noise covariance ``R(φ) diag(σ_N, 0) R(φ)ᵀ``."""
        r = rotation(self.phi)
        return r @ np.diag([self.sigma_N, 0.0]) @ r.T


@dataclass(frozen=True)
class DhPovmParams:
    """Double-homodyne POVM parameters.

    ``sigma1``/``sigma2`` are the quadrature variances of the outcome density,
    ``delta_i = 2σ_i − 1`` the corresponding excess-noise parameters, and
    ``q ≥ 1`` the signal beam-splitter imbalance ratio.  When the physical
    receiver has ``S_S²/C_S² < 1`` the arms are relabelled to enforce ``q ≥ 1``
    and ``swapped`` records it.
    """

    sigma1: float
    sigma2: float
    delta1: float
    delta2: float
    q: float
    phi: float
    swapped: bool = False


@dataclass(frozen=True)
class SqueezedRepresentation:
    """Squeezed-state decomposition of the double-homodyne POVM at parameter ``r``.

    The POVM factorizes into a projector onto a pure state squeezed by ``r``
    plus additive Gaussian noise with per-axis variances ``sigmaN1``/``sigmaN2``
    (both ≥ 0 precisely for ``r`` in ``[r2, r1]``).
    """

    r: float
    r1: float
    r2: float
    sigmaN1: float
    sigmaN2: float
    phi: float

    def noise_matrix(self) -> np.ndarray:
        """Excess-noise covariance ``R(φ) diag(4σ_N⁽¹⁾, 4σ_N⁽²⁾) R(φ)ᵀ`` (shot-noise units)."""
        r = rotation(self.phi)
        return r @ np.diag([4.0 * self.sigmaN1, 4.0 * self.sigmaN2]) @ r.T


def homodyne_povm(cfg: HomodyneConfig) -> HomodynePovm:
    """POVM of the asymmetric homodyne receiver in the Gaussian approximation."""
    qm = quadrature_map(cfg)
    return HomodynePovm(sigma_N=qm.sigma_x - 1.0, phi=cfg.phi, scale=1.0 / qm.scale)


def q_symbol_consistency(cfg: HomodyneConfig, alpha: complex, x: float) -> float:
    """Residual of the noisy-homodyne POVM decomposition at outcome ``x``.

    Numerically convolves the excess-noise kernel ``G(·; σ_N)`` with the
    coherent-state Q symbol of the sharp quadrature projector,
    ``G(x′ − ⟨x̂_φ⟩; 1)``, and compares with the direct Gaussian outcome
    density ``G(x − ⟨x̂_φ⟩; σ_x)``.  Returns ``|convolution − direct|``.
    """
    povm = homodyne_povm(cfg)
    sigma_x = 1.0 + povm.sigma_N
    xbar = mean_quadrature(alpha, cfg.phi)
    direct = gauss_pdf(x - xbar, sigma_x)
    if povm.sigma_N <= _INTERVAL_TOL:
        return abs(gauss_pdf(x - xbar, 1.0) - direct)

    def integrand(y: float) -> float:
        return gauss_pdf(x - y, povm.sigma_N) * gauss_pdf(y - xbar, 1.0)

    width = 8.0 * math.sqrt(sigma_x)
    lo = min(x, xbar) - width
    hi = max(x, xbar) + width
    value, err = integrate.quad(
        integrand, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200, points=[x, xbar]
    )
    if err > 1e-9:
        raise QuadratureError(f"Q-symbol convolution error estimate {err:.2e} too large")
    return abs(value - direct)


def dh_povm_params(cfg: DoubleHomodyneConfig) -> DhPovmParams:
    """POVM parameters of the double-homodyne receiver (arms ordered so q ≥ 1)."""
    s1, s2 = dh_quadrature_variances(cfg)
    q = cfg.q
    swapped = q < 1.0
    if swapped:
        s1, s2 = s2, s1
        q = 1.0 / q
    return DhPovmParams(
        sigma1=s1,
        sigma2=s2,
        delta1=2.0 * s1 - 1.0,
        delta2=2.0 * s2 - 1.0,
        q=q,
        phi=cfg.phi,
        swapped=swapped,
    )


def coherent_rep_noise(p: DhPovmParams) -> tuple[float, float, bool]:
    """Coherent-state (r = 0) decomposition noise ``(σ̃_N⁽¹⁾, σ̃_N⁽²⁾, valid)``.

    ``4σ̃_N⁽ⁱ⁾ = δ_i − 1``; the decomposition exists iff both are non-negative,
    i.e. iff both quadrature variances are at least the vacuum value.
    """
    sn1 = (p.delta1 - 1.0) / 4.0
    sn2 = (p.delta2 - 1.0) / 4.0
    valid = sn1 >= -_INTERVAL_TOL and sn2 >= -_INTERVAL_TOL
    return sn1, sn2, valid


def squeezing_interval(p: DhPovmParams) -> tuple[float, float]:
    """Admissible squeezing interval ``(r₂, r₁) = (−½ ln δ₂, ½ ln δ₁)``.

    ``r₂ ≤ r₁`` always holds because ``δ₁δ₂ ≥ 1``; when rounding makes the
    endpoints of a degenerate interval cross at the 1e-12 level they are
    collapsed to their midpoint.
    """
    if p.delta1 <= 0.0 or p.delta2 <= 0.0:
        raise DomainError("excess-noise parameters delta must be positive")
    r2 = -0.5 * math.log(p.delta2)
    r1 = 0.5 * math.log(p.delta1)
    if r2 > r1:
        if r2 - r1 > 1e-12:
            raise DomainError(
                f"inconsistent excess-noise parameters: empty squeezing interval "
                f"({r2:.6g}, {r1:.6g})"
            )
        mid = 0.5 * (r1 + r2)
        r1 = r2 = mid
    return r2, r1


def squeezed_rep_noise(p: DhPovmParams, r: float) -> SqueezedRepresentation:
    """Squeezed-state decomposition of the double-homodyne POVM at parameter ``r``.

    Raises
    ------
    DomainError
        If ``r`` lies outside ``[r₂, r₁]`` (tolerance 1e-12), naming the
        violated non-negativity inequality.
    """
    r2, r1 = squeezing_interval(p)
    e_plus = math.exp(2.0 * r)
    e_minus = math.exp(-2.0 * r)
    if p.delta1 - e_plus < -_INTERVAL_TOL * max(1.0, p.delta1):
        raise DomainError(
            f"squeezing r={r:.6g} exceeds r1={r1:.6g}: 4*sigma_N1 = delta1 - exp(2r) "
            f"= {p.delta1 - e_plus:.3e} < 0",
            code="r_outside_interval",
        )
    if p.delta2 - e_minus < -_INTERVAL_TOL * max(1.0, p.delta2):
        raise DomainError(
            f"squeezing r={r:.6g} lies below r2={r2:.6g}: 4*sigma_N2 = delta2 - exp(-2r) "
            f"= {p.delta2 - e_minus:.3e} < 0",
            code="r_outside_interval",
        )
    sn1 = max((p.delta1 - e_plus) / 4.0, 0.0)
    sn2 = max((p.delta2 - e_minus) / 4.0, 0.0)
    return SqueezedRepresentation(r=r, r1=r1, r2=r2, sigmaN1=sn1, sigmaN2=sn2, phi=p.phi)


def _convolve_axis(x: float, mean: float, noise_var: float, husimi_var: float) -> float:
    """One axis of the decomposition: ``∫ G(x−y; noise) G(y−mean; husimi) dy``."""
    if noise_var <= 1e-13:
        return gauss_pdf(x - mean, husimi_var)

    def integrand(y: float) -> float:
        return gauss_pdf(x - y, noise_var) * gauss_pdf(y - mean, husimi_var)

    width = 8.0 * math.sqrt(noise_var + husimi_var)
    lo = min(x, mean) - width
    hi = max(x, mean) + width
    value, err = integrate.quad(
        integrand, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200, points=[x, mean]
    )
    if err > 1e-9:
        raise QuadratureError(f"convolution error estimate {err:.2e} too large")
    return value


def squeezed_q_symbol(
    p: DhPovmParams, r: float, alpha: complex, x1: float, x2: float
) -> tuple[float, float]:
    """Evaluate the squeezed-state decomposition of the outcome density at ``(x₁, x₂)``.

    Convolves the additive-noise kernel of the representation at squeezing
    ``r`` with the squeezed-state Husimi kernel (per-axis variances
    ``(e^{±2r}+1)/4``) and returns ``(value, residual)`` where the residual is
    the absolute difference from the direct Gaussian outcome density built
    from ``(σ₁, σ₂)``.  The decomposition reproduces the same density for
    every admissible ``r``.
    """
    rep = squeezed_rep_noise(p, r)
    rot = complex(alpha) * complex(math.cos(p.phi), -math.sin(p.phi))
    m1, m2 = rot.real, rot.imag
    b1 = (math.exp(2.0 * r) + 1.0) / 4.0
    b2 = (math.exp(-2.0 * r) + 1.0) / 4.0
    value = _convolve_axis(x1, m1, rep.sigmaN1, b1) * _convolve_axis(x2, m2, rep.sigmaN2, b2)
    direct = (
        math.exp(-((x1 - m1) ** 2) / p.sigma1 - ((x2 - m2) ** 2) / p.sigma2)
        / (math.pi * math.sqrt(p.sigma1 * p.sigma2))
    )
    return value, abs(value - direct)
