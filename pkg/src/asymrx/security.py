"""Asymptotic security of Gaussian-modulated coherent-state QKD with untrusted noise.

Alice modulates coherent states with per-component amplitude variance ``V_A``
(entanglement-based equivalent: a two-mode squeezed vacuum with
``cosh 2r = V = 1 + 4V_A``); the channel has transmittance ``T`` and excess
noise ``ξ``.  Bob's imperfect receiver contributes measurement excess noise
that, in the untrusted scenario, is attributed to the eavesdropper: Eve holds
a purification of the Alice–Bob state *including* the receiver noise block.

The secret fraction is ``K = β·I_AB − χ`` with the Holevo information
``χ = g(ν₁) + g(ν₂) − g(ν₃)`` built from symplectic eigenvalues of the joint
and conditional covariance matrices.  For the double-homodyne receiver the
noise decomposition is non-unique (squeezing parameter ``r``), and ``χ`` is
maximized over the admissible interval.

All covariances are in shot-noise units (vacuum = identity), all information
quantities in bits per channel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from asymrx.errors import DomainError, UnphysicalStateError
from asymrx.gauss_approx import dh_quadrature_variances, quadrature_map
from asymrx.povm import DhPovmParams, dh_povm_params, rotation, squeezing_interval
from asymrx.receivers import DoubleHomodyneConfig, HomodyneConfig

__all__ = [
    "ChannelParams",
    "ProtocolParams",
    "CovAB",
    "HolevoResult",
    "SecurityReport",
    "mutual_info_h",
    "mutual_info_dh",
    "ab_covariance",
    "noisy_ab_covariance",
    "symplectic_eigs_joint",
    "symplectic_spectrum",
    "entropy_g",
    "joint_entropy",
    "conditional_nu3",
    "conditional_nu3_oracle",
    "holevo",
    "optimize_r",
    "secret_fraction",
    "length_to_transmittance",
    "tmsv_covariance",
    "tmsv_heterodyne_conditioning",
    "mi_integration_oracle",
    "MiOracleResult",
]

SIGMA_Z = np.diag([1.0, -1.0])
_NU_TOL = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ChannelParams:
    """Gaussian channel: transmittance ``T`` in (0, 1] and excess noise ``ξ ≥ 0`` (SNU)."""

    transmittance: float
    xi: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.transmittance <= 1.0):
            raise DomainError(f"transmittance must lie in (0, 1], got {self.transmittance!r}")
        if self.xi < 0.0:
            raise DomainError(f"excess noise must be ≥ 0, got {self.xi!r}")


@dataclass(frozen=True)
class ProtocolParams:
    """Modulation variance ``V_A > 0`` and reconciliation efficiency ``β`` in (0, 1)."""

    v_a: float
    beta: float = 0.95

    def __post_init__(self) -> None:
        if self.v_a <= 0.0:
            raise DomainError(f"modulation variance must be positive, got {self.v_a!r}")
        if not (0.0 < self.beta < 1.0):
            raise DomainError(f"reconciliation efficiency must lie in (0, 1), got {self.beta!r}")


@dataclass(frozen=True)
class CovAB:
    """Alice–Bob covariance in block form ``{V·1, c·σ_z; c·σ_z, V_B·1 + Σ_N}``."""

    V: float
    c: float
    V_B: float
    noise: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))

    def bob_block(self) -> np.ndarray:
        return self.V_B * np.eye(2) + self.noise

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4))
        m[:2, :2] = self.V * np.eye(2)
        m[2:, 2:] = self.bob_block()
        m[:2, 2:] = self.c * SIGMA_Z
        m[2:, :2] = self.c * SIGMA_Z
        return m


@dataclass(frozen=True)
class HolevoResult:
    """Holevo information with the symplectic eigenvalues that produced it."""

    chi: float
    nu1: float
    nu2: float
    nu3: float


@dataclass(frozen=True)
class SecurityReport:
    """Full asymptotic security summary for one receiver configuration."""

    mutual_info_bits: float
    holevo_bits: float
    r_opt: float
    secret_fraction_bits: float
    nu1: float
    nu2: float
    nu3: float


def mutual_info_h(ch: ChannelParams, pr: ProtocolParams, sigma_x: float) -> float:
    """Alice–Bob mutual information for homodyne detection with outcome variance ``σ_x``."""
    if sigma_x < 1.0 - 1e-12:
        raise DomainError(f"sigma_x must be ≥ 1, got {sigma_x!r}")
    return 0.5 * math.log2(1.0 + 4.0 * ch.transmittance * pr.v_a / (sigma_x + ch.xi))


def mutual_info_dh(
    ch: ChannelParams, pr: ProtocolParams, sigma1: float, sigma2: float
) -> float:
    """Alice–Bob mutual information for double-homodyne detection (both quadratures)."""
    if sigma1 < 0.5 - 1e-12 or sigma2 < 0.5 - 1e-12:
        raise DomainError("double-homodyne quadrature variances must be ≥ 1/2")
    t, xi, va = ch.transmittance, ch.xi, pr.v_a
    return 0.5 * (
        math.log2(1.0 + 4.0 * t * va / (2.0 * sigma1 + xi))
        + math.log2(1.0 + 4.0 * t * va / (2.0 * sigma2 + xi))
    )


def ab_covariance(ch: ChannelParams, pr: ProtocolParams) -> CovAB:
    """Alice–Bob covariance after the channel, before any measurement noise."""
    v = 1.0 + 4.0 * pr.v_a
    c = math.sqrt(ch.transmittance * (v * v - 1.0))
    v_b = ch.transmittance * (v - 1.0) + 1.0 + ch.xi
    return CovAB(V=v, c=c, V_B=v_b)


def noisy_ab_covariance(covab: CovAB, noise: np.ndarray) -> CovAB:
    """Add a PSD measurement-noise block to Bob's side of the covariance.

    Raises
    ------
    DomainError
        If ``noise`` is not symmetric positive semi-definite (tolerance 1e-12).
    """
    noise = np.asarray(noise, dtype=float)
    if noise.shape != (2, 2) or not np.allclose(noise, noise.T, atol=1e-12):
        raise DomainError("noise block must be a symmetric 2×2 matrix")
    eigs = np.linalg.eigvalsh(noise)
    if eigs.min() < -1e-12:
        raise DomainError(
            f"noise block must be positive semi-definite; minimal eigenvalue {eigs.min():.3e}"
        )
    return replace(covab, noise=covab.noise + noise)


def symplectic_spectrum(mat: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a 2n×2n covariance matrix via the ``iΩΣ`` spectrum.

    Returns the ``n`` eigenvalues sorted in descending order.  This is the
    brute-force route used as an independent oracle for the closed forms.
    """
    mat = np.asarray(mat, dtype=float)
    n = mat.shape[0] // 2
    omega_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    omega = np.kron(np.eye(n), omega_1)
    eigs = np.abs(np.linalg.eigvals(1j * omega @ mat))
    return np.sort(eigs)[::-1][::2].copy()


def symplectic_eigs_joint(covab: CovAB, validate: bool = True) -> tuple[float, float]:
    """Symplectic eigenvalues ``(ν₁, ν₂)`` of the joint Alice–Bob covariance.

    Uses the closed form ``ν² = Δ/2 ± √(Δ²/4 − D)`` with
    ``Δ = V² + det(Bob block) − 2c²`` and ``D = det Σ_AB``, which holds for an
    arbitrary (anisotropic) Bob block.

    Raises
    ------
    UnphysicalStateError
        If any eigenvalue falls below ``1 − 1e-9`` (and ``validate`` is True).
    """
    bob = covab.bob_block()
    delta = covab.V**2 + float(np.linalg.det(bob)) - 2.0 * covab.c**2
    dd = float(np.linalg.det(covab.matrix()))
    disc = delta * delta / 4.0 - dd
    if disc < 0.0:
        if disc < -1e-9 * max(1.0, delta * delta):
            raise UnphysicalStateError(f"negative discriminant {disc:.3e} in symplectic form")
        disc = 0.0
    root = math.sqrt(disc)
    nu1_sq = delta / 2.0 + root
    nu2_sq = delta / 2.0 - root
    if nu2_sq < 0.0:
        raise UnphysicalStateError(f"negative squared symplectic eigenvalue {nu2_sq:.3e}")
    nu1, nu2 = math.sqrt(nu1_sq), math.sqrt(nu2_sq)
    if validate and (nu2 < 1.0 - _NU_TOL or nu1 < 1.0 - _NU_TOL):
        raise UnphysicalStateError(
            f"symplectic eigenvalues ({nu1:.12g}, {nu2:.12g}) below one: unphysical state"
        )
    return nu1, nu2


def entropy_g(nu: float) -> float:
    """Von Neumann entropy contribution ``g(ν)`` of a thermal symplectic eigenvalue.

    ``g(ν) = ((ν+1)/2) log₂((ν+1)/2) − ((ν−1)/2) log₂((ν−1)/2)`` with the
    ``0·log 0 = 0`` convention at ``ν = 1``.  Values in ``(1 − 1e-9, 1)`` are
    clamped to 1; anything smaller is a domain error.
    """
    if nu < 1.0 - _NU_TOL:
        raise DomainError(f"entropy argument must be ≥ 1, got {nu!r}")
    if nu <= 1.0:
        return 0.0
    up = (nu + 1.0) / 2.0
    dn = (nu - 1.0) / 2.0
    return up * math.log2(up) - dn * math.log2(dn)


def joint_entropy(covab: CovAB) -> float:
    """Joint von Neumann entropy ``S_AB = g(ν₁) + g(ν₂)`` in bits."""
    nu1, nu2 = symplectic_eigs_joint(covab)
    return entropy_g(nu1) + entropy_g(nu2)


def conditional_nu3(gamma: str, covab: CovAB, noise_params) -> float:
    """Conditional symplectic eigenvalue ``ν₃`` after Bob's measurement (closed form).

    ``gamma`` selects the receiver: ``"H"`` with ``noise_params = σ_N`` gives
    ``ν₃ = √(V(V − c²/(V_B+σ_N)))``; ``"DH"`` with ``noise_params = (δ₁, δ₂)``
    gives the two-quadrature product form, which is independent of the
    squeezing parameter of the noise decomposition.
    """
    v, c, v_b = covab.V, covab.c, covab.V_B
    if gamma == "H":
        sigma_n = float(noise_params)
        nu3_sq = v * (v - c * c / (v_b + sigma_n))
        if nu3_sq < 0.0:
            raise UnphysicalStateError(
                f"negative squared conditional eigenvalue {nu3_sq:.3e}", code="nu3_below_one"
            )
        nu3 = math.sqrt(nu3_sq)
    elif gamma == "DH":
        d1, d2 = (float(x) for x in noise_params)
        num = (v_b + d1 - c * c / v) * (v_b + d2 - c * c / v)
        den = (v_b + d1) * (v_b + d2)
        if num < 0.0:
            raise UnphysicalStateError(
                f"negative conditional determinant factor {num:.3e}", code="nu3_below_one"
            )
        nu3 = v * math.sqrt(num / den)
    else:
        raise DomainError(f"receiver kind must be 'H' or 'DH', got {gamma!r}")
    if nu3 < 1.0 - _NU_TOL:
        raise UnphysicalStateError(
            f"conditional eigenvalue {nu3:.12g} below one", code="nu3_below_one"
        )
    return nu3


def conditional_nu3_oracle(
    gamma: str, covab: CovAB, noise_params, antisqueeze: float = 1e14
) -> float:
    """``ν₃`` via the general Gaussian partial-measurement formula (oracle path).

    Bob's pre-measurement block is ``V_B·1 + Σ_N`` and his residual sharp
    measurement has covariance ``Σ_m``: an (approximately) infinitely
    anti-squeezed quadrature for homodyne, the matched squeezed vacuum for
    double homodyne.  The conditional Alice covariance is
    ``Σ_A|B = V·1 − c² σ_z (V_B·1 + Σ_N + Σ_m)⁻¹ σ_z`` and
    ``ν₃ = √(det Σ_A|B)``.
    """
    v, c, v_b = covab.V, covab.c, covab.V_B
    if gamma == "H":
        sigma_n = float(noise_params)
        meas = np.diag([sigma_n, antisqueeze])
    elif gamma == "DH":
        d1, d2 = (float(x) for x in noise_params)
        meas = np.diag([d1, d2])
    else:
        raise DomainError(f"receiver kind must be 'H' or 'DH', got {gamma!r}")
    bob = v_b * np.eye(2) + meas
    cond = v * np.eye(2) - c * c * SIGMA_Z @ np.linalg.inv(bob) @ SIGMA_Z
    det = float(np.linalg.det(cond))
    if det < 0.0:
        raise UnphysicalStateError(f"negative conditional determinant {det:.3e}")
    return math.sqrt(det)


def _dh_noise_matrix(p: DhPovmParams, r: float, phi: float) -> np.ndarray:
    """Double-homodyne noise block at squeezing ``r`` — *not* clamped to PSD.

    Negative diagonal entries (r outside the admissible interval) are passed
    through so that the symplectic physicality guard can reject the resulting
    state.
    """
    e1 = p.delta1 - math.exp(2.0 * r)
    e2 = p.delta2 - math.exp(-2.0 * r)
    rot = rotation(phi)
    return rot @ np.diag([e1, e2]) @ rot.T


def holevo(
    gamma: str,
    ch: ChannelParams,
    pr: ProtocolParams,
    noise_params,
    r: float | None = None,
    phi: float = 0.0,
) -> HolevoResult:
    """Holevo information ``χ = g(ν₁) + g(ν₂) − g(ν₃)`` for the untrusted-noise model.

    ``noise_params`` is the homodyne excess noise ``σ_N`` for ``gamma="H"`` or
    a :class:`~asymrx.povm.DhPovmParams` for ``gamma="DH"`` (with ``r`` the
    decomposition squeezing parameter, defaulting to the coherent point 0).
    Unphysical decompositions — e.g. ``r = 0`` outside the admissible interval
    of an imbalanced ideal receiver — raise :class:`UnphysicalStateError` from
    the symplectic guard.
    """
    covab = ab_covariance(ch, pr)
    if gamma == "H":
        sigma_n = float(noise_params)
        rot = rotation(phi)
        noise = rot @ np.diag([sigma_n, 0.0]) @ rot.T
        covab = replace(covab, noise=covab.noise + noise)
        nu3 = conditional_nu3("H", covab, sigma_n)
    elif gamma == "DH":
        p: DhPovmParams = noise_params
        r_val = 0.0 if r is None else float(r)
        covab = replace(covab, noise=covab.noise + _dh_noise_matrix(p, r_val, phi))
        nu3 = conditional_nu3("DH", covab, (p.delta1, p.delta2))
    else:
        raise DomainError(f"receiver kind must be 'H' or 'DH', got {gamma!r}")
    nu1, nu2 = symplectic_eigs_joint(covab)
    chi = entropy_g(nu1) + entropy_g(nu2) - entropy_g(nu3)
    return HolevoResult(chi=chi, nu1=nu1, nu2=nu2, nu3=nu3)


def optimize_r(
    p: DhPovmParams, ch: ChannelParams, pr: ProtocolParams, tol: float = 1e-6
) -> tuple[float, float]:
    """Maximize the double-homodyne Holevo information over the squeezing interval.

    Returns ``(r_opt, χ_max)``.  A coarse scan brackets the maximum, then
    golden-section search refines it to ``tol`` in ``r``; a degenerate interval
    returns its single point directly.
    """
    r2, r1 = squeezing_interval(p)
    if r1 - r2 <= max(tol * 1e-3, 1e-15):
        r_star = 0.5 * (r1 + r2)
        return r_star, holevo("DH", ch, pr, p, r=r_star).chi

    def chi(r: float) -> float:
        return holevo("DH", ch, pr, p, r=r).chi

    n_coarse = 33
    grid = np.linspace(r2, r1, n_coarse)
    values = [chi(float(r)) for r in grid]
    best = int(np.argmax(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, n_coarse - 1)]

    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = chi(x1), chi(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = chi(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = chi(x1)
    r_star = 0.5 * (a + b)
    chi_star = chi(r_star)
    # Resolve ties toward the interval boundary when the optimum sits there.
    for boundary in (r2, r1):
        if abs(r_star - boundary) <= tol and chi(boundary) >= chi_star:
            return boundary, chi(boundary)
    return r_star, chi_star


def secret_fraction(
    gamma: str,
    ch: ChannelParams,
    pr: ProtocolParams,
    receiver: HomodyneConfig | DoubleHomodyneConfig,
) -> SecurityReport:
    """Asymptotic secret fraction ``K = β·I_AB − χ`` for a configured receiver.

    For double homodyne, ``χ`` is maximized over the admissible squeezing
    interval of the noise decomposition (worst case for the legitimate users).
    """
    if gamma == "H":
        if not isinstance(receiver, HomodyneConfig):
            raise DomainError("gamma='H' requires a HomodyneConfig receiver")
        sigma_x = quadrature_map(receiver).sigma_x
        mi = mutual_info_h(ch, pr, sigma_x)
        res = holevo("H", ch, pr, sigma_x - 1.0)
        r_opt = 0.0
    elif gamma == "DH":
        if not isinstance(receiver, DoubleHomodyneConfig):
            raise DomainError("gamma='DH' requires a DoubleHomodyneConfig receiver")
        p = dh_povm_params(receiver)
        mi = mutual_info_dh(ch, pr, p.sigma1, p.sigma2)
        r_opt, _ = optimize_r(p, ch, pr)
        res = holevo("DH", ch, pr, p, r=r_opt)
    else:
        raise DomainError(f"receiver kind must be 'H' or 'DH', got {gamma!r}")
    k = pr.beta * mi - res.chi
    return SecurityReport(
        mutual_info_bits=mi,
        holevo_bits=res.chi,
        r_opt=r_opt,
        secret_fraction_bits=k,
        nu1=res.nu1,
        nu2=res.nu2,
        nu3=res.nu3,
    )


def length_to_transmittance(length_km: float) -> float:
    """Fiber transmittance at 0.2 dB/km: ``T = 10^(−0.02·L)`` for ``L`` in km."""
    if length_km < 0.0:
        raise DomainError(f"channel length must be ≥ 0, got {length_km!r}")
    return 10.0 ** (-0.02 * length_km)


def tmsv_covariance(v_a: float) -> np.ndarray:
    """Covariance of the two-mode squeezed vacuum equivalent to the modulation.

    ``cosh 2r = V = 1 + 4V_A`` (equivalently ``sinh² r = 2V_A``), diagonal
    blocks ``cosh(2r)·1`` and off-diagonal blocks ``sinh(2r)·σ_z``.
    """
    if v_a <= 0.0:
        raise DomainError(f"modulation variance must be positive, got {v_a!r}")
    ch2r = 1.0 + 4.0 * v_a
    sh2r = math.sqrt(ch2r * ch2r - 1.0)
    m = np.zeros((4, 4))
    m[:2, :2] = ch2r * np.eye(2)
    m[2:, 2:] = ch2r * np.eye(2)
    m[:2, 2:] = sh2r * SIGMA_Z
    m[2:, :2] = sh2r * SIGMA_Z
    return m


def tmsv_heterodyne_conditioning(v_a: float) -> tuple[np.ndarray, np.ndarray]:
    """Condition the TMSV on a heterodyne measurement of Alice's mode.

    Returns ``(bob_conditional_cov, displacement_cov)``: the covariance of
    Bob's conditional states (identity — coherent states) and the covariance
    of their conditional displacements (``4V_A·1`` in quadrature units, i.e.
    amplitude-component variance ``V_A``), establishing the equivalence of the
    entanglement-based and prepare-and-measure pictures.
    """
    cov = tmsv_covariance(v_a)
    a = cov[:2, :2]
    b = cov[2:, 2:]
    corr = cov[2:, :2]
    meas = a + np.eye(2)  # heterodyne: vacuum-added measurement of Alice's mode
    cond = b - corr @ np.linalg.inv(meas) @ corr.T
    disp = b - cond  # marginal = conditional states + spread of their displacements
    return cond, disp


@dataclass(frozen=True)
class MiOracleResult:
    """Mutual information evaluated by two independent routes."""

    determinant_bits: float
    quadrature_bits: float


def _mi_component_determinant(t: float, v_a: float, denom: float) -> float:
    """One quadrature component of I_AB via the joint-covariance determinant.

    ``denom`` is the noise variance seen by that component (``σ_x + ξ`` for
    homodyne, ``2σ_i + ξ`` per double-homodyne component).
    """
    s11 = v_a
    s22 = 4.0 * t * v_a + denom
    s12 = 2.0 * math.sqrt(t) * v_a
    det = s11 * s22 - s12 * s12
    return 0.5 * math.log2(s11 * s22 / det)


def _mi_component_quadrature(t: float, v_a: float, denom: float) -> float:
    """Same component via direct 2D integration of the joint Gaussian density."""
    s11 = v_a
    s22 = 4.0 * t * v_a + denom
    s12 = 2.0 * math.sqrt(t) * v_a
    rho = s12 / math.sqrt(s11 * s22)
    one_m = 1.0 - rho * rho

    def integrand(b: float, a: float) -> float:
        joint = math.exp(-(a * a - 2.0 * rho * a * b + b * b) / (2.0 * one_m)) / (
            2.0 * math.pi * math.sqrt(one_m)
        )
        if joint <= 0.0:
            return 0.0
        marg = math.exp(-0.5 * (a * a + b * b)) / (2.0 * math.pi)
        return joint * math.log2(joint / marg)

    value, err = integrate.dblquad(
        integrand, -8.0, 8.0, lambda a: -8.0, lambda a: 8.0, epsabs=1e-10, epsrel=1e-10
    )
    return value


def mi_integration_oracle(
    gamma: str,
    ch: ChannelParams,
    pr: ProtocolParams,
    receiver: HomodyneConfig | DoubleHomodyneConfig,
) -> MiOracleResult:
    """Mutual information via the determinant form and direct numerical integration.

    Both routes are independent of the closed forms in
    :func:`mutual_info_h`/:func:`mutual_info_dh` and must agree with them.
    """
    t, xi, v_a = ch.transmittance, ch.xi, pr.v_a
    if gamma == "H":
        if not isinstance(receiver, HomodyneConfig):
            raise DomainError("gamma='H' requires a HomodyneConfig receiver")
        denoms = [quadrature_map(receiver).sigma_x + xi]
    elif gamma == "DH":
        if not isinstance(receiver, DoubleHomodyneConfig):
            raise DomainError("gamma='DH' requires a DoubleHomodyneConfig receiver")
        s1, s2 = dh_quadrature_variances(receiver)
        denoms = [2.0 * s1 + xi, 2.0 * s2 + xi]
    else:
        raise DomainError(f"receiver kind must be 'H' or 'DH', got {gamma!r}")
    det_bits = sum(_mi_component_determinant(t, v_a, d) for d in denoms)
    quad_bits = sum(_mi_component_quadrature(t, v_a, d) for d in denoms)
    return MiOracleResult(determinant_bits=det_bits, quadrature_bits=quad_bits)
