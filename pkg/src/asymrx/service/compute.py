"""Table builders behind the service endpoints.

Every public function returns ``(columns, rows)`` where rows are lists of JSON
cells (floats, ints, strings, or ``None`` for undefined numeric values).  Sweep
rows never abort the whole table: per-point domain failures are recorded in the
``status`` column with the error code and NaN numeric cells.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..errors import ConfigError, DomainError, TruncationError
from ..gauss_approx import (
    bessel_gaussian_params,
    gaussian_distribution,
    gaussian_params,
    quadrature_map,
)
from ..metrics import distance_sweep, total_variation
from ..photostat import (
    dh_joint_distribution,
    fock_distribution,
    mc_sample_counts,
    skellam_distribution,
    skellam_pmf_oracle,
)
from ..povm import dh_povm_params, q_symbol_consistency
from ..receivers import BeamSplitter, DetectorPair, DoubleHomodyneConfig, HomodyneConfig
from ..security import (
    ChannelParams,
    ProtocolParams,
    ab_covariance,
    holevo,
    length_to_transmittance,
    mi_integration_oracle,
    mutual_info_dh,
    optimize_r,
    secret_fraction,
    symplectic_eigs_joint,
    symplectic_spectrum,
    tmsv_covariance,
)
from .models import (
    CheckResult,
    DistRequest,
    DoubleHomodyneReceiverModel,
    HomodyneReceiverModel,
    SECURITY_AXES,
    SecurityRequest,
    TVD_AXES,
    TvdRequest,
)

Columns = List[str]
Rows = List[List[Any]]

_NAN = float("nan")


def _map_ordered(fn: Callable[[float], List[Any]], values: Sequence[float], threads: int) -> Rows:
    """Apply ``fn`` to each value, preserving input order, optionally threaded."""
    if threads <= 1 or len(values) <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, values))


# --------------------------------------------------------------------------
# dist
# --------------------------------------------------------------------------


def dist_table(req: DistRequest) -> Tuple[Columns, Rows]:
    """Photocount distribution table for a single receiver configuration."""
    rx_model = req.parsed_receiver()
    signal = req.signal.to_state()
    cfg = rx_model.to_config()

    if isinstance(cfg, DoubleHomodyneConfig):
        if signal.kind != "coherent":
            raise ConfigError("double-homodyne distributions require a coherent signal")
        joint = dh_joint_distribution(cfg, signal.alpha)
        mu1 = np.arange(joint.mu1_min, joint.mu1_max + 1)
        mu2 = np.arange(joint.mu2_min, joint.mu2_max + 1)
        rows = [
            [int(m1), int(m2), float(joint.probs[i, j])]
            for i, m1 in enumerate(mu1)
            for j, m2 in enumerate(mu2)
        ]
        return ["mu1", "mu2", "prob"], rows

    if signal.kind == "coherent":
        exact = skellam_distribution(cfg, signal.alpha)
        mu = exact.support()
        main = np.asarray(gaussian_params(cfg, signal.alpha).pmf(mu))
        alt = np.asarray(bessel_gaussian_params(cfg, signal.alpha).pmf(mu))
    else:
        exact = fock_distribution(cfg, signal.n)
        mu = exact.support()
        main_base = lambda a, m: np.asarray(gaussian_params(cfg, a).pmf(m))  # noqa: E731
        alt_base = lambda a, m: np.asarray(bessel_gaussian_params(cfg, a).pmf(m))  # noqa: E731
        main = fock_distribution(cfg, signal.n, base_pmf=main_base).probs
        alt = fock_distribution(cfg, signal.n, base_pmf=alt_base).probs
    rows = [
        [int(m), float(exact.probs[i]), float(main[i]), float(alt[i])]
        for i, m in enumerate(mu)
    ]
    return ["mu", "exact", "gaussian", "bessel_gaussian"], rows


# --------------------------------------------------------------------------
# tvd
# --------------------------------------------------------------------------


def tvd_table(req: TvdRequest) -> Tuple[Columns, Rows]:
    """Approximation-accuracy sweep: one row per axis value with D_P and D_S."""
    rx = req.parsed_receiver()
    signal = req.signal.to_state()
    axis = req.sweep.axis
    if axis not in TVD_AXES:
        raise ConfigError(f"tvd sweep axis must be one of {TVD_AXES}, got {axis!r}")
    values = req.sweep.values()
    fixed = dict(
        bs_transmittance=rx.bs_transmittance,
        eta1=rx.eta1,
        eta2=rx.eta2,
        lo_amp=rx.lo_amp,
        lo_phase=rx.lo_phase,
    )

    def one(v: float) -> List[Any]:
        try:
            row = distance_sweep(axis, [v], signal, **fixed)[0]
            return [row["axis_value"], row["d_p"], row["d_s"], ""]
        except (DomainError, TruncationError) as exc:
            return [v, _NAN, _NAN, getattr(exc, "code", "truncation_error")]

    rows = _map_ordered(one, values, req.threads)
    return ["axis_value", "d_p", "d_s", "status"], rows


# --------------------------------------------------------------------------
# security
# --------------------------------------------------------------------------


def security_table(req: SecurityRequest) -> Tuple[Columns, Rows]:
    """Security sweep: I_AB, Holevo bound, secret fraction and eigenvalues per point."""
    rx_model = req.parsed_receiver()
    axis = req.sweep.axis
    if axis not in SECURITY_AXES:
        raise ConfigError(f"security sweep axis must be one of {SECURITY_AXES}, got {axis!r}")
    is_dh = isinstance(rx_model, DoubleHomodyneReceiverModel)
    if axis == "squeezing_r" and not is_dh:
        raise ConfigError("sweep axis 'squeezing_r' requires a double-homodyne receiver")
    if req.protocol.fixed_r is not None and not is_dh:
        raise ConfigError("protocol.fixed_r applies to double-homodyne receivers only")
    if axis == "channel_length" and (
        req.channel.transmittance is not None or req.channel.length_km is not None
    ):
        # The axis supplies the transmittance; forbid a conflicting fixed value.
        raise ConfigError(
            "sweep axis 'channel_length' conflicts with a fixed channel "
            "transmittance/length; specify only 'xi' in the channel section"
        )
    pr = req.protocol.to_params()
    values = req.sweep.values()

    def one(v: float) -> List[Any]:
        try:
            rx = rx_model
            if axis == "bs_transmittance":
                field = "bs_signal" if is_dh else "bs_transmittance"
                rx = rx_model.model_copy(update={field: v})
                ch = req.channel.to_params()
            elif axis == "channel_length":
                ch = ChannelParams(length_to_transmittance(v), req.channel.xi)
            else:  # squeezing_r
                ch = req.channel.to_params()
            cfg = rx.to_config()

            if isinstance(cfg, HomodyneConfig):
                rep = secret_fraction("H", ch, pr, cfg)
                return [
                    v,
                    rep.mutual_info_bits,
                    rep.holevo_bits,
                    rep.secret_fraction_bits,
                    rep.r_opt,
                    rep.nu1,
                    rep.nu2,
                    rep.nu3,
                    "",
                ]

            p = dh_povm_params(cfg)
            mi = mutual_info_dh(ch, pr, p.sigma1, p.sigma2)
            if axis == "squeezing_r":
                r_used = v
                res = holevo("DH", ch, pr, p, r=v, phi=p.phi)
            elif req.protocol.fixed_r is not None:
                r_used = float(req.protocol.fixed_r)
                res = holevo("DH", ch, pr, p, r=r_used, phi=p.phi)
            else:
                r_used, _ = optimize_r(p, ch, pr)
                res = holevo("DH", ch, pr, p, r=r_used, phi=p.phi)
            k = pr.beta * mi - res.chi
            return [v, mi, res.chi, k, r_used, res.nu1, res.nu2, res.nu3, ""]
        except DomainError as exc:
            return [v, _NAN, _NAN, _NAN, _NAN, _NAN, _NAN, _NAN, exc.code]

    rows = _map_ordered(one, values, req.threads)
    return (
        ["axis_value", "I_AB", "chi", "K", "r_opt", "nu1", "nu2", "nu3", "status"],
        rows,
    )


# --------------------------------------------------------------------------
# validate
# --------------------------------------------------------------------------


def _check(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def validate_checks(seed: int = 12345) -> List[CheckResult]:
    """Fast internal consistency battery (seconds, not the full test suite)."""
    checks: List[CheckResult] = []
    cfg = HomodyneConfig(BeamSplitter(0.5), DetectorPair(1.0, 1.0), 5.0 + 0.0j)
    cfg_asym = HomodyneConfig(BeamSplitter(0.6), DetectorPair(1.0, 0.75), 5.0 + 0.0j)

    # 1. Closed-form photocount law is normalized on its window.
    worst = 0.0
    for c, a in ((cfg, 0.5), (cfg_asym, 0.5 + 0.3j), (cfg, 2.0)):
        worst = max(worst, abs(1.0 - skellam_distribution(c, a).total()))
    checks.append(_check("skellam_normalization", worst <= 1e-8, f"max |1-sum| = {worst:.3e}"))

    # 2. Closed form agrees with the truncated double-Poisson construction.
    worst = 0.0
    dist = skellam_distribution(cfg_asym, 0.5)
    for m in (-5, 0, 7):
        worst = max(worst, abs(dist.prob(m) - skellam_pmf_oracle(cfg_asym, 0.5, m)))
    checks.append(_check("skellam_vs_oracle", worst <= 1e-10, f"max |diff| = {worst:.3e}"))

    # 3. Strong-LO Gaussian approximation is close in total variation.
    exact = skellam_distribution(cfg, 0.5)
    approx = gaussian_distribution(cfg, 0.5)
    tvd = total_variation(exact, approx).tvd
    checks.append(_check("gaussian_approx_tvd", tvd <= 0.05, f"TVD = {tvd:.3e}"))

    # 4. POVM reproduces the outcome density through its convolution Q symbol.
    resid = q_symbol_consistency(cfg_asym, 0.4 + 0.2j, 0.3)
    checks.append(_check("povm_q_symbol", abs(resid) <= 1e-9, f"residual = {resid:.3e}"))

    # 5. Closed-form joint symplectic eigenvalues match the spectral oracle.
    rng = np.random.Generator(np.random.Philox(seed))
    worst = 0.0
    for _ in range(50):
        ch = ChannelParams(float(rng.uniform(0.05, 1.0)), float(rng.uniform(0.0, 0.2)))
        prot = ProtocolParams(v_a=float(rng.uniform(0.1, 20.0)))
        covab = ab_covariance(ch, prot)
        nu1, nu2 = symplectic_eigs_joint(covab)
        spec = symplectic_spectrum(covab.matrix())
        worst = max(worst, abs(nu1 - spec[0]), abs(nu2 - spec[1]))
    checks.append(_check("symplectic_oracle", worst <= 1e-10, f"max |diff| = {worst:.3e}"))

    # 6. TMSV covariance of the source is symplectically pure.
    tm = tmsv_covariance(1.0)
    spec = symplectic_spectrum(tm)
    worst = max(abs(s - 1.0) for s in spec)
    checks.append(_check("tmsv_purity", worst <= 1e-10, f"max |nu-1| = {worst:.3e}"))

    # 7. Mutual-information integral oracle agrees with the closed form.
    ch = ChannelParams(0.95, 1e-3)
    prot = ProtocolParams(v_a=1.0)
    res = mi_integration_oracle("H", ch, prot, cfg)
    closed = 0.5 * math.log2(1.0 + 4.0 * 0.95 * 1.0 / (quadrature_map(cfg).sigma_x + 1e-3))
    worst = abs(res.determinant_bits - closed)
    checks.append(_check("mi_oracle", worst <= 1e-12, f"|det - closed| = {worst:.3e}"))

    # 8. Seeded Monte Carlo sampling converges to the closed-form law.
    emp = mc_sample_counts(cfg, 0.5, 200_000, seed)
    tvd = total_variation(exact, emp, max_truncation=0.05).tvd
    checks.append(_check("mc_convergence", tvd <= 0.01, f"TVD = {tvd:.3e}"))

    return checks
