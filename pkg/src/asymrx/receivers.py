"""Receiver configurations: beam splitters, detector pairs, signal states.

Conventions
-----------
A beam splitter is parametrized by its intensity transmittance ``C² = cos²θ``
(amplitude transmittance ``C = cos θ``, reflectance ``S = sin θ``).  A field of
amplitude ``α`` interfering with a local oscillator ``α_L`` produces output
amplitudes ``α₁ = Cα + Sα_L`` and ``α₂ = −Sα + Cα_L``.

The double-homodyne (eight-port) receiver splits the signal on a beam splitter
with transmittance ``C_S²`` and the local oscillator on a second splitter with
transmittance ``C_L²``; the LO branch feeding the second arm acquires a fixed
``−i`` phase shift so that the two arms probe conjugate quadratures.

All amplitudes are dimensionless (photon-number units: mean photon number of a
coherent state is ``|α|²``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from asymrx.errors import DomainError

__all__ = [
    "BeamSplitter",
    "DetectorPair",
    "HomodyneConfig",
    "DoubleHomodyneConfig",
    "SignalState",
    "output_amplitudes",
    "detected_intensities",
]


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless beam splitter with intensity transmittance ``C²`` in (0, 1)."""

    transmittance_sq: float

    def __post_init__(self) -> None:
        t = self.transmittance_sq
        if not (0.0 < t < 1.0) or not math.isfinite(t):
            raise DomainError(
                f"beam splitter transmittance C^2 must lie strictly in (0, 1), got {t!r}"
            )

    @property
    def c(self) -> float:
        """Amplitude transmittance ``C = cos θ``."""
        return math.sqrt(self.transmittance_sq)

    @property
    def s(self) -> float:
        """Amplitude reflectance ``S = sin θ``."""
        return math.sqrt(1.0 - self.transmittance_sq)

    @property
    def cs(self) -> float:
        """Product ``C·S = ½ sin 2θ``."""
        return self.c * self.s


@dataclass(frozen=True)
class DetectorPair:
    """Quantum efficiencies of the two photodetectors behind one beam splitter."""

    eta1: float
    eta2: float

    def __post_init__(self) -> None:
        for name, eta in (("eta1", self.eta1), ("eta2", self.eta2)):
            if not (0.0 < eta <= 1.0) or not math.isfinite(eta):
                raise DomainError(f"detector efficiency {name} must lie in (0, 1], got {eta!r}")


@dataclass(frozen=True)
class HomodyneConfig:
    """Single homodyne receiver: beam splitter, detector pair, local oscillator."""

    bs: BeamSplitter
    detectors: DetectorPair
    lo: complex

    def __post_init__(self) -> None:
        if abs(self.lo) <= 0.0 or not math.isfinite(abs(self.lo)):
            raise DomainError("local oscillator amplitude must be nonzero and finite")

    @property
    def lo_amp(self) -> float:
        """Local oscillator magnitude ``|α_L|``."""
        return abs(self.lo)

    @property
    def phi(self) -> float:
        """Local oscillator phase ``φ = arg α_L``."""
        return math.atan2(self.lo.imag, self.lo.real)


@dataclass(frozen=True)
class DoubleHomodyneConfig:
    """Eight-port double homodyne receiver.

    The signal is split on ``bs_signal`` (transmittance ``C_S²``); the local
    oscillator is split on ``bs_lo`` (transmittance ``C_L²``, balanced by
    default).  Arm 1 receives the transmitted signal ``C_S α`` and LO
    ``C_L α_L``; arm 2 receives the reflected signal ``S_S α`` and the
    phase-shifted LO ``−i S_L α_L``.  Each arm mixes its inputs on its own
    beam splitter ``bs1``/``bs2`` and detects with ``detectors1``/``detectors2``.
    """

    bs_signal: BeamSplitter
    bs1: BeamSplitter
    detectors1: DetectorPair
    bs2: BeamSplitter
    detectors2: DetectorPair
    lo: complex
    bs_lo: BeamSplitter = field(default_factory=lambda: BeamSplitter(0.5))

    def __post_init__(self) -> None:
        if abs(self.lo) <= 0.0 or not math.isfinite(abs(self.lo)):
            raise DomainError("local oscillator amplitude must be nonzero and finite")

    @property
    def phi(self) -> float:
        """Local oscillator phase ``φ = arg α_L``."""
        return math.atan2(self.lo.imag, self.lo.real)

    @property
    def q(self) -> float:
        """Imbalance (reflection-to-transmission) ratio ``q = S_S²/C_S²``."""
        t = self.bs_signal.transmittance_sq
        return (1.0 - t) / t

    def arm_inputs(self, alpha: complex) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
        """Return ``((α⁽¹⁾, α_L⁽¹⁾), (α⁽²⁾, α_L⁽²⁾))``: signal and LO entering each arm."""
        a1 = self.bs_signal.c * alpha
        a2 = self.bs_signal.s * alpha
        l1 = self.bs_lo.c * self.lo
        l2 = -1j * self.bs_lo.s * self.lo
        return (a1, l1), (a2, l2)

    def arm_configs(self) -> tuple[HomodyneConfig, HomodyneConfig]:
        """The two homodyne arms as standalone configurations (arm-local LOs)."""
        (_, l1), (_, l2) = self.arm_inputs(0.0)
        arm1 = HomodyneConfig(self.bs1, self.detectors1, l1)
        arm2 = HomodyneConfig(self.bs2, self.detectors2, l2)
        return arm1, arm2


@dataclass(frozen=True)
class SignalState:
    """Signal-mode state: a coherent state ``|α⟩`` or a Fock state ``|n⟩`` (n ≤ 2)."""

    kind: str
    alpha: complex = 0.0
    n: int = 0

    MAX_FOCK = 2

    def __post_init__(self) -> None:
        if self.kind not in ("coherent", "fock"):
            raise DomainError(f"signal state kind must be 'coherent' or 'fock', got {self.kind!r}")
        if self.kind == "fock" and not (0 <= self.n <= self.MAX_FOCK):
            raise DomainError(
                f"Fock signal states are supported for n in [0, {self.MAX_FOCK}], got n={self.n}"
            )

    @classmethod
    def coherent(cls, alpha: complex) -> "SignalState":
        return cls(kind="coherent", alpha=complex(alpha))

    @classmethod
    def fock(cls, n: int) -> "SignalState":
        return cls(kind="fock", n=int(n))


def output_amplitudes(cfg: HomodyneConfig, alpha: complex) -> tuple[complex, complex]:
    """Amplitudes ``(α₁, α₂) = (Cα + Sα_L, −Sα + Cα_L)`` leaving the beam splitter."""
    c, s = cfg.bs.c, cfg.bs.s
    alpha = complex(alpha)
    return c * alpha + s * cfg.lo, -s * alpha + c * cfg.lo


def detected_intensities(cfg: HomodyneConfig, alpha: complex) -> tuple[float, float]:
    """Mean photocounts ``λ_i = η_i |α_i|²`` registered by the two detectors."""
    a1, a2 = output_amplitudes(cfg, alpha)
    return cfg.detectors.eta1 * abs(a1) ** 2, cfg.detectors.eta2 * abs(a2) ** 2
