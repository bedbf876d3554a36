"""Asymmetric optical receivers: photocount statistics, Gaussian POVMs, CV-QKD security.

The package models homodyne and double-homodyne (eight-port) receivers built
from unbalanced beam splitters and detectors with mismatched quantum
efficiencies.  It provides:

- exact photocount-difference statistics (Skellam laws) and Monte Carlo
  sampling (:mod:`asymrx.photostat`),
- Gaussian approximations and quadrature mappings (:mod:`asymrx.gauss_approx`),
- statistical-distance diagnostics (:mod:`asymrx.metrics`),
- measurement POVM reconstruction with coherent- and squeezed-state noise
  representations (:mod:`asymrx.povm`),
- asymptotic secret-fraction analysis for Gaussian-modulated coherent-state
  QKD with untrusted measurement noise (:mod:`asymrx.security`),
- an HTTP service (:mod:`asymrx.service`) and a CLI front end
  (:mod:`asymrx.cli`).
"""

from asymrx.receivers import (
    BeamSplitter,
    DetectorPair,
    DoubleHomodyneConfig,
    HomodyneConfig,
    SignalState,
    output_amplitudes,
)

__version__ = "0.1.0"

__all__ = [
    "BeamSplitter",
    "DetectorPair",
    "HomodyneConfig",
    "DoubleHomodyneConfig",
    "SignalState",
    "output_amplitudes",
    "__version__",
]
