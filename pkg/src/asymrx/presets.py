"""Named, ready-to-run configuration presets.

Each preset is a complete configuration document for one CLI subcommand
(``dist``, ``tvd`` or ``security``).  Presets are plain dicts so they can be
serialized to JSON, edited, and fed back through ``--config`` unchanged.
"""

from __future__ import annotations

import copy
from typing import Any, Dict

from .errors import ConfigError

_IDEAL_HOMODYNE = {
    "type": "homodyne",
    "bs_transmittance": 0.5,
    "eta1": 1.0,
    "eta2": 1.0,
    "lo_amp": 5.0,
    "lo_phase": 0.0,
}

_IDEAL_ARM = {"bs_transmittance": 0.5, "eta1": 1.0, "eta2": 1.0}

_IDEAL_DOUBLE_HOMODYNE = {
    "type": "double_homodyne",
    "bs_signal": 0.5,
    "bs_lo": 0.5,
    "arm1": dict(_IDEAL_ARM),
    "arm2": dict(_IDEAL_ARM),
    "lo_amp": 5.0,
    "lo_phase": 0.0,
}

_CHANNEL_FIXED_T = {"transmittance": 0.95, "xi": 0.001}
_PROTOCOL = {"v_a": 1.0, "beta": 0.95}

_BS_SWEEP = {"axis": "bs_transmittance", "start": 0.05, "stop": 0.95, "steps": 91}
_LENGTH_SWEEP = {"axis": "channel_length", "start": 0.0, "stop": 200.0, "steps": 81}


def _homodyne(**overrides: Any) -> Dict[str, Any]:
    rx = copy.deepcopy(_IDEAL_HOMODYNE)
    rx.update(overrides)
    return rx


def _double_homodyne(**overrides: Any) -> Dict[str, Any]:
    rx = copy.deepcopy(_IDEAL_DOUBLE_HOMODYNE)
    for key, value in overrides.items():
        if key in ("arm1", "arm2"):
            rx[key].update(value)
        else:
            rx[key] = value
    return rx


PRESETS: Dict[str, Dict[str, Any]] = {
    # --- photocount distributions -----------------------------------------
    "fig2a": {
        "command": "dist",
        "description": (
            "Photocount difference law of a balanced ideal homodyne receiver for a "
            "weak coherent signal (alpha=0.5, |alpha_L|=5), with both Gaussian-"
            "approximation columns."
        ),
        "config": {
            "receiver": _homodyne(),
            "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
        },
    },
    "fig2a_fock1": {
        "command": "dist",
        "description": "Same receiver as fig2a but for a single-photon signal state.",
        "config": {
            "receiver": _homodyne(),
            "signal": {"type": "fock", "n": 1},
        },
    },
    "fig5a_dh": {
        "command": "dist",
        "description": (
            "Joint photocount-difference law of an ideal balanced double-homodyne "
            "receiver for a coherent signal (alpha=0.5)."
        ),
        "config": {
            "receiver": _double_homodyne(),
            "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
        },
    },
    # --- total-variation sweeps -------------------------------------------
    "appA_amp": {
        "command": "tvd",
        "description": (
            "Total-variation distance between exact and approximate photocount laws "
            "as a function of local-oscillator amplitude (ideal balanced receiver, "
            "coherent alpha=0.5)."
        ),
        "config": {
            "receiver": _homodyne(),
            "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
            "sweep": {"axis": "lo_amp", "start": 2.0, "stop": 10.0, "steps": 33},
        },
    },
    "appB_dtheta": {
        "command": "tvd",
        "description": (
            "Total-variation distance versus beam-splitter imbalance angle "
            "(C^2 = cos^2(pi/4 - dtheta)) for a coherent signal alpha=1, |alpha_L|=10; "
            "contrasts the displaced-Gaussian and Bessel-based approximations."
        ),
        "config": {
            "receiver": _homodyne(lo_amp=10.0),
            "signal": {"type": "coherent", "re": 1.0, "im": 0.0},
            "sweep": {"axis": "imbalance_angle", "start": 0.0, "stop": 0.30, "steps": 31},
        },
    },
    # --- security sweeps ---------------------------------------------------
    "fig6": {
        "command": "security",
        "description": (
            "Homodyne secret fraction versus beam-splitter transmittance C^2 for "
            "ideal detectors (T=0.95, xi=1e-3, V_A=1, beta=0.95)."
        ),
        "config": {
            "receiver": _homodyne(),
            "channel": dict(_CHANNEL_FIXED_T),
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_BS_SWEEP),
        },
    },
    "fig6_eta2_075": {
        "command": "security",
        "description": "fig6 with the second detector efficiency lowered to 0.75.",
        "config": {
            "receiver": _homodyne(eta2=0.75),
            "channel": dict(_CHANNEL_FIXED_T),
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_BS_SWEEP),
        },
    },
    "fig6_eta1_075": {
        "command": "security",
        "description": "fig6 with the first detector efficiency lowered to 0.75.",
        "config": {
            "receiver": _homodyne(eta1=0.75),
            "channel": dict(_CHANNEL_FIXED_T),
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_BS_SWEEP),
        },
    },
    "fig8": {
        "command": "security",
        "description": (
            "Double-homodyne secret fraction versus signal beam-splitter "
            "transmittance C_S^2 for ideal arms (T=0.95, xi=1e-3, V_A=1, beta=0.95); "
            "the optimal measurement squeezing r is reported per point."
        ),
        "config": {
            "receiver": _double_homodyne(),
            "channel": dict(_CHANNEL_FIXED_T),
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_BS_SWEEP),
        },
    },
    "fig8_arm_eta2_075": {
        "command": "security",
        "description": "fig8 with the second detector of each arm lowered to 0.75.",
        "config": {
            "receiver": _double_homodyne(arm1={"eta2": 0.75}, arm2={"eta2": 0.75}),
            "channel": dict(_CHANNEL_FIXED_T),
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_BS_SWEEP),
        },
    },
    "fig9": {
        "command": "security",
        "description": (
            "Homodyne secret key rate versus channel length (0.2 dB/km fiber, "
            "xi=1e-3, V_A=1, beta=0.95) for a balanced ideal receiver."
        ),
        "config": {
            "receiver": _homodyne(),
            "channel": {"xi": 0.001},
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_LENGTH_SWEEP),
        },
    },
    "fig9_eta2_075": {
        "command": "security",
        "description": "fig9 with the second detector efficiency lowered to 0.75.",
        "config": {
            "receiver": _homodyne(eta2=0.75),
            "channel": {"xi": 0.001},
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_LENGTH_SWEEP),
        },
    },
    "fig9_dh": {
        "command": "security",
        "description": "Double-homodyne counterpart of fig9 (ideal balanced arms).",
        "config": {
            "receiver": _double_homodyne(),
            "channel": {"xi": 0.001},
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_LENGTH_SWEEP),
        },
    },
    "fig9_dh_eta2_075": {
        "command": "security",
        "description": "fig9_dh with the second detector of each arm lowered to 0.75.",
        "config": {
            "receiver": _double_homodyne(arm1={"eta2": 0.75}, arm2={"eta2": 0.75}),
            "channel": {"xi": 0.001},
            "protocol": dict(_PROTOCOL),
            "sweep": dict(_LENGTH_SWEEP),
        },
    },
    "fig7_rscan": {
        "command": "security",
        "description": (
            "Double-homodyne Holevo bound versus measurement squeezing r at fixed "
            "C_S^2=0.4 with lossy arm detectors; r values outside the admissible "
            "squeezing interval are reported via the status column."
        ),
        "config": {
            "receiver": _double_homodyne(
                bs_signal=0.4, arm1={"eta2": 0.75}, arm2={"eta2": 0.75}
            ),
            "channel": dict(_CHANNEL_FIXED_T),
            "protocol": dict(_PROTOCOL),
            "sweep": {"axis": "squeezing_r", "start": 0.0, "stop": 0.5, "steps": 21},
        },
    },
}


def preset_names() -> list[str]:
    """Sorted list of available preset names."""
    return sorted(PRESETS)


def get_preset(name: str) -> Dict[str, Any]:
    """Return a deep copy of the named preset (command, description, config)."""
    try:
        entry = PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        ) from None
    return copy.deepcopy(entry)
