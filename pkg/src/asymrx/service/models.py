"""Pydantic request/response models for the HTTP service.

These models define the JSON configuration schema shared by the service and
the CLI: ``receiver``, ``signal``, ``channel``, ``protocol`` and ``sweep``
sections.  Converters build the frozen dataclasses used by the numerical core.
"""

from __future__ import annotations

import cmath
import math
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigError
from ..receivers import (
    BeamSplitter,
    DetectorPair,
    DoubleHomodyneConfig,
    HomodyneConfig,
    SignalState,
)
from ..security import ChannelParams, ProtocolParams, length_to_transmittance


class StrictModel(BaseModel):
    """Base model that rejects unknown keys (typos fail loudly)."""

    model_config = ConfigDict(extra="forbid")


# --------------------------------------------------------------------------
# Receiver section
# --------------------------------------------------------------------------


class HomodyneReceiverModel(StrictModel):
    type: Literal["homodyne"] = "homodyne"
    bs_transmittance: float = Field(0.5, gt=0.0, lt=1.0, description="C^2 of the mixing splitter")
    eta1: float = Field(1.0, gt=0.0, le=1.0)
    eta2: float = Field(1.0, gt=0.0, le=1.0)
    lo_amp: float = Field(5.0, gt=0.0, description="|alpha_L|")
    lo_phase: float = Field(0.0, description="arg(alpha_L) in radians")

    def to_config(self) -> HomodyneConfig:
        lo = self.lo_amp * cmath.exp(1j * self.lo_phase)
        return HomodyneConfig(
            bs=BeamSplitter(self.bs_transmittance),
            detectors=DetectorPair(self.eta1, self.eta2),
            lo=lo,
        )


class ArmModel(StrictModel):
    bs_transmittance: float = Field(0.5, gt=0.0, lt=1.0)
    eta1: float = Field(1.0, gt=0.0, le=1.0)
    eta2: float = Field(1.0, gt=0.0, le=1.0)


class DoubleHomodyneReceiverModel(StrictModel):
    type: Literal["double_homodyne"] = "double_homodyne"
    bs_signal: float = Field(0.5, gt=0.0, lt=1.0, description="C_S^2 of the signal splitter")
    bs_lo: float = Field(0.5, gt=0.0, lt=1.0, description="C_L^2 of the LO splitter")
    arm1: ArmModel = Field(default_factory=ArmModel)
    arm2: ArmModel = Field(default_factory=ArmModel)
    lo_amp: float = Field(5.0, gt=0.0)
    lo_phase: float = Field(0.0)

    def to_config(self) -> DoubleHomodyneConfig:
        lo = self.lo_amp * cmath.exp(1j * self.lo_phase)
        return DoubleHomodyneConfig(
            bs_signal=BeamSplitter(self.bs_signal),
            bs1=BeamSplitter(self.arm1.bs_transmittance),
            detectors1=DetectorPair(self.arm1.eta1, self.arm1.eta2),
            bs2=BeamSplitter(self.arm2.bs_transmittance),
            detectors2=DetectorPair(self.arm2.eta1, self.arm2.eta2),
            lo=lo,
            bs_lo=BeamSplitter(self.bs_lo),
        )


ReceiverModel = Union[HomodyneReceiverModel, DoubleHomodyneReceiverModel]


def receiver_from_dict(data: Dict[str, Any]) -> ReceiverModel:
    kind = data.get("type", "homodyne")
    if kind == "homodyne":
        return HomodyneReceiverModel.model_validate(data)
    if kind == "double_homodyne":
        return DoubleHomodyneReceiverModel.model_validate(data)
    raise ConfigError(f"receiver type must be 'homodyne' or 'double_homodyne', got {kind!r}")


# --------------------------------------------------------------------------
# Signal / channel / protocol sections
# --------------------------------------------------------------------------


class SignalModel(StrictModel):
    type: Literal["coherent", "fock"] = "coherent"
    re: float = 0.0
    im: float = 0.0
    n: int = Field(0, ge=0, le=SignalState.MAX_FOCK)

    def to_state(self) -> SignalState:
        if self.type == "coherent":
            return SignalState.coherent(complex(self.re, self.im))
        return SignalState.fock(self.n)


class ChannelModel(StrictModel):
    transmittance: Optional[float] = Field(None, gt=0.0, le=1.0)
    length_km: Optional[float] = Field(None, ge=0.0)
    xi: float = Field(0.0, ge=0.0, description="excess noise in vacuum units")

    @model_validator(mode="after")
    def _at_most_one(self) -> "ChannelModel":
        if self.transmittance is not None and self.length_km is not None:
            raise ValueError("channel accepts only one of 'transmittance' or 'length_km'")
        return self

    def to_params(self) -> ChannelParams:
        if self.transmittance is None and self.length_km is None:
            raise ConfigError(
                "channel needs 'transmittance' or 'length_km' "
                "(unless a 'channel_length' sweep supplies it)"
            )
        t = (
            self.transmittance
            if self.transmittance is not None
            else length_to_transmittance(self.length_km)
        )
        return ChannelParams(transmittance=t, xi=self.xi)


class ProtocolModel(StrictModel):
    v_a: float = Field(1.0, gt=0.0, description="modulation variance in photon units")
    beta: float = Field(0.95, gt=0.0, lt=1.0, description="reconciliation efficiency")
    fixed_r: Optional[float] = Field(
        None, description="fix the measurement squeezing instead of optimizing (DH only)"
    )

    def to_params(self) -> ProtocolParams:
        return ProtocolParams(v_a=self.v_a, beta=self.beta)


# --------------------------------------------------------------------------
# Sweep section
# --------------------------------------------------------------------------

TVD_AXES = ("signal_amp", "lo_amp", "eta1", "eta2", "imbalance_angle")
SECURITY_AXES = ("bs_transmittance", "channel_length", "squeezing_r")


class SweepModel(StrictModel):
    axis: str
    start: Optional[float] = None
    stop: Optional[float] = None
    steps: Optional[int] = Field(None, ge=1)
    grid: Optional[List[float]] = None

    @model_validator(mode="after")
    def _range_or_grid(self) -> "SweepModel":
        range_fields = (self.start, self.stop, self.steps)
        if self.grid is not None:
            if any(f is not None for f in range_fields):
                raise ValueError("sweep takes either start/stop/steps or a grid, not both")
            if not self.grid:
                raise ValueError("sweep grid must be non-empty")
        elif any(f is None for f in range_fields):
            raise ValueError("sweep needs either start/stop/steps or a non-empty grid")
        return self

    def values(self) -> List[float]:
        if self.grid is not None:
            return [float(v) for v in self.grid]
        if self.steps == 1:
            return [float(self.start)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]


# --------------------------------------------------------------------------
# Requests
# --------------------------------------------------------------------------


class DistRequest(StrictModel):
    receiver: Dict[str, Any]
    signal: SignalModel = Field(default_factory=SignalModel)

    def parsed_receiver(self) -> ReceiverModel:
        return receiver_from_dict(self.receiver)


class TvdRequest(StrictModel):
    receiver: Dict[str, Any] = Field(default_factory=dict)
    signal: SignalModel = Field(default_factory=SignalModel)
    sweep: SweepModel
    threads: int = Field(1, ge=1, le=64)

    def parsed_receiver(self) -> HomodyneReceiverModel:
        rx = receiver_from_dict(self.receiver or {"type": "homodyne"})
        if not isinstance(rx, HomodyneReceiverModel):
            raise ConfigError("tvd sweeps support homodyne receivers only")
        return rx


class SecurityRequest(StrictModel):
    receiver: Dict[str, Any]
    channel: ChannelModel
    protocol: ProtocolModel = Field(default_factory=ProtocolModel)
    sweep: SweepModel
    threads: int = Field(1, ge=1, le=64)

    def parsed_receiver(self) -> ReceiverModel:
        return receiver_from_dict(self.receiver)


class ValidateRequest(StrictModel):
    seed: int = 12345


# --------------------------------------------------------------------------
# Responses
# --------------------------------------------------------------------------

Cell = Union[float, int, str, None]


class TableResponse(StrictModel):
    columns: List[str]
    rows: List[List[Cell]]


class CheckResult(StrictModel):
    name: str
    passed: bool
    detail: str = ""


class ValidateResponse(StrictModel):
    passed: bool
    checks: List[CheckResult]


class PresetInfo(StrictModel):
    name: str
    command: str
    description: str
    config: Dict[str, Any]


class PresetsResponse(StrictModel):
    presets: List[PresetInfo]


def finite_or_none(value: float) -> Optional[float]:
    """Map NaN/inf to ``None`` so JSON stays standard-compliant."""
    v = float(value)
    return v if math.isfinite(v) else None
