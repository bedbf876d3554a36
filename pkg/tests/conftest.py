"""Shared fixtures and helper strategies for the test suite."""

from __future__ import annotations

import pytest

from asymrx.receivers import (
    BeamSplitter,
    DetectorPair,
    DoubleHomodyneConfig,
    HomodyneConfig,
)


@pytest.fixture
def balanced_ideal() -> HomodyneConfig:
    """Balanced beam splitter, unit-efficiency detectors, real LO of amplitude 5."""
    return HomodyneConfig(BeamSplitter(0.5), DetectorPair(1.0, 1.0), 5.0 + 0.0j)


@pytest.fixture
def asym_lossy() -> HomodyneConfig:
    """Unbalanced splitter (C^2=0.6) with mismatched efficiencies (1, 0.75)."""
    return HomodyneConfig(BeamSplitter(0.6), DetectorPair(1.0, 0.75), 5.0 + 0.0j)


def make_homodyne(
    c2: float = 0.5,
    eta1: float = 1.0,
    eta2: float = 1.0,
    lo: complex = 5.0 + 0.0j,
) -> HomodyneConfig:
    return HomodyneConfig(BeamSplitter(c2), DetectorPair(eta1, eta2), lo)


def make_double_homodyne(
    cs2: float = 0.5,
    arm_c2: tuple[float, float] = (0.5, 0.5),
    etas1: tuple[float, float] = (1.0, 1.0),
    etas2: tuple[float, float] = (1.0, 1.0),
    lo: complex = 5.0 + 0.0j,
    cl2: float = 0.5,
) -> DoubleHomodyneConfig:
    return DoubleHomodyneConfig(
        bs_signal=BeamSplitter(cs2),
        bs1=BeamSplitter(arm_c2[0]),
        detectors1=DetectorPair(*etas1),
        bs2=BeamSplitter(arm_c2[1]),
        detectors2=DetectorPair(*etas2),
        lo=lo,
        bs_lo=BeamSplitter(cl2),
    )


@pytest.fixture
def dh_ideal_balanced() -> DoubleHomodyneConfig:
    return make_double_homodyne()


@pytest.fixture
def dh_imbalanced() -> DoubleHomodyneConfig:
    """Signal splitter C_S^2 = 1/3 (q = 2), ideal balanced arms."""
    return make_double_homodyne(cs2=1.0 / 3.0)
