"""HTTP service surface: endpoints, payload validation, and error mapping."""

from __future__ import annotations

import math
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from asymrx import __version__
from asymrx.presets import PRESETS, get_preset
from asymrx.service.app import create_app

HOMODYNE = {
    "type": "homodyne",
    "bs_transmittance": 0.5,
    "eta1": 1.0,
    "eta2": 1.0,
    "lo_amp": 5.0,
    "lo_phase": 0.0,
}

DOUBLE_HOMODYNE = {
    "type": "double_homodyne",
    "bs_signal": 0.5,
    "bs_lo": 0.5,
    "arm1": {"bs_transmittance": 0.5, "eta1": 1.0, "eta2": 1.0},
    "arm2": {"bs_transmittance": 0.5, "eta1": 1.0, "eta2": 1.0},
    "lo_amp": 5.0,
    "lo_phase": 0.0,
}

CHANNEL = {"transmittance": 0.95, "xi": 0.001}
PROTOCOL = {"v_a": 1.0, "beta": 0.95}


@pytest.fixture(scope="module")
def client():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with TestClient(create_app(), raise_server_exceptions=False) as c:
            yield c


class TestInfrastructure:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok", "version": __version__}

    def test_presets_listing(self, client):
        resp = client.get("/v1/presets")
        assert resp.status_code == 200
        presets = resp.json()["presets"]
        names = {p["name"] for p in presets}
        assert names == set(PRESETS)
        for p in presets:
            assert p["command"] in {"dist", "tvd", "security"}
            assert p["description"]
            assert p["config"] == get_preset(p["name"])["config"]


class TestDistEndpoint:
    def test_homodyne_coherent(self, client):
        resp = client.post(
            "/v1/dist",
            json={"receiver": HOMODYNE, "signal": {"type": "coherent", "re": 0.5, "im": 0.0}},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["columns"] == ["mu", "exact", "gaussian", "bessel_gaussian"]
        total = sum(row[1] for row in body["rows"])
        assert total == pytest.approx(1.0, abs=1e-8)
        # Integer count offsets, contiguous window.
        mus = [row[0] for row in body["rows"]]
        assert mus == sorted(mus)
        assert mus[-1] - mus[0] == len(mus) - 1

    def test_homodyne_fock(self, client):
        resp = client.post(
            "/v1/dist",
            json={"receiver": HOMODYNE, "signal": {"type": "fock", "n": 1}},
        )
        assert resp.status_code == 200
        body = resp.json()
        total = sum(row[1] for row in body["rows"])
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_double_homodyne_joint(self, client):
        resp = client.post(
            "/v1/dist",
            json={
                "receiver": DOUBLE_HOMODYNE,
                "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["columns"] == ["mu1", "mu2", "prob"]
        total = sum(row[2] for row in body["rows"])
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_double_homodyne_fock_unsupported(self, client):
        resp = client.post(
            "/v1/dist",
            json={"receiver": DOUBLE_HOMODYNE, "signal": {"type": "fock", "n": 1}},
        )
        assert resp.status_code == 400
        assert resp.json()["detail"]["kind"] == "config"

    def test_fock_order_capped(self, client):
        resp = client.post(
            "/v1/dist", json={"receiver": HOMODYNE, "signal": {"type": "fock", "n": 3}}
        )
        assert resp.status_code == 422

    def test_unknown_receiver_type(self, client):
        resp = client.post(
            "/v1/dist",
            json={
                "receiver": {"type": "heterodyne"},
                "signal": {"type": "coherent", "re": 0.1, "im": 0.0},
            },
        )
        assert resp.status_code == 400
        assert resp.json()["detail"]["kind"] == "config"

    def test_extra_fields_rejected(self, client):
        receiver = dict(HOMODYNE, dark_counts=0.1)
        resp = client.post(
            "/v1/dist",
            json={"receiver": receiver, "signal": {"type": "coherent", "re": 0.1, "im": 0.0}},
        )
        assert resp.status_code == 400


class TestTvdEndpoint:
    def test_lo_amp_sweep(self, client):
        resp = client.post(
            "/v1/tvd",
            json={
                "receiver": HOMODYNE,
                "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
                "sweep": {"axis": "lo_amp", "start": 2.0, "stop": 8.0, "steps": 4},
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["columns"] == ["axis_value", "d_p", "d_s", "status"]
        assert len(body["rows"]) == 4
        assert [row[0] for row in body["rows"]] == [2.0, 4.0, 6.0, 8.0]
        d_p = [row[1] for row in body["rows"]]
        assert all(b < a for a, b in zip(d_p, d_p[1:]))  # decays with LO power
        assert all(row[3] == "" for row in body["rows"])

    def test_grid_sweep_preserves_order(self, client):
        grid = [5.0, 2.0, 9.0]
        resp = client.post(
            "/v1/tvd",
            json={
                "receiver": HOMODYNE,
                "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
                "sweep": {"axis": "lo_amp", "grid": grid},
            },
        )
        assert resp.status_code == 200
        assert [row[0] for row in resp.json()["rows"]] == grid

    def test_requires_homodyne_receiver(self, client):
        resp = client.post(
            "/v1/tvd",
            json={
                "receiver": DOUBLE_HOMODYNE,
                "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
                "sweep": {"axis": "lo_amp", "start": 2.0, "stop": 8.0, "steps": 3},
            },
        )
        assert resp.status_code == 400

    def test_security_axis_rejected_for_tvd(self, client):
        resp = client.post(
            "/v1/tvd",
            json={
                "receiver": HOMODYNE,
                "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
                "sweep": {"axis": "bs_transmittance", "start": 0.2, "stop": 0.8, "steps": 3},
            },
        )
        assert resp.status_code in (400, 422)

    def test_sweep_requires_range_xor_grid(self, client):
        base = {
            "receiver": HOMODYNE,
            "signal": {"type": "coherent", "re": 0.5, "im": 0.0},
        }
        resp = client.post(
            "/v1/tvd", json={**base, "sweep": {"axis": "lo_amp", "grid": [2.0], "start": 1.0}}
        )
        assert resp.status_code in (400, 422)
        resp = client.post("/v1/tvd", json={**base, "sweep": {"axis": "lo_amp"}})
        assert resp.status_code in (400, 422)


class TestSecurityEndpoint:
    def test_bs_sweep_homodyne(self, client):
        resp = client.post(
            "/v1/security",
            json={
                "receiver": HOMODYNE,
                "channel": CHANNEL,
                "protocol": PROTOCOL,
                "sweep": {"axis": "bs_transmittance", "start": 0.3, "stop": 0.7, "steps": 5},
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["columns"] == [
            "axis_value",
            "I_AB",
            "chi",
            "K",
            "r_opt",
            "nu1",
            "nu2",
            "nu3",
            "status",
        ]
        rows = body["rows"]
        assert len(rows) == 5
        assert all(row[-1] == "" for row in rows)
        ks = [row[3] for row in rows]
        assert max(ks) == ks[2]  # balanced splitter is optimal for equal detectors

    def test_channel_length_sweep(self, client):
        resp = client.post(
            "/v1/security",
            json={
                "receiver": HOMODYNE,
                "channel": {"xi": 0.001},
                "protocol": PROTOCOL,
                "sweep": {"axis": "channel_length", "start": 0.0, "stop": 50.0, "steps": 3},
            },
        )
        assert resp.status_code == 200
        rows = resp.json()["rows"]
        ks = [row[3] for row in rows]
        assert all(b < a for a, b in zip(ks, ks[1:]))  # key rate decays with distance

    def test_channel_length_conflicts_with_fixed_transmittance(self, client):
        resp = client.post(
            "/v1/security",
            json={
                "receiver": HOMODYNE,
                "channel": CHANNEL,
                "protocol": PROTOCOL,
                "sweep": {"axis": "channel_length", "start": 0.0, "stop": 50.0, "steps": 3},
            },
        )
        assert resp.status_code == 400

    def test_missing_transmittance_without_length_sweep(self, client):
        resp = client.post(
            "/v1/security",
            json={
                "receiver": HOMODYNE,
                "channel": {"xi": 0.001},
                "protocol": PROTOCOL,
                "sweep": {"axis": "bs_transmittance", "start": 0.3, "stop": 0.7, "steps": 3},
            },
        )
        assert resp.status_code == 400

    def test_squeezing_axis_requires_double_homodyne(self, client):
        resp = client.post(
            "/v1/security",
            json={
                "receiver": HOMODYNE,
                "channel": CHANNEL,
                "protocol": PROTOCOL,
                "sweep": {"axis": "squeezing_r", "start": 0.0, "stop": 0.4, "steps": 3},
            },
        )
        assert resp.status_code == 400

    def test_status_column_reports_failed_points(self, client):
        # An inadmissible fixed decomposition fails with a domain code per row
        # instead of failing the whole sweep.
        receiver = dict(DOUBLE_HOMODYNE, bs_signal=1.0 / 3.0)
        resp = client.post(
            "/v1/security",
            json={
                "receiver": receiver,
                "channel": CHANNEL,
                "protocol": dict(PROTOCOL, fixed_r=0.0),
                "sweep": {"axis": "bs_transmittance", "grid": [1.0 / 3.0]},
            },
        )
        assert resp.status_code == 200
        row = resp.json()["rows"][0]
        assert row[3] is None  # K is NaN -> null
        assert row[-1] == "nu_below_one"

    def test_fixed_r_rejected_for_homodyne(self, client):
        resp = client.post(
            "/v1/security",
            json={
                "receiver": HOMODYNE,
                "channel": CHANNEL,
                "protocol": dict(PROTOCOL, fixed_r=0.1),
                "sweep": {"axis": "bs_transmittance", "start": 0.3, "stop": 0.7, "steps": 3},
            },
        )
        assert resp.status_code == 400


class TestValidateEndpoint:
    def test_full_battery_passes(self, client):
        resp = client.post("/v1/validate", json={"seed": 12345})
        assert resp.status_code == 200
        body = resp.json()
        assert body["passed"] is True
        assert len(body["checks"]) == 8
        assert all(c["passed"] for c in body["checks"])
        names = [c["name"] for c in body["checks"]]
        assert len(names) == len(set(names))


class TestPresetsRunnable:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_preset_round_trips_through_service(self, client, name):
        preset = get_preset(name)
        resp = client.post(f"/v1/{preset['command']}", json=preset["config"])
        assert resp.status_code == 200, resp.text
        rows = resp.json()["rows"]
        assert rows
        if preset["command"] in {"tvd", "security"}:
            # At least one point of every shipped sweep must succeed.
            assert any(row[-1] == "" for row in rows)
