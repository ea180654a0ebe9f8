import json
import math
from pathlib import Path

import pytest

import bsauth

SCENARIOS = Path(__file__).resolve().parents[2] / "scenarios"


def test_budget_table_default():
    rows = {(r["scheme"], r["suite"]): r for r in bsauth.budget_table()}
    assert all(r["fits"] for (scheme, _), r in rows.items() if scheme == "ours")
    assert rows[("sota", "ECDSA-224")]["fits"]
    for suite in ("ECDSA-256", "ECDSA-384", "ECDSA-521", "ECDSA-571"):
        assert not rows[("sota", suite)]["fits"]
    assert bsauth.base_size_window() == (43, 58)


def test_overhead_is_72_bytes():
    for b in (5, 50, 120, 300):
        assert bsauth.encoded_size("ours", "ecdsa-224", b) - b == 72


def test_scalability():
    r = bsauth.scalability(418900, 0.5)
    assert r["cert_rate"] == pytest.approx(0.02657, abs=1e-4)
    assert r["ledger_growth"] == pytest.approx(1417 * r["cert_rate"])
    with pytest.raises(ValueError):
        bsauth.scalability(1, 0)


def test_sign_verify_round_trip():
    key_json = bsauth.generate_keypair("ecdsa-256", seed=3)
    assert key_json == bsauth.generate_keypair("ecdsa-256", seed=3)
    key = bsauth.load_key(key_json)
    sig = bsauth.sign(key_json, b"hello")
    assert len(sig) == 64
    assert bsauth.verify("ecdsa-256", key["public"], b"hello", sig)
    assert not bsauth.verify("ecdsa-256", key["public"], b"hellO", sig)


def test_errors_are_value_errors():
    with pytest.raises(bsauth.BsauthError):
        bsauth.generate_keypair("rsa")
    with pytest.raises(ValueError):
        bsauth.encoded_size("ours", "ecdsa-1", 10)


def test_distance():
    assert bsauth.distance(0, 0, 0, 180) == pytest.approx(math.pi * 6371000)
    assert bsauth.distance(41.66, -91.53, 41.67, -91.53, "equirectangular") == pytest.approx(
        bsauth.distance(41.66, -91.53, 41.67, -91.53), rel=1e-6
    )


def test_scenario_wormhole_small():
    config = json.loads((SCENARIOS / "wormhole.json").read_text())
    config["trials"] = 5
    report = bsauth.run_scenario(config)
    assert report["outcomes"]["ours"]["wormhole"]["accepted"] == 0
    assert report["outcomes"]["ours"]["wormhole"]["failed_factors"] == {"location_fail": 20}
    assert report["outcomes"]["sota"]["wormhole"]["accepted"] == 20
    assert report["assertions_pass"]
    assert bsauth.run_scenario(config) == report


def test_scenario_config_errors_name_the_field():
    with pytest.raises(ValueError, match="/base_stations/0/latitude"):
        bsauth.run_scenario(
            {"base_stations": [{"cell_id": 1, "latitude": 99, "longitude": 0}]}
        )


def test_benchmark_counts():
    r = bsauth.benchmark("ecdsa-224", 200)
    assert r["ours"]["verifications_per_frame"] == 1
    assert r["sota"]["verifications_per_frame"] == 3
