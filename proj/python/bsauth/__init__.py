"""Python bindings for the bsauth base-station certificate library."""

import json

from ._core import (
    DEFAULT_BASE_SIZE,
    SIB1_LIMIT,
    BsauthError,
    base_size_window,
    budget_table,
    distance,
    encoded_size,
    generate_keypair,
    scalability,
    sign,
    suites,
    verify,
)
from . import _core

__all__ = [
    "DEFAULT_BASE_SIZE",
    "SIB1_LIMIT",
    "BsauthError",
    "base_size_window",
    "benchmark",
    "budget_table",
    "distance",
    "encoded_size",
    "generate_keypair",
    "load_key",
    "run_scenario",
    "scalability",
    "sign",
    "suites",
    "verify",
]


def load_key(key_json):
    """Parse key file text into a dict with bytes values."""
    d = json.loads(key_json)
    return {
        "suite": d["suite"],
        "private": bytes.fromhex(d["private"]),
        "public": bytes.fromhex(d["public"]),
    }


def run_scenario(config):
    """Run a scenario given as a dict or JSON text; returns the report dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_core.run_scenario(text))


def benchmark(suite="ecdsa-224", iterations=1000):
    return json.loads(_core.benchmark(suite, iterations))
