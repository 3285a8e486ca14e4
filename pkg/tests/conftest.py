"""Shared configurations and cached expensive results."""
from functools import lru_cache
from importlib import resources

import pytest

from diracrm import oracle, spectrum
from diracrm.cli import load_config

CONFIGS = {
    "TC-1": "tc1_spin.json",
    "TC-2": "tc2_spin_delta0.json",
    "TC-3": "tc3_pseudospin.json",
    "TC-3b": "tc3b_pseudospin_delta0.json",
}


def config_path(name: str) -> str:
    return str(resources.files("diracrm") / "configs" / CONFIGS[name])


@lru_cache(maxsize=None)
def run_config(name: str):
    return load_config(config_path(name))


@lru_cache(maxsize=None)
def hyp_spectrum(name: str):
    rc = run_config(name)
    return tuple(spectrum.solve_spectrum(rc.physical, rc.approx, rc.solver))


@lru_cache(maxsize=None)
def shooting_spectrum(name: str, mode: str):
    rc = run_config(name)
    return tuple(oracle.oracle_spectrum(rc.physical, rc.approx, mode))


@pytest.fixture(params=["TC-1", "TC-2", "TC-3"])
def tc_name(request):
    return request.param
