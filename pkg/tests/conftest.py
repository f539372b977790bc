"""Shared fixtures: mass profiles and their deformation maps."""

import pytest

from sip_effmass import MuMap, registry_get


@pytest.fixture(scope="session")
def const_profile():
    return registry_get("constant", m0=0.5)


@pytest.fixture(scope="session")
def const_mumap(const_profile):
    return MuMap(const_profile)


@pytest.fixture(scope="session")
def asinh_profile():
    return registry_get("asinh_mu", m0=0.5, alpha=0.1)


@pytest.fixture(scope="session")
def asinh_mumap(asinh_profile):
    return MuMap(asinh_profile)
