import os
import numpy as np
import pytest
from statusnet.config import get_settings
from statusnet.inequality import build_communities
from statusnet.models import AltParams, ModelParams, Network

@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees default settings regardless of the caller's environment"""
    for key in list(os.environ):
        if key.startswith("STATUSNET_"):
            monkeypatch.delenv(key, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()

@pytest.fixture
def four_agents():
    """A-pair linked 0.5 both ways, B pair isolated, unit incomes"""
    G = np.zeros((4, 4))
    G[0, 1] = G[1, 0] = 0.5
    return Network(incomes=[1.0] * 4, identities=["A", "A", "B", "B"], G=G)

@pytest.fixture
def params():
    return ModelParams(alpha=2.0, beta=1.0, gamma=1.0)

@pytest.fixture
def alt_params():
    return AltParams(alpha=0.5, beta=1.0, gamma=0.5, w=1.0)

@pytest.fixture
def communities():
    """Four complete triads per identity with unequal link weights among the A communities"""
    weights = [0.3, 0.2, 0.15, 0.2, 0.2, 0.2, 0.2, 0.2]
    return build_communities(4, 3, weight=weights)

@pytest.fixture
def network_dict():
    return {
        "agents": [
            {"id": 0, "income": 1.0, "identity": "A"},
            {"id": 1, "income": 1.0, "identity": "A"},
            {"id": 2, "income": 1.0, "identity": "B"},
            {"id": 3, "income": 1.0, "identity": "B"},
        ],
        "links": [[0, 1, 0.5], [1, 0, 0.5]],
    }
