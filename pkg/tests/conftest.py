"""Shared fixtures: a clean environment and an independent reference graph."""

import itertools

import networkx as nx
import pytest
from loguru import logger

from src.config import Config

@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for variable in Config.ENV_OVERRIDES:
        monkeypatch.delenv(variable, raising=False)
    yield
    logger.remove()


def _reference_sierpinski(n: int, t: int) -> nx.Graph:
    """S(K_n, t) from its recursive definition: n copies of S(K_n, t-1) plus bridges."""
    graph = nx.complete_graph([(i,) for i in range(1, n + 1)])
    for level in range(2, t + 1):
        nxt = nx.Graph()
        for i in range(1, n + 1):
            nxt.add_nodes_from((i,) + v for v in graph.nodes)
            nxt.add_edges_from(((i,) + u, (i,) + v) for u, v in graph.edges)
        for i, j in itertools.permutations(range(1, n + 1), 2):
            nxt.add_edge((i,) + (j,) * (level - 1), (j,) + (i,) * (level - 1))
        graph = nxt
    return graph


@pytest.fixture
def reference_graph():
    return _reference_sierpinski


@pytest.fixture
def words():
    """Parse a list of dot-separated words into tuples."""
    def parse(*texts):
        return [tuple(int(part) for part in text.split(".")) for text in texts]
    return parse


@pytest.fixture
def cli_config(tmp_path):
    """Path of a config file that does not exist yet, so defaults apply."""
    return tmp_path / "sdom_config.yml"
