"""Composite Gauss-Legendre panels, the low-level rule shared by all integrals."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(a: float, b: float, npanels: int, order: int):
    """Nodes and weights of `npanels` equal Gauss-Legendre panels on [a, b].

    Even orders only, so no node ever lands on a panel midpoint (panel edges
    are the only places callers are allowed to pin singular points).
    """
    order = order + (order % 2)
    x, w = _rule(order)
    edges = np.linspace(a, b, npanels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate(func, a: float, b: float, npanels: int, order: int) -> complex:
    nodes, weights = panel_nodes(a, b, npanels, order)
    return complex(np.sum(np.asarray(func(nodes)) * weights))


def layout(length: float, scale: float, min_nodes: int) -> tuple[int, int]:
    """Panel count and per-panel order resolving features of size `scale`."""
    by_scale = np.ceil(length / max(scale, 1e-12))
    by_nodes = np.ceil(min_nodes / 24)
    npanels = int(np.clip(max(by_scale, by_nodes), 4, 4096))
    order = max(10, int(np.ceil(min_nodes / npanels)))
    return npanels, order + (order % 2)
