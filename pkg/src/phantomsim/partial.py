"""Hidden-node samples and the induced partial graph."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from os import PathLike

import numpy as np

from .graph import Graph, GraphError, induced_subgraph


def round_half_up(x: float) -> int:
    # Decimal(str(x)) so that 0.3 * 10 style products round on their printed value
    return int(Decimal(repr(x)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def hidden_count(rho: float, n: int) -> int:
    return round_half_up(rho * n)


@dataclass(frozen=True, eq=False)
class PartialView:
    """Mask of hidden nodes over an oracle graph with ``node_count`` nodes."""

    hidden: np.ndarray
    rho: float
    sample_id: int = 0

    def __post_init__(self):
        self.hidden.setflags(write=False)

    @property
    def node_count(self) -> int:
        return len(self.hidden)

    @property
    def hidden_ids(self) -> np.ndarray:
        return np.flatnonzero(self.hidden)

    @property
    def visible_ids(self) -> np.ndarray:
        return np.flatnonzero(~self.hidden)

    @classmethod
    def from_ids(cls, n: int, ids, rho: float, sample_id: int = 0) -> "PartialView":
        mask = np.zeros(n, dtype=bool)
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= n):
            raise GraphError("hidden id outside graph")
        mask[ids] = True
        return cls(mask, rho, sample_id)


def sample_hidden(g: Graph, rho: float, rng_seed, sample_id: int = 0) -> PartialView:
    """Hide exactly round-half-up(rho * n) nodes chosen uniformly."""
    if not 0.0 <= rho < 1.0:
        raise GraphError(f"rho must lie in [0, 1), got {rho}")
    n = g.node_count
    h = hidden_count(rho, n)
    rng = np.random.default_rng(rng_seed)
    ids = rng.choice(n, size=h, replace=False) if h else np.empty(0, dtype=np.int64)
    return PartialView.from_ids(n, ids, rho, sample_id)


def partial_graph(g: Graph, view: PartialView) -> Graph:
    """Subgraph induced on the visible nodes; ``origin`` maps back to ``g``."""
    if view.node_count != g.node_count:
        raise GraphError(f"view covers {view.node_count} nodes, graph has {g.node_count}")
    return induced_subgraph(g, view.visible_ids)


def write_view(view: PartialView, g: Graph, path: str | PathLike) -> None:
    """Header ``rho sample_id`` then one hidden node label per line."""
    with open(path, "w") as fh:
        fh.write(f"{view.rho!r} {view.sample_id}\n")
        fh.writelines(f"{x}\n" for x in g.labels[view.hidden_ids].tolist())


def read_view(path: str | PathLike, g: Graph) -> PartialView:
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise GraphError(f"{path}: missing 'rho sample_id' header")
    rho, sample_id = float(lines[0][0]), int(lines[0][1])
    labels = [int(ln[0]) for ln in lines[1:]]
    return PartialView.from_ids(g.node_count, g.ids_for_labels(labels), rho, sample_id)
