"""
Chains, finite trees, growth by leaves and line graphs.

Vertices are 0-indexed. A tree carries a root and the parent map obtained by breadth-first
traversal from it; the parent of ``x`` is the predecessor of ``x`` on the unique path from
the root.
"""

from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Sequence

import networkx as nx
import numpy as np

from .errors import (
    CycleError,
    DisconnectedError,
    DuplicateEdgeError,
    InvalidSizeError,
    NotNestedError,
    RootOutOfRangeError,
    VertexOutOfRangeError,
)
from .schemas import TREE_SCHEMA, validate_input

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class TreeGraph:
    vertex_count: int
    edges: tuple[Edge, ...]
    root: int
    # parents[x] is the parent of x, -1 at the root
    parents: tuple[int, ...]

    @property
    def parent(self) -> dict[int, int]:
        return {x: p for x, p in enumerate(self.parents) if p >= 0}

    def neighbors(self, vertex: int) -> list[int]:
        out = [v for u, v in self.edges if u == vertex]
        out.extend(u for u, v in self.edges if v == vertex)
        return sorted(out)

    def degree(self, vertex: int) -> int:
        return len(self.neighbors(vertex))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges)
        return graph

    def to_document(self) -> dict[str, Any]:
        return {
            "vertices": self.vertex_count,
            "edges": [list(e) for e in self.edges],
            "root": self.root,
        }


@dataclass(frozen=True)
class LineGraph:
    vertices: tuple[Edge, ...]
    adjacency: frozenset[tuple[int, int]]

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def adjacency_matrix(self) -> np.ndarray:
        mat = np.zeros((self.vertex_count, self.vertex_count))
        for i, j in self.adjacency:
            mat[i, j] = mat[j, i] = 1.0
        return mat


def _bfs_parents(vertex_count: int, edges: Sequence[Edge], root: int) -> tuple[int, ...]:
    graph = nx.Graph()
    graph.add_nodes_from(range(vertex_count))
    graph.add_edges_from(edges)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        pass
    else:
        raise CycleError(f"Cycle detected through edge `{_norm(*cycle[0][:2])}`")

    reached = nx.node_connected_component(graph, root)
    if len(reached) < vertex_count:
        missing = sorted(set(range(vertex_count)) - reached)
        raise DisconnectedError(f"Vertices {missing} are not reachable from root `{root}`")

    predecessors = dict(nx.bfs_predecessors(graph, root))
    return tuple(predecessors.get(x, -1) for x in range(vertex_count))


def build_chain(L: int) -> TreeGraph:
    """Path 0–1–…–(L−1) rooted at 0."""
    if L < 2:
        raise InvalidSizeError(f"A chain needs at least 2 sites, got `{L}`")
    edges = tuple((x, x + 1) for x in range(L - 1))
    return TreeGraph(L, edges, 0, tuple(x - 1 for x in range(L)))


def parse_tree(
    edge_list: Iterable[Sequence[int]],
    root: int = 0,
    vertex_count: Optional[int] = None,
) -> TreeGraph:
    """
    Validate an edge list and build a rooted tree.

    Raises:
        VertexOutOfRangeError, CycleError, DuplicateEdgeError, RootOutOfRangeError,
        DisconnectedError
    """
    raw = [tuple(int(x) for x in e) for e in edge_list]
    if vertex_count is None:
        vertex_count = max((max(e) for e in raw), default=-1) + 1
    if vertex_count < 2:
        raise InvalidSizeError(f"A tree needs at least 2 vertices, got `{vertex_count}`")

    seen: set[Edge] = set()
    edges: list[Edge] = []
    for e in raw:
        if len(e) != 2:
            raise VertexOutOfRangeError(f"Edge `{e}` must have two endpoints")
        u, v = e
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise VertexOutOfRangeError(f"Edge `{e}` leaves the vertex range 0..{vertex_count - 1}")
        if u == v:
            raise CycleError(f"Self-loop at vertex `{u}`")
        key = _norm(u, v)
        if key in seen:
            raise DuplicateEdgeError(f"Edge `{key}` listed twice")
        seen.add(key)
        edges.append(key)

    if not 0 <= root < vertex_count:
        raise RootOutOfRangeError(f"Root `{root}` outside 0..{vertex_count - 1}")

    parents = _bfs_parents(vertex_count, edges, root)
    return TreeGraph(vertex_count, tuple(sorted(edges)), root, parents)


def tree_from_document(document: Mapping[str, Any]) -> TreeGraph:
    """Tree file format: ``{"vertices": L, "edges": [[u, v], ...], "root": r}``."""
    validate_input(document, TREE_SCHEMA, "tree document")
    return parse_tree(
        document["edges"], root=int(document.get("root", 0)), vertex_count=document["vertices"]
    )


def tree_from_networkx(graph: nx.Graph, root: int = 0) -> TreeGraph:
    mapping = {v: i for i, v in enumerate(sorted(graph.nodes))}
    edges = [(mapping[u], mapping[v]) for u, v in graph.edges]
    return parse_tree(edges, root=root, vertex_count=len(mapping))


def line_graph(tree: TreeGraph) -> LineGraph:
    """Vertices are the tree edges in sorted order; adjacent iff they share a tree vertex."""
    vertices = tuple(sorted(tree.edges))
    index = {edge: i for i, edge in enumerate(vertices)}
    lg = nx.line_graph(tree.to_networkx())
    adjacency: set[tuple[int, int]] = set()
    for a, b in lg.edges:
        i, j = sorted((index[_norm(*a)], index[_norm(*b)]))
        adjacency.add((i, j))
    return LineGraph(vertices, frozenset(adjacency))


def add_leaf(tree: TreeGraph, attach: int) -> TreeGraph:
    """Append vertex ``tree.vertex_count`` as a pendant of ``attach``."""
    if not 0 <= attach < tree.vertex_count:
        raise VertexOutOfRangeError(f"Attach vertex `{attach}` outside 0..{tree.vertex_count - 1}")
    new = tree.vertex_count
    return TreeGraph(
        tree.vertex_count + 1,
        tuple(sorted(tree.edges + ((attach, new),))),
        tree.root,
        tree.parents + (attach,),
    )


def restrict(tree: TreeGraph, vertex_count: int) -> TreeGraph:
    """Induced subgraph on vertices ``0..vertex_count-1`` (must stay connected)."""
    if not 2 <= vertex_count <= tree.vertex_count:
        raise InvalidSizeError(
            f"Cannot restrict a {tree.vertex_count}-vertex tree to `{vertex_count}`"
        )
    if tree.root >= vertex_count:
        raise RootOutOfRangeError(f"Root `{tree.root}` is not among the kept vertices")
    edges = [e for e in tree.edges if e[1] < vertex_count]
    return parse_tree(edges, root=tree.root, vertex_count=vertex_count)


def is_nested(smaller: TreeGraph, larger: TreeGraph) -> bool:
    """True if ``smaller`` is the induced subgraph of ``larger`` on its first vertices."""
    if larger.vertex_count != smaller.vertex_count + 1:
        return False
    try:
        return restrict(larger, smaller.vertex_count).edges == smaller.edges
    except (DisconnectedError, RootOutOfRangeError, CycleError):
        return False


def check_growth_sequence(sequence: Sequence[TreeGraph]) -> None:
    for k in range(len(sequence) - 1):
        if not is_nested(sequence[k], sequence[k + 1]):
            raise NotNestedError(
                f"Tree #{k + 1} is not the induced subgraph of tree #{k + 2}", position=k
            )


def grow(tree: TreeGraph, attachments: Iterable[int]) -> list[TreeGraph]:
    """Growth sequence starting at ``tree`` and adding one leaf per attachment."""
    out = [tree]
    for vertex in attachments:
        out.append(add_leaf(out[-1], vertex))
    return out


def laplacian(tree: TreeGraph) -> np.ndarray:
    return np.asarray(
        nx.laplacian_matrix(tree.to_networkx(), nodelist=range(tree.vertex_count)).toarray(),
        dtype=float,
    )
