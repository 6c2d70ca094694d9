"""Graph storage, validation, and block-cut-vertex decomposition.

Vertices are dense 0-based integers; edge ids are assigned in input order.
Graphs are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class GraphError(ValueError):
    pass


class SelfLoop(GraphError):
    pass


class ParallelEdge(GraphError):
    pass


class VertexIdOutOfRange(GraphError):
    pass


class Disconnected(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with adjacency indexed by vertex id."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]  # edge id -> (u, v) with u < v
    adjacency: tuple[tuple[int, ...], ...]  # vertex id -> incident edge ids

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def other_end(self, eid: int, v: int) -> int:
        u, w = self.edges[eid]
        return w if v == u else u

    def neighbors(self, v: int) -> list[int]:
        return [self.other_end(e, v) for e in self.adjacency[v]]

    def edge_id(self, u: int, v: int) -> int | None:
        for e in self.adjacency[u]:
            if self.other_end(e, u) == v:
                return e
        return None


def build_graph(vertex_count: int, edge_list) -> Graph:
    """Validate an edge list and build a Graph.

    Rejects self-loops, parallel edges and out-of-range vertex ids;
    nothing is silently deduplicated.
    """
    if vertex_count < 0:
        raise VertexIdOutOfRange("vertex_count must be nonnegative")
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    adjacency: list[list[int]] = [[] for _ in range(vertex_count)]
    for eid, (u, v) in enumerate(edge_list):
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise VertexIdOutOfRange(f"edge ({u},{v}) references a vertex >= {vertex_count}")
        if u == v:
            raise SelfLoop(f"edge {eid} is a self-loop at {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ParallelEdge(f"duplicate edge ({key[0]},{key[1]})")
        seen.add(key)
        edges.append(key)
        adjacency[u].append(eid)
        adjacency[v].append(eid)
    return Graph(vertex_count, tuple(edges), tuple(tuple(a) for a in adjacency))


def check_degree_bound(g: Graph) -> bool:
    """True iff every vertex has degree <= 4 (necessary for a rectilinear drawing)."""
    return not g.adjacency or max(map(len, g.adjacency)) <= 4


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    seen = bytearray(g.vertex_count)
    stack = [0]
    seen[0] = 1
    count = 1
    while stack:
        v = stack.pop()
        for eid in g.adjacency[v]:
            w = g.other_end(eid, v)
            if not seen[w]:
                seen[w] = 1
                count += 1
                stack.append(w)
    return count == g.vertex_count


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex lists of the connected components, lowest ids first."""
    seen = bytearray(g.vertex_count)
    comps: list[list[int]] = []
    for start in range(g.vertex_count):
        if seen[start]:
            continue
        seen[start] = 1
        comp = [start]
        stack = [start]
        while stack:
            v = stack.pop()
            for eid in g.adjacency[v]:
                w = g.other_end(eid, v)
                if not seen[w]:
                    seen[w] = 1
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class BlockCutTree:
    """Bipartite tree of blocks (B-nodes) and cut vertices (C-nodes)."""

    block_edges: tuple[tuple[int, ...], ...]  # B-node -> edge ids of its block
    block_trivial: tuple[bool, ...]  # B-node -> block is a single edge
    cut_vertices: tuple[int, ...]  # C-node -> vertex id
    tree_edges: tuple[tuple[int, int], ...]  # (b_node index, c_node index)

    # derived adjacency, built lazily in __post_init__ surrogates
    def block_vertices(self, g: Graph, b: int) -> list[int]:
        vs: set[int] = set()
        for eid in self.block_edges[b]:
            vs.update(g.edges[eid])
        return sorted(vs)

    def blocks_of_cut(self, c: int) -> list[int]:
        return [b for (b, cc) in self.tree_edges if cc == c]

    def cuts_of_block(self, b: int) -> list[int]:
        return [c for (bb, c) in self.tree_edges if bb == b]


def block_cut_tree(g: Graph) -> BlockCutTree:
    """Biconnected-components decomposition of a connected graph (iterative DFS)."""
    if not is_connected(g):
        raise Disconnected("block_cut_tree requires a connected graph")
    n = g.vertex_count
    if n == 0:
        return BlockCutTree((), (), (), ())

    num = [-1] * n  # DFS discovery order
    low = [0] * n
    parent_edge = [-1] * n
    edge_stack: list[int] = []
    blocks: list[list[int]] = []
    is_cut = bytearray(n)
    counter = 0

    # iterative DFS over all vertices (graph is connected: single root)
    root = 0
    num[root] = counter
    low[root] = counter
    counter += 1
    root_children = 0
    # stack frames: (vertex, iterator index into adjacency)
    stack = [(root, 0)]
    while stack:
        v, i = stack[-1]
        if i < len(g.adjacency[v]):
            stack[-1] = (v, i + 1)
            eid = g.adjacency[v][i]
            if eid == parent_edge[v]:
                continue
            w = g.other_end(eid, v)
            if num[w] == -1:
                edge_stack.append(eid)
                parent_edge[w] = eid
                num[w] = counter
                low[w] = counter
                counter += 1
                if v == root:
                    root_children += 1
                stack.append((w, 0))
            elif num[w] < num[v]:
                edge_stack.append(eid)
                if num[w] < low[v]:
                    low[v] = num[w]
        else:
            stack.pop()
            if stack:
                u = stack[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= num[u]:
                    # u separates: pop one biconnected component
                    comp: list[int] = []
                    pe = parent_edge[v]
                    while True:
                        e = edge_stack.pop()
                        comp.append(e)
                        if e == pe:
                            break
                    blocks.append(comp)
                    if u != root:
                        is_cut[u] = 1
    if root_children > 1:
        is_cut[root] = 1

    cut_vertices = [v for v in range(n) if is_cut[v]]
    cut_index = {v: i for i, v in enumerate(cut_vertices)}
    tree_edges: list[tuple[int, int]] = []
    for b, comp in enumerate(blocks):
        vs: set[int] = set()
        for eid in comp:
            vs.update(g.edges[eid])
        for v in vs:
            if is_cut[v]:
                tree_edges.append((b, cut_index[v]))
    return BlockCutTree(
        tuple(tuple(sorted(c)) for c in blocks),
        tuple(len(c) == 1 for c in blocks),
        tuple(cut_vertices),
        tuple(tree_edges),
    )
