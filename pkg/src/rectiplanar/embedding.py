"""Plane embeddings as rotation systems, face tracing, outerplane embeddings,
and the extended dual tree of an outerplane embedding.

Conventions
-----------
* A rotation lists the edge ids incident to a vertex in clockwise order.
* A dart is a directed edge encoded as ``2*eid + b``: with (u, v) = edges[eid]
  and u < v, bit b = 0 means the dart runs u -> v, b = 1 means v -> u.
* Face tracing: after arriving at v along edge e, the walk continues along the
  edge immediately after e in v's clockwise rotation.  Every face is one orbit
  of that successor map.
* The outer-face walk of an outerplane embedding lists the boundary vertices in
  clockwise order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import Graph

__all__ = [
    "PlaneEmbedding",
    "OuterplaneEmbedding",
    "ExtendedDualTree",
    "MalformedRotation",
    "NotOuterplanar",
    "NotBiconnected",
    "DisconnectedSubgraph",
    "trace_faces",
    "build_embedding",
    "outerplane_embedding",
    "extended_dual_tree",
    "restrict_embedding",
    "reflect",
]


class MalformedRotation(ValueError):
    pass


class NotOuterplanar(ValueError):
    pass


class NotBiconnected(ValueError):
    pass


class DisconnectedSubgraph(ValueError):
    pass


def dart_tail(g: Graph, d: int) -> int:
    u, v = g.edges[d >> 1]
    return v if d & 1 else u


def dart_head(g: Graph, d: int) -> int:
    u, v = g.edges[d >> 1]
    return u if d & 1 else v


def dart_from(g: Graph, eid: int, tail: int) -> int:
    u, _v = g.edges[eid]
    return 2 * eid + (0 if tail == u else 1)


def trace_faces(g: Graph, rotation) -> list[list[int]]:
    """Orbit decomposition of the face-successor permutation of a rotation system.

    ``rotation`` gives, per vertex, the incident edge ids in clockwise order;
    vertices may list only a subset of their incident edges (used when tracing a
    restriction), but each listed edge must list both endpoints consistently.
    Returns faces as lists of darts.
    """
    edges = g.edges
    present: set[int] = set()
    for v, rot in enumerate(rotation):
        seen_here = set()
        for eid in rot:
            if eid < 0 or eid >= len(edges) or v not in edges[eid]:
                raise MalformedRotation(f"edge {eid} not incident to vertex {v}")
            if eid in seen_here:
                raise MalformedRotation(f"edge {eid} repeated at vertex {v}")
            seen_here.add(eid)
            present.add(eid)
    for eid in present:
        u, v = edges[eid]
        if eid not in rotation[u] or eid not in rotation[v]:
            raise MalformedRotation(f"edge {eid} listed at only one endpoint")

    # next_dart[d] = dart leaving head(d) along the edge after edge(d) in the
    # head's clockwise rotation
    next_dart = [-1] * (2 * len(edges))
    for v, rot in enumerate(rotation):
        deg = len(rot)
        for i in range(deg):
            e_in = rot[i]
            e_out = rot[(i + 1) % deg]
            d_in = 2 * e_in + (1 if v == edges[e_in][0] else 0)  # dart INTO v
            d_out = 2 * e_out + (0 if v == edges[e_out][0] else 1)  # dart FROM v
            next_dart[d_in] = d_out

    faces: list[list[int]] = []
    visited = bytearray(2 * len(edges))
    for eid in sorted(present):
        for d0 in (2 * eid, 2 * eid + 1):
            if visited[d0]:
                continue
            walk = []
            d = d0
            while not visited[d]:
                visited[d] = 1
                walk.append(d)
                d = next_dart[d]
            faces.append(walk)
    return faces


@dataclass(frozen=True)
class PlaneEmbedding:
    """A rotation system with traced faces and a designated outer face.

    The rotation may cover only a subset of the graph's edges (a restriction);
    vertices not incident to any embedded edge have empty rotations.
    """

    graph: Graph
    rotation: tuple[tuple[int, ...], ...]
    faces: tuple[tuple[int, ...], ...]
    outer_face: int

    @property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(e for rot in self.rotation for e in rot)

    def face_of_dart(self) -> dict[int, tuple[int, int]]:
        """dart -> (face id, position of the dart in the face walk)."""
        out: dict[int, tuple[int, int]] = {}
        for f, walk in enumerate(self.faces):
            for j, d in enumerate(walk):
                out[d] = (f, j)
        return out

    def corners(self) -> list[tuple[int, int, int]]:
        """All (face id, position, vertex) corners.

        Corner (f, j) sits at the tail of faces[f][j], between the in-dart
        faces[f][j-1] and the out-dart faces[f][j].
        """
        g = self.graph
        out = []
        for f, walk in enumerate(self.faces):
            for j, d in enumerate(walk):
                out.append((f, j, dart_tail(g, d)))
        return out

    def vertex_corners(self) -> dict[int, list[tuple[int, int]]]:
        """vertex -> list of (face id, position) corners at that vertex."""
        out: dict[int, list[tuple[int, int]]] = {}
        for f, j, v in self.corners():
            out.setdefault(v, []).append((f, j))
        return out

    def embedded_vertices(self) -> list[int]:
        return [v for v in range(self.graph.vertex_count) if self.rotation[v]]

    def outer_walk_vertices(self) -> list[int]:
        g = self.graph
        return [dart_tail(g, d) for d in self.faces[self.outer_face]]

    def faces_of_edge(self, eid: int) -> tuple[int, int]:
        """The (possibly equal) face ids on the two sides of an edge."""
        fmap = self.face_of_dart()
        return (fmap[2 * eid][0], fmap[2 * eid + 1][0])


class OuterplaneEmbedding(PlaneEmbedding):
    pass


def build_embedding(g: Graph, rotation, outer_face_dart: int | None = None,
                    outer_face: int | None = None) -> PlaneEmbedding:
    """Trace the faces of a rotation system and designate the outer face.

    The outer face is named either by index (after tracing) or by one of the
    darts on its walk.
    """
    faces = trace_faces(g, rotation)
    if outer_face is None:
        if outer_face_dart is None:
            raise ValueError("an outer face must be designated")
        outer_face = next(i for i, w in enumerate(faces) if outer_face_dart in w)
    return PlaneEmbedding(
        g, tuple(tuple(r) for r in rotation), tuple(tuple(w) for w in faces), outer_face
    )


def _outer_cycle_of_block(g: Graph, block_vertices: list[int],
                          adj: dict[int, set[int]]) -> list[int]:
    """Hamiltonian boundary cycle of a 2-connected outerplanar block.

    ``adj`` is a mutable vertex -> neighbor-set map for the block; it is
    consumed.  Works by repeatedly peeling degree-2 vertices (recording where
    each peeled vertex sits between its two neighbors) and re-inserting them
    into the shrinking boundary cycle.  Raises NotOuterplanar on failure.
    """
    if len(block_vertices) < 3:
        raise NotBiconnected("a non-trivial block needs at least 3 vertices")
    inserts: list[tuple[int, int, int]] = []  # (v, u, w): v sits between u and w
    alive = set(block_vertices)
    queue = deque(v for v in block_vertices if len(adj[v]) == 2)
    while len(alive) > 2:
        while queue and (queue[0] not in alive or len(adj[queue[0]]) != 2):
            queue.popleft()
        if not queue:
            raise NotOuterplanar("block has no degree-2 vertex to peel")
        v = queue.popleft()
        u, w = adj[v]
        alive.discard(v)
        adj[u].discard(v)
        adj[w].discard(v)
        del adj[v]
        inserts.append((v, u, w))
        if w not in adj[u]:
            adj[u].add(w)
            adj[w].add(u)
        for x in (u, w):
            if len(adj[x]) == 2:
                queue.append(x)
    u0, w0 = alive
    if w0 not in adj[u0]:
        raise NotOuterplanar("peeling left two non-adjacent vertices")
    # rebuild the cycle as a successor map, starting from the base edge
    nxt = {u0: w0, w0: u0}
    for v, u, w in reversed(inserts):
        if nxt.get(u) == w:
            nxt[u] = v
            nxt[v] = w
        elif nxt.get(w) == u:
            nxt[w] = v
            nxt[v] = u
        else:
            raise NotOuterplanar("peeled vertex cannot rejoin the boundary cycle")
    start = block_vertices[0]
    cycle = [start]
    x = nxt[start]
    while x != start:
        cycle.append(x)
        x = nxt[x]
    if len(cycle) != len(block_vertices):
        raise NotOuterplanar("boundary cycle misses some block vertices")
    # deterministic orientation: walk from the smallest vertex to its smaller
    # cycle neighbor first
    if cycle[1] > cycle[-1]:
        cycle = [cycle[0]] + cycle[:0:-1]
    return cycle


def outerplane_embedding(g: Graph) -> OuterplaneEmbedding:
    """The outerplane embedding of a connected outerplanar graph.

    Per 2-connected block the embedding is unique up to reflection; blocks are
    arranged around each cut vertex in block-discovery order.  Raises
    NotOuterplanar if some block admits no boundary Hamiltonian cycle.
    """
    from .graph import block_cut_tree, is_connected, Disconnected

    if not is_connected(g):
        raise Disconnected("outerplane_embedding requires a connected graph")
    if g.vertex_count == 0 or g.edge_count == 0:
        raise NotOuterplanar("nothing to embed: need at least one edge")

    bct = block_cut_tree(g)
    # per-vertex rotation assembled as a concatenation of per-block arcs
    rot_parts: list[list[list[int]]] = [[] for _ in range(g.vertex_count)]
    for b, block in enumerate(bct.block_edges):
        if len(block) == 1:
            eid = block[0]
            u, v = g.edges[eid]
            rot_parts[u].append([eid])
            rot_parts[v].append([eid])
            continue
        verts: set[int] = set()
        adj: dict[int, set[int]] = {}
        eid_of: dict[tuple[int, int], int] = {}
        for eid in block:
            u, v = g.edges[eid]
            verts.update((u, v))
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
            eid_of[(u, v)] = eid_of[(v, u)] = eid
        vlist = sorted(verts)
        cycle = _outer_cycle_of_block(g, vlist, adj)
        m = len(cycle)
        pos = {v: i for i, v in enumerate(cycle)}
        # all block edges must join cycle vertices; order each vertex's block
        # neighbors by increasing clockwise gap along the cycle
        nbrs: dict[int, list[int]] = {v: [] for v in vlist}
        for eid in block:
            u, v = g.edges[eid]
            nbrs[u].append(v)
            nbrs[v].append(u)
        for v in vlist:
            i = pos[v]
            order = sorted(nbrs[v], key=lambda w: (pos[w] - i) % m)
            rot_parts[v].append([eid_of[(v, w)] for w in order])

    rotation = tuple(tuple(e for part in parts for e in part) for parts in rot_parts)
    faces = trace_faces(g, rotation)
    n = g.vertex_count
    outer = None
    for i, walk in enumerate(faces):
        if len({dart_tail(g, d) for d in walk}) == n:
            outer = i
            break
    if outer is None:
        raise NotOuterplanar("no face contains every vertex")
    return OuterplaneEmbedding(
        g, rotation, tuple(tuple(w) for w in faces), outer
    )


@dataclass(frozen=True)
class ExtendedDualTree:
    """Dual tree of an outerplane embedding with the outer-face vertex exploded
    into one leaf per outer edge.

    Node ids: 0..len(cycles)-1 are internal nodes (one per internal face);
    the rest are leaves in outer-walk order.  ``neighbor_at[s][j]`` is the tree
    node across cycle edge j of internal node s, where cycle edge j joins
    cycles[s][j] and cycles[s][(j+1) % len].
    """

    embedding: OuterplaneEmbedding
    cycles: tuple[tuple[int, ...], ...]  # internal node -> face-walk vertex order
    cycle_edge_ids: tuple[tuple[int, ...], ...]  # internal node -> graph edge per position
    neighbor_at: tuple[tuple[int, ...], ...]  # internal node -> tree node per position
    leaf_edges: tuple[int, ...]  # leaf index -> graph edge id on the outer face
    tree_edges: tuple[tuple[int, int, int], ...]  # (node, node, dual graph edge id)

    @property
    def internal_count(self) -> int:
        return len(self.cycles)

    @property
    def node_count(self) -> int:
        return len(self.cycles) + len(self.leaf_edges)

    def neighbors(self, s: int) -> list[tuple[int, int]]:
        """(neighbor node, dual graph edge id) pairs of node s."""
        if s < self.internal_count:
            return list(zip(self.neighbor_at[s], self.cycle_edge_ids[s]))
        leaf = s - self.internal_count
        eid = self.leaf_edges[leaf]
        for a, b, e in self.tree_edges:
            if e == eid and (a == s or b == s):
                return [(b if a == s else a, eid)]
        raise AssertionError("leaf missing from tree_edges")


def extended_dual_tree(o: OuterplaneEmbedding) -> ExtendedDualTree:
    """Build the extended dual tree of the outerplane embedding of a
    2-connected graph."""
    g = o.graph
    outer_walk = o.faces[o.outer_face]
    outer_verts = [dart_tail(g, d) for d in outer_walk]
    if len(outer_verts) != len(set(outer_verts)):
        raise NotBiconnected("a vertex repeats on the outer walk")

    internal_faces = [f for f in range(len(o.faces)) if f != o.outer_face]
    node_of_face = {f: i for i, f in enumerate(internal_faces)}
    fmap = o.face_of_dart()
    n_internal = len(internal_faces)

    leaf_edges = [d >> 1 for d in outer_walk]
    leaf_of_edge = {eid: n_internal + i for i, eid in enumerate(leaf_edges)}

    cycles = []
    cycle_edge_ids = []
    neighbor_at = []
    tree_edges = []
    for s, f in enumerate(internal_faces):
        walk = o.faces[f]
        cycles.append(tuple(dart_tail(g, d) for d in walk))
        eids = tuple(d >> 1 for d in walk)
        cycle_edge_ids.append(eids)
        row = []
        for d in walk:
            eid = d >> 1
            other_face = fmap[d ^ 1][0]
            if other_face == o.outer_face:
                t = leaf_of_edge[eid]
            else:
                t = node_of_face[other_face]
            row.append(t)
            if t > s or t >= n_internal:
                tree_edges.append((s, t, eid))
        neighbor_at.append(tuple(row))

    return ExtendedDualTree(
        o,
        tuple(cycles),
        tuple(cycle_edge_ids),
        tuple(neighbor_at),
        tuple(leaf_edges),
        tuple(tree_edges),
    )


def restrict_embedding(e: PlaneEmbedding, sub) -> tuple[PlaneEmbedding, dict[int, int]]:
    """Restriction of a plane embedding to a connected edge subset.

    Returns the restricted embedding plus the face-correspondence map
    old face id -> new face id (faces merge across removed edges).
    """
    g = e.graph
    sub = frozenset(sub)
    if not sub:
        raise DisconnectedSubgraph("edge subset is empty")
    # connectivity of the induced subgraph
    verts = set()
    for eid in sub:
        verts.update(g.edges[eid])
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for eid in sub:
        u, v = g.edges[eid]
        adj[u].append(v)
        adj[v].append(u)
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != verts:
        raise DisconnectedSubgraph("edge subset induces a disconnected subgraph")

    new_rotation = tuple(
        tuple(eid for eid in rot if eid in sub) for rot in e.rotation
    )
    new_faces = trace_faces(g, new_rotation)

    # merge old faces across removed edges (union-find)
    parent = list(range(len(e.faces)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    fmap_old = e.face_of_dart()
    for eid in e.edge_ids - sub:
        a = find(fmap_old[2 * eid][0])
        b = find(fmap_old[2 * eid + 1][0])
        if a != b:
            parent[a] = b

    new_face_of_dart = {}
    for fid, walk in enumerate(new_faces):
        for d in walk:
            new_face_of_dart[d] = fid
    # representative surviving dart per merge class
    class_new_face: dict[int, int] = {}
    for fid, walk in enumerate(e.faces):
        root = find(fid)
        if root in class_new_face:
            continue
        for d in walk:
            if (d >> 1) in sub:
                class_new_face[root] = new_face_of_dart[d]
                break
    face_map = {}
    for fid in range(len(e.faces)):
        root = find(fid)
        if root not in class_new_face:
            # every dart of the merged region was removed: walk the class again
            for member in range(len(e.faces)):
                if find(member) != root:
                    continue
                for d in e.faces[member]:
                    if (d >> 1) in sub:
                        class_new_face[root] = new_face_of_dart[d]
                        break
                if root in class_new_face:
                    break
        face_map[fid] = class_new_face[root]

    new_outer = face_map[e.outer_face]
    restricted = PlaneEmbedding(
        g, new_rotation, tuple(tuple(w) for w in new_faces), new_outer
    )
    return restricted, face_map


def reflect(e: PlaneEmbedding) -> PlaneEmbedding:
    """Mirror image: all rotations reversed; the outer face keeps its region."""
    new_rotation = tuple(tuple(reversed(rot)) for rot in e.rotation)
    new_faces = trace_faces(e.graph, new_rotation)
    # the reflected outer face contains the reverses of the old outer darts
    marker = e.faces[e.outer_face][0] ^ 1
    new_outer = next(i for i, w in enumerate(new_faces) if marker in w)
    return PlaneEmbedding(
        e.graph, new_rotation, tuple(tuple(w) for w in new_faces), new_outer
    )
