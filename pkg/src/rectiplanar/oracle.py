"""Brute-force ground truth: exhaustive angle-assignment search per embedding,
complete plane-embedding enumeration for outerplanar graphs, and small-instance
generators for property tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations, product

from .embedding import (
    OuterplaneEmbedding,
    PlaneEmbedding,
    dart_tail,
    extended_dual_tree,
    outerplane_embedding,
    restrict_embedding,
    trace_faces,
)
from .graph import Graph, block_cut_tree, build_graph
from .rectirep import RectilinearRepresentation, validate

__all__ = [
    "CapExceeded",
    "OracleVerdict",
    "oracle_fixed",
    "oracle_variable",
    "enumerate_embeddings",
    "rooted_embeddings",
    "enumerate_outerplanar",
    "random_outerplanar",
]


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleVerdict:
    feasible: bool
    witness: RectilinearRepresentation | None

    def __post_init__(self):
        assert self.feasible == (self.witness is not None)


def has_triangle(g: Graph) -> bool:
    adj = [set(g.neighbors(v)) for v in range(g.vertex_count)]
    return any(adj[u] & adj[v] for u, v in g.edges)


def oracle_fixed(
    g: Graph,
    e: PlaneEmbedding,
    ell=None,
    *,
    chi=None,
    rooted=None,
    cap: int = 12,
) -> OracleVerdict:
    """Exhaustive angle assignment over the corners of embedding e.

    ``ell`` maps (vertex, face id) to a minimum angle in quarters; ``chi`` is a
    set of degree-2 vertices restricted to 90/270 angles; ``rooted`` is
    (edge id, mu, nu) demanding the edge on the outer face with interior angle
    sums mu at the smaller and nu at the larger endpoint.
    """
    if g.vertex_count > cap:
        raise CapExceeded(f"{g.vertex_count} vertices exceeds oracle cap {cap}")
    if g.edge_count == 0:
        # an edgeless (single-vertex) graph has nothing to constrain
        if rooted is not None:
            return OracleVerdict(False, None)
        return OracleVerdict(True, RectilinearRepresentation(e, {}))
    # a 3-cycle can never close up with axis-parallel bend-free edges, in any
    # embedding and any mode
    if has_triangle(g):
        return OracleVerdict(False, None)

    corners = []  # (face, pos, vertex)
    for f, walk in enumerate(e.faces):
        for j, d in enumerate(walk):
            corners.append((f, j, dart_tail(g, d)))
    corner_count_of = {}
    for _f, _j, v in corners:
        corner_count_of[v] = corner_count_of.get(v, 0) + 1

    if rooted is not None:
        eid, mu, nu = rooted
        outer_eids = {d >> 1 for d in e.faces[e.outer_face]}
        if eid not in outer_eids:
            return OracleVerdict(False, None)

    def corner_domain(f, j, v):
        dom = [1, 2, 3]
        if corner_count_of[v] == 1:
            dom.append(4)
        if chi is not None and v in chi:
            dom = [q for q in dom if q in (1, 3)]
        if ell is not None and (v, f) in ell:
            dom = [q for q in dom if q >= ell[(v, f)]]
        if rooted is not None and f == e.outer_face:
            eid, mu, nu = rooted
            a, b = g.edges[eid]
            if v == a:
                dom = [q for q in dom if q == 4 - mu]
            elif v == b:
                dom = [q for q in dom if q == 4 - nu]
        return dom

    # rooted mode presumes a single outer occurrence of each root endpoint
    if rooted is not None:
        eid, mu, nu = rooted
        outer_verts = [dart_tail(g, d) for d in e.faces[e.outer_face]]
        for w in g.edges[eid]:
            if outer_verts.count(w) != 1:
                return OracleVerdict(False, None)

    # search face by face, small faces first
    face_order = sorted(range(len(e.faces)), key=lambda f: len(e.faces[f]))
    ordered = []
    for f in face_order:
        for j in range(len(e.faces[f])):
            v = dart_tail(g, e.faces[f][j])
            ordered.append((f, j, v, corner_domain(f, j, v)))
    n_corners = len(ordered)

    vertex_sum = {v: 0 for v in corner_count_of}
    vertex_left = dict(corner_count_of)
    face_acc = [0] * len(e.faces)
    face_left = [len(w) for w in e.faces]
    face_target = [(-4 if f == e.outer_face else 4) for f in range(len(e.faces))]

    assignment = [0] * n_corners

    def dfs(i: int) -> bool:
        if i == n_corners:
            return True
        f, j, v, dom = ordered[i]
        for q in dom:
            vs = vertex_sum[v] + q
            vl = vertex_left[v] - 1
            if vs + vl > 4 or vs + 4 * vl < 4:
                continue
            fa = face_acc[f] + 2 - q
            fl = face_left[f] - 1
            if fa - 2 * fl > face_target[f] or fa + fl < face_target[f]:
                continue
            vertex_sum[v] = vs
            vertex_left[v] = vl
            face_acc[f] = fa
            face_left[f] = fl
            assignment[i] = q
            if dfs(i + 1):
                return True
            vertex_sum[v] = vs - q
            vertex_left[v] = vl + 1
            face_acc[f] = fa - (2 - q)
            face_left[f] = fl + 1
        return False

    if not dfs(0):
        return OracleVerdict(False, None)
    angles = {(f, j): q for (f, j, _v, _dom), q in zip(ordered, assignment)}
    rep = RectilinearRepresentation(e, angles)
    assert validate(rep)
    return OracleVerdict(True, rep)


# ---------------------------------------------------------------------------
# plane-embedding enumeration


def _arc_rotate(rot: list[int], members: set[int]) -> tuple[int, int]:
    """Rotate ``rot`` in place so the (cyclically contiguous) members form a
    prefix-free inner slice; return that slice's (start, stop)."""
    n = len(rot)
    idx = [i for i, eid in enumerate(rot) if eid in members]
    if len(idx) == n:
        return 0, n
    # find the start of the cyclic run
    start = None
    for i in idx:
        if rot[(i - 1) % n] not in members:
            start = i
            break
    assert start is not None, "member edges are not cyclically contiguous"
    rot[:] = rot[start:] + rot[:start]
    return 0, len(idx)


def _whitney_flip(rot: list[list[int]], g: Graph, h_edges: set[int],
                  hinges: tuple[int, int]) -> None:
    """Reflect the subgraph with edge set h_edges, hinged at two vertices."""
    touched = set()
    for eid in h_edges:
        touched.update(g.edges[eid])
    for v in touched:
        if v in hinges:
            lo, hi = _arc_rotate(rot[v], h_edges)
            rot[v][lo:hi] = rot[v][lo:hi][::-1]
        else:
            rot[v].reverse()


def _block_flip_configs(g: Graph, block_emb: PlaneEmbedding):
    """All rotation systems of a 2-connected outerplanar block, as (rotation
    lists, reflected?) pairs: one per (internal-dual-edge flip subset,
    reflection)."""
    tree = extended_dual_tree(block_emb)
    internal = [
        (a, b, eid) for a, b, eid in tree.tree_edges
        if a < tree.internal_count and b < tree.internal_count
    ]
    # orient the dual tree away from internal node 0
    children: dict[int, list[tuple[int, int]]] = {s: [] for s in range(tree.internal_count)}
    if tree.internal_count:
        parent = {0: None}
        order = [0]
        seen = {0}
        qi = 0
        adj: dict[int, list[tuple[int, int]]] = {s: [] for s in range(tree.internal_count)}
        for a, b, eid in internal:
            adj[a].append((b, eid))
            adj[b].append((a, eid))
        while qi < len(order):
            s = order[qi]
            qi += 1
            for t, eid in adj[s]:
                if t in seen:
                    continue
                seen.add(t)
                parent[t] = s
                children[s].append((t, eid))
                order.append(t)
        # subtree edge sets per flip edge, in top-down order
        flip_edges = []  # (depth order) list of (hinge eid, set of graph edges below)
        sub_nodes: dict[int, list[int]] = {}
        for s in reversed(order):
            nodes = [s]
            for t, _eid in children[s]:
                nodes.extend(sub_nodes[t])
            sub_nodes[s] = nodes
        for s in order:
            for t, eid in children[s]:
                eids = set()
                for x in sub_nodes[t]:
                    eids.update(tree.cycle_edge_ids[x])
                flip_edges.append((eid, eids))
    else:
        flip_edges = []

    base = [list(r) for r in block_emb.rotation]
    k = len(flip_edges)
    out = []
    for mask in range(1 << k):
        rot = [list(r) for r in base]
        for bit, (hinge_eid, eids) in enumerate(flip_edges):
            if mask >> bit & 1:
                _whitney_flip(rot, g, eids, g.edges[hinge_eid])
        out.append((rot, False))
        out.append(([list(reversed(r)) for r in rot], True))
    return out


def _cyclic_subseq_ok(seq: list[int], cyc: tuple[int, ...]) -> bool:
    """Is seq (the block's edges in merge order) a rotation of cyc?"""
    if len(seq) != len(cyc):
        return False
    if len(seq) <= 2:
        return set(seq) == set(cyc)
    n = len(cyc)
    s = cyc.index(seq[0])
    return all(cyc[(s + i) % n] == seq[i] for i in range(n))


def _noncrossing(labels: list[int]) -> bool:
    """Pairwise: each label's positions must be cyclically contiguous after
    restricting to the pair."""
    distinct = set(labels)
    for x in distinct:
        for y in distinct:
            if x >= y:
                continue
            word = [l for l in labels if l in (x, y)]
            runs = 0
            m = len(word)
            for i in range(m):
                if word[i] == x and word[(i - 1) % m] != x:
                    runs += 1
            if runs > 1:
                return False
    return True


def _cut_merges(arcs: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """All cyclic interleavings of per-block cyclic edge orders at one cut
    vertex, preserving each order and keeping blocks non-crossing."""
    all_edges = [e for arc in arcs for e in arc]
    owner = {}
    for bi, arc in enumerate(arcs):
        for e in arc:
            owner[e] = bi
    first = all_edges[0]
    rest = [e for e in all_edges if e != first]
    results = []
    for perm in permutations(rest):
        seq = [first] + list(perm)
        ok = True
        for bi, arc in enumerate(arcs):
            if not _cyclic_subseq_ok([e for e in seq if owner[e] == bi], arc):
                ok = False
                break
        if ok and _noncrossing([owner[e] for e in seq]):
            results.append(tuple(seq))
    return results


def all_rotation_systems(g: Graph):
    """All planar rotation systems of a connected outerplanar graph: per-block
    flip configurations combined at cut vertices by non-crossing
    interleavings."""
    o = outerplane_embedding(g)
    bct = block_cut_tree(g)
    cuts = set(bct.cut_vertices)

    block_cfgs = []  # per block: list of rotation-lists (restricted to block)
    for b, block in enumerate(bct.block_edges):
        if len(block) == 1:
            eid = block[0]
            u, v = g.edges[eid]
            rot = [[] for _ in range(g.vertex_count)]
            rot[u] = [eid]
            rot[v] = [eid]
            block_cfgs.append([rot])
        else:
            emb_b, _ = restrict_embedding(o, set(block))
            cfgs = _block_flip_configs(g, emb_b)
            seen = set()
            uniq = []
            for rot, _refl in cfgs:
                key = tuple(tuple(_canon_cyclic(r)) for r in rot)
                if key not in seen:
                    seen.add(key)
                    uniq.append(rot)
            block_cfgs.append(uniq)

    blocks_at = {
        c: sorted(bct.blocks_of_cut(bct.cut_vertices.index(c))) for c in cuts
    }
    seen_rotations = set()
    for combo in product(*block_cfgs):
        # merge choices per cut vertex
        arc_lists = {}
        for c in cuts:
            arcs = [tuple(combo[b][c]) for b in blocks_at[c]]
            arc_lists[c] = _cut_merges(arcs)
        cut_order = sorted(cuts)
        for merge_combo in product(*(arc_lists[c] for c in cut_order)):
            rotation = []
            merged_at = dict(zip(cut_order, merge_combo))
            for v in range(g.vertex_count):
                if v in merged_at:
                    rotation.append(tuple(merged_at[v]))
                else:
                    owners = [b for b in range(len(combo)) if combo[b][v]]
                    rotation.append(tuple(combo[owners[0]][v]) if owners else ())
            rotation = tuple(rotation)
            key = tuple(_canon_cyclic(list(r)) for r in rotation)
            if key in seen_rotations:
                continue
            seen_rotations.add(key)
            yield rotation


def _canon_cyclic(r: list[int]) -> tuple[int, ...]:
    if not r:
        return ()
    i = r.index(min(r))
    return tuple(r[i:] + r[:i])


def enumerate_embeddings(g: Graph):
    """All plane embeddings (rotation system + outer face) of a connected
    outerplanar graph."""
    for rotation in all_rotation_systems(g):
        faces = trace_faces(g, rotation)
        assert len(faces) == g.edge_count - g.vertex_count + 2, "non-planar rotation"
        faces = tuple(tuple(w) for w in faces)
        for f in range(len(faces)):
            yield PlaneEmbedding(g, rotation, faces, f)


def rooted_embeddings(g: Graph, eid: int):
    """The plane embeddings of a 2-connected outerplanar graph that keep edge
    ``eid`` on the outer face: one per (flip subset, reflection), outer face
    taken on the root edge's outer side."""
    o = outerplane_embedding(g)
    d0 = next(d for d in o.faces[o.outer_face] if d >> 1 == eid)
    seen = set()
    out = []
    for rot, refl in _block_flip_configs(g, o):
        rotation = tuple(tuple(r) for r in rot)
        faces = tuple(tuple(w) for w in trace_faces(g, rotation))
        marker = d0 ^ 1 if refl else d0
        outer = next(i for i, w in enumerate(faces) if marker in w)
        key = (tuple(_canon_cyclic(list(r)) for r in rotation), frozenset(faces[outer]))
        if key in seen:
            continue
        seen.add(key)
        out.append(PlaneEmbedding(g, rotation, faces, outer))
    return out


def oracle_variable(
    g: Graph, chi=None, rooted=None, cap: int = 12
) -> OracleVerdict:
    """Feasibility over every plane embedding, by exhaustive per-embedding
    search."""
    if g.vertex_count > cap:
        raise CapExceeded(f"{g.vertex_count} vertices exceeds oracle cap {cap}")
    if g.edge_count == 0:
        if rooted is not None:
            return OracleVerdict(False, None)
        emb = PlaneEmbedding(g, ((),) * g.vertex_count, (), 0)
        return OracleVerdict(True, RectilinearRepresentation(emb, {}))
    if has_triangle(g):
        return OracleVerdict(False, None)
    for e in enumerate_embeddings(g):
        verdict = oracle_fixed(g, e, chi=chi, rooted=rooted, cap=cap)
        if verdict.feasible:
            return verdict
    return OracleVerdict(False, None)


# ---------------------------------------------------------------------------
# instance generation


def _is_outerplanar_connected(g: Graph) -> bool:
    from .embedding import NotOuterplanar
    from .graph import Disconnected, is_connected

    if g.edge_count == 0:
        return g.vertex_count == 1
    try:
        outerplane_embedding(g)
        return True
    except (NotOuterplanar, Disconnected):
        return False


def _to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges)
    return h


def enumerate_outerplanar(n: int):
    """All connected outerplanar graphs with max degree 4 on up to n vertices,
    one labeled representative per isomorphism class, grown by repeated vertex
    addition."""
    import networkx as nx

    if n > 10:
        raise ValueError("enumeration supported for n <= 10")
    level = [build_graph(1, [])]
    yield level[0]
    for size in range(2, n + 1):
        buckets: dict[object, list] = {}
        next_level = []
        for g in level:
            candidates = [v for v in range(g.vertex_count) if g.degree(v) < 4]
            # new vertex adjacent to a nonempty subset of old vertices
            for r in range(1, min(4, len(candidates)) + 1):
                from itertools import combinations

                for subset in combinations(candidates, r):
                    edges = list(g.edges) + [(v, size - 1) for v in subset]
                    cand = build_graph(size, edges)
                    if not _is_outerplanar_connected(cand):
                        continue
                    hnx = _to_networkx(cand)
                    key = (
                        cand.edge_count,
                        tuple(sorted(cand.degree(v) for v in range(size))),
                        nx.weisfeiler_lehman_graph_hash(hnx),
                    )
                    bucket = buckets.setdefault(key, [])
                    if any(nx.is_isomorphic(hnx, other) for other in bucket):
                        continue
                    bucket.append(hnx)
                    next_level.append(cand)
        level = next_level
        yield from level


def random_outerplanar(n: int, max_degree: int = 4, seed: int = 0) -> Graph:
    """Seeded random connected outerplanar graph: a chain of random blocks
    (cycles with random non-crossing chords, or single edges) glued at random
    vertices, respecting the degree cap."""
    rng = random.Random((seed, n, max_degree))
    if n <= 1:
        return build_graph(max(n, 1), [])
    edges: list[tuple[int, int]] = []
    degree = [0]
    vcount = 1

    def new_vertex():
        nonlocal vcount
        degree.append(0)
        vcount += 1
        return vcount - 1

    def add_edge(u, v):
        edges.append((u, v) if u < v else (v, u))
        degree[u] += 1
        degree[v] += 1

    while vcount < n:
        remaining = n - vcount
        anchors2 = [v for v in range(vcount) if degree[v] <= max_degree - 2]
        anchors1 = [v for v in range(vcount) if degree[v] <= max_degree - 1]
        want_cycle = remaining >= 3 and anchors2 and rng.random() < 0.6
        if want_cycle:
            c = rng.randint(3, min(remaining + 1, 8))
            anchor = rng.choice(anchors2)
            cyc = [anchor] + [new_vertex() for _ in range(c - 1)]
            for i in range(c):
                add_edge(cyc[i], cyc[(i + 1) % c])
            # random non-crossing chords inside the new cycle
            chords: list[tuple[int, int]] = []
            for _ in range(rng.randint(0, c)):
                i, j = sorted(rng.sample(range(c), 2))
                if j - i < 2 or (i == 0 and j == c - 1):
                    continue
                if degree[cyc[i]] >= max_degree or degree[cyc[j]] >= max_degree:
                    continue
                if any(
                    (a < i < b < j) or (i < a < j < b)
                    for a, b in chords
                ):
                    continue
                if (i, j) in chords:
                    continue
                chords.append((i, j))
                add_edge(cyc[i], cyc[j])
        elif anchors1:
            anchor = rng.choice(anchors1)
            add_edge(anchor, new_vertex())
        else:
            break
    g = build_graph(vcount, edges)
    assert _is_outerplanar_connected(g)
    assert all(g.degree(v) <= max_degree for v in range(vcount))
    return g
